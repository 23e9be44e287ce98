"""SVG figures of the experiment runner.

All figures are drawn with the non-interactive Agg backend on a fixed
800x600 canvas. Element ids are derived from a fixed hash salt and no date
is stored, so replaying an experiment reproduces its figure up to the
version string of the plotting library.
"""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# canvas size in SVG points
CANVAS = (800, 600)

# relative padding of the axis ranges
PADDING = 0.1

# rc overrides applied to every figure
STYLE = {
    "svg.hashsalt": "ddtlab",
    "svg.fonttype": "none",
    "font.size": 12,
}

# display names of the sweep x axes, keyed by (transform, variable)
X_LABELS = {
    ("reciprocal", "sharpness_k"): "1/k",
    ("identity", "sharpness_k"): "k",
    ("reciprocal", "eta"): "1/η",
    ("identity", "batch_size"): "B",
    ("reciprocal", "diffusion_D"): "1/D",
}

# display names of the sweep y axes, keyed by transform
Y_LABELS = {
    "neg_log": "−log γ",
    "identity": "γ",
}


def padded_range(values, padding=PADDING):
    """Return axis limits around the finite values.

    The span is padded by `padding` on both sides. A degenerate range (all
    values equal) is expanded symmetrically by `padding` times the value, or
    by `padding` if the value is zero.
    """
    values = np.asarray(values, dtype=np.float64)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return -1., 1.
    lo, hi = float(np.min(values)), float(np.max(values))
    span = hi - lo
    if span == 0:
        span = abs(lo) if lo != 0 else 1.
    return lo - padding * span, hi + padding * span


def _figure():
    return plt.figure(figsize=(CANVAS[0] / 72., CANVAS[1] / 72.))


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_fit_plot(x,
                    y,
                    fit,
                    path,
                    xlabel="x",
                    ylabel="y",
                    y_low=None,
                    y_high=None,
                    flagged_count=0,
                    title=None):
    """Draw transformed points, their error bars and the fitted line.

    Parameters
    ----------
    x : array_like
        the transformed x values of the fitted points
    y : array_like
        the transformed y values of the fitted points
    fit : FitResult or None
        the line through the points. If None, a warning is written on the
        figure instead.
    path : str
        the output file
    xlabel : str
        the x axis label, naming the transform
    ylabel : str
        the y axis label, naming the transform
    y_low : array_like or None
        lower ends of the error bars (NaN entries are skipped)
    y_high : array_like or None
        upper ends of the error bars (NaN entries are skipped)
    flagged_count : int
        number of grid points left out of the figure
    title : str or None
        the figure title

    Raises
    ------
    ValueError
        if fewer than two points are given and there is a fit to draw
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same shape")
    if fit is not None and x.shape[0] < 2:
        raise ValueError("a fit plot needs at least two points")

    with plt.rc_context(STYLE):
        fig = _figure()
        ax = fig.add_subplot(1, 1, 1)

        if y_low is not None and y_high is not None:
            y_low = np.asarray(y_low, dtype=np.float64)
            y_high = np.asarray(y_high, dtype=np.float64)
            ok = np.isfinite(y_low) & np.isfinite(y_high)
            ax.vlines(x[ok], y_low[ok], y_high[ok], colors="tab:gray",
                      linewidth=1.5, label="95% interval")
            y_extent = np.concatenate([y, y_low[ok], y_high[ok]])
        else:
            y_extent = y

        ax.plot(x, y, "o", color="tab:blue", markersize=7, label="estimate")

        x_lim = padded_range(x)
        if fit is not None:
            xs = np.array(x_lim)
            ax.plot(xs, fit.intercept + fit.slope * xs, "-", color="tab:red",
                    label="slope {:.4g}".format(fit.slope))
            ax.text(0.03, 0.95, "Pearson r = {:.4f}".format(fit.pearson),
                    transform=ax.transAxes, va="top")
        else:
            ax.text(0.03, 0.95, "warning: no fit ({} grid points flagged)"
                    "".format(flagged_count), transform=ax.transAxes,
                    va="top", color="tab:red")

        ax.set_xlim(*x_lim)
        ax.set_ylim(*padded_range(y_extent))
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title is not None:
            ax.set_title(title)
        ax.legend(loc="lower right")
        ax.grid(alpha=0.3)
        _save(fig, path)


def render_histogram_plot(histograms, path, xlabel="‖noise‖", title=None):
    """Draw several norm histograms on shared axes.

    Parameters
    ----------
    histograms : list of (str, ddtlab.noise_lab.Histogram)
        the label and histogram of every curve
    path : str
        the output file
    xlabel : str
        the x axis label
    title : str or None
        the figure title
    """
    with plt.rc_context(STYLE):
        fig = _figure()
        ax = fig.add_subplot(1, 1, 1)
        for label, hist in histograms:
            counts = np.asarray(hist.counts, dtype=np.float64)
            total = counts.sum()
            ax.stairs(counts / total if total > 0 else counts, hist.edges,
                      label=label, linewidth=1.5)
        ax.set_yscale("symlog", linthresh=1e-4)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("frequency")
        if title is not None:
            ax.set_title(title)
        ax.legend(loc="upper right")
        _save(fig, path)


def render_occupancy_plot(series, path, title=None):
    """Draw grouped bars of the valley occupancy.

    Parameters
    ----------
    series : list of (str, array_like or None)
        the label and the two occupancy fractions of every group. Groups
        whose fractions are None are skipped.
    path : str
        the output file
    title : str or None
        the figure title
    """
    series = [(label, v) for label, v in series if v is not None]
    width = 0.8 / max(len(series), 1)
    with plt.rc_context(STYLE):
        fig = _figure()
        ax = fig.add_subplot(1, 1, 1)
        for i, (label, values) in enumerate(series):
            ax.bar(np.arange(2) + (i - 0.5 * (len(series) - 1)) * width,
                   values, width=width, label=label)
        ax.set_xticks([0, 1])
        ax.set_xticklabels(["valley 0", "valley 1"])
        ax.set_ylim(0., 1.)
        ax.set_ylabel("occupancy")
        if title is not None:
            ax.set_title(title)
        ax.legend(loc="upper right")
        _save(fig, path)
