"""Run one of the ddtlab experiments.

Usage
    python run_experiment.py EXPERIMENT --config CONFIG [--out DIR]
"""
import os
import sys
import json
import time
import logging
import numpy as np

from ddtlab import __version__
from ddtlab.escape_mc import FitResult
from ddtlab.escape_mc import fit_line
from ddtlab.escape_mc import sweep_and_fit
from ddtlab.escape_mc import occupancy_experiment
from ddtlab.escape_mc.sweep import transform_y
from ddtlab.kramers import landscape_geometry
from ddtlab.kramers import st_geometry
from ddtlab.kramers import sgld_escape_time
from ddtlab.kramers import sgd_escape_time
from ddtlab.kramers import to_iterations
from ddtlab.landscapes import ScaledLandscape
from ddtlab.noise_lab import draw_sgn
from ddtlab.noise_lab import estimate_sgn_covariance
from ddtlab.noise_lab import eigenbasis_pairs
from ddtlab.noise_lab import covariance_hessian_fit
from ddtlab.noise_lab import pretrain
from ddtlab.noise_lab import trace_batch_fit
from ddtlab.noise_lab import norm_histogram
from ddtlab.noise_lab import levy_sample
from ddtlab.noise_lab import gaussian_baseline
from ddtlab.noise_lab import tail_statistic
from ddtlab.utils import plot
from ddtlab.utils.exceptions import ConfigError
from ddtlab.utils.exceptions import InsufficientDataError
from ddtlab.utils.exceptions import NumericalFailureError
from ddtlab.utils.misc import ensure_dir
from ddtlab.utils.misc import write_csv
from ddtlab.utils.misc import print_table
from ddtlab.utils.train import OUTPUT_DIR_ENV
from ddtlab.utils.train import parse_options
from ddtlab.utils.train import load_config
from ddtlab.utils.train import line_of
from ddtlab.utils.train import resolve_config
from ddtlab.utils.train import build_landscape
from ddtlab.utils.train import build_stepper
from ddtlab.utils.train import build_region
from ddtlab.utils.train import build_sweep

logger = logging.getLogger(__name__)

EXAMPLE_USAGE = 'python run_experiment.py escape-sweep ' \
                '--config configs/sgld_diffusion_sweep.json --workers 4'

DESCRIPTION = 'Run a minima-selection experiment and write its results.csv, ' \
              'summary.json and plot.svg.'

# exit codes of the runner
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INSUFFICIENT_DATA = 4

# logging level of each --verbose value
LOG_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.DEBUG}


def _assemble(text, field, fn, *args, **kwargs):
    """Call a builder, reporting a rejected value as a ConfigError."""
    try:
        return fn(*args, **kwargs)
    except (ConfigError, InsufficientDataError):
        raise
    except ValueError as e:
        raise ConfigError("{}: {}".format(field, e), field=field,
                          line=line_of(text, field))


def _unscaled(landscape):
    """Return the unscaled landscape and the sharpness factor."""
    if isinstance(landscape, ScaledLandscape):
        return landscape.base, landscape.k
    return landscape, 1.


def _to_json(obj):
    """Convert the numpy types json cannot serialize."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError("{!r} is not JSON serializable".format(obj))


def _noise_point(landscape, config):
    """Return the point the noise is measured at and the pretraining record."""
    noise = config["noise"]
    theta = landscape.default_start() if noise["theta"] is None else \
        np.asarray(noise["theta"], dtype=np.float64)
    if not noise["pretrain"]:
        return theta, None

    res = pretrain(landscape, theta,
                   tol=noise["pretrain_tol"],
                   eta=noise["pretrain_eta"],
                   max_iters=noise["pretrain_max_iters"])
    return res.theta, {
        "grad_norm": res.grad_norm,
        "iterations": res.iterations,
        "converged": res.converged,
    }


# =========================================================================== #
#                                 Experiments                                 #
# =========================================================================== #

def run_noise_hist(config, text, out_dir, workers, verbose):
    """Histogram measured SGN against Gaussian and α-stable baselines."""
    landscape = _assemble(text, "landscape", build_landscape,
                          config["landscape"])
    noise = config["noise"]
    seed = config["seed"]
    theta, pre = _noise_point(landscape, config)
    count = noise["draws"]

    samples = draw_sgn(landscape, theta, noise["batch_size"], count,
                       (seed, 0))
    cov = estimate_sgn_covariance(samples)
    if noise["levy_scale"] is None:
        noise["levy_scale"] = float(
            np.sqrt(np.trace(cov) / (2. * landscape.dim)))

    sets = [
        ("sgn", samples.draws),
        ("gaussian", gaussian_baseline(cov, count, (seed, 1))),
        ("levy", levy_sample(noise["alpha"], noise["levy_scale"],
                             landscape.dim, count, (seed, 2))),
    ]

    rows = []
    hists = []
    tails = {}
    for name, vectors in sets:
        hist = norm_histogram(vectors, noise["bin_count"])
        hists.append((name, hist))
        for i, c in enumerate(hist.counts):
            rows.append({"distribution": name,
                         "bin_low": float(hist.edges[i]),
                         "bin_high": float(hist.edges[i + 1]),
                         "count": int(c)})
        tails[name] = dict(tail_statistic(
            np.linalg.norm(vectors, axis=1))._asdict())

    write_csv(os.path.join(out_dir, "results.csv"), rows,
              ["distribution", "bin_low", "bin_high", "count"])
    plot.render_histogram_plot(
        hists, os.path.join(out_dir, "plot.svg"),
        title="noise norms, B = {}".format(noise["batch_size"]))

    if verbose >= 1:
        for name, stats in sorted(tails.items()):
            print_table(dict(("{}/{}".format(name, k), v)
                             for k, v in stats.items()))

    return {
        "point": {"theta": theta, "pretrain": pre},
        "covariance_trace": float(np.trace(cov)),
        "tails": tails,
    }


def run_cov_fit(config, text, out_dir, workers, verbose):
    """Compare the SGN covariance with H/B in the Hessian eigenbasis."""
    landscape = _assemble(text, "landscape", build_landscape,
                          config["landscape"])
    noise = config["noise"]
    seed = config["seed"]
    theta, pre = _noise_point(landscape, config)
    batch_size = noise["batch_size"]

    hessian = landscape.hessian(theta)
    samples = draw_sgn(landscape, theta, batch_size, noise["draws"],
                       (seed, 0))
    cov = estimate_sgn_covariance(samples)
    h_el, c_el = eigenbasis_pairs(cov, hessian, noise["filter_range"])
    fit = covariance_hessian_fit(cov, hessian, batch_size,
                                 noise["filter_range"])
    trace = trace_batch_fit(landscape, theta, noise["batch_sizes"],
                            noise["draws"], seed)

    rows = [{"h_element": float(h), "c_element": float(c),
             "h_over_b": float(h / batch_size)}
            for h, c in zip(h_el, c_el)]
    write_csv(os.path.join(out_dir, "results.csv"), rows,
              ["h_element", "c_element", "h_over_b"])

    plot.render_fit_plot(
        h_el / batch_size, c_el,
        FitResult(fit.slope, 0., fit.pearson, "identity", "identity"),
        os.path.join(out_dir, "plot.svg"),
        xlabel="H_ij / B (Hessian eigenbasis)",
        ylabel="C_ij (Hessian eigenbasis)")

    if verbose >= 1:
        print_table({"pearson": fit.pearson,
                     "slope": fit.slope,
                     "element_count": fit.element_count,
                     "trace_pearson": trace.pearson,
                     "trace_slope": trace.slope})

    return {
        "point": {"theta": theta, "pretrain": pre},
        "covariance_fit": dict(fit._asdict()),
        "trace_fit": dict(trace._asdict()),
    }


def run_escape_sweep(config, text, out_dir, workers, verbose):
    """Sweep one hyperparameter and fit the escape-rate scaling law."""
    sweep = config["sweep"]
    landscape = _assemble(text, "landscape", build_landscape,
                          config["landscape"],
                          scaled=sweep["variable"] != "sharpness_k")
    spec = _assemble(text, "protocol", build_sweep, landscape, config)

    result = sweep_and_fit(spec, config["seed"], workers=workers)

    write_csv(os.path.join(out_dir, "results.csv"), result.to_rows(),
              ["x_raw", "x_transformed", "gamma_hat", "ci_low", "ci_high",
               "neg_log_gamma", "censored_count"])

    points = result.fitted_points()
    gamma = np.array([p.rate.gamma_hat for p in points])
    ci_low = np.array([p.rate.ci_low for p in points])
    ci_high = np.array([p.rate.ci_high for p in points])
    if spec.y_transform == "neg_log":
        with np.errstate(divide="ignore", invalid="ignore"):
            y_low = np.where(ci_high > 0, -np.log(ci_high), np.nan)
            y_high = np.where(ci_low > 0, -np.log(ci_low), np.nan)
    else:
        y_low, y_high = ci_low, ci_high

    plot.render_fit_plot(
        [p.x_transformed for p in points],
        transform_y(gamma, spec.y_transform),
        result.fit,
        os.path.join(out_dir, "plot.svg"),
        xlabel=plot.X_LABELS[(spec.x_transform, spec.variable)],
        ylabel=plot.Y_LABELS[spec.y_transform],
        y_low=y_low,
        y_high=y_high,
        flagged_count=len(result.points) - len(points),
        title="{} sweep ({})".format(spec.variable, spec.protocol.stepper.kind))

    if verbose >= 1:
        for p in result.points:
            stats = {"x": p.x_raw, "flagged": p.flagged,
                     "cov": p.coefficient_of_variation}
            if p.rate is not None:
                stats.update(dict(p.rate._asdict()))
            print_table(stats)

    summary = result.to_dict()
    summary["sweep"] = spec.to_dict()
    return summary


def _theory_geometry(landscape, config, text):
    """Return the valley geometry, saddle geometry and barrier."""
    land = config["landscape"]
    base, k = _unscaled(landscape)
    if land["kind"] == "styblinski-tang":
        return st_geometry(base.dim, k)
    if land["kind"] == "double-well":
        left, saddle, _ = base.critical_points()
        return landscape_geometry(landscape, [left / np.sqrt(k)],
                                  [saddle / np.sqrt(k)])
    raise ConfigError(
        "landscape.kind: the theory table needs a landscape with known "
        "critical points (styblinski-tang or double-well), got {!r}".format(
            land["kind"]), field="landscape.kind",
        line=line_of(text, "landscape.kind"))


def run_theory_table(config, text, out_dir, workers, verbose):
    """Tabulate the closed-form escape times over a grid."""
    landscape = _assemble(text, "landscape", build_landscape,
                          config["landscape"])
    theory = config["theory"]
    dynamics = config["dynamics"]
    valley, saddle, barrier = _theory_geometry(landscape, config, text)

    rows = []
    if dynamics["stepper"] == "sgld":
        for d in theory["diffusion_grid"]:
            pred = sgld_escape_time(valley, saddle, barrier, d)
            rows.append(dict(pred._asdict(), diffusion=d, eta=dynamics["eta"],
                             iterations=to_iterations(pred.tau,
                                                      dynamics["eta"])))
        x = [r["diffusion"] for r in rows]
        x_transform, xlabel = "reciprocal", "1/D"
    else:
        for eta in theory["eta_grid"]:
            for b in theory["batch_grid"]:
                pred = sgd_escape_time(valley.escape_eig, saddle.escape_eig,
                                       barrier, b, eta, theory["s"])
                rows.append(dict(pred._asdict(), eta=eta, batch_size=b,
                                 iterations=to_iterations(pred.tau, eta)))
        x = [r["batch_size"] / r["eta"] for r in rows]
        x_transform, xlabel = "identity", "B/η"

    write_csv(os.path.join(out_dir, "results.csv"), rows,
              ["diffusion", "eta", "batch_size", "tau", "log_tau", "exponent",
               "low_temperature", "temperature_a", "temperature_b",
               "iterations"])

    # log τ is linear in the transformed x
    log_tau = np.array([r["log_tau"] for r in rows])
    try:
        fit = fit_line(x, log_tau, x_transform, "identity")
    except ValueError:
        fit = None
    plot.render_fit_plot(
        [1. / v if x_transform == "reciprocal" else v for v in x],
        log_tau, fit, os.path.join(out_dir, "plot.svg"),
        xlabel=xlabel, ylabel="log τ",
        title="predicted escape times ({})".format(dynamics["stepper"]))

    if verbose >= 1:
        for r in rows:
            print_table(r)

    return {
        "valley": valley.to_dict(),
        "saddle": saddle.to_dict(),
        "barrier": barrier,
        "fit": None if fit is None else dict(fit._asdict()),
    }


def run_occupancy(config, text, out_dir, workers, verbose):
    """Measure the long-run valley occupancy of one trajectory."""
    landscape = _assemble(text, "landscape", build_landscape,
                          config["landscape"])
    stepper = _assemble(text, "dynamics", build_stepper, config["dynamics"])
    occ = config["occupancy"]
    base, k = _unscaled(landscape)

    geometries = None
    if occ["regions"] is not None:
        regions = [_assemble(text, "occupancy.regions", build_region, r)
                   for r in occ["regions"]]
    else:
        regions = [r.scaled(1. / np.sqrt(k))
                   for r in base.valley_regions(occ["fraction"])]
    if config["landscape"]["kind"] == "double-well":
        left, saddle, right = [p / np.sqrt(k) for p in base.critical_points()]
        geometries = [landscape_geometry(landscape, [left], [saddle]),
                      landscape_geometry(landscape, [right], [saddle])]

    result = _assemble(
        text, "occupancy", occupancy_experiment, landscape, regions, stepper,
        occ["total_iters"], config["seed"], start=occ["start"],
        geometries=geometries)

    rows = []
    for v in range(2):
        rows.append({
            "valley": v,
            "fraction": float(result.fractions[v]),
            "predicted": None if result.predicted is None else
            float(result.predicted[v]),
            "theory": None if result.theory is None else
            float(result.theory[v]),
            "mean_residence": result.mean_residence[v],
        })
    write_csv(os.path.join(out_dir, "results.csv"), rows,
              ["valley", "fraction", "predicted", "theory", "mean_residence"])

    plot.render_occupancy_plot(
        [("measured", result.fractions),
         ("from residence times", result.predicted),
         ("closed form", result.theory)],
        os.path.join(out_dir, "plot.svg"),
        title="occupancy after {} iterations".format(occ["total_iters"]))

    if verbose >= 1:
        print_table({"transitions": result.transitions,
                     "low_confidence": result.low_confidence,
                     "fraction_0": rows[0]["fraction"],
                     "fraction_1": rows[1]["fraction"]})

    return {
        "regions": [r.to_dict() for r in regions],
        "transitions": result.transitions,
        "low_confidence": result.low_confidence,
        "geometries": None if geometries is None else [
            {"valley": g[0].to_dict(), "saddle": g[1].to_dict(),
             "barrier": g[2]} for g in geometries],
    }


EXPERIMENT_FNS = {
    "noise-hist": run_noise_hist,
    "cov-fit": run_cov_fit,
    "escape-sweep": run_escape_sweep,
    "theory-table": run_theory_table,
    "occupancy": run_occupancy,
}


# =========================================================================== #
#                                 Entry point                                 #
# =========================================================================== #

def output_dir(flags):
    """Return the output directory: --out, then the environment, then data/."""
    if flags.out is not None:
        return flags.out
    if os.environ.get(OUTPUT_DIR_ENV):
        return os.environ[OUTPUT_DIR_ENV]
    return os.path.join("data", flags.experiment)


def run(config, text, out_dir, workers=1, verbose=1):
    """Run a resolved experiment and write its artifacts.

    Parameters
    ----------
    config : dict
        the resolved configuration
    text : str or None
        the configuration text, used to locate fields in diagnostics
    out_dir : str
        the output directory. Created if it does not exist.
    workers : int
        number of parallel trial workers
    verbose : int
        the verbosity level

    Returns
    -------
    dict
        the contents of summary.json
    """
    out_dir = ensure_dir(out_dir)

    start_time = time.time()
    results = EXPERIMENT_FNS[config["experiment"]](
        config, text, out_dir, workers, verbose)
    wall_time = time.time() - start_time

    summary = {
        "experiment": config["experiment"],
        "seed": config["seed"],
        "version": __version__,
        "config": config,
        "results": results,
    }
    with open(os.path.join(out_dir, "summary.json"), "w") as f:
        json.dump(summary, f, sort_keys=True, indent=4, default=_to_json)
    with open(os.path.join(out_dir, "timing.json"), "w") as f:
        json.dump({"wall_time": wall_time, "workers": workers}, f,
                  sort_keys=True, indent=4)

    return summary


def main(args):
    """Execute the runner and return its exit code.

    Parameters
    ----------
    args : list of str
        command-line arguments

    Returns
    -------
    int
        0 on success, 2 for an invalid configuration, 3 for a numerical
        failure and 4 if too little data was collected
    """
    flags = parse_options(DESCRIPTION, EXAMPLE_USAGE, args)
    logging.basicConfig(
        level=LOG_LEVELS[max(0, min(flags.verbose, 2))],
        format="%(levelname)s %(name)s: %(message)s")

    try:
        if flags.config is None:
            raw, text = {}, None
        else:
            raw, text = load_config(flags.config)
        config = resolve_config(raw, flags.experiment, flags.seed, text)
        if flags.workers < 1:
            raise ConfigError("--workers must be a positive integer",
                              field="workers")

        if flags.dry_run:
            print(json.dumps(config, sort_keys=True, indent=4))
            if config["experiment"] == "noise-hist" and \
                    config["noise"]["levy_scale"] is None:
                print("noise.levy_scale: matched to the measured noise "
                      "covariance when the experiment runs", file=sys.stderr)
            return EXIT_OK

        run(config, text, output_dir(flags), flags.workers, flags.verbose)

    except ConfigError as e:
        print("config error: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG
    except InsufficientDataError as e:
        print("insufficient data: {}".format(e), file=sys.stderr)
        return EXIT_INSUFFICIENT_DATA
    except NumericalFailureError as e:
        print("numerical failure: {}".format(e), file=sys.stderr)
        return EXIT_NUMERICAL

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
