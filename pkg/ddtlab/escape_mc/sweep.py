"""Hyperparameter sweeps of the escape rate and the scaling-law fits.

Each grid value rebuilds the landscape or the dynamics, runs repeated escape
trials and estimates the rate. The transformed pairs are then regressed:

    ========== ============= =============== ==============
    stepper    variable      x               y
    ========== ============= =============== ==============
    sgd        sharpness_k   1/k             -log γ
    sgd        batch_size    B               -log γ
    sgd        eta           1/η             -log γ
    sgld       sharpness_k   k               γ
    sgld       diffusion_D   1/D             -log γ
    ========== ============= =============== ==============
"""
import logging
import collections
import numpy as np
from scipy import stats

from ddtlab.escape_mc.trials import MIN_ESCAPES_COV
from ddtlab.escape_mc.trials import run_trials
from ddtlab.escape_mc.trials import estimate_rate
from ddtlab.escape_mc.trials import exponentiality_check
from ddtlab.landscapes.base import rescale
from ddtlab.utils.exceptions import InsufficientDataError
from ddtlab.utils.exceptions import NumericalFailureError
from ddtlab.utils.rng import value_key

logger = logging.getLogger(__name__)

# supported sweep variables
SWEEP_VARIABLES = ["sharpness_k", "batch_size", "eta", "diffusion_D"]

# supported axis transforms
X_TRANSFORMS = ["reciprocal", "identity"]
Y_TRANSFORMS = ["neg_log", "identity"]

# (x transform, y transform) of every supported (stepper, variable) pair
SWEEP_TRANSFORMS = {
    ("sgd", "sharpness_k"): ("reciprocal", "neg_log"),
    ("sgd", "batch_size"): ("identity", "neg_log"),
    ("sgd", "eta"): ("reciprocal", "neg_log"),
    ("sgld", "sharpness_k"): ("identity", "identity"),
    ("sgld", "diffusion_D"): ("reciprocal", "neg_log"),
}

# minimum number of unflagged grid points for a fit
MIN_FIT_POINTS = 3

# minimum number of trials per grid point
MIN_TRIALS_PER_POINT = 10

FitResult = collections.namedtuple(
    "FitResult",
    ["slope", "intercept", "pearson", "x_transform", "y_transform"])
FitResult.__doc__ = """A least-squares line through transformed points.

slope : float
    slope of the fitted line
intercept : float
    intercept of the fitted line
pearson : float
    Pearson correlation of the transformed points
x_transform : str
    the transform applied to the raw x values. One of X_TRANSFORMS.
y_transform : str
    the transform applied to the raw y values. One of Y_TRANSFORMS.
"""

SweepPoint = collections.namedtuple(
    "SweepPoint",
    ["x_raw", "x_transformed", "rate", "coefficient_of_variation", "flagged"])
SweepPoint.__doc__ = """The outcome of one grid value.

x_raw : float
    the grid value
x_transformed : float
    the grid value after the x transform
rate : RateEstimate or None
    the escape-rate estimate, None if the point is flagged
coefficient_of_variation : float or None
    std/mean of the escape times, None with too few escapes
flagged : bool
    True if too few trials escaped for a rate estimate
"""


def transform_x(x, kind):
    """Apply an x transform."""
    x = np.asarray(x, dtype=np.float64)
    if kind == "reciprocal":
        return 1. / x
    elif kind == "identity":
        return x
    raise ValueError("Unknown x transform: {}".format(kind))


def transform_y(y, kind):
    """Apply a y transform."""
    y = np.asarray(y, dtype=np.float64)
    if kind == "neg_log":
        return -np.log(y)
    elif kind == "identity":
        return y
    raise ValueError("Unknown y transform: {}".format(kind))


def fit_line(x, y, x_transform="identity", y_transform="identity"):
    """Fit a least-squares line through transformed points.

    Parameters
    ----------
    x : array_like
        the raw x values
    y : array_like
        the raw y values
    x_transform : str
        transform applied to x before fitting. One of X_TRANSFORMS.
    y_transform : str
        transform applied to y before fitting. One of Y_TRANSFORMS.

    Returns
    -------
    FitResult
        the fitted line and the Pearson correlation

    Raises
    ------
    ValueError
        if fewer than two points are given or all x values are equal
    """
    xt = transform_x(x, x_transform)
    yt = transform_y(y, y_transform)
    if xt.shape[0] < 2 or xt.shape != yt.shape:
        raise ValueError("a line fit needs at least two (x, y) pairs")
    if np.ptp(xt) == 0:
        raise ValueError("cannot fit a line if all x values are equal")
    res = stats.linregress(xt, yt)
    return FitResult(float(res.slope), float(res.intercept),
                     float(res.rvalue), x_transform, y_transform)


class SweepSpec(object):
    """A one-dimensional hyperparameter sweep.

    Attributes
    ----------
    variable : str
        the swept quantity. One of SWEEP_VARIABLES.
    grid : list of float
        the grid values, strictly monotone and positive
    landscape : ddtlab.landscapes.Landscape
        the unscaled landscape
    protocol : EscapeProtocol
        the base start point, valley, dynamics and iteration cap. Sharpness
        sweeps scale the start point and valley by 1/√k.
    trials_per_point : int
        R, the number of trials per grid value
    x_transform : str
        the x transform of the fit
    y_transform : str
        the y transform of the fit
    """

    def __init__(self,
                 variable,
                 grid,
                 landscape,
                 protocol,
                 trials_per_point=100):
        """Instantiate the sweep.

        Raises
        ------
        ValueError
            if the variable is unknown or not supported for the dynamics, the
            grid is not strictly monotone and positive, or fewer than 10
            trials per point are requested
        """
        if variable not in SWEEP_VARIABLES:
            raise ValueError("Unknown sweep variable: {}".format(variable))
        key = (protocol.stepper.kind, variable)
        if key not in SWEEP_TRANSFORMS:
            raise ValueError("{} sweeps are not supported for {}".format(
                variable, protocol.stepper.kind))

        grid = [float(x) for x in grid]
        diffs = np.diff(grid)
        if len(grid) < 1 or not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("the sweep grid must be strictly monotone")
        if any(not x > 0 for x in grid):
            raise ValueError("the sweep grid must be positive")
        if variable == "batch_size" and any(x != int(x) for x in grid):
            raise ValueError("batch sizes must be integers")
        if int(trials_per_point) < MIN_TRIALS_PER_POINT:
            raise ValueError("trials_per_point must be at least {}".format(
                MIN_TRIALS_PER_POINT))

        self.variable = variable
        self.grid = grid
        self.landscape = landscape
        self.protocol = protocol
        self.trials_per_point = int(trials_per_point)
        self.x_transform, self.y_transform = SWEEP_TRANSFORMS[key]

    def point_setup(self, x):
        """Return the landscape and protocol of the grid value x."""
        if self.variable == "sharpness_k":
            factor = 1. / np.sqrt(x)
            return rescale(self.landscape, x), self.protocol.replace(
                start=self.protocol.start * factor,
                region=self.protocol.region.scaled(factor))

        if self.variable == "batch_size":
            stepper = self.protocol.stepper.replace(batch_size=int(x))
        elif self.variable == "eta":
            stepper = self.protocol.stepper.replace(eta=x)
        else:
            stepper = self.protocol.stepper.replace(diffusion=x)
        return self.landscape, self.protocol.replace(stepper=stepper)

    def to_dict(self):
        """Return the JSON-serializable form of the sweep."""
        return {
            "variable": self.variable,
            "grid": list(self.grid),
            "trials_per_point": self.trials_per_point,
            "x_transform": self.x_transform,
            "y_transform": self.y_transform,
            "protocol": self.protocol.to_dict(),
        }


class SweepResult(object):
    """Points and fit of a completed sweep.

    Attributes
    ----------
    spec : SweepSpec
        the sweep
    points : list of SweepPoint
        one point per grid value, ordered by increasing x_raw
    fit : FitResult or None
        the fit over the unflagged points, None with fewer than three
    """

    def __init__(self, spec, points, fit):
        self.spec = spec
        self.points = points
        self.fit = fit

    def fitted_points(self):
        """Return the unflagged points."""
        return [p for p in self.points if not p.flagged]

    def to_rows(self):
        """Return one csv row per grid value.

        Flagged points carry empty rate columns.
        """
        rows = []
        for p in self.points:
            row = {"x_raw": p.x_raw, "x_transformed": p.x_transformed}
            if p.rate is not None:
                row.update({
                    "gamma_hat": p.rate.gamma_hat,
                    "ci_low": p.rate.ci_low,
                    "ci_high": p.rate.ci_high,
                    "neg_log_gamma": float(-np.log(p.rate.gamma_hat)),
                    "censored_count": p.rate.censored_count,
                })
            rows.append(row)
        return rows

    def to_dict(self):
        """Return the JSON-serializable summary of the sweep."""
        return {
            "fit": None if self.fit is None else dict(self.fit._asdict()),
            "flagged": [p.x_raw for p in self.points if p.flagged],
            "coefficient_of_variation": {
                repr(p.x_raw): p.coefficient_of_variation
                for p in self.points},
        }


def sweep_and_fit(spec, seed, workers=1):
    """Run a sweep and fit the predicted scaling law.

    Grid values are visited in increasing order and trial i of the grid value
    x uses the random stream (seed, key(x), i), so the result depends neither
    on the order of the grid nor on the number of workers.

    Parameters
    ----------
    spec : SweepSpec
        the sweep
    seed : int
        the experiment seed
    workers : int
        number of ray workers used for the trials of each grid value

    Returns
    -------
    SweepResult
        the points and the fit
    """
    points = []
    for x in sorted(spec.grid):
        landscape, protocol = spec.point_setup(x)
        try:
            trials = run_trials(
                landscape, protocol, spec.trials_per_point, seed,
                stream=(value_key(x),), workers=workers)
        except NumericalFailureError as e:
            raise NumericalFailureError(
                "grid point {}={!r}: {}".format(spec.variable, x, e))

        x_t = float(transform_x(x, spec.x_transform))
        try:
            rate = estimate_rate(trials, protocol.stepper.eta)
        except InsufficientDataError as e:
            logger.warning("grid point %s=%g flagged: %s", spec.variable, x, e)
            points.append(SweepPoint(x, x_t, None, None, True))
            continue

        cov = None
        if rate.trial_count >= MIN_ESCAPES_COV:
            cov = exponentiality_check(trials)
        points.append(SweepPoint(x, x_t, rate, cov, False))

    fitted = [p for p in points if not p.flagged]
    fit = None
    if len(fitted) >= MIN_FIT_POINTS:
        fit = fit_line([p.x_raw for p in fitted],
                       [p.rate.gamma_hat for p in fitted],
                       spec.x_transform, spec.y_transform)
    else:
        logger.warning("only %d of %d grid points have a rate estimate; no "
                       "fit is computed", len(fitted), len(points))

    return SweepResult(spec, points, fit)
