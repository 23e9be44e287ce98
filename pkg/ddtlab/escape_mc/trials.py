"""Repeated escape trials and the escape-rate estimator."""
import logging
import collections
import numpy as np
import ray

from ddtlab.escape_mc.worker import TrialWorker
from ddtlab.escape_mc.worker import run_trial_indices
from ddtlab.utils.exceptions import InsufficientDataError

logger = logging.getLogger(__name__)

# minimum number of escapes for a rate estimate
MIN_ESCAPES_RATE = 3

# minimum number of escapes for the exponentiality check
MIN_ESCAPES_COV = 30

# two-sided 95% normal quantile of the confidence interval
Z_95 = 1.96

# fraction of censored trials above which an estimate is reported as suspect
CENSORED_WARNING_FRACTION = 0.1

RateEstimate = collections.namedtuple(
    "RateEstimate",
    ["gamma_hat", "ci_low", "ci_high", "trial_count", "censored_count",
     "invalid_count"])
RateEstimate.__doc__ = """An escape-rate estimate in dynamical time.

gamma_hat : float
    (R - 2) / Σ t_i
ci_low : float
    max(0, gamma_hat·(1 - 1.96/√R)). Zero for R ≤ 3, where the normal
    approximation gives no lower bound.
ci_high : float
    gamma_hat·(1 + 1.96/√R)
trial_count : int
    R, the number of escaped trials
censored_count : int
    number of trials that reached the iteration cap
invalid_count : int
    number of diverged trials (excluded)
"""


def run_trials(landscape, protocol, trial_count, seed, stream=(), workers=1):
    """Run repeated escape trials.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    protocol : EscapeProtocol
        the start point, valley, dynamics and iteration cap
    trial_count : int
        R, the number of trials
    seed : int
        the experiment seed
    stream : tuple of int
        extra stream indices, e.g. the key of a sweep grid point. Trial i uses
        the random stream (seed, *stream, i).
    workers : int
        number of ray workers. 1 runs the trials in-process.

    Returns
    -------
    list of EscapeTrial
        the outcomes, ordered by trial index. Identical for any worker count.
    """
    if int(trial_count) < 1:
        raise ValueError("trial_count must be a positive integer")
    indices = list(range(int(trial_count)))

    if workers <= 1:
        results = run_trial_indices(landscape, protocol, indices, seed, stream)
    else:
        workers = min(int(workers), len(indices))
        ray.init(num_cpus=workers, ignore_reinit_error=True)
        actors = [
            TrialWorker.remote(landscape, protocol, seed, tuple(stream))
            for _ in range(workers)
        ]
        chunks = ray.get([
            actors[w].run.remote(indices[w::workers])
            for w in range(workers)
        ])
        results = [r for chunk in chunks for r in chunk]

    return [trial for _, trial in sorted(results, key=lambda r: r[0])]


def estimate_rate(trials, eta=None):
    """Estimate the escape rate from repeated trials.

    Escape times t_i = η·T_i are exponentially distributed, and the rate is
    estimated as γ̂ = (R - 2)/Σ t_i over the R escaped trials. Censored trials
    add their elapsed time to Σ t_i without counting towards R. Diverged
    trials are excluded.

    Parameters
    ----------
    trials : list of EscapeTrial
        the trial outcomes
    eta : float or None
        the learning rate. If None, the dynamical time stored in each trial is
        used.

    Returns
    -------
    RateEstimate
        the estimate and its confidence interval

    Raises
    ------
    InsufficientDataError
        if fewer than three trials escaped
    """
    valid = [t for t in trials if t.valid]
    escaped = [t for t in valid if t.escaped]
    censored = len(valid) - len(escaped)
    invalid = len(trials) - len(valid)

    r = len(escaped)
    if r < MIN_ESCAPES_RATE:
        raise InsufficientDataError(
            "{} of {} trials escaped, at least {} are needed".format(
                r, len(trials), MIN_ESCAPES_RATE))
    if censored > CENSORED_WARNING_FRACTION * len(valid):
        logger.warning("%d of %d valid trials were censored; the rate "
                       "estimate is suspect", censored, len(valid))

    if eta is None:
        total = float(np.sum([t.dynamical_time for t in valid]))
    else:
        total = eta * float(np.sum([t.iterations for t in valid]))

    gamma = (r - 2.) / total
    half = Z_95 / np.sqrt(r)
    return RateEstimate(gamma, max(0., gamma * (1. - half)),
                        gamma * (1. + half),
                        r, censored, invalid)


def exponentiality_check(trials):
    """Return the coefficient of variation of the escape times.

    An exponential distribution has a coefficient of variation of one.

    Parameters
    ----------
    trials : list of EscapeTrial
        the trial outcomes. Only escaped trials are used.

    Returns
    -------
    float
        std / mean of the escape times (dynamical time)

    Raises
    ------
    InsufficientDataError
        if fewer than MIN_ESCAPES_COV trials escaped
    """
    times = np.array([t.dynamical_time for t in trials
                      if t.valid and t.escaped], dtype=np.float64)
    if times.shape[0] < MIN_ESCAPES_COV:
        raise InsufficientDataError(
            "the exponentiality check needs {} escapes, got {}".format(
                MIN_ESCAPES_COV, times.shape[0]))
    return float(np.std(times, ddof=1) / np.mean(times))
