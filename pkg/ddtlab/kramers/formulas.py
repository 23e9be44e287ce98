"""Closed-form mean escape times of SGLD and SGD.

All escape times are in dynamical time t = η·T. Use to_iterations to convert
them to a number of updates.
"""
import math
import logging
import collections
import numpy as np

logger = logging.getLogger(__name__)

# barrier-to-temperature ratio above which the predictions are reliable
LOW_TEMPERATURE_THRESHOLD = 6.

# largest log escape time representable as a float
MAX_LOG_TAU = math.log(np.finfo(np.float64).max)

EscapePrediction = collections.namedtuple(
    "EscapePrediction",
    ["tau", "log_tau", "exponent", "low_temperature", "temperature_a",
     "temperature_b"])
EscapePrediction.__doc__ = """A predicted mean escape time.

tau : float
    the mean escape time, in dynamical time. inf if it overflows a float.
log_tau : float
    the natural logarithm of tau, always finite
exponent : float
    the argument of the exponential (barrier over temperature)
low_temperature : bool
    whether exponent ≥ LOW_TEMPERATURE_THRESHOLD
temperature_a : float
    the temperature along the escape direction at the minimum
temperature_b : float
    the temperature along the escape direction at the saddle
"""


def _exp(log_tau):
    if log_tau > MAX_LOG_TAU:
        logger.warning("the escape time exp(%.4g) overflows a float", log_tau)
        return float("inf")
    return math.exp(log_tau)


def _flag(exponent):
    low = exponent >= LOW_TEMPERATURE_THRESHOLD
    if not low:
        logger.warning("barrier over temperature is %.3g < %g: the escape "
                       "time prediction is outside the low-temperature "
                       "regime", exponent, LOW_TEMPERATURE_THRESHOLD)
    return bool(low)


def sgld_escape_time(valley, saddle, barrier, diffusion):
    """Return the mean escape time of SGLD with isotropic diffusion D.

    τ = 2π·sqrt(-det H_b / det H_a)/|H_be|·exp(ΔL/D)

    Parameters
    ----------
    valley : ValleyGeometry
        the geometry at the minimum
    saddle : SaddleGeometry
        the geometry at the saddle
    barrier : float
        ΔL = L(b) - L(a)
    diffusion : float
        the diffusion coefficient D

    Returns
    -------
    EscapePrediction
        the prediction. Both temperatures equal D.

    Raises
    ------
    ValueError
        if the barrier or D is not positive
    """
    if not barrier > 0:
        raise ValueError("the barrier height must be positive")
    if not diffusion > 0:
        raise ValueError("the diffusion coefficient must be positive")

    # the saddle has exactly one negative eigenvalue, so -det H_b = |det H_b|
    log_ratio = saddle.log_abs_det() - valley.log_det()
    exponent = barrier / diffusion
    log_tau = math.log(2. * np.pi / abs(saddle.escape_eig)) + \
        0.5 * log_ratio + exponent

    return EscapePrediction(
        _exp(log_tau), log_tau, exponent, _flag(exponent), float(diffusion),
        float(diffusion))


def sgd_escape_time(h_ae, h_be, barrier, batch_size, eta, s=0.5):
    """Return the mean escape time of SGD along one escape path.

    τ = 2π/|H_be|·exp[(2BΔL/η)·(s/H_ae + (1-s)/|H_be|)]

    Parameters
    ----------
    h_ae : float
        the Hessian eigenvalue along the escape direction at the minimum
    h_be : float
        the (negative) Hessian eigenvalue along the escape direction at the
        saddle
    barrier : float
        ΔL = L(b) - L(a)
    batch_size : int
        the batch size B
    eta : float
        the learning rate
    s : float
        the path-position parameter in (0, 1)

    Returns
    -------
    EscapePrediction
        the prediction, with the effective temperatures ηH_ae/2B at the
        minimum and η|H_be|/2B at the saddle

    Raises
    ------
    ValueError
        if s is outside (0, 1) or another argument violates its sign
    """
    if not 0 < s < 1:
        raise ValueError("the path parameter s must lie in (0, 1)")
    if not h_ae > 0:
        raise ValueError("H_ae must be positive")
    if not h_be < 0:
        raise ValueError("H_be must be negative")
    if not barrier > 0:
        raise ValueError("the barrier height must be positive")
    if not eta > 0:
        raise ValueError("eta must be positive")
    if not batch_size > 0:
        raise ValueError("batch_size must be positive")

    abs_be = abs(h_be)
    exponent = 2. * batch_size * barrier / eta * \
        (s / h_ae + (1. - s) / abs_be)
    log_tau = math.log(2. * np.pi / abs_be) + exponent

    return EscapePrediction(
        _exp(log_tau), log_tau, exponent, _flag(exponent),
        eta * h_ae / (2. * batch_size), eta * abs_be / (2. * batch_size))


def combine_rates(gammas):
    """Return the total escape rate over several paths, Σ_p γ_p."""
    gammas = [float(g) for g in gammas]
    if len(gammas) == 0:
        raise ValueError("at least one escape rate is needed")
    if any(not g > 0 for g in gammas):
        raise ValueError("escape rates must be positive")
    return math.fsum(gammas)


def stationary_occupancy(taus):
    """Return the stationary probability of each valley, τ_v / Σ τ.

    Parameters
    ----------
    taus : list of float
        the mean escape time of each valley

    Returns
    -------
    array_like
        probabilities summing to one
    """
    taus = np.asarray(taus, dtype=np.float64)
    if taus.size == 0:
        raise ValueError("at least one valley is needed")
    if np.any(taus <= 0):
        raise ValueError("escape times must be positive")
    return taus / math.fsum(taus)


def to_iterations(tau, eta):
    """Convert a dynamical time to a number of iterations, τ/η."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return tau / eta
