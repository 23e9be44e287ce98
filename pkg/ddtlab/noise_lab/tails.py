"""Noise-norm histograms and heavy-tailed baselines."""
import collections
import numpy as np
from scipy import stats

from ddtlab.utils.exceptions import InsufficientDataError
from ddtlab.utils.rng import as_generator

# minimum number of norms accepted by tail_statistic
MIN_TAIL_SAMPLES = 100

Histogram = collections.namedtuple("Histogram", ["counts", "edges"])

TailStatistic = collections.namedtuple(
    "TailStatistic", ["excess_kurtosis_of_log", "max_over_median"])
TailStatistic.__doc__ = """Summary of the tail of a norm distribution.

excess_kurtosis_of_log : float
    excess kurtosis of the log-norms
max_over_median : float
    largest norm divided by the median norm
"""


def norm_histogram(vectors, bin_count=50):
    """Histogram the Euclidean norms of a set of vectors.

    Parameters
    ----------
    vectors : array_like
        (count, dim) array of vectors
    bin_count : int
        number of equal-width bins spanning [0, max norm]

    Returns
    -------
    Histogram
        the counts per bin and the bin_count + 1 bin edges

    Raises
    ------
    ValueError
        if there are no vectors or fewer than two bins
    """
    if int(bin_count) < 2:
        raise ValueError("bin_count must be at least 2")
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.size == 0:
        raise ValueError("cannot histogram an empty set of vectors")
    norms = np.linalg.norm(np.atleast_2d(vectors), axis=1)
    top = float(np.max(norms))
    counts, edges = np.histogram(
        norms, bins=int(bin_count), range=(0., top if top > 0 else 1.))
    return Histogram(counts, edges)


def levy_sample(alpha, scale, dim, count, seed):
    """Draw vectors with i.i.d. symmetric α-stable coordinates.

    Uses the Chambers-Mallows-Stuck construction. For alpha = 2 the
    coordinates are Gaussian with variance 2·scale².

    Parameters
    ----------
    alpha : float
        the stability index, in (0, 2]
    scale : float
        the scale parameter. Must be nonnegative.
    dim : int
        number of coordinates of each vector
    count : int
        number of vectors
    seed : int or tuple or numpy.random.Generator
        the random stream

    Returns
    -------
    array_like
        (count, dim) array

    Raises
    ------
    ValueError
        if alpha is outside (0, 2] or the scale is negative
    """
    if not 0 < alpha <= 2:
        raise ValueError("alpha must lie in (0, 2], got {}".format(alpha))
    if not scale >= 0:
        raise ValueError("the scale must be nonnegative")

    rng = as_generator(seed)
    size = (int(count), int(dim))
    phi = (rng.uniform(size=size) - 0.5) * np.pi
    if alpha == 1:
        return scale * np.tan(phi)
    w = rng.standard_exponential(size=size)
    if alpha == 2:
        return 2. * scale * np.sqrt(w) * np.sin(phi)
    return scale * (
        (np.cos((1. - alpha) * phi) / w) ** (1. / alpha - 1.) *
        np.sin(alpha * phi) / np.cos(phi) ** (1. / alpha))


def gaussian_baseline(cov, count, seed):
    """Draw zero-mean Gaussian vectors with covariance `cov`.

    Used as the Gaussian reference for measured SGN, so both share their
    second moments.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    rng = as_generator(seed)
    return rng.multivariate_normal(
        np.zeros(cov.shape[0]), cov, size=int(count), method="eigh")


def tail_statistic(norms):
    """Summarize how heavy the tail of a norm distribution is.

    Parameters
    ----------
    norms : array_like
        positive norms, at least MIN_TAIL_SAMPLES of them

    Returns
    -------
    TailStatistic
        the excess kurtosis of the log-norms and the max / median ratio

    Raises
    ------
    InsufficientDataError
        if fewer than MIN_TAIL_SAMPLES norms are given
    ValueError
        if a norm is not positive
    """
    norms = np.asarray(norms, dtype=np.float64).ravel()
    if norms.shape[0] < MIN_TAIL_SAMPLES:
        raise InsufficientDataError(
            "tail statistics need at least {} norms, got {}".format(
                MIN_TAIL_SAMPLES, norms.shape[0]))
    if np.any(norms <= 0):
        raise ValueError("norms must be positive")

    logs = np.log(norms)
    if np.ptp(logs) == 0:
        kurt = 0.
    else:
        kurt = float(stats.kurtosis(logs, fisher=True))

    return TailStatistic(kurt, float(np.max(norms) / np.median(norms)))
