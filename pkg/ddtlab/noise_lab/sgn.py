"""Stochastic gradient noise: draws, covariance and the C ≈ H/B relation."""
import logging
import collections
import numpy as np
from scipy import stats

from ddtlab.dynamics.sampler import MinibatchSampler
from ddtlab.utils.exceptions import InsufficientDataError
from ddtlab.utils.exceptions import NumericalFailureError
from ddtlab.utils.rng import as_generator

logger = logging.getLogger(__name__)

# default range of Hessian elements kept by covariance_hessian_fit
DEFAULT_FILTER_RANGE = (1e-4, 0.5)

# default number of SGN draws is 10·dim², capped at this value
MAX_DEFAULT_DRAWS = 100000

CovarianceFit = collections.namedtuple(
    "CovarianceFit", ["pearson", "slope", "element_count", "filter_range"])
CovarianceFit.__doc__ = """Agreement of the SGN covariance C with H/B.

pearson : float
    Pearson correlation of the (H_ij, C_ij) element pairs
slope : float
    least-squares slope (through the origin) of C_ij on H_ij/B
element_count : int
    number of element pairs that passed the filter
filter_range : (float, float)
    the range H_ij had to lie in
"""

PretrainResult = collections.namedtuple(
    "PretrainResult", ["theta", "grad_norm", "iterations", "converged"])

TraceFit = collections.namedtuple(
    "TraceFit", ["batch_sizes", "traces", "pearson", "slope"])
TraceFit.__doc__ = """Fit of the SGN covariance trace against 1/B.

batch_sizes : list of int
    the measured batch sizes
traces : list of float
    trace of the estimated covariance at each batch size
pearson : float
    Pearson correlation of the traces with 1/B
slope : float
    least-squares slope of the traces on 1/B
"""


def default_draw_count(dim):
    """Return the default number of SGN draws, 10·dim² capped at 1e5."""
    return int(min(10 * dim ** 2, MAX_DEFAULT_DRAWS))


class NoiseSampleSet(object):
    """A set of stochastic gradient noise draws at a fixed point.

    Attributes
    ----------
    draws : array_like
        (count, dim) array. Each row is grad(θ) - minibatch_grad(θ, batch).
    batch_size : int
        the minibatch size B used for every draw
    theta : array_like
        the measurement point
    """

    def __init__(self, draws, batch_size, theta):
        self.draws = np.atleast_2d(np.asarray(draws, dtype=np.float64))
        self.batch_size = int(batch_size)
        self.theta = np.asarray(theta, dtype=np.float64)

    @property
    def count(self):
        """Return the number of draws."""
        return self.draws.shape[0]

    @property
    def dim(self):
        """Return the dimension of each draw."""
        return self.draws.shape[1]

    def mean(self):
        """Return the sample mean of the draws."""
        return np.mean(self.draws, axis=0)

    def norms(self):
        """Return the Euclidean norm of each draw."""
        return np.linalg.norm(self.draws, axis=1)


def draw_sgn(landscape, theta, batch_size, count, seed, replace=False):
    """Draw independent stochastic gradient noise samples at θ.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface. Must have a data set.
    theta : array_like
        the measurement point
    batch_size : int
        the minibatch size B
    count : int
        number of draws
    seed : int or tuple or numpy.random.Generator
        the random stream
    replace : bool
        whether indices may repeat within one minibatch. By default every
        minibatch holds B distinct samples, so B = sample count gives the
        full gradient and zero noise.

    Returns
    -------
    NoiseSampleSet
        the draws

    Raises
    ------
    ValueError
        if count < 1, the landscape has no data set or the batch size is not in
        [1, sample_count]
    """
    if int(count) < 1:
        raise ValueError("count must be a positive integer")
    if landscape.dataset is None:
        raise ValueError("SGN is only defined for landscapes with a data set")

    rng = as_generator(seed)
    sampler = MinibatchSampler(
        landscape.sample_count, batch_size, "with-replacement", rng)
    draw = sampler.sample if replace else sampler.sample_distinct

    theta = np.asarray(theta, dtype=np.float64)
    full = landscape.grad(theta)
    draws = np.empty((int(count), landscape.dim))
    for i in range(int(count)):
        draws[i] = full - landscape.minibatch_grad(theta, draw())

    return NoiseSampleSet(draws, batch_size, theta)


def estimate_sgn_covariance(samples):
    """Return the unbiased sample covariance of the SGN draws.

    Parameters
    ----------
    samples : NoiseSampleSet
        the draws

    Returns
    -------
    array_like
        (dim, dim) symmetric matrix

    Raises
    ------
    ValueError
        if there is a single draw
    """
    if samples.count < 2:
        raise ValueError("at least two draws are needed for a covariance")
    if samples.count < samples.dim + 1:
        logger.warning("only %d draws for a %d-dimensional covariance; the "
                       "estimate is rank deficient", samples.count, samples.dim)
    cov = np.atleast_2d(np.cov(samples.draws, rowvar=False, ddof=1))
    return 0.5 * (cov + cov.T)


def eigenbasis_pairs(cov, hessian, filter_range=DEFAULT_FILTER_RANGE):
    """Return the (H_ij, C_ij) element pairs in the eigenbasis of H.

    Both matrices are rotated into the eigenbasis of H. The upper triangle
    (diagonal included) is kept where H_ij lies in filter_range.

    Returns
    -------
    array_like
        the kept elements of the rotated H
    array_like
        the matching elements of the rotated C
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=np.float64))
    hessian = np.atleast_2d(np.asarray(hessian, dtype=np.float64))
    if cov.shape != hessian.shape or cov.shape[0] != cov.shape[1]:
        raise ValueError("C and H must be square matrices of one shape")
    if not (np.allclose(cov, cov.T) and np.allclose(hessian, hessian.T)):
        raise ValueError("C and H must be symmetric")

    _, vecs = np.linalg.eigh(hessian)
    h_rot = vecs.T.dot(hessian).dot(vecs)
    c_rot = vecs.T.dot(cov).dot(vecs)

    low, high = filter_range
    iu = np.triu_indices(hessian.shape[0])
    h_el = h_rot[iu]
    c_el = c_rot[iu]
    keep = (h_el >= low) & (h_el <= high)
    return h_el[keep], c_el[keep]


def covariance_hessian_fit(cov,
                           hessian,
                           batch_size,
                           filter_range=DEFAULT_FILTER_RANGE):
    """Measure how well the SGN covariance follows C ≈ H/B.

    Parameters
    ----------
    cov : array_like
        the SGN covariance C
    hessian : array_like
        the Hessian H at the same point
    batch_size : int
        the batch size B the covariance was measured at
    filter_range : (float, float)
        elements H_ij outside this range are ignored

    Returns
    -------
    CovarianceFit
        the Pearson correlation and the slope of C on H/B

    Raises
    ------
    InsufficientDataError
        if fewer than two element pairs pass the filter
    """
    h_el, c_el = eigenbasis_pairs(cov, hessian, filter_range)
    if h_el.shape[0] < 2:
        raise InsufficientDataError(
            "only {} Hessian elements lie in {}".format(
                h_el.shape[0], tuple(filter_range)))

    x = h_el / batch_size
    slope = float(np.dot(x, c_el) / np.dot(x, x))
    if np.ptp(c_el) == 0 or np.ptp(h_el) == 0:
        pearson = float("nan")
    else:
        pearson = float(stats.pearsonr(h_el, c_el)[0])

    return CovarianceFit(pearson, slope, int(h_el.shape[0]),
                         (float(filter_range[0]), float(filter_range[1])))


def pretrain(landscape, theta, tol=1e-4, eta=1., max_iters=100000):
    """Run full-batch gradient descent until ‖grad‖ ≤ tol.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    theta : array_like
        the initial parameters
    tol : float
        the gradient-norm target
    eta : float
        the learning rate
    max_iters : int
        the iteration cap

    Returns
    -------
    PretrainResult
        the final parameters, the residual gradient norm, the number of
        iterations and whether the target was reached

    Raises
    ------
    NumericalFailureError
        if gradient descent diverges
    """
    theta = np.array(theta, dtype=np.float64)
    g = landscape.grad(theta)
    norm = float(np.linalg.norm(g))
    it = 0
    while norm > tol and it < max_iters:
        theta = theta - eta * g
        g = landscape.grad(theta)
        norm = float(np.linalg.norm(g))
        it += 1
        if not np.isfinite(norm):
            raise NumericalFailureError(
                "gradient descent diverged after {} iterations (eta={})".format(
                    it, eta))

    converged = norm <= tol
    if not converged:
        logger.warning("pretraining stopped at max_iters=%d with ‖grad‖ = %g",
                       max_iters, norm)
    return PretrainResult(theta, norm, it, converged)


def trace_batch_fit(landscape,
                    theta,
                    batch_sizes=(1, 2, 4, 8),
                    count=None,
                    seed=0):
    """Fit the trace of the SGN covariance against 1/B.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    theta : array_like
        the measurement point
    batch_sizes : list of int
        the batch sizes to measure. At least two.
    count : int or None
        draws per batch size. Defaults to default_draw_count(dim).
    seed : int
        the experiment seed. Batch size B uses the stream (seed, B).

    Returns
    -------
    TraceFit
        the traces and their fit
    """
    if len(batch_sizes) < 2:
        raise ValueError("at least two batch sizes are needed")
    count = count or default_draw_count(landscape.dim)

    traces = []
    for b in batch_sizes:
        samples = draw_sgn(landscape, theta, b, count, (seed, int(b)))
        traces.append(float(np.trace(estimate_sgn_covariance(samples))))

    res = stats.linregress(1. / np.asarray(batch_sizes, dtype=np.float64),
                           traces)
    return TraceFit(list(batch_sizes), traces, float(res.rvalue),
                    float(res.slope))
