"""Discrete-time SGD and SGLD updates and the SDE diffusion matrix.

Both dynamics are Euler-Maruyama discretizations of

    dθ = -∇L(θ) dt + sqrt(2 D(θ)) dW,    dt = η,

with D(θ) = (η/2B)[H(θ)]⁺ for SGD (the noise comes from minibatch sampling)
and an isotropic scalar D for SGLD (the noise is injected).
"""
import collections
import numpy as np

from ddtlab.dynamics.sampler import MinibatchSampler
from ddtlab.dynamics.sampler import SAMPLING_SCHEMES
from ddtlab.utils.exceptions import DivergenceError

# coordinates beyond this magnitude mark a trajectory as diverged
DIVERGENCE_BOUND = 1e6

# number of Gaussian vectors drawn at a time by the trajectory steppers
NOISE_BLOCK = 1024

TrajectoryState = collections.namedtuple(
    "TrajectoryState", ["theta", "iteration", "dynamical_time"])
TrajectoryState.__doc__ = """Position of a trajectory.

theta : array_like
    the parameter vector
iteration : int
    number of updates T performed so far
dynamical_time : float
    t = η·T
"""


def initial_state(theta):
    """Return the state at iteration 0."""
    return TrajectoryState(np.array(theta, dtype=np.float64), 0, 0.)


class SgdConfig(object):
    """Hyperparameters of minibatch SGD.

    Attributes
    ----------
    eta : float
        the learning rate
    batch_size : int
        the minibatch size B
    sampling : str
        the minibatch sampling scheme. One of SAMPLING_SCHEMES.
    """

    kind = "sgd"

    def __init__(self, eta, batch_size, sampling="with-replacement"):
        """Instantiate the configuration.

        Raises
        ------
        ValueError
            if eta is negative, the batch size is not positive or the sampling
            scheme is unknown
        """
        if not eta >= 0:
            raise ValueError("eta must be nonnegative")
        if int(batch_size) < 1:
            raise ValueError("batch_size must be a positive integer")
        if sampling not in SAMPLING_SCHEMES:
            raise ValueError("Unknown sampling scheme: {}".format(sampling))
        self.eta = float(eta)
        self.batch_size = int(batch_size)
        self.sampling = sampling

    def replace(self, **kwargs):
        """Return a copy with some fields replaced."""
        params = dict(eta=self.eta, batch_size=self.batch_size,
                      sampling=self.sampling)
        params.update(kwargs)
        return SgdConfig(**params)

    def to_dict(self):
        """Return the JSON-serializable form of the configuration."""
        return {"stepper": self.kind, "eta": self.eta,
                "batch_size": self.batch_size, "sampling": self.sampling}


class SgldConfig(object):
    """Hyperparameters of gradient descent with injected white noise.

    Attributes
    ----------
    eta : float
        the learning rate
    diffusion : float
        the isotropic diffusion coefficient D. The injected noise has standard
        deviation sqrt(2·D·η) per coordinate and step.
    batch_size : int or None
        if None, the full gradient is used (pure SGLD). Otherwise minibatch
        gradients of this size are used and the injected noise is added on
        top of the minibatch noise.
    sampling : str
        the minibatch sampling scheme when batch_size is set
    """

    kind = "sgld"

    def __init__(self, eta, diffusion, batch_size=None,
                 sampling="with-replacement"):
        """Instantiate the configuration.

        Raises
        ------
        ValueError
            if eta or the diffusion coefficient is negative
        """
        if not eta >= 0:
            raise ValueError("eta must be nonnegative")
        if not diffusion >= 0:
            raise ValueError("the diffusion coefficient must be nonnegative")
        if batch_size is not None and int(batch_size) < 1:
            raise ValueError("batch_size must be a positive integer")
        if sampling not in SAMPLING_SCHEMES:
            raise ValueError("Unknown sampling scheme: {}".format(sampling))
        self.eta = float(eta)
        self.diffusion = float(diffusion)
        self.batch_size = None if batch_size is None else int(batch_size)
        self.sampling = sampling

    @property
    def noise_std(self):
        """Return the per-coordinate standard deviation sqrt(2·D·η)."""
        return np.sqrt(2. * self.diffusion * self.eta)

    def replace(self, **kwargs):
        """Return a copy with some fields replaced."""
        params = dict(eta=self.eta, diffusion=self.diffusion,
                      batch_size=self.batch_size, sampling=self.sampling)
        params.update(kwargs)
        return SgldConfig(**params)

    def to_dict(self):
        """Return the JSON-serializable form of the configuration."""
        return {"stepper": self.kind, "eta": self.eta,
                "diffusion": self.diffusion, "batch_size": self.batch_size,
                "sampling": self.sampling}


def _check_finite(theta, iteration):
    if not np.all(np.abs(theta) <= DIVERGENCE_BOUND):
        raise DivergenceError(
            "trajectory diverged at iteration {}: max |θ_i| = {}".format(
                iteration, np.max(np.abs(theta))))


def _make_sampler(landscape, batch_size, sampling, rng, blocked=False):
    if landscape.dataset is None:
        raise ValueError("minibatch sampling requires a landscape with a "
                         "data set")
    return MinibatchSampler(
        landscape.sample_count, batch_size, sampling, rng, blocked)


def sgd_step(landscape, state, config, rng, sampler=None):
    """Perform one SGD update θ' = θ - η·∇L̂(θ).

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface. Must have a data set.
    state : TrajectoryState
        the current state
    config : SgdConfig
        the hyperparameters
    rng : numpy.random.Generator
        the random stream of the trajectory
    sampler : MinibatchSampler or None
        an existing sampler (keeps the epoch position across calls). If None,
        one is created from rng.

    Returns
    -------
    TrajectoryState
        the updated state

    Raises
    ------
    DivergenceError
        if the update is non-finite or leaves the bounded domain
    """
    if sampler is None:
        sampler = _make_sampler(
            landscape, config.batch_size, config.sampling, rng)
    theta = state.theta - config.eta * landscape.minibatch_grad(
        state.theta, sampler.sample())
    iteration = state.iteration + 1
    _check_finite(theta, iteration)
    return TrajectoryState(theta, iteration, config.eta * iteration)


def sgld_step(landscape, state, config, rng, sampler=None):
    """Perform one SGLD update θ' = θ - η·∇L(θ) + sqrt(2Dη)·ζ.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    state : TrajectoryState
        the current state
    config : SgldConfig
        the hyperparameters
    rng : numpy.random.Generator
        the random stream of the trajectory
    sampler : MinibatchSampler or None
        an existing sampler, only used when config.batch_size is set

    Returns
    -------
    TrajectoryState
        the updated state

    Raises
    ------
    DivergenceError
        if the update is non-finite or leaves the bounded domain
    """
    if config.batch_size is None:
        g = landscape.grad(state.theta)
    else:
        if sampler is None:
            sampler = _make_sampler(
                landscape, config.batch_size, config.sampling, rng)
        g = landscape.minibatch_grad(state.theta, sampler.sample())
    noise = rng.standard_normal(state.theta.shape[0])
    theta = state.theta - config.eta * g + config.noise_std * noise
    iteration = state.iteration + 1
    _check_finite(theta, iteration)
    return TrajectoryState(theta, iteration, config.eta * iteration)


class Stepper(object):
    """Repeatedly applies one of the updates to a bare parameter vector.

    Used by the trajectory simulations. Injected noise is drawn from the
    stream NOISE_BLOCK vectors at a time and minibatch indices in blocks, in
    the same order as the batched trials of simulate_trials.
    """

    def __init__(self, landscape, config, rng):
        """Instantiate the stepper.

        Parameters
        ----------
        landscape : ddtlab.landscapes.Landscape
            the loss surface
        config : SgdConfig or SgldConfig
            the hyperparameters
        rng : numpy.random.Generator
            the random stream of the trajectory

        Raises
        ------
        ValueError
            if the configuration type is unknown
        """
        if not isinstance(config, (SgdConfig, SgldConfig)):
            raise ValueError("Unknown stepper configuration: {}".format(
                type(config).__name__))
        self.landscape = landscape
        self.config = config
        self.rng = rng
        self.eta = config.eta

        self._sampler = None
        if config.batch_size is not None:
            self._sampler = _make_sampler(
                landscape, config.batch_size, config.sampling, rng,
                blocked=True)

        self._noise_std = getattr(config, "noise_std", 0.)
        self._noise = None
        self._noise_idx = NOISE_BLOCK

    def _next_noise(self):
        if self._noise_idx >= NOISE_BLOCK:
            self._noise = self.rng.standard_normal(
                (NOISE_BLOCK, self.landscape.dim))
            self._noise_idx = 0
        z = self._noise[self._noise_idx]
        self._noise_idx += 1
        return z

    def step(self, theta):
        """Return the parameters after one update."""
        if self._sampler is None:
            g = self.landscape.grad(theta)
        else:
            g = self.landscape.minibatch_grad_rows(
                theta[None, :], self._sampler.sample()[None, :])[0]
        theta = theta - self.eta * g
        if self._noise_std > 0:
            theta = theta + self._noise_std * self._next_noise()
        return theta


def diffusion_matrix(hessian, eta, batch_size):
    """Return the SGD diffusion matrix D = (η/2B)[H]⁺.

    [H]⁺ keeps the eigenvectors of H and replaces every eigenvalue by its
    absolute value.

    Parameters
    ----------
    hessian : array_like
        the symmetric Hessian H
    eta : float
        the learning rate
    batch_size : int
        the batch size B

    Returns
    -------
    array_like
        the positive semidefinite diffusion matrix

    Raises
    ------
    ValueError
        if H is not a symmetric square matrix
    """
    h = np.atleast_2d(np.asarray(hessian, dtype=np.float64))
    scale = max(1., float(np.max(np.abs(h)))) if h.size else 1.
    if h.shape[0] != h.shape[1] or \
            not np.allclose(h, h.T, rtol=0., atol=1e-10 * scale):
        raise ValueError("the Hessian must be a symmetric square matrix")
    eigs, vecs = np.linalg.eigh(0.5 * (h + h.T))
    psd = (vecs * np.abs(eigs)).dot(vecs.T)
    return eta / (2. * batch_size) * psd
