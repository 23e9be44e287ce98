"""Trajectory simulation until the parameters leave a valley."""
import csv
import logging
import collections
import numpy as np

from ddtlab.dynamics.sampler import MinibatchSampler
from ddtlab.dynamics.steppers import DIVERGENCE_BOUND
from ddtlab.dynamics.steppers import NOISE_BLOCK
from ddtlab.dynamics.steppers import Stepper
from ddtlab.utils.rng import as_generator

logger = logging.getLogger(__name__)

# default iteration cap of a single escape trial
DEFAULT_MAX_ITERS = 10000000

EscapeTrial = collections.namedtuple(
    "EscapeTrial", ["iterations", "escaped", "valid", "dynamical_time"])
EscapeTrial.__doc__ = """Outcome of one escape simulation.

iterations : int
    the iteration T at which the trajectory left the region, or the number of
    iterations performed if it did not
escaped : bool
    whether the trajectory left the region before the iteration cap
valid : bool
    False if the trajectory diverged
dynamical_time : float
    η·iterations
"""


class TrajectoryWriter(object):
    """Streams thinned trajectory snapshots to a csv file.

    Every `stride`-th iteration a row (iteration, loss, theta_0, ...,
    theta_{n-1}) is written.
    """

    def __init__(self, file_path, landscape, stride=100):
        """Instantiate the writer and write the header row.

        Parameters
        ----------
        file_path : str
            path to the csv file. Overwritten if it exists.
        landscape : ddtlab.landscapes.Landscape
            the landscape whose loss is recorded
        stride : int
            number of iterations between two snapshots
        """
        assert stride >= 1, "stride must be a positive integer"
        self.landscape = landscape
        self.stride = int(stride)
        self.fieldnames = ["iteration", "loss"] + \
            ["theta_{}".format(i) for i in range(landscape.dim)]
        self._file = open(file_path, "w", newline="")
        self._writer = csv.writer(self._file)
        self._writer.writerow(self.fieldnames)

    def write(self, iteration, theta, force=False):
        """Write a snapshot if the iteration is on the stride (or if forced)."""
        if force or iteration % self.stride == 0:
            self._writer.writerow(
                [iteration, repr(self.landscape.loss(theta))] +
                [repr(float(v)) for v in theta])

    def close(self):
        """Flush and close the file."""
        self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def simulate_until_exit(landscape,
                        start,
                        region,
                        stepper,
                        max_iters=DEFAULT_MAX_ITERS,
                        seed=0,
                        writer=None):
    """Run one trajectory from `start` until it leaves `region`.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    start : array_like
        the initial parameters. Must lie inside the region.
    region : ddtlab.dynamics.ValleyRegion
        the valley
    stepper : SgdConfig or SgldConfig
        the dynamics
    max_iters : int
        the iteration cap. Trials that reach it are censored.
    seed : int or tuple or numpy.random.Generator
        the random stream of the trajectory
    writer : TrajectoryWriter or None
        if given, thinned snapshots are written to it

    Returns
    -------
    EscapeTrial
        the outcome of the trial

    Raises
    ------
    ValueError
        if the start lies outside the region or max_iters < 1
    """
    if int(max_iters) < 1:
        raise ValueError("max_iters must be a positive integer")
    theta = np.array(start, dtype=np.float64)
    if not region.contains(theta):
        raise ValueError("the start point must lie inside the region")

    runner = Stepper(landscape, stepper, as_generator(seed))
    eta = stepper.eta
    lower, upper = region.lower, region.upper

    if writer is not None:
        writer.write(0, theta)

    for it in range(1, int(max_iters) + 1):
        theta = runner.step(theta)

        # NaN fails the comparison as well
        if not np.all(np.abs(theta) <= DIVERGENCE_BOUND):
            logger.warning("trajectory diverged at iteration %d (max |θ_i| = "
                           "%s); trial marked invalid", it,
                           np.max(np.abs(theta)))
            return EscapeTrial(it, False, False, eta * it)

        if writer is not None:
            writer.write(it, theta)

        if not np.all((theta >= lower) & (theta <= upper)):
            # the exit point is always recorded
            if writer is not None and it % writer.stride != 0:
                writer.write(it, theta, force=True)
            return EscapeTrial(it, True, True, eta * it)

    return EscapeTrial(int(max_iters), False, True, eta * int(max_iters))


def simulate_trials(landscape, start, region, stepper, max_iters, rngs):
    """Run several independent escape trials side by side.

    All trials advance together as the rows of one array. Each trial draws
    its minibatches and injected noise from its own generator in the same
    blocks and order as simulate_until_exit, so its outcome does not depend
    on which other trials it is run with.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    start : array_like
        the initial parameters of every trial
    region : ddtlab.dynamics.ValleyRegion
        the valley
    stepper : SgdConfig or SgldConfig
        the dynamics
    max_iters : int
        the iteration cap of every trial
    rngs : list of numpy.random.Generator
        one random stream per trial

    Returns
    -------
    list of EscapeTrial
        the outcome of every trial, in the order of rngs
    """
    if int(max_iters) < 1:
        raise ValueError("max_iters must be a positive integer")
    start = np.asarray(start, dtype=np.float64)
    if not region.contains(start):
        raise ValueError("the start point must lie inside the region")
    if stepper.batch_size is not None and landscape.dataset is None:
        raise ValueError("minibatch sampling requires a landscape with a "
                         "data set")

    count = len(rngs)
    if count == 0:
        return []
    eta = stepper.eta
    noise_std = getattr(stepper, "noise_std", 0.)
    lower, upper = region.lower, region.upper

    theta = np.tile(start, (count, 1))
    active = np.arange(count)
    samplers = None
    if stepper.batch_size is not None:
        samplers = [MinibatchSampler(landscape.sample_count,
                                     stepper.batch_size, stepper.sampling,
                                     rng, blocked=True) for rng in rngs]
    results = [None] * count
    noise = None
    noise_idx = NOISE_BLOCK

    for it in range(1, int(max_iters) + 1):
        # the minibatch of a step is drawn before its noise
        if samplers is None:
            g = landscape.grad_batch(theta)
        else:
            g = landscape.minibatch_grad_rows(
                theta, np.stack([samplers[i].sample() for i in active]))

        if noise_std > 0 and noise_idx >= NOISE_BLOCK:
            noise = np.stack([
                rngs[i].standard_normal((NOISE_BLOCK, landscape.dim))
                for i in active])
            noise_idx = 0

        theta = theta - eta * g
        if noise_std > 0:
            theta = theta + noise_std * noise[:, noise_idx]
            noise_idx += 1

        diverged = ~np.all(np.abs(theta) <= DIVERGENCE_BOUND, axis=1)
        outside = ~np.all((theta >= lower) & (theta <= upper), axis=1)
        done = diverged | outside
        if np.any(done):
            for j in np.nonzero(done)[0]:
                if diverged[j]:
                    logger.warning("trajectory diverged at iteration %d; "
                                   "trial marked invalid", it)
                    results[active[j]] = EscapeTrial(
                        it, False, False, eta * it)
                else:
                    results[active[j]] = EscapeTrial(it, True, True, eta * it)
            keep = ~done
            theta = theta[keep]
            active = active[keep]
            if noise is not None:
                noise = noise[keep]
            if active.shape[0] == 0:
                break

    for i in active:
        results[i] = EscapeTrial(
            int(max_iters), False, True, eta * int(max_iters))

    return results
