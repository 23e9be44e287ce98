"""Long-run valley occupancy of a two-valley landscape."""
import logging
import collections
import numpy as np

from ddtlab.dynamics.steppers import DIVERGENCE_BOUND
from ddtlab.dynamics.steppers import SgldConfig
from ddtlab.dynamics.steppers import Stepper
from ddtlab.kramers.formulas import sgld_escape_time
from ddtlab.kramers.formulas import stationary_occupancy
from ddtlab.utils.exceptions import DivergenceError
from ddtlab.utils.rng import as_generator

logger = logging.getLogger(__name__)

# minimum number of valley-to-valley transitions for a confident estimate
MIN_TRANSITIONS = 20

OccupancyResult = collections.namedtuple(
    "OccupancyResult",
    ["fractions", "predicted", "mean_residence", "transitions",
     "low_confidence", "theory"])
OccupancyResult.__doc__ = """Measured and predicted valley occupancy.

fractions : array_like
    fraction of the time spent inside either valley that was spent in each
predicted : array_like or None
    stationary occupancy implied by the measured mean residence times, None
    if a valley was never left
mean_residence : list of float or None
    measured mean time (dynamical) from entering a valley until reaching the
    other one, None for a valley that was never left
transitions : int
    number of valley-to-valley transitions
low_confidence : bool
    True with fewer than MIN_TRANSITIONS transitions
theory : array_like or None
    stationary occupancy implied by the closed-form SGLD escape times, if
    the valley geometries were given
"""


def _region_start(region):
    if region.center is not None:
        return region.center.copy()
    if np.all(np.isfinite(region.lower)) and np.all(np.isfinite(region.upper)):
        return 0.5 * (region.lower + region.upper)
    raise ValueError("a start point is required for unbounded regions")


def occupancy_experiment(landscape,
                         regions,
                         stepper,
                         total_iters,
                         seed,
                         start=None,
                         geometries=None):
    """Measure how long one long trajectory stays in each of two valleys.

    A valley is left when the trajectory reaches the other valley. Its mean
    residence time is the time spent between entering it and reaching the
    other valley, divided by the number of such exits. The residence still
    in progress at the end of the run adds its elapsed time without an exit.

    Parameters
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    regions : (ValleyRegion, ValleyRegion)
        the two valleys. Must be disjoint.
    stepper : ddtlab.dynamics.SgdConfig or ddtlab.dynamics.SgldConfig
        the dynamics
    total_iters : int
        the length of the trajectory
    seed : int or tuple or numpy.random.Generator
        the random stream
    start : array_like or None
        the initial parameters. Defaults to the center of the first valley.
    geometries : list of (ValleyGeometry, SaddleGeometry, float) or None
        the geometry and barrier of each valley. If given and the dynamics
        are pure SGLD with D > 0, the closed-form occupancy is reported too.

    Returns
    -------
    OccupancyResult
        the measured and predicted occupancy

    Raises
    ------
    ValueError
        if the regions overlap or the start lies in neither of them
    DivergenceError
        if the trajectory diverges
    """
    if len(regions) != 2:
        raise ValueError("the occupancy experiment needs exactly two regions")
    if not regions[0].is_disjoint(regions[1]):
        raise ValueError("the two valley regions must be disjoint")
    if int(total_iters) < 1:
        raise ValueError("total_iters must be a positive integer")

    theta = _region_start(regions[0]) if start is None else \
        np.array(start, dtype=np.float64)
    inside = [r.contains(theta) for r in regions]
    if not any(inside):
        raise ValueError("the start point must lie in one of the regions")

    runner = Stepper(landscape, stepper, as_generator(seed))
    bounds = [(r.lower, r.upper) for r in regions]

    current = 0 if inside[0] else 1
    entered = 0
    time_in = [0, 0]
    residence = [0, 0]
    exits = [0, 0]

    for it in range(1, int(total_iters) + 1):
        theta = runner.step(theta)
        if not np.all(np.abs(theta) <= DIVERGENCE_BOUND):
            raise DivergenceError(
                "occupancy trajectory diverged at iteration {}".format(it))

        for v, (lo, hi) in enumerate(bounds):
            if np.all((theta >= lo) & (theta <= hi)):
                time_in[v] += 1
                if v != current:
                    residence[current] += it - entered
                    exits[current] += 1
                    current = v
                    entered = it
                break

    residence[current] += int(total_iters) - entered
    transitions = exits[0] + exits[1]

    total_inside = float(sum(time_in))
    fractions = np.array(time_in, dtype=np.float64) / total_inside \
        if total_inside > 0 else np.full(2, np.nan)

    eta = stepper.eta
    mean_residence = [eta * residence[v] / exits[v] if exits[v] > 0 else None
                      for v in range(2)]
    predicted = None
    if all(m is not None and m > 0 for m in mean_residence):
        predicted = stationary_occupancy(mean_residence)

    low_confidence = transitions < MIN_TRANSITIONS
    if low_confidence:
        logger.warning("only %d valley transitions in %d iterations; the "
                       "occupancy estimate has low confidence", transitions,
                       total_iters)

    theory = None
    if geometries is not None and isinstance(stepper, SgldConfig) and \
            stepper.batch_size is None and stepper.diffusion > 0:
        theory = stationary_occupancy([
            sgld_escape_time(valley, saddle, barrier, stepper.diffusion).tau
            for valley, saddle, barrier in geometries])

    return OccupancyResult(fractions, predicted, mean_residence, transitions,
                           low_confidence, theory)
