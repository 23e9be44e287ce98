"""Script containing the escape-trial worker."""
import ray

from ddtlab.dynamics.simulate import simulate_trials
from ddtlab.utils.rng import make_rng


def run_trial_indices(landscape, protocol, indices, seed, stream=()):
    """Run the escape trials with the given indices.

    Trial i draws from the random stream (seed, *stream, i), so its outcome
    does not depend on which process runs it.

    Returns
    -------
    list of (int, EscapeTrial)
        the trial index and outcome of every trial
    """
    indices = list(indices)
    if len(indices) == 0:
        return []
    trials = simulate_trials(
        landscape=landscape,
        start=protocol.start,
        region=protocol.region,
        stepper=protocol.stepper,
        max_iters=protocol.max_iters,
        rngs=[make_rng(seed, *(tuple(stream) + (i,))) for i in indices],
    )
    return list(zip(indices, trials))


@ray.remote
class TrialWorker(object):
    """Escape-trial worker.

    Attributes
    ----------
    landscape : ddtlab.landscapes.Landscape
        the loss surface
    protocol : ddtlab.escape_mc.EscapeProtocol
        the trial protocol
    """

    def __init__(self, landscape, protocol, seed, stream):
        """Instantiate the worker.

        Parameters
        ----------
        landscape : ddtlab.landscapes.Landscape
            the loss surface
        protocol : ddtlab.escape_mc.EscapeProtocol
            the trial protocol
        seed : int
            the experiment seed
        stream : tuple of int
            the stream of the grid point the trials belong to
        """
        self.landscape = landscape
        self.protocol = protocol
        self._seed = seed
        self._stream = tuple(stream)

    def run(self, indices):
        """Run the trials with the given indices. See run_trial_indices."""
        return run_trial_indices(
            self.landscape, self.protocol, indices, self._seed, self._stream)
