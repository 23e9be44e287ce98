"""Script containing the EscapeProtocol object."""
import numpy as np

from ddtlab.dynamics.simulate import DEFAULT_MAX_ITERS


class EscapeProtocol(object):
    """Everything a single escape trial needs besides the landscape.

    Attributes
    ----------
    start : array_like
        the initial parameters
    region : ddtlab.dynamics.ValleyRegion
        the valley the trial starts in
    stepper : ddtlab.dynamics.SgdConfig or ddtlab.dynamics.SgldConfig
        the dynamics
    max_iters : int
        the iteration cap of each trial
    """

    def __init__(self, start, region, stepper, max_iters=DEFAULT_MAX_ITERS):
        """Instantiate the protocol.

        Raises
        ------
        ValueError
            if the start lies outside the region or max_iters < 1
        """
        start = np.asarray(start, dtype=np.float64)
        if not region.contains(start):
            raise ValueError("the start point must lie inside the region")
        if int(max_iters) < 1:
            raise ValueError("max_iters must be a positive integer")
        self.start = start
        self.region = region
        self.stepper = stepper
        self.max_iters = int(max_iters)

    @classmethod
    def from_landscape(cls, landscape, stepper, max_iters=DEFAULT_MAX_ITERS):
        """Build the protocol from the landscape's default start and valley."""
        return cls(landscape.default_start(), landscape.default_region(),
                   stepper, max_iters)

    def replace(self, **kwargs):
        """Return a copy with some fields replaced."""
        params = dict(start=self.start, region=self.region,
                      stepper=self.stepper, max_iters=self.max_iters)
        params.update(kwargs)
        return EscapeProtocol(**params)

    def to_dict(self):
        """Return the JSON-serializable form of the protocol."""
        return {
            "start": self.start.tolist(),
            "region": self.region.to_dict(),
            "stepper": self.stepper.to_dict(),
            "max_iters": self.max_iters,
        }
