"""SGD and SGLD dynamics and trajectory simulation."""
from ddtlab.dynamics.region import ValleyRegion
from ddtlab.dynamics.sampler import MinibatchSampler
from ddtlab.dynamics.sampler import SAMPLING_SCHEMES
from ddtlab.dynamics.steppers import SgdConfig
from ddtlab.dynamics.steppers import SgldConfig
from ddtlab.dynamics.steppers import TrajectoryState
from ddtlab.dynamics.steppers import initial_state
from ddtlab.dynamics.steppers import sgd_step
from ddtlab.dynamics.steppers import sgld_step
from ddtlab.dynamics.steppers import diffusion_matrix
from ddtlab.dynamics.simulate import EscapeTrial
from ddtlab.dynamics.simulate import TrajectoryWriter
from ddtlab.dynamics.simulate import simulate_until_exit
from ddtlab.dynamics.simulate import simulate_trials

__all__ = [
    "ValleyRegion", "MinibatchSampler", "SAMPLING_SCHEMES", "SgdConfig",
    "SgldConfig", "TrajectoryState", "initial_state", "sgd_step", "sgld_step",
    "diffusion_matrix", "EscapeTrial", "TrajectoryWriter",
    "simulate_until_exit", "simulate_trials",
]
