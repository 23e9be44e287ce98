"""The Monte Carlo escape harness."""
from ddtlab.dynamics.simulate import EscapeTrial
from ddtlab.escape_mc.protocol import EscapeProtocol
from ddtlab.escape_mc.trials import RateEstimate
from ddtlab.escape_mc.trials import run_trials
from ddtlab.escape_mc.trials import estimate_rate
from ddtlab.escape_mc.trials import exponentiality_check
from ddtlab.escape_mc.sweep import FitResult
from ddtlab.escape_mc.sweep import SweepPoint
from ddtlab.escape_mc.sweep import SweepSpec
from ddtlab.escape_mc.sweep import SweepResult
from ddtlab.escape_mc.sweep import SWEEP_VARIABLES
from ddtlab.escape_mc.sweep import SWEEP_TRANSFORMS
from ddtlab.escape_mc.sweep import fit_line
from ddtlab.escape_mc.sweep import sweep_and_fit
from ddtlab.escape_mc.occupancy import OccupancyResult
from ddtlab.escape_mc.occupancy import occupancy_experiment

__all__ = [
    "EscapeTrial", "EscapeProtocol", "RateEstimate", "run_trials",
    "estimate_rate", "exponentiality_check", "FitResult", "SweepPoint",
    "SweepSpec", "SweepResult", "SWEEP_VARIABLES", "SWEEP_TRANSFORMS",
    "fit_line", "sweep_and_fit", "OccupancyResult", "occupancy_experiment",
]
