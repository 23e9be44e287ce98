"""Closed-form escape-time predictions."""
from ddtlab.kramers.geometry import ValleyGeometry
from ddtlab.kramers.geometry import SaddleGeometry
from ddtlab.kramers.geometry import PathParams
from ddtlab.kramers.geometry import CRITICAL_KINDS
from ddtlab.kramers.geometry import classify_critical
from ddtlab.kramers.geometry import landscape_geometry
from ddtlab.kramers.geometry import st_geometry
from ddtlab.kramers.formulas import EscapePrediction
from ddtlab.kramers.formulas import LOW_TEMPERATURE_THRESHOLD
from ddtlab.kramers.formulas import sgld_escape_time
from ddtlab.kramers.formulas import sgd_escape_time
from ddtlab.kramers.formulas import combine_rates
from ddtlab.kramers.formulas import stationary_occupancy
from ddtlab.kramers.formulas import to_iterations

__all__ = [
    "ValleyGeometry", "SaddleGeometry", "PathParams", "CRITICAL_KINDS",
    "classify_critical", "landscape_geometry", "st_geometry",
    "EscapePrediction", "LOW_TEMPERATURE_THRESHOLD", "sgld_escape_time",
    "sgd_escape_time", "combine_rates", "stationary_occupancy",
    "to_iterations",
]
