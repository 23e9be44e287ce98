"""Loss surfaces used by the experiments."""
from ddtlab.landscapes.base import DatasetSpec
from ddtlab.landscapes.base import Landscape
from ddtlab.landscapes.base import ScaledLandscape
from ddtlab.landscapes.base import rescale
from ddtlab.landscapes.base import hessian_fd
from ddtlab.landscapes.analytic import st_landscape
from ddtlab.landscapes.analytic import shifted_st_landscape
from ddtlab.landscapes.analytic import quadratic_landscape
from ddtlab.landscapes.analytic import double_well_landscape
from ddtlab.landscapes.analytic import st_critical_points
from ddtlab.landscapes.models import logistic_landscape
from ddtlab.landscapes.models import mlp_landscape

__all__ = [
    "DatasetSpec", "Landscape", "ScaledLandscape", "rescale", "hessian_fd",
    "st_landscape", "shifted_st_landscape", "quadratic_landscape",
    "double_well_landscape", "st_critical_points", "logistic_landscape",
    "mlp_landscape",
]
