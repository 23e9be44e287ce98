"""Measurements of stochastic gradient noise."""
from ddtlab.noise_lab.sgn import NoiseSampleSet
from ddtlab.noise_lab.sgn import CovarianceFit
from ddtlab.noise_lab.sgn import DEFAULT_FILTER_RANGE
from ddtlab.noise_lab.sgn import default_draw_count
from ddtlab.noise_lab.sgn import draw_sgn
from ddtlab.noise_lab.sgn import estimate_sgn_covariance
from ddtlab.noise_lab.sgn import eigenbasis_pairs
from ddtlab.noise_lab.sgn import covariance_hessian_fit
from ddtlab.noise_lab.sgn import pretrain
from ddtlab.noise_lab.sgn import trace_batch_fit
from ddtlab.noise_lab.tails import Histogram
from ddtlab.noise_lab.tails import TailStatistic
from ddtlab.noise_lab.tails import norm_histogram
from ddtlab.noise_lab.tails import levy_sample
from ddtlab.noise_lab.tails import gaussian_baseline
from ddtlab.noise_lab.tails import tail_statistic

__all__ = [
    "NoiseSampleSet", "CovarianceFit", "DEFAULT_FILTER_RANGE",
    "default_draw_count", "draw_sgn", "estimate_sgn_covariance",
    "eigenbasis_pairs", "covariance_hessian_fit", "pretrain",
    "trace_batch_fit", "Histogram", "TailStatistic", "norm_histogram",
    "levy_sample", "gaussian_baseline", "tail_statistic",
]
