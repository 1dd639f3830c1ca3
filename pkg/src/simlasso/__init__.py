"""Support recovery for sparse single-index models with covariance screening and the LASSO."""
from .design import CovarianceSpec, build_covariance, sample_design
from .models import (CoefficientVector, Dataset, SimModelSpec, estimate_c0, generate, make_beta,
                     benchmark_beta, population_c0)
from .support import SignedSupport, signed_support

__all__ = [
    "CovarianceSpec", "build_covariance", "sample_design",
    "CoefficientVector", "Dataset", "SimModelSpec", "estimate_c0", "generate", "make_beta",
    "benchmark_beta", "population_c0", "SignedSupport", "signed_support",
]
