"""Numerical functional calculus for GFS-type operators on finite-dimensional spaces."""

from .besov import besov_norm, log_degree_bound_check, peller_type_constant
from .calculus import (
    apply_function, apply_polynomial, besov_apply, besov_representation,
    derivative_calculus_ipp, derivative_calculus_rd,
)
from .config import RunConfig
from .errors import GfsError
from .estimates import ConstantEstimate
from .funcs import Polynomial, PowerSeriesFunction, sup_norm_on_circle
from .gamma import gamma_bound_of_family, gamma_gfs_estimate, gaussian_norm, lattice_square_norm
from .gfs import dfc_constant, gfs_constant, gfs_integral
from .linalg import AmbientSpace, operator_norm, resolvent
from .powerbound import hilbert_quadratic_constant, power_bound
from .verify import verify_all
from .zoo import OperatorSpec, build, default_zoo

__version__ = "0.1.0"

__all__ = [
    "AmbientSpace", "ConstantEstimate", "GfsError", "OperatorSpec", "Polynomial",
    "PowerSeriesFunction", "RunConfig", "apply_function", "apply_polynomial", "besov_apply",
    "besov_norm", "besov_representation", "build", "default_zoo", "derivative_calculus_ipp",
    "derivative_calculus_rd", "dfc_constant", "gamma_bound_of_family", "gamma_gfs_estimate",
    "gaussian_norm", "gfs_constant", "gfs_integral", "hilbert_quadratic_constant",
    "lattice_square_norm", "log_degree_bound_check", "operator_norm", "peller_type_constant",
    "power_bound", "resolvent", "sup_norm_on_circle", "verify_all",
]
