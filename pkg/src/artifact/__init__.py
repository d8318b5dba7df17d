"""Remainder-term decompositions for Euler-product totient analogues."""

from .arith import (EulerProductSpec, FEData, RealCharacter, C_of_F, dirichlet_spec,
                    gaussian_dedekind_spec, zeta_spec)
from .errors import (ArtifactError, CapacityError, ConfigError, ContourError, DomainError, PoleError,
                     TruncationError, UnsupportedSpecError, ZeroFileError)
from .estimators import RemainderDecomposer
from .lfunc import ZeroTable, load_zeros, packaged_zeros, zeros_for_spec
from .remainder import TruncationPolicy, decomposition_report, riesz_mean, volterra_residual

__version__ = "0.1.0"

__all__ = [
    "EulerProductSpec", "FEData", "RealCharacter", "C_of_F", "dirichlet_spec", "gaussian_dedekind_spec",
    "zeta_spec", "ArtifactError", "CapacityError", "ConfigError", "ContourError", "DomainError",
    "PoleError", "TruncationError", "UnsupportedSpecError", "ZeroFileError", "RemainderDecomposer",
    "ZeroTable", "load_zeros", "packaged_zeros", "zeros_for_spec", "TruncationPolicy",
    "decomposition_report", "riesz_mean", "volterra_residual",
]
