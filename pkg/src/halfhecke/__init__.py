"""Exact coefficient-level Hecke operators on half-integral weight Siegel
modular forms, with theta series, finite-field quadratic spaces, Gauss sums
and index-1 Jacobi forms."""

__version__ = "0.1.0"

from .arith import ExactScalar, beta, delta, mu
from .config import CapExceeded, CoverageError, DomainError, Report, RunConfig
from .hecke import HeckeParams, apply_Tj, apply_Tprime, apply_Ttilde, lambda_j
from .lattice import GramMatrix, parse_gram
from .theta import ThetaSource

__all__ = [
    "CapExceeded", "CoverageError", "DomainError", "ExactScalar", "GramMatrix", "HeckeParams", "Report",
    "RunConfig", "ThetaSource", "apply_Tj", "apply_Tprime", "apply_Ttilde", "beta", "delta", "lambda_j",
    "mu", "parse_gram",
]
