"""Exact Mazur-Tate elements, Kurihara numbers and Iwasawa invariants from modular symbols."""

from .arith import ModRing, PrimeTable, TruncPoly, content_normalize, hensel_unit_root, teichmuller
from .eigenform import (
    CurveModel,
    NormalizedEigenSymbol,
    SymbolEigenform,
    eigenvalue,
    period_integral,
    period_lambda,
    resolve,
)
from .errors import IwthetaError
from .groupring import GroupRingElement, kolyvagin_expand, projection, teichmuller_component, trace
from .kurihara import kolyvagin_primes, kurihara_number, leading_coeff_check, search_delta
from .mazurtate import (
    iwasawa_invariants,
    pollack_check,
    stabilized_theta,
    theta,
    theta_branch,
    verify_norm_relation,
)
from .modsym import build_space, hecke_matrix

__version__ = "0.1.0"

__all__ = [
    "ModRing",
    "PrimeTable",
    "TruncPoly",
    "content_normalize",
    "hensel_unit_root",
    "teichmuller",
    "CurveModel",
    "NormalizedEigenSymbol",
    "SymbolEigenform",
    "eigenvalue",
    "period_integral",
    "period_lambda",
    "resolve",
    "IwthetaError",
    "GroupRingElement",
    "kolyvagin_expand",
    "projection",
    "teichmuller_component",
    "trace",
    "kolyvagin_primes",
    "kurihara_number",
    "leading_coeff_check",
    "search_delta",
    "iwasawa_invariants",
    "pollack_check",
    "stabilized_theta",
    "theta",
    "theta_branch",
    "verify_norm_relation",
    "build_space",
    "hecke_matrix",
    "__version__",
]
