"""Exact error-series engine used to certify convergence orders."""

from rootlab.orderlab.poly import Poly, c, symbols
from rootlab.orderlab.reductions import REDUCTIONS, ReductionResult, check_reduction
from rootlab.orderlab.series import Series, compose_f
from rootlab.orderlab.symbolic import FAMILIES, KAPPA, SeriesEvaluator, error_series
from rootlab.orderlab.verify import OrderCertificate, certify, proof_report, verify_order
from rootlab.orderlab.weights import GenericWeight, expand_weight

__all__ = [
    "FAMILIES",
    "GenericWeight",
    "KAPPA",
    "OrderCertificate",
    "Poly",
    "REDUCTIONS",
    "ReductionResult",
    "Series",
    "SeriesEvaluator",
    "c",
    "certify",
    "check_reduction",
    "compose_f",
    "error_series",
    "expand_weight",
    "proof_report",
    "symbols",
    "verify_order",
]
