"""Certified quadrature for Riemann-Stieltjes integrals over exact piecewise polynomials."""

from .bounds import BoundReport, Mode, Theorem, bound_bv, bound_lipschitz, bound_monotone, weight_constant
from .composite import TaggedPartition, composite_bound, composite_remainder, composite_sum, uniform
from .funcmodel import (
    PiecewiseFunc,
    RegularityCertificate,
    antiderivative,
    evaluate,
    parse_funcspec,
    regularity,
    serialize_funcspec,
    total_variation_exact,
)
from .harness import gen_corpus, sharpness_suite, verify_case, verify_corpus
from .kernel import QuadratureParams, identity_residual, kernel_eval, kernel_l1_df, kernel_l1_dt, kernel_sup
from .rules import RuleKind, quad, quad_named
from .stieltjes import RSIntegralResult, rs_integral_exact, rs_integral_refine, sup_abs

__all__ = [
    "BoundReport", "Mode", "Theorem", "bound_bv", "bound_lipschitz", "bound_monotone", "weight_constant",
    "TaggedPartition", "composite_bound", "composite_remainder", "composite_sum", "uniform",
    "PiecewiseFunc", "RegularityCertificate", "antiderivative", "evaluate", "parse_funcspec", "regularity",
    "serialize_funcspec", "total_variation_exact",
    "gen_corpus", "sharpness_suite", "verify_case", "verify_corpus",
    "QuadratureParams", "identity_residual", "kernel_eval", "kernel_l1_df", "kernel_l1_dt", "kernel_sup",
    "RuleKind", "quad", "quad_named",
    "RSIntegralResult", "rs_integral_exact", "rs_integral_refine", "sup_abs",
]
