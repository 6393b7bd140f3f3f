"""Error bounds for the companion rule in two modes.

``paper_closed_form`` evaluates the consolidated closed-form right-hand sides
and is treated as a claim under test.  ``kernel_rigorous`` evaluates the
norm of the exact kernel that the error identity passes through, so it can
never be exceeded; a rigorous report below the true error raises
:class:`InvariantViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import (
    InvalidParams,
    InvariantViolation,
    NoLipschitzCertificate,
    NotMonotoneIntegrand,
    NotMonotoneIntegrator,
    NotNonnegativeWeight,
)
from .funcmodel import PiecewiseFunc, is_nonnegative, regularity, total_variation_exact, value_range
from .kernel import QuadratureParams, kernel_l1_df, kernel_l1_dt, kernel_sup
from .rules import masses, quad
from .stieltjes import rs_integral_exact, sup_abs

VIOLATION_RTOL = Fraction(1, 10**12)
TIGHT_RTOL = Fraction(1, 10**9)


class Theorem(str, Enum):
    BV = "bv_thm1"
    LIPSCHITZ = "lipschitz_thm2"
    MONOTONE = "monotone_thm3"


class Mode(str, Enum):
    PAPER = "paper_closed_form"
    RIGOROUS = "kernel_rigorous"


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    TIGHT = "TIGHT"
    CLOSED_FORM_VIOLATION = "CLOSED_FORM_VIOLATION"


def weight_constant(alpha) -> Fraction:
    """``1/2 + |1/2 - alpha|``, which is ``max(alpha, 1 - alpha)``."""
    alpha = Fraction(alpha)
    return Fraction(1, 2) + abs(Fraction(1, 2) - alpha)


@dataclass(frozen=True)
class QuadError:
    """Rule value and exact integral; the signed error is ``quadrature - integral``."""

    quadrature: Fraction
    integral: Fraction

    @property
    def signed(self) -> Fraction:
        return self.quadrature - self.integral

    @property
    def magnitude(self) -> Fraction:
        return abs(self.signed)

    @property
    def scale(self) -> Fraction:
        return 1 + abs(self.quadrature) + abs(self.integral)


def quad_error(f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> QuadError:
    integral = rs_integral_exact(f, g, u, p.a, p.b).value
    return QuadError(quad(f, g, u, p), integral)


@dataclass(frozen=True)
class BoundReport:
    theorem: Theorem
    mode: Mode
    bound: Fraction
    true_error: Fraction
    ratio: Fraction | None
    verdict: Verdict
    components: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "mode": self.mode.value,
            "bound": float(self.bound),
            "true_error": float(self.true_error),
            "ratio": None if self.ratio is None else float(self.ratio),
            "verdict": self.verdict.value,
            "components": {k: _plain(v) for k, v in self.components.items()},
        }


def _plain(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return float(v)
    return v


def _report(theorem: Theorem, mode: Mode, bound: Fraction, err: QuadError, components: dict) -> BoundReport:
    e = err.magnitude
    if bound > 0:
        ratio = e / bound
    elif e == 0:
        ratio = Fraction(0)  # nothing to bound
    else:
        ratio = None
    if e - bound > VIOLATION_RTOL * err.scale:
        if mode is Mode.RIGOROUS:
            raise InvariantViolation(
                f"{theorem.value} rigorous bound {bound} is below the true error {e}"
            )
        verdict = Verdict.CLOSED_FORM_VIOLATION
    elif bound > 0 and ratio >= 1 - TIGHT_RTOL:
        verdict = Verdict.TIGHT
    else:
        verdict = Verdict.HOLDS
    return BoundReport(theorem, mode, bound, e, ratio, verdict, dict(components))


def _mass(g, u, c, d) -> Fraction:
    return masses(g, u, (c, d))[1]


def _is_one(g: PiecewiseFunc, p: QuadratureParams) -> bool:
    return value_range(g, p.a, p.b) == (1, 1)


def _check(p: QuadratureParams, mode, *funcs) -> Mode:
    if not isinstance(p, QuadratureParams):
        raise TypeError("p must be QuadratureParams")
    for h in funcs:
        if p.a < h.a or p.b > h.b:
            raise InvalidParams(f"[{p.a}, {p.b}] not inside the function domain [{h.a}, {h.b}]")
    return Mode(mode)


def _require_weight(g: PiecewiseFunc, p: QuadratureParams) -> None:
    if not regularity(g).continuous:
        raise NotNonnegativeWeight("g has a jump")
    if not is_nonnegative(g, p.a, p.b):
        low = value_range(g, p.a, p.b)[0]
        raise NotNonnegativeWeight(f"g dips below zero (inf g ~ {float(low):.3g})")


def _require_monotone_u(u: PiecewiseFunc) -> None:
    if not regularity(u).monotone_nondecreasing:
        raise NotMonotoneIntegrator("kernel norms need a nondecreasing integrator")


def bound_bv(
    f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams, mode, err: QuadError | None = None
) -> BoundReport:
    """Bound for ``f`` of bounded variation, ``g >= 0`` continuous, ``u`` nondecreasing."""
    mode = _check(p, mode, f, g, u)
    _require_weight(g, p)
    _require_monotone_u(u)
    err = quad_error(f, g, u, p) if err is None else err
    vf = total_variation_exact(f, p.a, p.b)
    c = weight_constant(p.alpha)
    if mode is Mode.PAPER:
        total = _mass(g, u, p.a, p.b)
        left = _mass(g, u, p.a, p.x)
        bracket = total / 2 + abs(left - total / 2)
        comps = {"V_f": vf, "C_alpha": c, "mass_total": total, "mass_a_x": left, "bracket": bracket}
        return _report(Theorem.BV, mode, c * bracket * vf, err, comps)
    sup_k = kernel_sup(g, u, p)
    return _report(Theorem.BV, mode, sup_k * vf, err, {"V_f": vf, "sup_K": sup_k})


def bound_lipschitz(
    f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams, mode, err: QuadError | None = None
) -> BoundReport:
    """Bound for Lipschitz ``f``; the rigorous form needs ``u`` nondecreasing."""
    mode = _check(p, mode, f, g, u)
    lip = regularity(f).lipschitz_constant
    if lip is None:
        raise NoLipschitzCertificate("f has a jump")
    if not regularity(g).continuous:
        raise NotNonnegativeWeight("g has a jump")
    if mode is Mode.RIGOROUS:
        _require_weight(g, p)
        _require_monotone_u(u)
    err = quad_error(f, g, u, p) if err is None else err
    if mode is Mode.PAPER:
        c = weight_constant(p.alpha)
        sup_left = sup_abs(g, p.a, p.x)
        sup_right = sup_abs(g, p.x, p.b)
        sup_m, sup_n = c * sup_left, c * sup_right
        max_term = max((p.x - p.a) * sup_m, (p.b - p.x) * sup_n)
        vu = total_variation_exact(u, p.a, p.b)
        comps = {
            "L": lip, "C_alpha": c, "sup_g_a_x": sup_left, "sup_g_x_b": sup_right,
            "sup_M": sup_m, "sup_N": sup_n, "max_term": max_term, "V_u": vu,
        }
        if _is_one(g, p):
            half = (p.b - p.a) / 2
            comps["unit_weight_form"] = lip * c * (half + abs(p.x - p.midpoint)) * vu
        return _report(Theorem.LIPSCHITZ, mode, lip * max_term * vu, err, comps)
    l1 = kernel_l1_dt(g, u, p)
    return _report(Theorem.LIPSCHITZ, mode, lip * l1, err, {"L": lip, "int_abs_K_dt": l1})


def bound_monotone(
    f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams, mode, err: QuadError | None = None
) -> BoundReport:
    """Bound for nondecreasing ``f``; the rigorous form needs ``u`` nondecreasing."""
    mode = _check(p, mode, f, g, u)
    if not regularity(f).monotone_nondecreasing:
        raise NotMonotoneIntegrand()
    if not regularity(g).continuous:
        raise NotNonnegativeWeight("g has a jump")
    if mode is Mode.RIGOROUS:
        _require_weight(g, p)
        _require_monotone_u(u)
    err = quad_error(f, g, u, p) if err is None else err
    if mode is Mode.PAPER:
        c = weight_constant(p.alpha)
        sup_m = c * sup_abs(g, p.a, p.x)
        sup_n = c * sup_abs(g, p.x, p.b)
        rise_left = f(p.x) - f(p.a)
        rise_right = f(p.b) - f(p.x)
        vu_left = total_variation_exact(u, p.a, p.x)
        vu_right = total_variation_exact(u, p.x, p.b)
        bound = sup_m * rise_left * vu_left + sup_n * rise_right * vu_right
        comps = {
            "C_alpha": c, "sup_M": sup_m, "sup_N": sup_n, "f_rise_a_x": rise_left,
            "f_rise_x_b": rise_right, "V_u_a_x": vu_left, "V_u_x_b": vu_right,
        }
        if _is_one(g, p):
            comps["unit_weight_tight"] = c * (rise_left * vu_left + rise_right * vu_right)
            spread = (f(p.b) - f(p.a)) / 2 + abs(f(p.x) - (f(p.a) + f(p.b)) / 2)
            comps["unit_weight_weak"] = c * spread * (vu_left + vu_right)
        return _report(Theorem.MONOTONE, mode, bound, err, comps)
    l1 = kernel_l1_df(g, u, f, p)
    return _report(Theorem.MONOTONE, mode, l1, err, {"int_abs_K_df": l1})


BOUNDS = {Theorem.BV: bound_bv, Theorem.LIPSCHITZ: bound_lipschitz, Theorem.MONOTONE: bound_monotone}
