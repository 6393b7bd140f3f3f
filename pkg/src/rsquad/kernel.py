"""The three-branch Peano kernel of the companion quadrature family.

With ``G(t) = ∫ g du`` and ``m = (a+b)/2``, the kernel is

    branch 1, t in [a, x]:        (1-α) ∫_a^t g du + α ∫_x^t g du
    branch 2, t in (x, a+b-x]:    (1-α) ∫_m^t g du + α ∫_x^t g du
    branch 3, t in (a+b-x, b]:    (1-α) ∫_b^t g du + α ∫_x^t g du

so every branch is ``G`` minus a constant and the kernel is itself an exact
:class:`PiecewiseFunc`.  The quadrature error equals ``∫_a^b K df``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import poly as P
from .errors import InvalidParams, NotMonotoneIntegrand, NotMonotoneIntegrator, NotNonnegativeWeight
from .funcmodel import Piece, PiecewiseFunc, constant, is_nonnegative, regularity, segments, value_range
from .stieltjes import cumulative, rs_integral_exact, rs_integral_refine


@dataclass(frozen=True)
class QuadratureParams:
    """Interval ``[a, b]``, node ``x in [a, (a+b)/2]`` and mixing weight ``alpha in [0, 1]``."""

    a: Fraction
    b: Fraction
    x: Fraction
    alpha: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "x", "alpha"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.a < self.b:
            raise InvalidParams(f"need a < b, got [{self.a}, {self.b}]")
        if not 0 <= self.alpha <= 1:
            raise InvalidParams(f"alpha={self.alpha} outside [0, 1]")
        if not self.a <= self.x <= self.midpoint:
            raise InvalidParams(
                f"x={self.x} outside [a, (a+b)/2] = [{self.a}, {self.midpoint}]; "
                "nodes past the midpoint are not certified"
            )

    @property
    def midpoint(self) -> Fraction:
        return (self.a + self.b) / 2

    @property
    def companion(self) -> Fraction:
        """The reflected node ``a + b - x``."""
        return self.a + self.b - self.x

    def branch(self, t: Fraction) -> int:
        if t <= self.x:
            return 1
        if t <= self.companion:
            return 2
        return 3


@dataclass(frozen=True)
class KernelBreakdown:
    branches: tuple[tuple[Fraction, Fraction], ...]  # (lo, hi); branch 1 closed, others (lo, hi]
    branch_values_at_endpoints: tuple[tuple[Fraction, Fraction | None, Fraction | None], ...]


def _check_domain(p: QuadratureParams, *funcs: PiecewiseFunc) -> None:
    for h in funcs:
        if p.a < h.a or p.b > h.b:
            raise InvalidParams(f"[{p.a}, {p.b}] not inside the function domain [{h.a}, {h.b}]")


@lru_cache(maxsize=512)
def kernel_function(g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> PiecewiseFunc:
    """The kernel ``K(.; x)`` on ``[p.a, p.b]`` as an exact piecewise function."""
    _check_domain(p, g, u)
    G = cumulative(g, u)
    a, b, x, al = p.a, p.b, p.x, p.alpha
    base = al * G(x)
    offsets = {
        1: (1 - al) * G(a) + base,
        2: (1 - al) * G(p.midpoint) + base,
        3: (1 - al) * G(b) + base,
    }
    knots = segments((G,), a, b, extra=(x, p.companion))
    pieces = []
    for s, e in zip(knots, knots[1:]):
        pieces.append(Piece(s, e, P.add_constant(G.poly_on(s, e), -offsets[p.branch(e)])))
    points = []
    for i, t in enumerate(knots):
        want = G(t) - offsets[p.branch(t)]
        default = P.evaluate(pieces[max(i - 1, 0)].poly, t)
        if want != default:
            points.append((t, want))
    return PiecewiseFunc(a, b, tuple(pieces), tuple(points), max_degree=None)


def kernel_eval(g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams, t, side="at") -> Fraction:
    return kernel_function(g, u, p)(t, side)


def kernel_breakdown(g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> KernelBreakdown:
    K = kernel_function(g, u, p)
    bounds = sorted({p.a, p.x, p.companion, p.b})
    values = tuple((t, *K.limits(t)[::2]) for t in bounds)
    return KernelBreakdown(((p.a, p.x), (p.x, p.companion), (p.companion, p.b)), values)


def require_kernel_hypotheses(g: PiecewiseFunc, u: PiecewiseFunc) -> None:
    if not regularity(g).continuous:
        raise NotNonnegativeWeight("g has a jump")
    if not is_nonnegative(g):
        raise NotNonnegativeWeight(f"g dips below zero (inf g ~ {float(value_range(g)[0]):.3g})")
    if not regularity(u).monotone_nondecreasing:
        raise NotMonotoneIntegrator()


def kernel_sup(g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> Fraction:
    """``sup_t |K(t; x)|``.

    K is nondecreasing inside every piece when ``g >= 0`` and ``u`` is
    nondecreasing, so the one-sided values at the knots are the only candidates.
    """
    require_kernel_hypotheses(g, u)
    K = kernel_function(g, u, p)
    best = Fraction(0)
    for t in K.knots():
        for v in K.limits(t):
            if v is not None:
                best = max(best, abs(v))
    return best


def kernel_l1_dt(g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> Fraction:
    """``∫_a^b |K(t; x)| dt``."""
    require_kernel_hypotheses(g, u)
    K = kernel_function(g, u, p)
    return sum((P.abs_integral(pc.poly, pc.lo, pc.hi) for pc in K.pieces), Fraction(0))


def abs_function(K: PiecewiseFunc) -> PiecewiseFunc:
    """``|K|`` with every piece split at the sign changes of its polynomial."""
    pieces = []
    for pc in K.pieces:
        cuts = (pc.lo,) + P.real_roots(pc.poly, pc.lo, pc.hi) + (pc.hi,)
        for s, e in zip(cuts, cuts[1:]):
            sign = -1 if P.evaluate(pc.poly, (s + e) / 2) < 0 else 1
            pieces.append(Piece(s, e, P.scale(pc.poly, sign)))
    points = tuple((t, abs(v)) for t, v in K.points)
    return PiecewiseFunc(K.a, K.b, tuple(pieces), points, max_degree=None)


def kernel_l1_df(g: PiecewiseFunc, u: PiecewiseFunc, f: PiecewiseFunc, p: QuadratureParams) -> Fraction:
    """``∫_a^b |K(t; x)| df(t)`` for nondecreasing ``f``."""
    if not regularity(f).monotone_nondecreasing:
        raise NotMonotoneIntegrand()
    _check_domain(p, f)
    absK = abs_function(kernel_function(g, u, p))
    return rs_integral_exact(absK, constant(1, p.a, p.b), f, p.a, p.b).value


def identity_residual(
    f: PiecewiseFunc,
    g: PiecewiseFunc,
    u: PiecewiseFunc,
    p: QuadratureParams,
    method: str = "exact",
    error: Fraction | None = None,
) -> Fraction | float:
    """``[Q - ∫ f g du] - ∫ K df``; zero up to rounding when the identity holds.

    ``method="exact"`` evaluates ``∫ K df`` on the exact kernel; ``"refine"``
    uses refining RS sums instead.  ``error`` may carry a precomputed
    ``Q - ∫ f g du``.
    """
    _check_domain(p, f, g, u)
    if error is None:
        from .rules import quad

        error = quad(f, g, u, p) - rs_integral_exact(f, g, u, p.a, p.b).value
    K = kernel_function(g, u, p)
    one = constant(1, p.a, p.b)
    if method == "exact":
        kdf = rs_integral_exact(K, one, f, p.a, p.b).value
    elif method == "refine":
        kdf = rs_integral_refine(K, one, f, p.a, p.b, tol=1e-10).value
    else:
        raise ValueError(f"method must be 'exact' or 'refine', not {method!r}")
    return error - kdf
