"""The alpha-parametrized companion quadrature family and its named members."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams, SharedDiscontinuity
from .funcmodel import PiecewiseFunc, constant
from .kernel import QuadratureParams
from .stieltjes import cumulative, rs_integral_exact

KINDS = ("general", "ostrowski", "simpson", "average", "generalized_trapezoid")


def masses(g: PiecewiseFunc, u: PiecewiseFunc, points) -> list[Fraction]:
    """``∫_a^t g du`` at each of ``points``, one-sided at ``a``."""
    try:
        G = cumulative(g, u)
    except SharedDiscontinuity:
        # g and u clash somewhere, possibly outside the points of interest
        a = points[0]
        one = constant(1, u.a, u.b)
        return [rs_integral_exact(g, one, u, a, t).value for t in points]
    base = G(points[0])
    return [G(t) - base for t in points]


def quad(f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, p: QuadratureParams) -> Fraction:
    """Companion rule for ``∫_a^b f g du``.

    Mixes the two-point rule at ``x, a+b-x`` (weight ``1-alpha``) with the
    generalized trapezoid rule at ``a, b`` split at ``x`` (weight ``alpha``).
    Nodes use point values of ``f``, never limits.
    """
    if not isinstance(p, QuadratureParams):
        raise TypeError("p must be QuadratureParams")
    if not p.a <= p.x <= p.midpoint:  # QuadratureParams already checks; kept as a second guard
        raise InvalidParams(f"x={p.x} outside [a, (a+b)/2]")
    for h in (f, g, u):
        if p.a < h.a or p.b > h.b:
            raise InvalidParams(f"[{p.a}, {p.b}] not inside the function domain [{h.a}, {h.b}]")
    a, b, x, m, al = p.a, p.b, p.x, p.midpoint, p.alpha
    _, at_x, at_m, at_b = masses(g, u, (a, x, m, b))
    two_point = f(x) * at_m + f(p.companion) * (at_b - at_m)
    trapezoid = f(a) * at_x + f(b) * (at_b - at_x)
    return (1 - al) * two_point + al * trapezoid


@dataclass(frozen=True)
class RuleKind:
    """A named member of the family.

    ``x`` is ``None`` for simpson (fixed at the midpoint); ``alpha`` is
    ``None`` only for kinds that do not pin it (``general``).
    """

    name: str
    x: Fraction | None = None
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        if self.name not in KINDS:
            raise InvalidParams(f"unknown rule {self.name!r}; expected one of {', '.join(KINDS)}")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        pinned = _PINNED_ALPHA.get(self.name)
        if pinned is not None and self.alpha is not None and self.alpha != pinned:
            raise InvalidParams(f"rule {self.name} fixes alpha={pinned}, got {self.alpha}")
        if pinned is not None:
            object.__setattr__(self, "alpha", pinned)
        if self.name == "simpson" and self.x is not None:
            raise InvalidParams("simpson fixes x at the midpoint")
        if self.name != "simpson" and self.x is None:
            raise InvalidParams(f"rule {self.name} needs x")
        if self.name == "general" and self.alpha is None:
            raise InvalidParams("general rule needs alpha")

    @classmethod
    def general(cls, x, alpha) -> RuleKind:
        return cls("general", x, alpha)

    @classmethod
    def ostrowski(cls, x) -> RuleKind:
        return cls("ostrowski", x)

    @classmethod
    def simpson(cls) -> RuleKind:
        return cls("simpson")

    @classmethod
    def average(cls, x) -> RuleKind:
        return cls("average", x)

    @classmethod
    def generalized_trapezoid(cls, x) -> RuleKind:
        return cls("generalized_trapezoid", x)

    def params(self, a, b) -> QuadratureParams:
        a, b = Fraction(a), Fraction(b)
        x = (a + b) / 2 if self.x is None else self.x
        return QuadratureParams(a, b, x, self.alpha)


_PINNED_ALPHA = {
    "ostrowski": Fraction(0),
    "simpson": Fraction(1, 3),
    "average": Fraction(1, 2),
    "generalized_trapezoid": Fraction(1),
}


def quad_named(f: PiecewiseFunc, g: PiecewiseFunc, u: PiecewiseFunc, kind: RuleKind) -> Fraction:
    return quad(f, g, u, kind.params(u.a, u.b))


def simpson_formula(f: PiecewiseFunc, u: PiecewiseFunc) -> Fraction:
    """Three-term Simpson-type sum for ``∫ f du`` written directly in ``u`` increments.

    Agrees identically with ``quad_named(f, 1, u, simpson)``.
    """
    a, b = u.a, u.b
    m = (a + b) / 2
    return Fraction(1, 3) * (
        (u(m) - u(a)) * f(a)
        + 2 * (u(b) - u(a)) * f(m)
        + (u(b) - u(m)) * f(b)
    )
