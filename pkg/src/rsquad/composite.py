"""Composite companion rule over a tagged partition, with remainder bounds.

Only ``g = 1`` is supported.  Every subinterval ``[x_i, x_{i+1}]`` carries a
tag ``xi_i`` in its left half, which plays the role of ``x`` in the
single-interval rule.  Sums run in index order over exact rationals, so the
result is independent of how the per-interval terms are produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import weight_constant
from .errors import InvalidParams, InvalidTag, NotMonotoneIntegrator
from .funcmodel import PiecewiseFunc, constant, regularity, total_variation_exact, to_fraction
from .kernel import QuadratureParams
from .rules import quad
from .stieltjes import check_existence, rs_integral_exact


@dataclass(frozen=True)
class TaggedPartition:
    nodes: tuple[Fraction, ...]
    tags: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        nodes = tuple(Fraction(t) for t in self.nodes)
        tags = tuple(Fraction(t) for t in self.tags)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "tags", tags)
        if len(nodes) < 2:
            raise InvalidParams("a partition needs at least two nodes")
        if any(lo >= hi for lo, hi in zip(nodes, nodes[1:])):
            raise InvalidParams("partition nodes must be strictly increasing")
        if len(tags) != len(nodes) - 1:
            raise InvalidParams(f"{len(nodes) - 1} subintervals but {len(tags)} tags")
        for i, (lo, hi, xi) in enumerate(zip(nodes, nodes[1:], tags)):
            if not lo <= xi <= (lo + hi) / 2:
                raise InvalidTag(f"tag {i} = {xi} outside [{lo}, {(lo + hi) / 2}]")

    @property
    def a(self) -> Fraction:
        return self.nodes[0]

    @property
    def b(self) -> Fraction:
        return self.nodes[-1]

    def intervals(self):
        return zip(self.nodes, self.nodes[1:], self.tags)


def uniform(a, b, n: int, tags="midpoint") -> TaggedPartition:
    """``n`` equal subintervals; ``tags`` is ``"midpoint"``, ``"left"`` or an explicit sequence."""
    if n < 1:
        raise InvalidParams("n must be at least 1")
    a, b = to_fraction(a, "a"), to_fraction(b, "b")
    nodes = tuple(a + (b - a) * k / n for k in range(n + 1))
    return with_tags(nodes, tags)


def with_tags(nodes, tags="midpoint") -> TaggedPartition:
    nodes = tuple(to_fraction(t, "nodes") for t in nodes)
    if tags == "midpoint":
        tags = tuple((lo + hi) / 2 for lo, hi in zip(nodes, nodes[1:]))
    elif tags == "left":
        tags = nodes[:-1]
    elif isinstance(tags, str):
        raise InvalidParams(f"unknown tag policy {tags!r}")
    return TaggedPartition(nodes, tuple(to_fraction(t, "tags") for t in tags))


def _check(f: PiecewiseFunc, u: PiecewiseFunc, part: TaggedPartition, alpha) -> Fraction:
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise InvalidParams(f"alpha={alpha} outside [0, 1]")
    for h in (f, u):
        if part.a < h.a or part.b > h.b:
            raise InvalidParams(f"partition [{part.a}, {part.b}] not inside [{h.a}, {h.b}]")
    return alpha


def composite_sum(f: PiecewiseFunc, u: PiecewiseFunc, part: TaggedPartition, alpha) -> Fraction:
    alpha = _check(f, u, part, alpha)
    one = constant(1, u.a, u.b)
    total = Fraction(0)
    for lo, hi, xi in part.intervals():
        check_existence(f, one, u, lo, hi)
        m = (lo + hi) / 2
        trapezoid = (u(xi) - u(lo)) * f(lo) + (u(hi) - u(xi)) * f(hi)
        two_point = (u(m) - u(lo)) * f(xi) + (u(hi) - u(m)) * f(lo + hi - xi)
        total += alpha * trapezoid + (1 - alpha) * two_point
    return total


def composite_by_quad(f: PiecewiseFunc, u: PiecewiseFunc, part: TaggedPartition, alpha) -> Fraction:
    """The same sum assembled from single-interval rule applications."""
    alpha = _check(f, u, part, alpha)
    one = constant(1, u.a, u.b)
    return sum(
        (quad(f, one, u, QuadratureParams(lo, hi, xi, alpha)) for lo, hi, xi in part.intervals()),
        Fraction(0),
    )


def composite_remainder(f: PiecewiseFunc, u: PiecewiseFunc, part: TaggedPartition, alpha) -> Fraction:
    """``∫_a^b f du - S``."""
    s = composite_sum(f, u, part, alpha)
    return rs_integral_exact(f, constant(1, u.a, u.b), u, part.a, part.b).value - s


def composite_bound(f: PiecewiseFunc, u: PiecewiseFunc, part: TaggedPartition, alpha, mode: str = "summed") -> Fraction:
    """Remainder bound; ``global`` ignores the partition, ``summed`` adds per-interval terms."""
    alpha = _check(f, u, part, alpha)
    if not regularity(u).monotone_nondecreasing:
        raise NotMonotoneIntegrator()
    c = weight_constant(alpha)
    if mode == "global":
        return c * (u(part.b) - u(part.a)) * total_variation_exact(f, part.a, part.b)
    if mode != "summed":
        raise ValueError(f"mode must be 'global' or 'summed', not {mode!r}")
    total = Fraction(0)
    for lo, hi, xi in part.intervals():
        rise = u(hi) - u(lo)
        bracket = rise / 2 + abs(u(xi) - (u(lo) + u(hi)) / 2)
        total += bracket * total_variation_exact(f, lo, hi)
    return c * total
