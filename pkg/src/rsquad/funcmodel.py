"""Exact piecewise-polynomial functions with jumps and point overrides.

Every function in this package is a :class:`PiecewiseFunc`: a finite list of
polynomial pieces covering ``[a, b]`` plus isolated point overrides.  Pieces
are half-open to the left, ``(lo, hi]``, except the first which also owns
``a``; so at a shared boundary the point value is the left piece's value
unless an override says otherwise.  All arithmetic is exact (``Fraction``).
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Any, Iterable, Literal, Mapping, Sequence

from . import poly as P
from .errors import DomainError, FuncSpecError

Side = Literal["left", "at", "right"]

#: Largest polynomial degree accepted from user input.
MAX_DEGREE = 8


def to_fraction(value: Any, where: str | None = None) -> Fraction:
    """Exact conversion of ints, floats, Fractions and decimal or ``p/q`` strings."""
    if isinstance(value, bool):
        raise FuncSpecError(f"expected a number, got {value!r}", where)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise FuncSpecError(f"non-finite number {value!r}", where)
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise FuncSpecError(f"cannot read {value!r} as a decimal or p/q rational", where) from None
    raise FuncSpecError(f"expected a number, got {type(value).__name__}", where)


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    poly: tuple  # ascending coefficients, trimmed


@dataclass(frozen=True)
class PiecewiseFunc:
    """A real function on ``[a, b]``; see the module docstring for semantics.

    ``max_degree`` caps the polynomial degree; functions derived internally
    (products, antiderivatives, kernels) pass ``None`` to lift the cap.
    """

    a: Fraction
    b: Fraction
    pieces: tuple[Piece, ...]
    points: tuple[tuple[Fraction, Fraction], ...] = ()
    max_degree: int | None = field(default=MAX_DEGREE, compare=False, repr=False)

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not a < b:
            raise FuncSpecError(f"empty domain [{a}, {b}]", "domain")
        pieces = tuple(Piece(Fraction(p.lo), Fraction(p.hi), P.make(p.poly)) for p in self.pieces)
        if not pieces:
            raise FuncSpecError("at least one piece is required", "pieces")
        for i, pc in enumerate(pieces):
            if not pc.lo < pc.hi:
                raise FuncSpecError(f"piece [{pc.lo}, {pc.hi}] is empty", f"pieces[{i}]")
            if self.max_degree is not None and P.degree(pc.poly) > self.max_degree:
                raise FuncSpecError(
                    f"degree {P.degree(pc.poly)} exceeds the cap of {self.max_degree}", f"pieces[{i}].poly"
                )
        if pieces[0].lo != a:
            raise FuncSpecError(f"first piece starts at {pieces[0].lo}, domain starts at {a}", "pieces[0].from")
        if pieces[-1].hi != b:
            raise FuncSpecError(f"last piece ends at {pieces[-1].hi}, domain ends at {b}", f"pieces[{len(pieces) - 1}].to")
        for i, (left, right) in enumerate(zip(pieces, pieces[1:])):
            if left.hi < right.lo:
                raise FuncSpecError(f"gap between pieces: ({left.hi}, {right.lo})", f"pieces[{i + 1}].from")
            if left.hi > right.lo:
                raise FuncSpecError(f"pieces overlap on ({right.lo}, {left.hi})", f"pieces[{i + 1}].from")
        pts = tuple(sorted((Fraction(t), Fraction(v)) for t, v in self.points))
        for j, (t, _) in enumerate(pts):
            if not a <= t <= b:
                raise FuncSpecError(f"override at {t} lies outside [{a}, {b}]", f"points[{j}].at")
            if j and pts[j - 1][0] == t:
                raise FuncSpecError(f"duplicate override at {t}", f"points[{j}].at")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_his", tuple(pc.hi for pc in pieces))
        object.__setattr__(self, "_overrides", dict(pts))
        ts = {a, b}
        ts.update(pc.hi for pc in pieces)
        ts.update(t for t, _ in pts)
        object.__setattr__(self, "_knots", tuple(sorted(ts)))
        object.__setattr__(self, "_hash", hash((a, b, pieces, pts)))

    def __hash__(self) -> int:
        return self._hash

    # -- evaluation -------------------------------------------------------

    def __call__(self, t, side: Side = "at") -> Fraction:
        return evaluate(self, t, side)

    def piece_index(self, t: Fraction, side: Side) -> int:
        if side == "right" or (side == "at" and t == self.a):
            return bisect_right(self._his, t)
        return bisect_left(self._his, t)

    def poly_on(self, lo: Fraction, hi: Fraction) -> tuple:
        """Polynomial of the piece covering the open interval ``(lo, hi)``."""
        i = bisect_right(self._his, lo)
        pc = self.pieces[i]
        assert pc.lo <= lo and hi <= pc.hi, "interval straddles a breakpoint"
        return pc.poly

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def knots(self) -> tuple[Fraction, ...]:
        """Domain endpoints, piece boundaries and override points, ascending."""
        return self._knots

    def limits(self, t: Fraction) -> tuple[Fraction | None, Fraction, Fraction | None]:
        """``(left limit, value, right limit)``; limits outside the domain are ``None``."""
        left = evaluate(self, t, "left") if t > self.a else None
        right = evaluate(self, t, "right") if t < self.b else None
        return left, evaluate(self, t, "at"), right

    def continuous_at(self, t: Fraction) -> bool:
        left, at, right = self.limits(t)
        return (left is None or left == at) and (right is None or right == at)

    def discontinuities(self, c: Fraction | None = None, d: Fraction | None = None) -> tuple[Fraction, ...]:
        """Points of ``[c, d]`` where the function restricted to ``[c, d]`` is discontinuous."""
        c = self.a if c is None else c
        d = self.b if d is None else d
        out = []
        for t in self.knots():
            if t < c or t > d:
                continue
            left, at, right = self.limits(t)
            if t == c:
                left = None
            if t == d:
                right = None
            if (left is not None and left != at) or (right is not None and right != at):
                out.append(t)
        return tuple(out)

    def is_constant(self, value=None) -> bool:
        vals = {P.make(pc.poly) for pc in self.pieces}
        if len(vals) != 1:
            return False
        (p,) = vals
        if len(p) > 1:
            return False
        c = p[0] if p else Fraction(0)
        if any(v != c for _, v in self.points):
            return False
        return value is None or c == value


def evaluate(f: PiecewiseFunc, t, side: Side = "at") -> Fraction:
    """Left limit, point value or right limit of ``f`` at ``t``."""
    if type(t) is not Fraction:
        t = Fraction(t)
    if not f.a <= t <= f.b:
        raise DomainError(f"t={t} outside [{f.a}, {f.b}]")
    if side == "left" and t == f.a:
        raise DomainError(f"no left limit at the left endpoint {t}")
    if side == "right" and t == f.b:
        raise DomainError(f"no right limit at the right endpoint {t}")
    if side not in ("left", "at", "right"):
        raise ValueError(f"side must be left, at or right, not {side!r}")
    if side == "at" and t in f._overrides:
        return f._overrides[t]
    return P.evaluate(f.pieces[f.piece_index(t, side)].poly, t)


# -- construction ----------------------------------------------------------


def polynomial(coeffs: Iterable, a=0, b=1) -> PiecewiseFunc:
    a, b = Fraction(a), Fraction(b)
    return PiecewiseFunc(a, b, (Piece(a, b, P.make(coeffs)),))


def constant(value, a=0, b=1) -> PiecewiseFunc:
    return polynomial((value,), a, b)


def identity(a=0, b=1) -> PiecewiseFunc:
    return polynomial((0, 1), a, b)


def step(c, a=0, b=1) -> PiecewiseFunc:
    """Unit step: 0 on ``[a, c)``, 1 on ``[c, b]``."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if not a <= c <= b:
        raise DomainError(f"step location {c} outside [{a}, {b}]")
    if c == a:
        return constant(1, a, b)
    if c == b:
        return PiecewiseFunc(a, b, (Piece(a, b, ()),), ((b, Fraction(1)),))
    return PiecewiseFunc(a, b, (Piece(a, c, ()), Piece(c, b, (Fraction(1),))), ((c, Fraction(1)),))


def spike(c, value, a=0, b=1) -> PiecewiseFunc:
    """Zero everywhere except ``f(c) = value``."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if not a <= c <= b:
        raise DomainError(f"spike location {c} outside [{a}, {b}]")
    return PiecewiseFunc(a, b, (Piece(a, b, ()),), ((c, Fraction(value)),))


def from_shorthand(text: str, a=0, b=1) -> PiecewiseFunc:
    """Built-in functions: ``linear``, ``one``, ``step@c``, ``spike@c:v``."""
    s = text.strip()
    try:
        if s == "linear":
            return identity(a, b)
        if s == "one":
            return constant(1, a, b)
        if s.startswith("step@"):
            return step(to_fraction(s[5:]), a, b)
        if s.startswith("spike@"):
            loc, _, val = s[6:].partition(":")
            if not val:
                raise FuncSpecError("spike needs a value, e.g. spike@0.5:0.5", text)
            return spike(to_fraction(loc), to_fraction(val), a, b)
    except DomainError as exc:
        raise FuncSpecError(str(exc), text) from None
    raise FuncSpecError("unknown shorthand (expected linear, one, step@c or spike@c:v)", text)


# -- funcspec documents ----------------------------------------------------


def _fmt(q: Fraction) -> str:
    return str(q)


def parse_funcspec(text: str | Mapping) -> PiecewiseFunc:
    """Read a funcspec document (JSON text or an already-decoded mapping)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise FuncSpecError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    else:
        doc = text
    if not isinstance(doc, Mapping):
        raise FuncSpecError("document must be a JSON object", "$")
    unknown = set(doc) - {"domain", "pieces", "points"}
    if unknown:
        raise FuncSpecError(f"unknown keys {sorted(unknown)}", "$")
    dom = doc.get("domain")
    if not isinstance(dom, Sequence) or isinstance(dom, str) or len(dom) != 2:
        raise FuncSpecError("domain must be a two-element array [a, b]", "domain")
    a = to_fraction(dom[0], "domain[0]")
    b = to_fraction(dom[1], "domain[1]")
    raw_pieces = doc.get("pieces")
    if not isinstance(raw_pieces, Sequence) or isinstance(raw_pieces, str):
        raise FuncSpecError("pieces must be an array", "pieces")
    pieces = []
    for i, rp in enumerate(raw_pieces):
        where = f"pieces[{i}]"
        if not isinstance(rp, Mapping) or set(rp) != {"from", "to", "poly"}:
            raise FuncSpecError('each piece needs exactly "from", "to" and "poly"', where)
        coeffs = rp["poly"]
        if not isinstance(coeffs, Sequence) or isinstance(coeffs, str):
            raise FuncSpecError("poly must be an array of coefficients", f"{where}.poly")
        pieces.append(
            Piece(
                to_fraction(rp["from"], f"{where}.from"),
                to_fraction(rp["to"], f"{where}.to"),
                tuple(to_fraction(c, f"{where}.poly[{k}]") for k, c in enumerate(coeffs)),
            )
        )
    pieces.sort(key=lambda pc: pc.lo)
    raw_points = doc.get("points", [])
    if not isinstance(raw_points, Sequence) or isinstance(raw_points, str):
        raise FuncSpecError("points must be an array", "points")
    points = []
    for j, rp in enumerate(raw_points):
        if not isinstance(rp, Mapping) or set(rp) != {"at", "value"}:
            raise FuncSpecError('each point needs exactly "at" and "value"', f"points[{j}]")
        points.append((to_fraction(rp["at"], f"points[{j}].at"), to_fraction(rp["value"], f"points[{j}].value")))
    return PiecewiseFunc(a, b, tuple(pieces), tuple(points))


def to_document(f: PiecewiseFunc) -> dict:
    return {
        "domain": [_fmt(f.a), _fmt(f.b)],
        "pieces": [
            {"from": _fmt(pc.lo), "to": _fmt(pc.hi), "poly": [_fmt(c) for c in pc.poly] or ["0"]}
            for pc in f.pieces
        ],
        "points": [{"at": _fmt(t), "value": _fmt(v)} for t, v in f.points],
    }


def serialize_funcspec(f: PiecewiseFunc) -> str:
    """Canonical funcspec text: exact rationals, pieces and points ascending."""
    return json.dumps(to_document(f))


# -- calculus --------------------------------------------------------------


def antiderivative(f: PiecewiseFunc) -> PiecewiseFunc:
    """Continuous ``F`` with ``F(a) = 0`` and ``F' = f`` on every piece; overrides are ignored."""
    pieces = []
    acc = Fraction(0)
    for pc in f.pieces:
        prim = P.integ(pc.poly)
        shifted = P.add_constant(prim, acc - P.evaluate(prim, pc.lo))
        pieces.append(Piece(pc.lo, pc.hi, shifted))
        acc = P.evaluate(shifted, pc.hi)
    return PiecewiseFunc(f.a, f.b, tuple(pieces), max_degree=None)


def _check_interval(f: PiecewiseFunc, c, d) -> tuple[Fraction, Fraction]:
    c, d = Fraction(c), Fraction(d)
    if c > d:
        raise DomainError(f"reversed interval [{c}, {d}]")
    if c < f.a or d > f.b:
        raise DomainError(f"[{c}, {d}] not inside [{f.a}, {f.b}]")
    return c, d


def segments(funcs: Sequence[PiecewiseFunc], c: Fraction, d: Fraction, extra=()) -> list[Fraction]:
    """Sorted knots of all ``funcs`` (plus ``extra``) inside ``[c, d]``, endpoints included."""
    ts = {c, d}
    for g in funcs:
        ts.update(t for t in g.knots() if c < t < d)
    ts.update(t for t in extra if c < t < d)
    return sorted(ts)


@lru_cache(maxsize=4096)
def total_variation_exact(f: PiecewiseFunc, c=None, d=None) -> Fraction:
    """Total variation of ``f`` over ``[c, d]`` (defaults to the whole domain).

    Smooth parts contribute their monotone-run increments (critical points
    from exact root isolation); every knot contributes ``|f(t) - f(t-)| +
    |f(t+) - f(t)|``, with only the inward one-sided jump at ``c`` and ``d``.
    """
    c, d = _check_interval(f, f.a if c is None else c, f.b if d is None else d)
    if c == d:
        return Fraction(0)
    knots = segments([f], c, d)
    total = Fraction(0)
    for s, e in zip(knots, knots[1:]):
        total += P.variation(f.poly_on(s, e), s, e)
    for t in knots:
        at = f(t)
        if t > c:
            total += abs(at - f(t, "left"))
        if t < d:
            total += abs(f(t, "right") - at)
    return total


def value_range(f: PiecewiseFunc, c=None, d=None) -> tuple[Fraction, Fraction]:
    """``(inf, sup)`` of ``f`` over ``[c, d]``, one-sided limits included."""
    c, d = _check_interval(f, f.a if c is None else c, f.b if d is None else d)
    knots = segments([f], c, d)
    lo = hi = f(c)
    for s, e in zip(knots, knots[1:]):
        pmin, pmax = P.extreme_values(f.poly_on(s, e), s, e)
        lo, hi = min(lo, pmin), max(hi, pmax)
    for t in knots:
        v = f(t)
        lo, hi = min(lo, v), max(hi, v)
    return lo, hi


def is_nonnegative(f: PiecewiseFunc, c=None, d=None) -> bool:
    """Exact test of ``f >= 0`` on ``[c, d]``, one-sided limits and overrides included."""
    c, d = _check_interval(f, f.a if c is None else c, f.b if d is None else d)
    knots = segments([f], c, d)
    if any(f(t) < 0 for t in knots):
        return False
    return all(P.nonnegative(f.poly_on(s, e), s, e) for s, e in zip(knots, knots[1:]))


@dataclass(frozen=True)
class RegularityCertificate:
    total_variation: Fraction
    lipschitz_constant: Fraction | None
    monotone_nondecreasing: bool
    continuous: bool
    jump_points: tuple[tuple[Fraction, Fraction | None, Fraction, Fraction | None], ...]


@lru_cache(maxsize=1024)
def regularity(f: PiecewiseFunc) -> RegularityCertificate:
    jumps = []
    upward = True
    for t in f.knots():
        left, at, right = f.limits(t)
        if (left is not None and left != at) or (right is not None and right != at):
            jumps.append((t, left, at, right))
        if (left is not None and at < left) or (right is not None and right < at):
            upward = False
    continuous = not jumps
    slopes_ok = all(P.nonnegative(P.deriv(pc.poly), pc.lo, pc.hi) for pc in f.pieces)
    monotone = upward and slopes_ok
    lipschitz = None
    if continuous:
        lipschitz = Fraction(0)
        for pc in f.pieces:
            lo, hi = P.extreme_values(P.deriv(pc.poly), pc.lo, pc.hi)
            lipschitz = max(lipschitz, abs(lo), abs(hi))
    tv = f(f.b) - f(f.a) if monotone else total_variation_exact(f)
    return RegularityCertificate(tv, lipschitz, monotone, continuous, tuple(jumps))
