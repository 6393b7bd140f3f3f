"""Random model-class functions and independent float oracles for the tests."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from rsquad import poly as P
from rsquad.funcmodel import Piece, PiecewiseFunc, antiderivative, segments, step, value_range


def rat(rng: random.Random, lo=-2, hi=2, den=16) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_func(
    rng: random.Random,
    a=Fraction(0),
    b=Fraction(1),
    *,
    max_pieces=4,
    max_degree=4,
    continuous=False,
    overrides=True,
) -> PiecewiseFunc:
    """Random piecewise polynomial; knots on a 1/24 grid of [a, b]."""
    a, b = Fraction(a), Fraction(b)
    k = rng.randint(0, max_pieces - 1)
    cuts = sorted(rng.sample(range(1, 24), k))
    knots = [a] + [a + (b - a) * c / 24 for c in cuts] + [b]
    pieces = []
    for lo, hi in zip(knots, knots[1:]):
        coeffs = [rat(rng) for _ in range(rng.randint(0, max_degree) + 1)]
        if continuous and pieces:
            prev = pieces[-1]
            # shift the constant term so the new piece starts where the last one ended
            start = sum(c * lo**i for i, c in enumerate(prev.poly)) if prev.poly else Fraction(0)
            here = sum(c * lo**i for i, c in enumerate(coeffs))
            coeffs[0] += start - here
        pieces.append(Piece(lo, hi, tuple(coeffs)))
    points = ()
    if overrides and not continuous and rng.random() < 0.4:
        t = rng.choice(knots)
        points = ((t, rat(rng)),)
    return PiecewiseFunc(a, b, tuple(pieces), points)


def sample_values(f: PiecewiseFunc, per_segment: int) -> np.ndarray:
    """Values along [a, b] in order: one-sided limits and point values at knots, dense samples between."""
    out = []
    knots = f.knots()
    for i, t in enumerate(knots):
        left, at, right = f.limits(t)
        if left is not None:
            out.append(float(left))
        out.append(float(at))
        if right is not None:
            out.append(float(right))
        if i + 1 < len(knots):
            s, e = float(t), float(knots[i + 1])
            poly = f.poly_on(t, knots[i + 1])
            grid = np.linspace(s, e, per_segment + 2)[1:-1]
            coeffs = [float(c) for c in reversed(poly)] or [0.0]
            out.extend(np.polyval(coeffs, grid))
    return np.asarray(out)


def tv_oracle(f: PiecewiseFunc, points: int = 2**16) -> float:
    """Refining-partition estimate of the total variation (a lower bound that converges)."""
    segments = max(len(f.knots()) - 1, 1)
    vals = sample_values(f, points // segments)
    return float(np.abs(np.diff(vals)).sum())


def float_eval(f: PiecewiseFunc, t: np.ndarray) -> np.ndarray:
    """Point values of f at the floats t (right-closed pieces, overrides ignored)."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for i, pc in enumerate(f.pieces):
        lo, hi = float(pc.lo), float(pc.hi)
        mask = (t > lo) & (t <= hi) if i else (t >= lo) & (t <= hi)
        coeffs = [float(c) for c in reversed(pc.poly)] or [0.0]
        out[mask] = np.polyval(coeffs, t[mask])
    return out


def add(f: PiecewiseFunc, g: PiecewiseFunc) -> PiecewiseFunc:
    """Pointwise sum on a shared domain, overrides included."""
    knots = segments((f, g), f.a, f.b)
    pieces = tuple(Piece(s, e, P.add(f.poly_on(s, e), g.poly_on(s, e))) for s, e in zip(knots, knots[1:]))
    draft = PiecewiseFunc(f.a, f.b, pieces, max_degree=None)
    points = tuple((t, f(t) + g(t)) for t in knots if draft(t) != f(t) + g(t))
    return PiecewiseFunc(f.a, f.b, pieces, points, max_degree=None)


def shift(f: PiecewiseFunc, c) -> PiecewiseFunc:
    """``f + c``."""
    c = Fraction(c)
    pieces = tuple(Piece(pc.lo, pc.hi, P.add_constant(pc.poly, c)) for pc in f.pieces)
    return PiecewiseFunc(f.a, f.b, pieces, tuple((t, v + c) for t, v in f.points), max_degree=None)


def random_weight(rng: random.Random, a=Fraction(0), b=Fraction(1)) -> PiecewiseFunc:
    """Continuous and nonnegative."""
    g = random_func(rng, a, b, max_degree=3, continuous=True)
    # the computed minimum may sit a hair above an irrational true minimum; round down
    low = Fraction(math.floor(value_range(g)[0] * 64), 64)
    return shift(g, rng.randint(0, 2) * Fraction(1, 4) - low)


def random_monotone(rng: random.Random, a=Fraction(0), b=Fraction(1), jumps=True) -> PiecewiseFunc:
    """Nondecreasing: an antiderivative of a weight plus a few upward steps."""
    u = antiderivative(random_weight(rng, a, b))
    if jumps:
        for _ in range(rng.randint(0, 2)):
            c = a + (b - a) * Fraction(rng.randint(1, 23), 24)
            u = add(u, step(c, a, b))
    return u
