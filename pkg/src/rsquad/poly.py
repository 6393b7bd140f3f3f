"""Exact dense polynomials over the rationals.

A polynomial is a tuple of :class:`~fractions.Fraction` coefficients in
ascending powers, ``(c0, c1, ..., cd)``; the zero polynomial is ``()``.
Real roots are isolated with Sturm sequences and refined by exact bisection,
so every reported root is a rational within ``2**-52`` (relative to the
search interval) of a true root, and rational roots hit by a bisection
midpoint are returned exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from math import gcd as gcd_int
from typing import Iterable, Sequence

Poly = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Relative width below which an isolating interval is considered refined.
ROOT_WIDTH = Fraction(1, 2**52)


def make(coeffs: Iterable) -> Poly:
    """Coerce ``coeffs`` to a trimmed tuple of Fractions."""
    return trim(tuple(Fraction(c) for c in coeffs))


def trim(p: Sequence[Fraction]) -> Poly:
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def degree(p: Poly) -> int:
    return len(p) - 1


def evaluate(p: Poly, t: Fraction) -> Fraction:
    acc = ZERO
    for c in reversed(p):
        acc = acc * t + c
    return acc


def add(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def scale(p: Poly, k) -> Poly:
    if k == 0:
        return ()
    return tuple(c * k for c in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, ci in enumerate(p):
        if ci == 0:
            continue
        for j, cj in enumerate(q):
            out[i + j] += ci * cj
    return trim(out)


def deriv(p: Poly) -> Poly:
    return trim(tuple(c * i for i, c in enumerate(p) if i))


def integ(p: Poly) -> Poly:
    """Antiderivative vanishing at ``t = 0``."""
    if not p:
        return ()
    return (ZERO,) + tuple(c / (i + 1) for i, c in enumerate(p))


def definite(p: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    P = integ(p)
    return evaluate(P, hi) - evaluate(P, lo)


def add_constant(p: Poly, k: Fraction) -> Poly:
    if not p:
        return make((k,))
    return trim((p[0] + k,) + tuple(p[1:]))


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [ZERO] * max(len(p) - dq, 0)
    for k in range(len(p) - dq - 1, -1, -1):
        c = rem[k + dq] / lead
        quot[k] = c
        if c:
            for j, qc in enumerate(q):
                rem[k + j] -= c * qc
    return trim(quot), trim(rem[:dq])


def gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, divmod_(p, q)[1]
    if not p:
        return ()
    return scale(p, 1 / p[-1])


def squarefree(p: Poly) -> Poly:
    """Product of the distinct irreducible factors of ``p`` (monic)."""
    g = gcd(p, deriv(p))
    if degree(g) <= 0:
        return scale(p, 1 / p[-1])
    return divmod_(p, g)[0]


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


@lru_cache(maxsize=4096)
def sturm_sequence(p: Poly) -> tuple[Poly, ...]:
    seq = [p, deriv(p)]
    while seq[-1]:
        r = divmod_(seq[-2], seq[-1])[1]
        seq.append(scale(r, -1))
    return tuple(seq[:-1])


def _variations(seq: tuple[Poly, ...], t: Fraction) -> int:
    count = 0
    last = 0
    for q in seq:
        s = _sign(evaluate(q, t))
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _count_open(seq, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots of ``seq[0]`` in the open interval ``(lo, hi)``."""
    n = _variations(seq, lo) - _variations(seq, hi)
    if evaluate(seq[0], hi) == 0:
        n -= 1
    return n


def compose_linear(p: Poly, c: Fraction, h: Fraction) -> Poly:
    """``p(c + h s)`` as a polynomial in ``s``."""
    out: Poly = ()
    for coeff in reversed(p):
        out = add(mul(out, (c, h)), (coeff,))
    return out


def _refine(p: Poly, lo: Fraction, hi: Fraction, width: Fraction) -> Fraction:
    # Exactly one simple root of p lies in (lo, hi).  Bisect on dyadic s in
    # [0, 1] after substituting t = lo + h s, with signs from integer arithmetic.
    h = hi - lo
    q = compose_linear(p, lo, h)
    if q[0] == 0:
        q = q[1:]
    if sum(q) == 0:
        q = divmod_(q, (Fraction(-1), ONE))[0]
    den = 1
    for c in q:
        den = den * c.denominator // gcd_int(den, c.denominator)
    iq = [int(c * den) for c in q]
    n = len(iq) - 1

    def sign_at(k: int, j: int) -> int:
        # sign of q(k / 2**j), scaled by 2**(j n)
        acc = iq[n]
        for i in range(n - 1, -1, -1):
            acc = acc * k + (iq[i] << (j * (n - i)))
        return (acc > 0) - (acc < 0)

    s_lo = (iq[0] > 0) - (iq[0] < 0)
    k, j = 0, 0
    while h > width * (1 << j):
        j += 1
        k *= 2
        s_mid = sign_at(k + 1, j)
        if s_mid == 0:
            return lo + h * Fraction(k + 1, 1 << j)
        if s_mid == s_lo:
            k += 1
    return lo + h * Fraction(2 * k + 1, 1 << (j + 1))


@lru_cache(maxsize=8192)
def real_roots(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, ...]:
    """Distinct real roots of ``p`` strictly inside ``(lo, hi)``, ascending.

    The zero polynomial and nonzero constants have no isolated roots.
    """
    if len(p) <= 1 or lo >= hi:
        return ()
    q = squarefree(p)
    if len(q) == 2:
        r = -q[0] / q[1]
        return (r,) if lo < r < hi else ()
    seq = sturm_sequence(q)
    width = (hi - lo) * ROOT_WIDTH
    found: list[Fraction] = []
    stack = [(lo, hi, _count_open(seq, lo, hi))]
    while stack:
        l, r, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(q, l, r, width))
            continue
        mid = (l + r) / 2
        if evaluate(q, mid) == 0:
            found.append(mid)
        stack.append((l, mid, _count_open(seq, l, mid)))
        stack.append((mid, r, _count_open(seq, mid, r)))
    return tuple(sorted(found))


def _odd_part(p: Poly) -> Poly:
    """Product of the factors of ``p`` that occur with odd multiplicity."""
    layers = []  # layers[k]: distinct roots of multiplicity > k
    r = p
    while degree(r) > 0:
        nxt = gcd(r, deriv(r))
        layers.append(divmod_(r, nxt)[0])
        r = nxt
    layers.append((ONE,))
    out: Poly = (ONE,)
    for k in range(0, len(layers) - 1, 2):
        out = mul(out, divmod_(layers[k], layers[k + 1])[0])
    return out


@lru_cache(maxsize=8192)
def nonnegative(p: Poly, lo: Fraction, hi: Fraction) -> bool:
    """Exact test of ``p >= 0`` on ``[lo, hi]``.

    ``p`` changes sign only at roots of odd multiplicity, so it is enough
    to rule those out inside the interval and check one point off the roots.
    """
    if evaluate(p, lo) < 0 or evaluate(p, hi) < 0:
        return False
    if degree(p) <= 0 or lo >= hi:
        return True
    odd = _odd_part(p)
    if degree(odd) > 0 and _count_open(sturm_sequence(squarefree(odd)), lo, hi) > 0:
        return False
    # sign is constant off the roots; deg + 2 distinct points cannot all be roots
    n = degree(p) + 2
    for i in range(1, n + 1):
        v = evaluate(p, lo + (hi - lo) * Fraction(i, n + 1))
        if v != 0:
            return v > 0
    return True


@lru_cache(maxsize=8192)
def variation(p: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    """Total variation of ``p`` over ``[lo, hi]``."""
    if len(p) <= 1:
        return ZERO
    pts = (lo,) + real_roots(deriv(p), lo, hi) + (hi,)
    vals = [evaluate(p, t) for t in pts]
    return sum((abs(v1 - v0) for v0, v1 in zip(vals, vals[1:])), ZERO)


@lru_cache(maxsize=8192)
def extreme_values(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """``(min, max)`` of ``p`` over the closed interval ``[lo, hi]``."""
    pts = (lo,) + real_roots(deriv(p), lo, hi) + (hi,)
    vals = [evaluate(p, t) for t in pts]
    return min(vals), max(vals)


def abs_integral(p: Poly, lo: Fraction, hi: Fraction) -> Fraction:
    """``∫_lo^hi |p(t)| dt`` with sign changes located by root isolation."""
    P = integ(p)
    pts = (lo,) + real_roots(p, lo, hi) + (hi,)
    vals = [evaluate(P, t) for t in pts]
    return sum((abs(v1 - v0) for v0, v1 in zip(vals, vals[1:])), ZERO)


def from_bernstein(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> Poly:
    """Monomial form (in the global variable) of a Bernstein polynomial on ``[lo, hi]``."""
    n = len(coeffs) - 1
    h = hi - lo
    s = make((-lo / h, 1 / h))          # (t - lo) / h
    one_minus_s = make((1 + lo / h, -1 / h))
    out: Poly = ()
    for k, c in enumerate(coeffs):
        term = make((comb(n, k) * Fraction(c),))
        for _ in range(k):
            term = mul(term, s)
        for _ in range(n - k):
            term = mul(term, one_minus_s)
        out = add(out, term)
    return out

