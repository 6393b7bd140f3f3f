import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_func, random_weight
from rsquad import poly as P
from rsquad.errors import InvalidParams
from rsquad.funcmodel import Piece, PiecewiseFunc, constant, identity, polynomial, spike
from rsquad.kernel import QuadratureParams
from rsquad.rules import KINDS, RuleKind, quad, quad_named, simpson_formula
from rsquad.stieltjes import rs_integral_exact

ONE = constant(1)
T = identity()
SQ = polynomial([0, 0, 1])


def qp(x, alpha, a=0, b=1):
    return QuadratureParams(F(a), F(b), F(x), F(alpha))


def test_quad_example():
    assert quad(SQ, ONE, T, qp(F(1, 4), 0)) == F(5, 16)


def test_constants_are_integrated_exactly():
    rng = random.Random(4)
    for _ in range(30):
        g, u = random_func(rng, continuous=True), random_func(rng)
        p = qp(F(rng.randint(0, 12), 24), F(rng.randint(0, 8), 8))
        c = F(rng.randint(-9, 9), 4)
        assert quad(constant(c), g, u, p) == c * rs_integral_exact(ONE, g, u).value


@pytest.mark.parametrize("alpha", [F(0), F(1, 4), F(1, 3), F(1, 2)])
def test_spike_sharpness_value(alpha):
    assert quad(spike(F(1, 2), F(1, 2)), ONE, T, qp(F(1, 2), alpha)) == (1 - alpha) / 2


def test_named_rules():
    assert quad_named(SQ, ONE, T, RuleKind.simpson()) == F(1, 3)
    assert quad_named(T, ONE, T, RuleKind.generalized_trapezoid(F(1, 2))) == F(1, 2)
    f = polynomial([F(2, 7), 3, -1])
    assert quad_named(f, ONE, T, RuleKind.ostrowski(F(1, 2))) == f(F(1, 2))
    assert quad_named(f, ONE, T, RuleKind.average(F(1, 4))) == quad(f, ONE, T, qp(F(1, 4), F(1, 2)))


def test_rule_kind_validation():
    assert set(KINDS) == {"general", "ostrowski", "simpson", "average", "generalized_trapezoid"}
    with pytest.raises(InvalidParams):
        RuleKind("midpointish", F(1, 2))
    with pytest.raises(InvalidParams):
        RuleKind("simpson", alpha=F(1, 2))
    with pytest.raises(InvalidParams):
        RuleKind("ostrowski")
    with pytest.raises(InvalidParams):
        RuleKind("general", F(1, 4))
    assert RuleKind.general(F(1, 4), F(2, 5)).params(0, 2) == qp(F(1, 4), F(2, 5), 0, 2)


def test_x_past_midpoint_rejected():
    with pytest.raises(InvalidParams):
        quad(SQ, ONE, T, QuadratureParams(0, 1, F(3, 4), 0))


def test_interval_outside_domain_rejected():
    with pytest.raises(InvalidParams):
        quad(SQ, ONE, T, qp(0, 0, 0, 2))


def test_point_values_not_limits_are_used():
    # step-at-a: 1 at a, 0 afterwards; the trapezoid end uses f(a) = 1
    f = PiecewiseFunc(0, 1, (Piece(0, 1, ()),), ((F(0), F(1)),))
    assert quad(f, ONE, T, qp(F(1, 2), 1)) == F(1, 2)


def test_consistency_with_integral_on_linear_f_at_midpoint():
    # g = 1, u = t, x = m: the rule is exact for every affine f and every alpha
    for alpha in (F(0), F(1, 3), F(1)):
        f = polynomial([F(-3, 2), F(5, 4)])
        assert quad(f, ONE, T, qp(F(1, 2), alpha)) == rs_integral_exact(f, ONE, T).value


@given(st.integers(0, 12), st.integers(0, 12))
@settings(max_examples=60, deadline=None)
def test_plain_formula_for_unit_weight(k, j):
    x, alpha = F(k, 24), F(j, 12)
    f = polynomial([1, F(-2, 3), 0, F(5, 2)])
    want = (1 - alpha) * (f(x) + f(1 - x)) / 2 + alpha * (x * f(0) + (1 - x) * f(1))
    assert quad(f, ONE, T, qp(x, alpha)) == want


def _translate(h, s):
    pieces = tuple(Piece(pc.lo + s, pc.hi + s, P.compose_linear(pc.poly, -s, F(1))) for pc in h.pieces)
    return PiecewiseFunc(h.a + s, h.b + s, pieces, tuple((t + s, v) for t, v in h.points), max_degree=None)


@given(st.integers(0, 2**32), st.integers(-40, 40))
@settings(max_examples=40, deadline=None)
def test_affine_covariance(seed, k):
    rng = random.Random(seed)
    f, g, u = random_func(rng, continuous=True), random_weight(rng), random_func(rng)
    p = qp(F(rng.randint(0, 12), 24), F(rng.randint(0, 6), 6))
    s = F(k, 8)
    ps = QuadratureParams(p.a + s, p.b + s, p.x + s, p.alpha)
    fs, gs, us = (_translate(h, s) for h in (f, g, u))
    err = quad(f, g, u, p) - rs_integral_exact(f, g, u).value
    err_s = quad(fs, gs, us, ps) - rs_integral_exact(fs, gs, us).value
    assert err == err_s


@given(st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_simpson_formula_identity(seed):
    rng = random.Random(seed)
    f, u = random_func(rng), random_func(rng)
    assert simpson_formula(f, u) == quad_named(f, ONE, u, RuleKind.simpson())
