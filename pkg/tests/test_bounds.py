import random
from fractions import Fraction as F

import pytest

from helpers import random_func, random_monotone, random_weight
from rsquad.bounds import (
    BOUNDS,
    Mode,
    Theorem,
    Verdict,
    bound_bv,
    bound_lipschitz,
    bound_monotone,
    quad_error,
    weight_constant,
)
from rsquad.errors import (
    NoLipschitzCertificate,
    NotMonotoneIntegrand,
    NotMonotoneIntegrator,
    NotNonnegativeWeight,
)
from rsquad.funcmodel import Piece, PiecewiseFunc, constant, identity, polynomial, spike, step
from rsquad.kernel import QuadratureParams
from rsquad.rules import RuleKind

ONE = constant(1)
T = identity()
PAPER, RIG = Mode.PAPER, Mode.RIGOROUS


def qp(x, alpha, a=0, b=1):
    return QuadratureParams(F(a), F(b), F(x), F(alpha))


def step_at_a(value=1, a=0, b=1):
    return PiecewiseFunc(F(a), F(b), (Piece(F(a), F(b), ()),), ((F(a), F(value)),))


def test_weight_constant():
    assert weight_constant(F(1, 2)) == F(1, 2)
    assert weight_constant(0) == weight_constant(1) == 1
    for k in range(13):
        a = F(k, 12)
        c = weight_constant(a)
        assert c == max(a, 1 - a) and c == weight_constant(1 - a)
        assert F(1, 2) <= c <= 1


def test_bv_examples():
    r = bound_bv(spike(F(1, 2), F(1, 2)), ONE, T, qp(F(1, 2), 0), PAPER)
    assert (r.true_error, r.bound, r.ratio, r.verdict) == (F(1, 2), F(1, 2), 1, Verdict.TIGHT)
    r = bound_bv(polynomial([0, 0, 1]), ONE, T, qp(F(1, 2), 0), PAPER)
    assert (r.true_error, r.bound, r.ratio, r.verdict) == (F(1, 12), F(1, 2), F(1, 6), Verdict.HOLDS)
    r = bound_bv(step_at_a(), ONE, T, qp(F(1, 2), 1), PAPER)
    assert (r.true_error, r.bound, r.verdict) == (F(1, 2), F(1, 2), Verdict.TIGHT)


def test_lipschitz_examples():
    r = bound_lipschitz(polynomial([-1, 1]), ONE, step(1), qp(F(1, 2), F(1, 3)), PAPER)
    assert (r.true_error, r.bound, r.verdict) == (F(1, 3), F(1, 3), Verdict.TIGHT)
    r = bound_lipschitz(T, ONE, T, qp(F(1, 2), F(1, 2)), PAPER)
    assert (r.true_error, r.bound, r.ratio, r.verdict) == (0, F(1, 4), 0, Verdict.HOLDS)
    assert r.components["unit_weight_form"] == F(1, 4)
    r = bound_lipschitz(T, ONE, spike(F(1, 2), F(1, 2)), qp(F(1, 2), 1), PAPER)
    assert (r.true_error, r.bound, r.verdict) == (F(1, 2), F(1, 2), Verdict.TIGHT)


def test_monotone_examples():
    r = bound_monotone(T, ONE, T, qp(F(1, 4), 0), PAPER)
    assert (r.true_error, r.bound, r.verdict) == (0, F(5, 8), Verdict.HOLDS)
    assert r.components["unit_weight_tight"] == F(5, 8)
    assert r.components["unit_weight_weak"] == F(3, 4)
    r = bound_monotone(constant(3), ONE, T, qp(F(1, 4), 0), PAPER)
    assert (r.true_error, r.bound, r.ratio, r.verdict) == (0, 0, 0, Verdict.HOLDS)
    r = bound_monotone(step_at_a(-1), ONE, step(1), qp(0, F(1, 4)), PAPER)
    assert r.true_error == 0 and r.bound > 0 and r.verdict is Verdict.HOLDS


def test_falsification_case_bv():
    f, p = step(1), qp(0, F(1, 2))
    paper = bound_bv(f, ONE, T, p, PAPER)
    rig = bound_bv(f, ONE, T, p, RIG)
    assert paper.true_error == F(3, 4)
    assert paper.bound == F(1, 2) and paper.verdict is Verdict.CLOSED_FORM_VIOLATION
    assert rig.bound == F(3, 4) and rig.verdict is Verdict.TIGHT


def test_simpson_constants():
    for a, b in ((0, 1), (0, 2), (-1, 3)):
        p = RuleKind.simpson().params(a, b)
        f = polynomial([0, 0, 1], a, b)
        g, u = constant(1, a, b), identity(a, b)
        bv = bound_bv(f, g, u, p, PAPER)
        assert bv.components["C_alpha"] == F(2, 3)
        lip = bound_lipschitz(f, g, u, p, PAPER)
        assert lip.components["max_term"] == F(1, 3) * (b - a)


def test_midpoint_paper_equals_rigorous_for_bv():
    rng = random.Random(41)
    for _ in range(40):
        f, g, u = random_func(rng, continuous=True), random_weight(rng), random_monotone(rng)
        p = qp(F(1, 2), F(rng.randint(0, 12), 12))
        assert bound_bv(f, g, u, p, PAPER).bound == bound_bv(f, g, u, p, RIG).bound


def test_rigorous_never_below_true_error():
    rng = random.Random(43)
    for _ in range(60):
        f = random_monotone(rng, jumps=False)
        g, u = random_weight(rng), random_monotone(rng)
        p = qp(F(rng.randint(0, 12), 24), F(rng.randint(0, 6), 6))
        err = quad_error(f, g, u, p)
        for theorem, fn in BOUNDS.items():
            r = fn(f, g, u, p, RIG, err)
            assert r.bound >= err.magnitude
            assert r.theorem is theorem


def test_weak_monotone_form_dominates_tight():
    rng = random.Random(47)
    for _ in range(60):
        f, u = random_monotone(rng), random_monotone(rng, jumps=False)
        p = qp(F(rng.randint(0, 12), 24), F(rng.randint(0, 4), 4))
        comps = bound_monotone(f, ONE, u, p, PAPER).components
        assert comps["unit_weight_weak"] >= comps["unit_weight_tight"]


def test_hypothesis_errors():
    p = qp(F(1, 4), 0)
    with pytest.raises(NotNonnegativeWeight):
        bound_bv(T, polynomial([-1, 1]), T, p, PAPER)
    with pytest.raises(NotMonotoneIntegrator):
        bound_bv(T, ONE, polynomial([1, -1]), p, PAPER)
    with pytest.raises(NoLipschitzCertificate):
        bound_lipschitz(step(F(1, 2)), ONE, T, p, PAPER)
    with pytest.raises(NotMonotoneIntegrand):
        bound_monotone(polynomial([1, -1]), ONE, T, p, PAPER)


def test_rigorous_refused_for_non_monotone_u():
    u, p = polynomial([0, 1, -1]), qp(F(1, 4), F(1, 2))
    assert bound_lipschitz(T, ONE, u, p, PAPER).bound >= 0
    with pytest.raises(NotMonotoneIntegrator):
        bound_lipschitz(T, ONE, u, p, RIG)
    with pytest.raises(NotMonotoneIntegrator):
        bound_monotone(T, ONE, u, p, RIG)


def test_report_serializes_plain_values():
    d = bound_bv(spike(F(1, 2), F(1, 2)), ONE, T, qp(F(1, 2), 0), PAPER).to_dict()
    assert d["theorem"] == Theorem.BV.value and d["mode"] == "paper_closed_form"
    assert d["ratio"] == 1.0 and d["verdict"] == "TIGHT"
    assert all(isinstance(v, float) for v in d["components"].values())
