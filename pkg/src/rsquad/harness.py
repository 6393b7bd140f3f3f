"""Seeded corpus generation, batch verification and the sharpness table.

Every case is generated from its own RNG seeded with ``"{seed}/{class}/{i}"``
so a case can be rebuilt inside a worker process from three integers; the
report is assembled in case order and never depends on scheduling.
"""

from __future__ import annotations

import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import poly as P
from .bounds import BOUNDS, BoundReport, Mode, QuadError, Theorem, quad_error, weight_constant
from .bounds import Verdict as ReportVerdict
from .errors import HypothesisViolation, InvariantViolation, RSQuadError, SharedDiscontinuity
from .funcmodel import Piece, PiecewiseFunc, constant, identity, polynomial, regularity, spike, step, value_range
from .kernel import QuadratureParams, identity_residual

CLASSES = ("bv", "lipschitz", "monotone")
ALPHAS = tuple(Fraction(v) for v in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))
DOMAINS = tuple((Fraction(a), Fraction(b)) for a, b in (("0", "1"), ("-1", "1"), ("1/2", "3/2"), ("0", "2"), ("-2", "1")))
IDENTITY_RTOL = Fraction(1, 10**8)
MAX_DEGREE = 4
F_GRID = 7  # f may break at a + L*k/7
U_GRID = 5  # u may break at a + L*k/5; disjoint from the f grid inside (a, b)
G_GRID = 4
G_FLOOR = Fraction(1, 20)


class Classification(str, Enum):
    ALL_HOLD = "ALL_HOLD"
    CLOSED_FORM_VIOLATION = "CLOSED_FORM_VIOLATION"
    UNVERIFIED_RIGOROUS = "UNVERIFIED_RIGOROUS"
    ERROR = "ERROR"


@dataclass(frozen=True)
class CorpusCase:
    case_id: int
    f: PiecewiseFunc
    g: PiecewiseFunc
    u: PiecewiseFunc
    params: QuadratureParams
    cls: str
    seed: int


@dataclass(frozen=True)
class Verdict:
    case_id: int
    reports: tuple[BoundReport, ...]
    classification: Classification
    identity_residual: Fraction | None = None
    message: str = ""
    invariant_failure: bool = False
    params: QuadratureParams | None = None
    u_monotone: bool | None = None
    error: QuadError | None = None

    def to_dict(self) -> dict:
        p = self.params
        return {
            "case_id": self.case_id,
            "x": None if p is None else str(p.x),
            "alpha": None if p is None else str(p.alpha),
            "u_monotone": self.u_monotone,
            "quadrature": None if self.error is None else float(self.error.quadrature),
            "integral": None if self.error is None else float(self.error.integral),
            "identity_residual": None if self.identity_residual is None else float(self.identity_residual),
            "classification": self.classification.value,
            "message": self.message,
            "reports": [r.to_dict() for r in self.reports],
        }


# -- generation ------------------------------------------------------------

def _coeff(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 32) -> Fraction:
    return Fraction(rng.randint(math.ceil(lo * den), math.floor(hi * den)), den)


def _cuts(rng: random.Random, a: Fraction, b: Fraction, grid: int, most: int) -> list[Fraction]:
    k = rng.randint(0, most)
    picks = sorted(rng.sample(range(1, grid), k))
    return [a + (b - a) * j / grid for j in picks]


def _bernstein_pieces(rng, a, b, cuts, draw, jumps: set[int]) -> list[Piece]:
    """Pieces from Bernstein coefficients; boundary ``i`` is stitched unless ``i in jumps``.

    ``draw(n, start)`` returns ``n + 1`` Bernstein coefficients, the first equal
    to ``start`` when ``start`` is not ``None``.
    """
    knots = [a, *cuts, b]
    pieces = []
    last = None
    for i, (lo, hi) in enumerate(zip(knots, knots[1:])):
        deg = rng.randint(0, MAX_DEGREE)
        start = None if (i == 0 or (i - 1) in jumps) else last
        coeffs = draw(deg, start)
        pieces.append(Piece(lo, hi, P.from_bernstein(coeffs, lo, hi)))
        last = coeffs[-1]
    return pieces


def _free_draw(rng, lo, hi):
    def draw(n, start):
        first = start if start is not None else _coeff(rng, lo, hi)
        return [first] + [_coeff(rng, lo, hi) for _ in range(n)]
    return draw


def _rising_draw(rng, climb: Fraction, jump: Fraction):
    """Nondecreasing coefficients; a jump boundary restarts at or above the previous end."""
    ends: list[Fraction] = []

    def draw(n, start):
        if start is None:
            start = ends[-1] + _coeff(rng, Fraction(0), jump) if ends else _coeff(rng, Fraction(-2), Fraction(0))
        out = [start]
        for _ in range(n):
            out.append(out[-1] + _coeff(rng, Fraction(0), climb))
        ends.append(out[-1])
        return out
    return draw


def _jump_picks(rng, cuts: list, most: int) -> set[int]:
    if not cuts:
        return set()
    return set(rng.sample(range(len(cuts)), rng.randint(0, min(most, len(cuts)))))


def _gen_f(rng, cls, a, b) -> PiecewiseFunc:
    cuts = _cuts(rng, a, b, F_GRID, 3)
    if cls == "lipschitz":
        pieces = _bernstein_pieces(rng, a, b, cuts, _free_draw(rng, Fraction(-2), Fraction(2)), set())
        return PiecewiseFunc(a, b, tuple(pieces))
    jumps = _jump_picks(rng, cuts, 2)
    if cls == "monotone":
        pieces = _bernstein_pieces(rng, a, b, cuts, _rising_draw(rng, Fraction(1, 2), Fraction(1)), jumps)
        return PiecewiseFunc(a, b, tuple(pieces))
    pieces = _bernstein_pieces(rng, a, b, cuts, _free_draw(rng, Fraction(-2), Fraction(2)), jumps)
    points = []
    spare = [c for i, c in enumerate(cuts) if i not in jumps]
    if spare and rng.random() < 0.3:
        points.append((rng.choice(spare), _coeff(rng, Fraction(-2), Fraction(2))))
    return PiecewiseFunc(a, b, tuple(pieces), tuple(points))


def _gen_u(rng, a, b) -> PiecewiseFunc:
    cuts = _cuts(rng, a, b, U_GRID, 3)
    jumps = _jump_picks(rng, cuts, 2)
    if rng.random() < 0.8:
        draw = _rising_draw(rng, Fraction(1, 2), Fraction(1))
    else:
        draw = _free_draw(rng, Fraction(-2), Fraction(2))
    return PiecewiseFunc(a, b, tuple(_bernstein_pieces(rng, a, b, cuts, draw, jumps)))


def _gen_g(rng, a, b) -> PiecewiseFunc:
    cuts = _cuts(rng, a, b, G_GRID, 2)
    pieces = _bernstein_pieces(rng, a, b, cuts, _free_draw(rng, G_FLOOR, Fraction(2)), set())
    return PiecewiseFunc(a, b, tuple(pieces))


def gen_case(seed: int, cls: str, i: int) -> CorpusCase:
    if cls not in CLASSES:
        raise ValueError(f"class must be one of {', '.join(CLASSES)}")
    rng = random.Random(f"{seed}/{cls}/{i}")
    a, b = rng.choice(DOMAINS)
    f = _gen_f(rng, cls, a, b)
    g = _gen_g(rng, a, b)
    u = _gen_u(rng, a, b)
    m = (a + b) / 2
    x = m if rng.random() < 0.3 else a + (m - a) * rng.randrange(128) / 128
    alpha = rng.choice(ALPHAS)
    cert = regularity(f)
    if cls == "lipschitz" and cert.lipschitz_constant is None:
        raise AssertionError(f"case {i}: lipschitz f without a certificate")
    if cls == "monotone" and not cert.monotone_nondecreasing:
        raise AssertionError(f"case {i}: monotone f is not certified monotone")
    if not regularity(g).continuous or value_range(g)[0] < G_FLOOR:
        raise AssertionError(f"case {i}: weight is not continuous with g >= {G_FLOOR}")
    return CorpusCase(i, f, g, u, QuadratureParams(a, b, x, alpha), cls, seed)


def gen_corpus(seed: int, cls: str, n: int) -> list[CorpusCase]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [gen_case(seed, cls, i) for i in range(n)]


# -- verification ----------------------------------------------------------

def _applicable(f: PiecewiseFunc) -> list[Theorem]:
    cert = regularity(f)
    out = [Theorem.BV]
    if cert.lipschitz_constant is not None:
        out.append(Theorem.LIPSCHITZ)
    if cert.monotone_nondecreasing:
        out.append(Theorem.MONOTONE)
    return out


def verify_functions(case_id: int, f, g, u, p: QuadratureParams) -> Verdict:
    """Evaluate every applicable bound in both modes and classify the case."""
    u_mono = regularity(u).monotone_nondecreasing
    try:
        err = quad_error(f, g, u, p)
        try:
            residual = identity_residual(f, g, u, p, error=err.signed)
        except SharedDiscontinuity:
            residual = None  # the error integral against df does not exist as an RS integral
        reports = []
        unverified = False
        for theorem in _applicable(f):
            fn = BOUNDS[theorem]
            try:
                reports.append(fn(f, g, u, p, Mode.PAPER, err))
            except HypothesisViolation:
                continue
            try:
                reports.append(fn(f, g, u, p, Mode.RIGOROUS, err))
            except (HypothesisViolation, SharedDiscontinuity):
                unverified = True
    except InvariantViolation as exc:
        return Verdict(case_id, (), Classification.ERROR, None, str(exc), True, p, u_mono)
    except RSQuadError as exc:
        return Verdict(case_id, (), Classification.ERROR, None, f"{type(exc).__name__}: {exc}", False, p, u_mono)
    reports = tuple(reports)
    if residual is not None and abs(residual) > IDENTITY_RTOL * err.scale:
        msg = f"identity residual {float(residual):.3e} exceeds tolerance"
        return Verdict(case_id, reports, Classification.ERROR, residual, msg, True, p, u_mono, err)
    if any(r.verdict is ReportVerdict.CLOSED_FORM_VIOLATION for r in reports):
        cls = Classification.CLOSED_FORM_VIOLATION
    elif unverified or not any(r.mode is Mode.RIGOROUS for r in reports):
        cls = Classification.UNVERIFIED_RIGOROUS
    else:
        cls = Classification.ALL_HOLD
    return Verdict(case_id, reports, cls, residual, "", False, p, u_mono, err)


def verify_case(case: CorpusCase) -> Verdict:
    return verify_functions(case.case_id, case.f, case.g, case.u, case.params)


def _verify_index(args) -> Verdict:
    seed, cls, i = args
    return verify_case(gen_case(seed, cls, i))


def worker_count() -> int:
    raw = os.environ.get("RSQUAD_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"RSQUAD_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def verify_corpus(seed: int, cls: str, n: int, workers: int | None = None) -> list[Verdict]:
    if n < 1:
        raise ValueError("n must be at least 1")
    if cls not in CLASSES:
        raise ValueError(f"class must be one of {', '.join(CLASSES)}")
    workers = worker_count() if workers is None else workers
    jobs = [(seed, cls, i) for i in range(n)]
    if workers <= 1 or n < 8:
        return [_verify_index(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, n)) as pool:
        return list(pool.map(_verify_index, jobs, chunksize=max(1, n // (4 * workers))))


def summarize(verdicts) -> dict:
    counts = {c: 0 for c in Classification}
    for v in verdicts:
        counts[v.classification] += 1
    return {
        "holds": counts[Classification.ALL_HOLD],
        "tight": sum(1 for v in verdicts if any(r.verdict is ReportVerdict.TIGHT for r in v.reports)),
        "closed_form_violations": counts[Classification.CLOSED_FORM_VIOLATION],
        "unverified": counts[Classification.UNVERIFIED_RIGOROUS],
        "errors": counts[Classification.ERROR],
    }


def corpus_report(seed: int, cls: str, n: int, verdicts) -> dict:
    return {
        "seed": seed,
        "class": cls,
        "n": n,
        "cases": [v.to_dict() for v in verdicts],
        "summary": summarize(verdicts),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


# -- sharpness -------------------------------------------------------------

@dataclass(frozen=True)
class SharpnessRow:
    construction: str
    theorem: Theorem
    alpha: Fraction
    true_error: Fraction
    bound: Fraction
    ratio: Fraction
    expected: Fraction

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "theorem": self.theorem.value,
            "alpha": str(self.alpha),
            "true_error": float(self.true_error),
            "bound": float(self.bound),
            "ratio": float(self.ratio),
            "expected": float(self.expected),
        }


def _constructions():
    """Extremal configurations on [0, 1] with x at the midpoint.

    Each entry: name, theorem, (f, u), alphas, expected ratio as a function of alpha.
    """
    half = Fraction(1, 2)
    t = identity(0, 1)
    lower = lambda al: (1 - al) / weight_constant(al)  # noqa: E731
    upper = lambda al: al / weight_constant(al)  # noqa: E731
    low_alphas = tuple(Fraction(v) for v in ("0", "1/4", "1/3", "1/2"))
    high_alphas = tuple(Fraction(v) for v in ("1/2", "2/3", "3/4", "1"))
    return (
        ("spike_f_linear_u", Theorem.BV, (spike(half, half), t), low_alphas, lower),
        ("step_at_a_f_linear_u", Theorem.BV, (spike(0, 1), t), high_alphas, upper),
        ("shifted_f_step_u", Theorem.LIPSCHITZ, (polynomial([-1, 1]), step(1)), low_alphas, lower),
        ("linear_f_spike_u", Theorem.LIPSCHITZ, (t, spike(half, half)), high_alphas, upper),
    )


def sharpness_suite() -> list[SharpnessRow]:
    """Ratios of true error to the closed-form bound on the extremal configurations."""
    rows = []
    one = constant(1)
    for name, theorem, (f, u), alphas, expected in _constructions():
        for al in alphas:
            p = QuadratureParams(0, 1, Fraction(1, 2), al)
            report = BOUNDS[theorem](f, one, u, p, Mode.PAPER)
            want = expected(al)
            if report.ratio != want:
                raise InvariantViolation(f"{name} at alpha={al}: ratio {report.ratio}, expected {want}")
            rows.append(SharpnessRow(name, theorem, al, report.true_error, report.bound, report.ratio, want))
    return rows
