"""Command-line front end.

Exit codes: 0 success, 1 a closed-form bound was exceeded, 2 bad input or a
failed hypothesis, 3 an internal guarantee failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .bounds import BOUNDS, Mode, Theorem, Verdict as ReportVerdict, quad_error
from .composite import composite_bound, composite_remainder, composite_sum, uniform, with_tags
from .errors import (
    HypothesisViolation,
    InvariantViolation,
    NoConvergence,
    RSQuadError,
    SharedDiscontinuity,
)
from .funcmodel import PiecewiseFunc, from_shorthand, parse_funcspec, to_fraction
from .harness import CLASSES, corpus_report, report_json, sharpness_suite, verify_corpus
from .kernel import QuadratureParams
from .rules import KINDS, RuleKind
from .stieltjes import rs_integral_exact, rs_integral_refine

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
THEOREM_CHOICES = {"bv": Theorem.BV, "lipschitz": Theorem.LIPSCHITZ, "monotone": Theorem.MONOTONE}
REPORT_COLUMNS = ("case_id", "theorem", "mode", "bound", "true_error", "ratio", "verdict")


class InputError(Exception):
    pass


# -- argument handling -------------------------------------------------------

def _interval(text: str | None) -> tuple[Fraction, Fraction] | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"--domain expects 'a,b', got {text!r}")
    a, b = (to_fraction(p.strip(), "--domain") for p in parts)
    if not a < b:
        raise InputError(f"--domain needs a < b, got {text!r}")
    return a, b


def _load(spec: str, name: str, domain) -> PiecewiseFunc:
    """A funcspec file, an inline JSON document or a built-in shorthand."""
    text = spec.strip()
    path = Path(spec)
    if text.startswith("{"):
        return parse_funcspec(text)
    if path.is_file():
        return parse_funcspec(path.read_text())
    if text.endswith(".json"):
        raise InputError(f"--{name}: file {spec} not found")
    a, b = domain or (Fraction(0), Fraction(1))
    return from_shorthand(text, a, b)


def _functions(args, names=("f", "g", "u")) -> tuple[dict, tuple[Fraction, Fraction]]:
    domain = _interval(args.domain)
    if domain is None:
        # take the domain from the first funcspec that carries one
        for name in names:
            spec = getattr(args, name)
            if spec.strip().startswith("{") or Path(spec).is_file():
                h = _load(spec, name, None)
                domain = (h.a, h.b)
                break
    funcs = {name: _load(getattr(args, name), name, domain) for name in names}
    if domain is None:
        domain = (Fraction(0), Fraction(1))
    return funcs, domain


def _params(args, a, b) -> QuadratureParams:
    if args.rule and args.rule != "general":
        if args.rule == "simpson":
            kind = RuleKind.simpson()
        else:
            if args.x is None:
                raise InputError(f"--rule {args.rule} needs --x")
            kind = RuleKind(args.rule, to_fraction(args.x, "--x"))
        if args.alpha is not None and to_fraction(args.alpha, "--alpha") != kind.alpha:
            raise InputError(f"--rule {args.rule} fixes alpha={kind.alpha}")
        return kind.params(a, b)
    if args.x is None or args.alpha is None:
        raise InputError("--x and --alpha are required unless --rule names a fixed member")
    return QuadratureParams(a, b, to_fraction(args.x, "--x"), to_fraction(args.alpha, "--alpha"))


# -- output ------------------------------------------------------------------

def _num(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _render(rows: list[dict], fmt: str, document: dict | None = None) -> str:
    rows = [{k: _num(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        return json.dumps(document if document is not None else {"rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for r in rows:
            writer.writerow(_csv_cell(v) for v in r.values())
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _report_row(case_id: int, report) -> dict:
    d = report.to_dict()
    return {"case_id": case_id, **{k: d[k] for k in REPORT_COLUMNS[1:]}}


# -- subcommands -------------------------------------------------------------

def cmd_integrate(args) -> int:
    funcs, (a, b) = _functions(args)
    exact = rs_integral_exact(funcs["f"], funcs["g"], funcs["u"], a, b)
    oracle = rs_integral_refine(funcs["f"], funcs["g"], funcs["u"], a, b, tol=args.tol)
    row = {
        "exact": exact.value,
        "exact_rational": str(exact.value),
        "oracle": oracle.value,
        "oracle_radius": oracle.error_radius,
    }
    _emit(_render([row], args.format), args.output)
    return EXIT_OK


def cmd_quad(args) -> int:
    funcs, (a, b) = _functions(args)
    p = _params(args, a, b)
    err = quad_error(funcs["f"], funcs["g"], funcs["u"], p)
    row = {
        "x": p.x, "alpha": p.alpha, "value": err.quadrature, "integral": err.integral,
        "error": err.signed, "error_rational": str(err.signed),
    }
    _emit(_render([row], args.format), args.output)
    return EXIT_OK


def cmd_bound(args) -> int:
    funcs, (a, b) = _functions(args)
    p = _params(args, a, b)
    f, g, u = funcs["f"], funcs["g"], funcs["u"]
    err = quad_error(f, g, u, p)
    explicit = args.theorem != "all"
    theorems = [THEOREM_CHOICES[args.theorem]] if explicit else list(THEOREM_CHOICES.values())
    reports = []
    for theorem in theorems:
        for mode in (Mode.PAPER, Mode.RIGOROUS):
            try:
                reports.append(BOUNDS[theorem](f, g, u, p, mode, err))
            except HypothesisViolation:
                # an explicitly requested theorem must at least yield its closed form
                if explicit and mode is Mode.PAPER:
                    raise
            except SharedDiscontinuity:
                if mode is Mode.PAPER:
                    raise
    if not reports:
        raise InputError("no bound applies: every hypothesis check failed")
    rows = [_report_row(0, r) for r in reports]
    doc = {
        "x": float(p.x), "alpha": float(p.alpha), "quadrature": float(err.quadrature),
        "integral": float(err.integral), "reports": [r.to_dict() for r in reports],
    }
    _emit(_render(rows, args.format, doc if args.format == "json" else None), args.output)
    violated = any(r.verdict is ReportVerdict.CLOSED_FORM_VIOLATION for r in reports)
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_composite(args) -> int:
    funcs, (a, b) = _functions(args, ("f", "u"))
    tags = _tags(args.tags)
    if args.nodes:
        part = with_tags([to_fraction(t.strip(), "--nodes") for t in args.nodes.split(",")], tags)
    else:
        part = uniform(a, b, args.uniform, tags)
    alpha = to_fraction(args.alpha if args.alpha is not None else "1/3", "--alpha")
    f, u = funcs["f"], funcs["u"]
    s = composite_sum(f, u, part, alpha)
    r = composite_remainder(f, u, part, alpha)
    row = {
        "n": len(part.nodes) - 1, "alpha": alpha, "sum": s, "remainder": r, "remainder_rational": str(r),
        "bound_summed": composite_bound(f, u, part, alpha, "summed"),
        "bound_global": composite_bound(f, u, part, alpha, "global"),
    }
    _emit(_render([row], args.format), args.output)
    return EXIT_OK


def _tags(text: str):
    if text in ("midpoint", "left"):
        return text
    if text.startswith("list:"):
        return [to_fraction(t.strip(), "--tags") for t in text[5:].split(",")]
    raise InputError(f"--tags expects midpoint, left or list:t0,t1,..., got {text!r}")


def cmd_verify(args) -> int:
    verdicts = verify_corpus(args.seed, args.cls, args.n)
    report = corpus_report(args.seed, args.cls, args.n, verdicts)
    if args.format == "json":
        _emit(report_json(report), args.output)
    else:
        rows = [_report_row(v.case_id, r) for v in verdicts for r in v.reports]
        rows += [
            {"case_id": v.case_id, "theorem": "", "mode": "", "bound": None,
             "true_error": None, "ratio": None, "verdict": v.classification.value}
            for v in verdicts if not v.reports
        ]
        rows.sort(key=lambda r: r["case_id"])
        _emit(_render(rows, "csv"), args.output)
    if any(v.invariant_failure for v in verdicts):
        return EXIT_INTERNAL
    if report["summary"]["closed_form_violations"]:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sharpness(args) -> int:
    rows = [r.to_dict() for r in sharpness_suite()]
    _emit(_render(rows, args.format), args.output)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsquad", description="Certified Riemann-Stieltjes quadrature.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--output", help="write to this file instead of stdout")

    def functions(p, names=("f", "g", "u")):
        help_text = "funcspec file, inline JSON, or linear | one | step@c | spike@c:v"
        p.add_argument("--f", required=True, help=help_text)
        if "g" in names:
            p.add_argument("--g", default="one", help=help_text + " (default one)")
        p.add_argument("--u", default="linear", help=help_text + " (default linear)")
        p.add_argument("--domain", help="integration interval 'a,b' (default: the funcspec domain or 0,1)")

    def rule(p):
        p.add_argument("--x", help="node in [a, (a+b)/2]")
        p.add_argument("--alpha", help="mixing weight in [0, 1]")
        p.add_argument("--rule", choices=KINDS, help="named member; fixes alpha (and x for simpson)")

    p = sub.add_parser("integrate", help="exact and oracle value of the integral of f g du")
    functions(p)
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("quad", help="rule value and signed error")
    functions(p)
    rule(p)
    common(p)
    p.set_defaults(run=cmd_quad)

    p = sub.add_parser("bound", help="error bounds in both modes")
    functions(p)
    rule(p)
    p.add_argument("--theorem", choices=("all", *THEOREM_CHOICES), default="all")
    common(p)
    p.set_defaults(run=cmd_bound)

    p = sub.add_parser("composite", help="composite rule, remainder and its bounds (g = 1)")
    functions(p, ("f", "u"))
    p.add_argument("--alpha", help="mixing weight in [0, 1] (default 1/3)")
    part = p.add_mutually_exclusive_group(required=True)
    part.add_argument("--nodes", help="comma-separated partition nodes")
    part.add_argument("--uniform", type=int, help="number of equal subintervals")
    p.add_argument("--tags", default="midpoint", help="midpoint | left | list:t0,t1,...")
    common(p)
    p.set_defaults(run=cmd_composite)

    p = sub.add_parser("verify", help="verify every bound over a seeded corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=CLASSES, required=True)
    p.add_argument("--n", type=int, default=200)
    common(p, "json")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("sharpness", help="ratio table for the extremal configurations")
    common(p)
    p.set_defaults(run=cmd_sharpness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InvariantViolation as exc:
        print(f"rsquad: internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except NoConvergence as exc:
        print(f"rsquad: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except HypothesisViolation as exc:
        print(f"rsquad: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, RSQuadError, ValueError, OSError) as exc:
        print(f"rsquad: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
