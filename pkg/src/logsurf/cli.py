"""Command-line front door.

Exit codes: 0 ok, 2 validation failure, 3 parse error, 4 ambiguous
configuration, 5 not pseudo-effective.  Reports go to stdout; every error
goes to stderr and nothing is written to stdout on an error path.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import logpair, mmp, zariski
from .errors import AmbiguousConfiguration, LogSurfaceError, NotPseudoEffective
from .surface import LogSurface, picard_number, validate
from .surfacefile import ParseError, format_class, format_rational, format_terms, loads, parse_class, parse_rational

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_AMBIGUOUS = 4
EXIT_NOT_PSEF = 5


class CommandError(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


def _q(x) -> str:
    return format_rational(x) if isinstance(x, Fraction) else str(x)


def _qmap(d) -> dict:
    return {k: _q(v) for k, v in d.items()}


def _load(path: str) -> tuple[LogSurface, list[str]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CommandError(EXIT_PARSE, {"error": "ParseError", "message": str(exc)}) from None
    try:
        X, warnings = loads(text)
    except ParseError as exc:
        raise CommandError(EXIT_PARSE, {"error": "ParseError", "message": str(exc)}) from None
    except (LogSurfaceError, ValueError) as exc:
        raise CommandError(
            EXIT_VALIDATION, {"error": "ConstructionError", "message": str(exc) or type(exc).__name__}
        ) from None
    violations = validate(X)
    if violations:
        raise CommandError(
            EXIT_VALIDATION,
            {"error": "ValidationFailed", "violations": [{"code": v.code, "detail": v.detail} for v in violations]},
        )
    return X, warnings


def _parse_theta(X: LogSurface, text: str) -> dict[str, Fraction]:
    theta = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, coeff = part.partition("=")
        theta[name.strip()] = parse_rational(coeff.strip() or "1")
    if not theta:
        raise ParseError("empty theta")
    for name in theta:
        if not X.has_curve(name):
            raise ParseError(f"unknown curve {name!r} in theta")
    return theta


def cmd_validate(X: LogSurface, args) -> dict:
    return {"valid": True, "violations": []}


def cmd_classify(X: LogSurface, args) -> dict:
    pc = logpair.classify(X)
    pb = logpair.log_pullback(X)
    return {
        "kind": pc.kind.value,
        "certified": pc.certified,
        "nklt": [n for n in X.names if n in pc.nklt_locus],
        "nlc": [n for n in X.names if n in pc.nlc_locus],
        "discrepancies": _qmap(pb.discrepancies),
        "delta_Y": _qmap(pb.delta_Y),
    }


def _mmp_report(X: LogSurface, outcome: mmp.MMPOutcome) -> dict:
    bounds = mmp.check_extremal_bound(outcome)
    rational = mmp.rationality_trace(outcome)
    report = {
        "outcome": outcome.kind.value,
        "rho_initial": picard_number(X),
        "trace": [
            {
                "step": i,
                "curve": s.contracted_curve,
                "degree": _q(s.degree),
                "rho_before": s.rho_before,
                "rho_after": s.rho_after,
            }
            for i, s in enumerate(outcome.trace)
        ],
        "final": {
            "contracted": [n for n in X.names if n in outcome.final.contracted],
            "picard_number": picard_number(outcome.final),
        },
    }
    if outcome.witness is not None:
        report["extremal"] = {
            "kind": outcome.witness.kind.value,
            "curve": outcome.witness.curve,
            "degree": _q(outcome.witness.degree),
        }
    if outcome.fiber_class is not None:
        report["fiber_class"] = format_class(X, outcome.fiber_class)
    checks = {
        "extremal_bound": [
            {"label": b.label, "degree": _q(b.degree), "bound": b.bound, "passed": b.passed} for b in bounds
        ],
        "step_bound": len(outcome.trace) <= picard_number(X) - 1,
        "rationality": {
            "per_surface": rational,
            "preserved": all(b or not a for a, b in zip(rational, rational[1:])),
        },
    }
    try:
        z = zariski.zariski_decompose(X, X.adjoint_class())
    except NotPseudoEffective:
        z = None
    if outcome.kind is mmp.OutcomeKind.MINIMAL_MODEL:
        dec = outcome.decomposition
        report["decomposition"] = {
            "pullback": format_class(X, dec.pullback_class),
            "E": _qmap(dec.E),
        }
        report["kappa_via_abundance"] = logpair.kappa_via_abundance(outcome.final)
        checks["uniqueness"] = mmp.uniqueness_check(X)
        matched = z is not None and z.P == dec.pullback_class and z.N == dec.E
        checks["zariski"] = "match" if matched else "mismatch"
    else:
        report["decomposition"] = None
        checks["uniqueness"] = "n/a"
        checks["zariski"] = "consistent: not pseudo-effective" if z is None else "mismatch"
    report["checks"] = checks
    return report


def cmd_mmp(X: LogSurface, args) -> dict:
    try:
        outcome = mmp.mmp_run(X, args.tiebreak)
    except AmbiguousConfiguration as exc:
        raise CommandError(EXIT_AMBIGUOUS, {"error": "AmbiguousConfiguration", "message": str(exc)}) from None
    return _mmp_report(X, outcome)


def _class_arg(X: LogSurface, expr: str | None):
    if expr is None:
        return X.adjoint_class(), "K + Delta"
    return parse_class(X, expr), expr


def cmd_zariski(X: LogSurface, args) -> dict:
    D, label = _class_arg(X, args.cls)
    try:
        z = zariski.zariski_decompose(X, D)
    except NotPseudoEffective as exc:
        raise CommandError(
            EXIT_NOT_PSEF, {"error": "NotPseudoEffective", "message": str(exc), "support": list(exc.support)}
        ) from None
    return {
        "class": label,
        "P": format_class(X, z.P),
        "N": _qmap(z.N),
        "support_gram": [[_q(x) for x in row] for row in z.support_gram],
        "support_minors": [_q(x) for x in z.support_minors],
    }


def cmd_lct(X: LogSurface, args) -> dict:
    theta = _parse_theta(X, args.theta)
    t = logpair.lct(X, theta)
    return {"theta": _qmap(theta), "lct": "inf" if t == logpair.INFINITY else _q(t)}


def cmd_pullback(X: LogSurface, args) -> dict:
    D, label = _class_arg(X, args.cls)
    corr = X.pullback_correction(D)
    pulled = X.pullback(D)
    expression = format_class(X, D)
    extra = format_terms((corr[n], n) for n in X.names if n in corr)
    if extra != "0":
        expression = extra if expression == "0" else f"{expression} {extra if extra.startswith('-') else '+ ' + extra}"
        expression = expression.replace("+ -", "- ")
    return {
        "class": label,
        "expression": expression,
        "pullback": format_class(X, pulled),
        "corrections": _qmap({n: corr[n] for n in X.names if n in corr}),
        "self_intersection_on_X": _q(X.intersect(pulled, pulled)),
    }


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "mmp": cmd_mmp,
    "zariski": cmd_zariski,
    "lct": cmd_lct,
    "pullback": cmd_pullback,
}


def _text(command: str, report: dict) -> str:
    lines = [f"{command}:"]
    if command == "mmp":
        lines.append(f"  outcome: {report['outcome']} (rho = {report['rho_initial']})")
        for s in report["trace"]:
            lines.append(
                f"  step {s['step']}: contract {s['curve']}  -(K+D).C = {s['degree']}  "
                f"rho {s['rho_before']} -> {s['rho_after']}"
            )
        if "extremal" in report:
            e = report["extremal"]
            lines.append(f"  extremal: {e['kind']} on {e['curve']} (degree {e['degree']})")
        if report.get("decomposition"):
            d = report["decomposition"]
            lines.append(f"  K + D = ({d['pullback']}) + " + (format_terms(
                (Fraction(v), k) for k, v in d["E"].items()) if d["E"] else "0"))
        for k, v in report["checks"].items():
            lines.append(f"  check {k}: {json.dumps(v)}")
        return "\n".join(lines) + "\n"
    for k, v in report.items():
        lines.append(f"  {k}: {v if isinstance(v, str) else json.dumps(v)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logsurf", description="Exact computations on log surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--json", dest="trace", action="store_false", help="JSON report (default)")
        mode.add_argument("--trace", dest="trace", action="store_true", help="human-readable text")
        p.set_defaults(trace=False)
        p.add_argument("--tiebreak", default="list", help="list, reversed, rotated or rotated:k")
        if name in ("zariski", "pullback"):
            p.add_argument("--class", dest="cls", default=None, help="class expression, default K + Delta")
        if name == "lct":
            p.add_argument("--theta", required=True, help="e.g. 'C=1' or 'L1=1/2,L2=1'")
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.tiebreak not in mmp.TIEBREAKS and not args.tiebreak.startswith("rotated:"):
            raise CommandError(EXIT_PARSE, {"error": "ParseError", "message": f"bad --tiebreak {args.tiebreak!r}"})
        X, warnings = _load(args.file)
        try:
            report = COMMANDS[args.command](X, args)
        except ParseError as exc:
            raise CommandError(EXIT_PARSE, {"error": "ParseError", "message": str(exc)}) from None
        except (LogSurfaceError, ValueError) as exc:
            raise CommandError(
                EXIT_VALIDATION, {"error": type(exc).__name__, "message": str(exc)}
            ) from None
    except CommandError as exc:
        stderr.write(json.dumps(exc.payload, indent=2) + "\n")
        return exc.code
    if warnings:
        report["warnings"] = warnings
    stdout.write(_text(args.command, report) if args.trace else json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
