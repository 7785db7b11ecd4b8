"""``steerage`` command line: ``analyze`` a state under a protocol, or run the worked ``demo`` examples.

Exit status: 0 for Paradox / NoContradiction, 2 for PremiseViolated, 1 for
any input error (diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .assemblage import AssemblageError
from .catalog import EXAMPLES
from .linalg import ShapeError
from .measurements import ProjectorError, Protocol, parse_protocol_file, parse_shorthand
from .paradox import DEFAULT_TOL, ParadoxReport, ToleranceAmbiguityError, Verdict, analyze, format_value
from .report import dumps
from .states import StateSpec, StateValidationError, builtin, parse_state_file

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PREMISE = 2

INPUT_ERRORS = (
    StateValidationError,
    ProjectorError,
    ShapeError,
    AssemblageError,
    ToleranceAmbiguityError,
    OSError,
    json.JSONDecodeError,
)


class CliInputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors, not premise failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    state: StateSpec
    protocol: Protocol
    tol: float
    fmt: str
    seed: int | None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliInputError(f"expected a comma-separated integer list, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliInputError(f"expected a comma-separated number list, got {text!r}") from None


def default_tol() -> float:
    raw = os.environ.get("STEERAGE_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise CliInputError(f"STEERAGE_TOL={raw!r} is not a number") from None


def resolve_config(args) -> RunConfig:
    alice = _int_list(args.alice) if args.alice else None
    if args.state:
        state = parse_state_file(Path(args.state).read_bytes(), alice_sites=alice)
    else:
        state = builtin(args.builtin, _float_list(args.params) if args.params else ())
        if alice is not None:
            state = state.with_alice(alice)

    alice_dims = state.shape.alice_dims
    if Path(args.protocol).is_file():
        protocol = parse_protocol_file(Path(args.protocol).read_bytes(), alice_dims)
    else:
        protocol = parse_shorthand(args.protocol, alice_dims)

    tol = args.tol if args.tol is not None else default_tol()
    if not 0 < tol < 0.1:
        raise CliInputError(f"tolerance must lie in (0, 0.1), got {tol}")
    return RunConfig(state, protocol, tol, args.format, args.seed)


def render_text(report: ParadoxReport) -> str:
    lines = [
        f"verdict:      {report.verdict.value}",
        f"settings:     k={report.k} ({', '.join(report.setting_labels)})",
    ]
    if report.verdict is Verdict.PREMISE_VIOLATED:
        v = report.violation
        lines.append(
            f"premise:      conditional state for setting {report.setting_labels[v.setting]}, "
            f"outcome {report.outcome_labels[v.setting][v.outcome]} is mixed (eigen gap {v.eigen_gap:.3g})"
        )
        return "\n".join(lines) + "\n"

    lines += [
        f"delta_k:      {format_value(report.delta_k)}",
        f"case:         {report.case_label.value}",
        f"paradox:      {report.paradox_string}",
        f"requirement:  {'met (ray sets differ)' if report.requirement_met else 'not met (ray sets coincide)'}",
        "classes:",
    ]
    cls = report.classification
    for c in cls.classes:
        members = ", ".join(
            f"{report.setting_labels[m.setting]}:{report.outcome_labels[m.setting][m.outcome]}" for m in c.members
        )
        weights = ", ".join(
            f"{report.setting_labels[l]}={format_value(w)}" for l, w in c.per_setting_weight.items()
        )
        lines.append(f"  [{c.index}] weight {format_value(c.canonical_weight)}  per-setting {{{weights}}}  members {members}")
    if cls.zero_outcomes:
        zeros = ", ".join(f"{report.setting_labels[l]}:{report.outcome_labels[l][a]}" for l, a in cls.zero_outcomes)
        lines.append(f"zero outcomes: {zeros}")
    if report.certificate is not None:
        cert = report.certificate
        lines.append(
            f"certificate:  quantum trace {format_value(cert.quantum_trace)}, "
            f"classical trace {format_value(cert.classical_trace)}"
        )
    return "\n".join(lines) + "\n"


def cmd_analyze(args, out=None) -> int:
    out = out or sys.stdout
    cfg = resolve_config(args)
    report = analyze(cfg.state, None, cfg.protocol, cfg.tol)
    if cfg.fmt == "structured":
        out.write(dumps(report, seed=cfg.seed))
    else:
        out.write(render_text(report))
    return EXIT_PREMISE if report.verdict is Verdict.PREMISE_VIOLATED else EXIT_OK


def _summary(verdict, delta, case) -> str:
    d = "n/a" if delta is None else format_value(delta)
    return f"{verdict.value}, δ={d}, {case.value}"


def cmd_demo(args, out=None) -> int:
    out = out or sys.stdout
    if args.name is not None and args.name not in EXAMPLES:
        raise CliInputError(f"unknown demo {args.name!r}; choose from {', '.join(EXAMPLES)}")
    names = [args.name] if args.name else list(EXAMPLES)
    failures = 0
    for name in names:
        ex = EXAMPLES[name]
        report = ex.run()
        ok = ex.matches(report)
        failures += not ok
        out.write(
            f"{name}: expected {_summary(ex.verdict, ex.delta, ex.case)} | "
            f"computed {_summary(report.verdict, report.delta_k, report.case_label)} | "
            f"{report.paradox_string} [{'ok' if ok else 'MISMATCH'}]\n"
        )
    return EXIT_INPUT if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="steerage", description="Steering paradox analysis for pure conditional states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="analyze a state under a measurement protocol")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", metavar="FILE", help="JSON state document")
    src.add_argument("--builtin", metavar="NAME", help="named example state")
    p.add_argument("--params", metavar="LIST", help="comma-separated parameters for --builtin (radians)")
    p.add_argument("--protocol", required=True, metavar="SPEC|FILE", help='shorthand like "zz,yx" or a JSON file')
    p.add_argument("--alice", metavar="LIST", help="comma-separated Alice site indices")
    p.add_argument("--tol", type=float, default=None, help=f"tolerance (default $STEERAGE_TOL or {DEFAULT_TOL:g})")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--seed", type=int, default=None, help="recorded in structured reports")
    p.set_defaults(func=cmd_analyze)

    d = sub.add_parser("demo", help="run the worked examples and compare with expectations")
    d.add_argument("name", nargs="?", help=f"one of {', '.join(EXAMPLES)}; all when omitted")
    d.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors exit 1
        return int(exc.code or 0)
    if args.command == "analyze" and args.params and not args.builtin:
        print("steerage: error: --params requires --builtin", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (CliInputError, *INPUT_ERRORS) as exc:
        print(f"steerage: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
