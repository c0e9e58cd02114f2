"""Command line front end.

One subcommand per capability: validate, propagate, whatif, sensitivity,
bounds, lint, bbn, risk, serve. Every data command takes --format table
(default, numbers to 6 significant digits) or --format json (full
precision, stable key order). Exit codes: 0 success, 1 errors in the
input or findings of error severity, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .analysis import (
    DEFAULT_LOW_CONFIDENCE_THRESHOLD,
    DEFAULT_MINOR_RESIDUAL_CAP,
    chain_of_confidence_risk,
    dependence_bounds,
    lint,
    sensitivity,
)
from .bbn import query
from .caseformat import CaseDocument, ParseError, parse_case, parse_document
from .model import MULTI_SUBCLAIM_KINDS, Severity
from .propagation import propagate
from .service import (
    bounds_payload,
    create_server,
    lint_payload,
    propagation_payload,
    sensitivity_payload,
)


@dataclass(frozen=True)
class CommandOutcome:
    """Exit code plus what to print where."""

    exit_code: int
    output: str = ""
    error_output: str = ""


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Raise instead of exiting so run_command can return an outcome.
    def error(self, message: str) -> None:
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _columns(rows: list[tuple[str, ...]]) -> str:
    if not rows:
        return ""
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    )


def _override(text: str) -> tuple[str, float]:
    node_id, sep, raw = text.partition("=")
    if not sep or not node_id:
        raise argparse.ArgumentTypeError(f"expected ID=VALUE, got {text!r}")
    try:
        return node_id, float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"value {raw!r} for {node_id!r} is not a number"
        ) from None


def _evidence(text: str) -> tuple[str, str]:
    name, sep, state = text.partition("=")
    if not sep or not name or not state:
        raise argparse.ArgumentTypeError(f"expected VAR=STATE, got {text!r}")
    return name, state


def _load(path: str) -> CaseDocument:
    return parse_case(Path(path).read_text(encoding="utf-8"))


def _cmd_validate(args: argparse.Namespace) -> CommandOutcome:
    _, findings = parse_document(Path(args.file).read_text(encoding="utf-8"))
    errors = sum(1 for f in findings if f.severity is Severity.ERROR)
    warnings = len(findings) - errors
    exit_code = 1 if errors else 0
    if args.format == "json":
        payload = {
            "file": args.file,
            "findings": [
                {
                    "severity": f.severity.value,
                    "node": f.node,
                    "message": f.message,
                }
                for f in findings
            ],
            "errors": errors,
            "warnings": warnings,
        }
        return CommandOutcome(exit_code, json.dumps(payload, indent=2))
    lines = [str(f) for f in findings]
    lines.append(f"{errors} errors, {warnings} warnings")
    return CommandOutcome(exit_code, "\n".join(lines))


def _propagation_table(doc: CaseDocument, result, overrides: dict) -> str:
    case = doc.case
    rows = [("node", "confidence")]
    for node in case.nodes:
        marker = " *" if node.id in overrides else ""
        rows.append((node.id + marker, _fmt(result.values[node.id])))
    lines = [_columns(rows), "", f"top {case.top}: {_fmt(result.values[case.top])}"]
    for warning in result.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


def _cmd_propagate(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    overrides = dict(args.set or [])
    result = propagate(doc.case, overrides)
    if args.format == "json":
        payload = {"file": args.file, "overrides": overrides}
        payload.update(propagation_payload(doc.case, result))
        return CommandOutcome(0, json.dumps(payload, indent=2))
    return CommandOutcome(0, _propagation_table(doc, result, overrides))


def _cmd_whatif(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    overrides = dict(args.set)
    baseline = propagate(doc.case)
    result = propagate(doc.case, overrides)
    case = doc.case
    if args.format == "json":
        payload = {
            "file": args.file,
            "overrides": overrides,
            "baseline_top": baseline.values[case.top],
        }
        payload.update(propagation_payload(case, result))
        return CommandOutcome(0, json.dumps(payload, indent=2))
    rows = [("node", "baseline", "whatif")]
    for node in case.nodes:
        before = baseline.values[node.id]
        after = result.values[node.id]
        marker = " *" if node.id in overrides else ""
        rows.append((node.id + marker, _fmt(before), _fmt(after)))
    top_line = (
        f"top {case.top}: {_fmt(baseline.values[case.top])} -> "
        f"{_fmt(result.values[case.top])}"
    )
    return CommandOutcome(0, "\n".join([_columns(rows), "", top_line]))


def _cmd_sensitivity(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    entries = sensitivity(doc.case, args.delta)
    if args.format == "json":
        payload = {"file": args.file}
        payload.update(sensitivity_payload(args.delta, entries))
        return CommandOutcome(0, json.dumps(payload, indent=2))
    rows = [("leaf", "derivative", "top at 0", "top at 1", "")]
    ordered = sorted(entries, key=lambda e: (-e.derivative, e.leaf))
    for e in ordered:
        rows.append(
            (
                e.leaf,
                _fmt(e.derivative),
                _fmt(e.at_zero),
                _fmt(e.at_one),
                "one-sided" if e.one_sided else "",
            )
        )
    return CommandOutcome(0, _columns(rows))


def _cmd_bounds(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    case = doc.case
    baseline = propagate(case)
    if args.block is not None:
        all_bounds = [dependence_bounds(case, args.block, baseline)]
    else:
        all_bounds = [
            dependence_bounds(case, block.id, baseline)
            for block in case.blocks
            if block.kind in MULTI_SUBCLAIM_KINDS
        ]
    if args.format == "json":
        payload = {
            "file": args.file,
            "blocks": [bounds_payload(b) for b in all_bounds],
        }
        return CommandOutcome(0, json.dumps(payload, indent=2))
    rows = [("block", "low", "point", "high")]
    for b in all_bounds:
        rows.append((b.block, _fmt(b.low), _fmt(b.point), _fmt(b.high)))
    return CommandOutcome(0, _columns(rows))


def _cmd_lint(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    findings = lint(doc.case, args.low_threshold, args.minor_cap)
    errors = sum(1 for f in findings if f.severity is Severity.ERROR)
    exit_code = 1 if errors else 0
    if args.format == "json":
        payload = {"file": args.file}
        payload.update(lint_payload(findings))
        payload["errors"] = errors
        payload["warnings"] = len(findings) - errors
        return CommandOutcome(exit_code, json.dumps(payload, indent=2))
    lines = [str(f) for f in findings]
    lines.append(f"{errors} errors, {len(findings) - errors} warnings")
    return CommandOutcome(exit_code, "\n".join(lines))


def _cmd_bbn(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    net = doc.networks.get(args.network)
    if net is None:
        known = ", ".join(sorted(doc.networks)) or "none"
        raise ValueError(f"unknown network {args.network!r} (available: {known})")
    evidence = dict(args.evidence or [])
    distribution = query(net, args.query, evidence)
    if args.format == "json":
        payload = {
            "file": args.file,
            "network": args.network,
            "target": args.query,
            "evidence": evidence,
            "distribution": distribution,
        }
        return CommandOutcome(0, json.dumps(payload, indent=2))
    rows = [("state", "probability")]
    for state, p in distribution.items():
        rows.append((state, _fmt(p)))
    return CommandOutcome(0, _columns(rows))


def _cmd_risk(args: argparse.Namespace) -> CommandOutcome:
    risk = chain_of_confidence_risk(args.p_ok, args.r_ok, args.r_notok)
    if args.format == "json":
        payload = {
            "p_ok": args.p_ok,
            "r_ok": args.r_ok,
            "r_not_ok": args.r_notok,
            "risk": risk,
        }
        return CommandOutcome(0, json.dumps(payload, indent=2))
    return CommandOutcome(0, f"risk: {_fmt(risk)}")


def _cmd_serve(args: argparse.Namespace) -> CommandOutcome:
    doc = _load(args.file)
    ui_dir = Path(args.ui) if args.ui else Path("frontend") / "dist"
    server = create_server(doc, args.host, args.port, ui_dir)
    host, port = server.server_address[:2]
    print(f"serving {args.file} at http://{host}:{port}/ (ctrl-c to stop)")
    sys.stdout.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return CommandOutcome(0)


def _build_parser() -> _Parser:
    parser = _Parser(prog="confprop", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, with_file: bool = True):
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        if with_file:
            sub.add_argument("file", help="case document (confprop/1 JSON)")
        sub.add_argument(
            "--format",
            choices=("table", "json"),
            default="table",
            help="output format (default: table)",
        )
        return sub

    add("validate", _cmd_validate, "check a case document and list findings")

    sub = add("propagate", _cmd_propagate, "compute every node's confidence")
    sub.add_argument(
        "--set",
        action="append",
        type=_override,
        metavar="ID=VALUE",
        help="pin a leaf before propagating (repeatable)",
    )

    sub = add("whatif", _cmd_whatif, "compare baseline against pinned leaves")
    sub.add_argument(
        "--set",
        action="append",
        type=_override,
        metavar="ID=VALUE",
        required=True,
        help="pin a leaf (repeatable, at least one)",
    )

    sub = add("sensitivity", _cmd_sensitivity, "per-leaf effect on the top claim")
    sub.add_argument(
        "--delta",
        type=float,
        default=0.01,
        help="finite difference half-width (default: 0.01)",
    )

    sub = add("bounds", _cmd_bounds, "dependence envelope per block")
    sub.add_argument("--block", help="restrict to one block id")

    sub = add("lint", _cmd_lint, "check the argument against the lint rules")
    sub.add_argument(
        "--low-threshold",
        dest="low_threshold",
        type=float,
        default=DEFAULT_LOW_CONFIDENCE_THRESHOLD,
        help="low-confidence warning threshold (default: 0.5)",
    )
    sub.add_argument(
        "--minor-cap",
        dest="minor_cap",
        type=int,
        default=DEFAULT_MINOR_RESIDUAL_CAP,
        help="tolerated minor residual count (default: 10)",
    )

    sub = add("bbn", _cmd_bbn, "query an embedded belief network")
    sub.add_argument("--network", required=True, help="network name")
    sub.add_argument("--query", required=True, metavar="VAR", help="target variable")
    sub.add_argument(
        "--evidence",
        action="append",
        type=_evidence,
        metavar="VAR=STATE",
        help="observed state (repeatable)",
    )

    sub = add("risk", _cmd_risk, "expected risk given assurance confidence", with_file=False)
    sub.add_argument("--p-ok", dest="p_ok", type=float, required=True)
    sub.add_argument("--r-ok", dest="r_ok", type=float, required=True)
    sub.add_argument("--r-notok", dest="r_notok", type=float, required=True)

    sub = add("serve", _cmd_serve, "serve the case over HTTP for the UI")
    sub.add_argument("--port", type=int, default=8080)
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument(
        "--ui",
        help="directory with built UI assets (default: frontend/dist if present)",
    )
    return parser


def run_command(argv: Sequence[str]) -> CommandOutcome:
    """Run one invocation and report the outcome without exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        return CommandOutcome(2, error_output=str(exc))
    except SystemExit as exc:  # --help prints and exits inside argparse
        return CommandOutcome(int(exc.code or 0))
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        return CommandOutcome(1, error_output=f"error: {exc}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    outcome = run_command(sys.argv[1:] if argv is None else argv)
    if outcome.output:
        print(outcome.output)
    if outcome.error_output:
        print(outcome.error_output, file=sys.stderr)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
