"""Command-line front end: ``betabounds <command> [flags]``.

With ``--json`` every command prints one JSON object instead of plain text::

    {"command": "<name>", "ok": true|false, "result": {...} | null, "error": "<msg>" | null}
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import ENVELOPE_KINDS, OutOfRange, beta_bound_copulas, envelope
from .concordance import MeasureKind, measure
from .copula import CopulaSpecError, ShuffleError, copula_to_spec, load_copula, sample_copula
from .region import export_curve, render_svg, sample_region
from .verify import run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x: float) -> str:
    """Printable number: rounded to 12 places so exact results print exactly, no -0."""
    return format(round(float(x), 12) + 0.0, ".12g")


def _unit(text: str) -> float:
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return x


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="betabounds", description="Blomqvist's beta versus other measures of concordance.")
    p.add_argument("--json", action="store_true", help="wrap output in a JSON envelope")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate C(u, v)")
    e.add_argument("--copula", required=True, type=Path)
    e.add_argument("--u", required=True, type=_unit)
    e.add_argument("--v", required=True, type=_unit)

    m = sub.add_parser("measure", help="exact value of a measure")
    m.add_argument("--kind", required=True, choices=[k.value for k in MeasureKind])
    m.add_argument("--copula", required=True, type=Path)

    b = sub.add_parser("bounds", help="extremal copulas and envelopes for beta = t")
    b.add_argument("--t", required=True, type=float)
    b.add_argument("--measure", choices=[k.value for k in ENVELOPE_KINDS])

    r = sub.add_parser("region", help="write a region curve as csv, json or svg")
    r.add_argument("--measure", required=True, choices=[k.value for k in ENVELOPE_KINDS])
    r.add_argument("--resolution", type=int, default=201)
    r.add_argument("--format", required=True, choices=["csv", "json", "svg"])
    r.add_argument("--out", required=True, type=Path)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--tolerance", type=float, default=1e-9)
    v.add_argument("--seed", type=int, default=42)

    s = sub.add_parser("sample", help="draw points from a copula as CSV u,v")
    s.add_argument("--copula", required=True, type=Path)
    s.add_argument("--count", required=True, type=_positive)
    s.add_argument("--seed", required=True, type=int)

    # --json is accepted after the subcommand too
    for parser in (e, m, b, r, v, s):
        parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return p


# each command returns (exit code, result for the JSON envelope, plain text)


def _cmd_eval(args):
    c = load_copula(args.copula)
    value = float(c(args.u, args.v))
    return EXIT_OK, {"u": args.u, "v": args.v, "value": value}, fmt(value)


def _cmd_measure(args):
    c = load_copula(args.copula)
    value = measure(args.kind, c)
    return EXIT_OK, {"kind": args.kind, "value": value}, fmt(value)


def _cmd_bounds(args):
    lower, upper = beta_bound_copulas(args.t)
    kinds = [MeasureKind(args.measure)] if args.measure else list(ENVELOPE_KINDS)
    env = {k.value: [envelope(k, "lower", args.t), envelope(k, "upper", args.t)] for k in kinds}
    result = {
        "t": args.t,
        "lower": copula_to_spec(lower),
        "upper": copula_to_spec(upper),
        "envelopes": env,
    }
    lines = [
        "lower " + json.dumps(result["lower"], sort_keys=True),
        "upper " + json.dumps(result["upper"], sort_keys=True),
    ]
    lines += [f"{k} {fmt(lo)} {fmt(hi)}" for k, (lo, hi) in env.items()]
    return EXIT_OK, result, "\n".join(lines)


def _cmd_region(args):
    if args.resolution < 2:
        raise UsageError("--resolution must be at least 2")
    curve = sample_region(args.measure, args.resolution)
    data = render_svg(curve) if args.format == "svg" else export_curve(curve, args.format)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(data)
    result = {"measure": args.measure, "format": args.format, "path": str(args.out), "bytes": len(data)}
    return EXIT_OK, result, f"wrote {args.out} ({len(data)} bytes)"


def _cmd_verify(args):
    if args.tolerance <= 0:
        raise UsageError("--tolerance must be positive")
    checks = run_all(args.tolerance, args.seed)
    ok = all(c.passed for c in checks)
    result = {
        "passed": ok,
        "checks": [
            {"number": c.number, "name": c.name, "passed": c.passed, "detail": c.detail}
            for c in checks
        ],
    }
    text = "\n".join(c.line() for c in checks)
    text += f"\n{sum(c.passed for c in checks)}/{len(checks)} passed"
    return (EXIT_OK if ok else EXIT_FAIL), result, text


def _cmd_sample(args):
    c = load_copula(args.copula)
    pts = sample_copula(c, args.count, args.seed)
    if args.json:
        return EXIT_OK, {"count": args.count, "seed": args.seed, "points": pts.tolist()}, ""
    rows = ["u,v"] + [f"{u!r},{v!r}" for u, v in pts.tolist()]
    return EXIT_OK, None, "\n".join(rows)


COMMANDS = {
    "eval": _cmd_eval,
    "measure": _cmd_measure,
    "bounds": _cmd_bounds,
    "region": _cmd_region,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
}


def _emit(args_json: bool, command, code, result, text, error, out, err):
    if args_json:
        payload = {"command": command, "ok": code == EXIT_OK, "result": result, "error": error}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    if error is not None:
        err.write(f"betabounds: error: {error}\n")
    if text:
        out.write(text + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    parser = build_parser()
    command = None
    try:
        try:
            args = parser.parse_args(argv)
        except UsageError:
            err.write(parser.format_usage())
            raise
        command = args.command
        code, result, text = COMMANDS[command](args)
    except UsageError as exc:
        _emit(want_json, command, EXIT_USAGE, None, "", str(exc), out, err)
        return EXIT_USAGE
    except (CopulaSpecError, ShuffleError, OutOfRange, OSError, ValueError) as exc:
        _emit(want_json, command, EXIT_USAGE, None, "", str(exc), out, err)
        return EXIT_USAGE
    _emit(want_json, command, code, result, text, None, out, err)
    return code


def main() -> None:
    sys.exit(run())
