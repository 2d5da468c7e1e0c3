"""Command-line front end.

Exit codes: 0 success, 1 mathematical mismatch, 2 input error,
3 resource guard (infinite field or field too large).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import autgroup as ag
from .errors import InputError, LeibalgError, MalformedSpec, ResourceGuard
from .exactfield import Field, FieldElement, field_make
from .leibniz import Algebra, algebra_from_json
from .reports import (aut_generic_report, aut_L1_report, aut_L2_report, build_algebra, check_report,
                      sweep_rows, sweep_table)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    field_spec: str | None = None
    algebra: str | None = None
    file: str | None = None
    lambda_: str | None = None
    primes: list[int] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    workers: int = 1


def _field(config: RunConfig) -> Field:
    if config.field_spec is None:
        raise MalformedSpec("--field is required")
    return field_make(config.field_spec)


def _resolve_algebra(config: RunConfig) -> tuple[Algebra, str | None, FieldElement | None]:
    if config.file:
        if config.algebra:
            raise MalformedSpec("give either --algebra or --file, not both")
        try:
            data = json.loads(Path(config.file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedSpec(f"cannot read algebra file: {exc}") from exc
        L = algebra_from_json(data)
        if config.field_spec and field_make(config.field_spec) != L.field:
            raise MalformedSpec("--field disagrees with the file's field")
        return L, None, None
    if config.algebra not in ("L1", "L2"):
        raise MalformedSpec("--algebra must be L1 or L2 (or use --file)")
    F = _field(config)
    if config.algebra == "L1":
        if config.lambda_ is not None:
            raise MalformedSpec("--lambda only applies to L2")
        return build_algebra("L1", F), "L1", None
    if config.lambda_ is None:
        raise MalformedSpec("L2 needs --lambda")
    lam = F.parse(config.lambda_)
    return build_algebra("L2", F, lam), "L2", lam


def cmd_check(config: RunConfig) -> tuple[int, dict]:
    L, name, lam = _resolve_algebra(config)
    ok, report = check_report(L, name, lam)
    return (EXIT_OK if ok else EXIT_MISMATCH), report


def cmd_aut(config: RunConfig) -> tuple[int, dict]:
    L, name, lam = _resolve_algebra(config)
    F = L.field
    if F.modulus is None:
        raise ag.InfiniteField("automorphism enumeration needs a prime field")
    if F.modulus > ag.PRUNED_MAX_P:
        raise ag.FieldTooLarge(f"GF({F.modulus}) exceeds the enumeration limit p <= {ag.PRUNED_MAX_P}")
    if name == "L1":
        ok, report = aut_L1_report(F, config.workers)
    elif name == "L2":
        ok, report = aut_L2_report(F, lam, config.workers)
    else:
        ok, report = aut_generic_report(L, config.workers)
    return (EXIT_OK if ok else EXIT_MISMATCH), report


def cmd_sweep(config: RunConfig) -> tuple[int, dict]:
    if not config.primes:
        raise MalformedSpec("--primes must list at least one prime")
    for p in config.primes:
        Field.gf(p)
        if p > ag.PRUNED_MAX_P:
            raise ag.FieldTooLarge(f"GF({p}) exceeds the enumeration limit p <= {ag.PRUNED_MAX_P}")
    algebras = [config.algebra] if config.algebra else ["L1", "L2"]
    if any(a not in ("L1", "L2") for a in algebras):
        raise MalformedSpec("sweep supports --algebra L1 or L2")
    ok, report = sweep_rows(algebras, sorted(set(config.primes)), config.workers)
    return (EXIT_OK if ok else EXIT_MISMATCH), report


def render_text(report: dict) -> str:
    if report["command"] == "sweep":
        return sweep_table(report)
    lines: list[str] = []

    def walk(obj, indent=0):
        pad = "  " * indent
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                walk(v, indent + 1)
            elif isinstance(v, list) and v and isinstance(v[0], list):
                lines.append(f"{pad}{k}: {json.dumps(v)}")
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")

    walk(report)
    return "\n".join(lines)


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(report) + "\n"
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leibalg", description="Leibniz algebra invariants and automorphism groups")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--field", dest="field_spec", help="gf:<p> or rationals")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes for enumeration (default: $LEIBALG_WORKERS or 1)")
    for name in ("check", "aut"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--algebra", choices=("L1", "L2"))
        p.add_argument("--file", help="algebra JSON document")
        p.add_argument("--lambda", dest="lambda_", help="nonzero field element for L2")
    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("--algebra", choices=("L1", "L2"))
    p.add_argument("--primes", type=_parse_primes, default=[])
    return parser


COMMANDS = {"check": cmd_check, "aut": cmd_aut, "sweep": cmd_sweep}


def _attach_values(argv: list[str]) -> list[str]:
    # argparse reads "--lambda -2/3" as two flags; glue the value on
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a == "--lambda":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_values(list(argv)))
    workers = args.workers
    if workers is None:
        try:
            workers = ag.resolve_workers(None)
        except ValueError:
            print("leibalg: LEIBALG_WORKERS must be an integer", file=sys.stderr)
            return EXIT_INPUT
    config = RunConfig(
        command=args.command,
        field_spec=args.field_spec,
        algebra=args.algebra,
        file=getattr(args, "file", None),
        lambda_=getattr(args, "lambda_", None),
        primes=getattr(args, "primes", []),
        output=args.output,
        format=args.format,
        workers=max(1, workers),
    )
    try:
        code, report = COMMANDS[config.command](config)
    except ResourceGuard as exc:
        print(f"leibalg: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, LeibalgError) as exc:
        print(f"leibalg: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(report, config.format)
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
