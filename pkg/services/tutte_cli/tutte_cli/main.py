#!/usr/bin/env python3
"""unitutte command line.

Usage:
    unitutte compute tutte --input u12.json
    unitutte compute dichromatic --input edge.json --vars b=1
    unitutte verify krs --enumerate 4
    unitutte verify delta-count --size 2
    unitutte grothendieck delta
    unitutte enumerate dmp --size 2
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import sympy
from pydantic import ValidationError
from sympy.polys.domains import QQ

from unitutte_core.algebra import MRPoly
from unitutte_core.config import settings
from unitutte_core.errors import AlgebraDomainError, UnitutteError, UnsupportedSystemError
from unitutte_core.log import configure_logging
from unitutte_core.norms import describe_monoid, system_named
from unitutte_core.schemas import PolyOut, TermOut, VerifyReport, Witness, parse_input

from tutte_cli.registry import (
    COUNTS,
    FAMILIES,
    IDENTITIES,
    KNOWN_COUNTS,
    global_check,
    invariant,
    load,
)

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Bad command-line usage that argparse cannot catch."""


def read_input(path: str):
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return load(parse_input(raw))


def parse_vars(text: str | None) -> dict:
    """'x=2,y=1/2' as rational constants."""
    out = {}
    if not text:
        return out
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep or not name.strip():
            raise InputError(f"bad substitution {part!r}; expected name=value")
        try:
            q = sympy.Rational(value.strip())
        except (TypeError, ValueError, sympy.SympifyError) as exc:
            raise InputError(f"bad value in {part!r}") from exc
        out[name.strip()] = QQ.from_sympy(q)
    return out


def substitute(p: MRPoly, values: dict) -> MRPoly:
    unknown = sorted(set(values) - set(p.sig.names))
    if unknown:
        raise AlgebraDomainError(
            f"unknown variables {', '.join(unknown)}; known: {', '.join(p.sig.names)}"
        )
    return p.specialize(values) if values else p


# --- Subcommands ---

def cmd_compute(args) -> int:
    family, x = read_input(args.input)
    poly, legend = invariant(args.invariant, family, args.prime)(x)
    poly = substitute(poly, parse_vars(args.vars))
    if args.format == "json":
        out = PolyOut(
            invariant=args.invariant,
            text=poly.render(),
            terms=[TermOut(**t) for t in poly.to_json_terms()],
            legend=legend,
        )
        print(out.model_dump_json())
    else:
        print(poly.render())
        for name, doc in (legend or {}).items():
            print(f"{name} = {json.dumps(doc, sort_keys=True)}")
    return EXIT_PASS


def _instances(args, family) -> list:
    out = []
    if args.input:
        fam, x = read_input(args.input)
        if fam.name != family.name:
            raise InputError(f"identity expects {family.name} input, got {fam.name}")
        out.append(x)
    if args.enumerate is not None:
        if family.enumerate is None:
            raise UnsupportedSystemError(f"{family.name}: enumeration unsupported; use --random")
        for k in range(args.enumerate + 1):
            out.extend(family.enumerate(k))
    if args.random:
        rng = random.Random(settings.seed)
        out.extend(family.random(rng, rng.randint(0, args.size)) for _ in range(args.random))
    if not out:
        raise InputError("give --input, --enumerate or --random")
    return out


def _report(report: VerifyReport, fmt: str) -> int:
    if fmt == "json":
        print(report.model_dump_json())
    else:
        for key, value in (report.counts or {}).items():
            print(f"{key} = {value}")
        if report.passed:
            print(f"PASS {report.instances} instances")
        else:
            print(f"FAIL {report.identity}")
            if report.witness is not None:
                print(report.witness.model_dump_json())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    name = args.identity
    if name in COUNTS:
        count = COUNTS[name](args.size)
        known = KNOWN_COUNTS.get((name, args.size))
        report = VerifyReport(
            identity=name,
            instances=1,
            passed=known is None or known == count,
            counts={f"{name}[{args.size}]": count},
        )
        if not report.passed:
            report.witness = Witness(
                identity=name, structure={"size": args.size}, left=str(count), right=str(known)
            )
        return _report(report, args.format)

    check = global_check(name)
    if check is not None:
        w = check()
        return _report(VerifyReport(identity=name, instances=1, passed=w is None, witness=w), args.format)

    ident = IDENTITIES.get(name)
    if ident is None:
        raise UnsupportedSystemError(f"unknown identity {name!r}")
    items = _instances(args, FAMILIES[ident.family])
    with ThreadPoolExecutor(max_workers=max(1, settings.threads)) as pool:
        results = list(pool.map(ident.check, items))
    failed = next((w for w in results if w is not None), None)
    logger.info("identity %s: %d instances, %s", name, len(items), "fail" if failed else "pass")
    report = VerifyReport(identity=name, instances=len(items), passed=failed is None, witness=failed)
    return _report(report, args.format)


def cmd_grothendieck(args) -> int:
    palette = tuple(args.palette.split(","))
    print(describe_monoid(system_named(args.system, palette)))
    return EXIT_PASS


def cmd_enumerate(args) -> int:
    family = FAMILIES.get(args.family)
    if family is None:
        known = ", ".join(FAMILIES)
        raise UnsupportedSystemError(f"unknown family {args.family!r}; expected one of {known}")
    if family.enumerate is None:
        raise UnsupportedSystemError(f"{family.name}: enumeration unsupported")
    system_doc = lambda x: family.system(x).to_doc(x)  # noqa: E731
    for k in range(args.size + 1):
        items = family.enumerate(k)
        if args.format == "json":
            docs = [system_doc(x) for x in items]
            print(json.dumps({"size": k, "count": len(items), "structures": docs}))
        else:
            print(f"{family.name}[{k}] = {len(items)}")
    return EXIT_PASS


# --- Entry point ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None, help="seed for random instances")
    common.add_argument("--threads", type=int, default=None, help="worker threads")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="unitutte", description="Universal Tutte characters")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="evaluate an invariant of one structure")
    p.add_argument("invariant")
    p.add_argument("--input", required=True, help="JSON structure file")
    p.add_argument("--vars", default=None, help="substitutions, e.g. x=2,y=1/2")
    p.add_argument("--prime", type=int, default=None, help="prime for arith-tutte-plocal")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", parents=[common], help="check an identity")
    p.add_argument("identity")
    p.add_argument("--input", default=None, help="JSON structure file")
    p.add_argument("--enumerate", type=int, default=None, metavar="N", help="all structures up to size N")
    p.add_argument("--random", type=int, default=0, metavar="K", help="K seeded random structures")
    p.add_argument("--size", type=int, default=2, help="size for counts and random structures")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grothendieck", parents=[common], help="generators and relations of a system")
    p.add_argument("system")
    p.add_argument("--palette", default="r,g", help="colors for the colored system")
    p.set_defaults(func=cmd_grothendieck)

    p = sub.add_parser("enumerate", parents=[common], help="list structures per size")
    p.add_argument("family")
    p.add_argument("--size", type=int, default=2)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        settings.threads = args.threads
    if args.seed is not None:
        settings.seed = args.seed
    configure_logging(args.log_level or settings.log_level, settings.log_json)

    try:
        return args.func(args)
    except (ValidationError, InputError, UnitutteError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
