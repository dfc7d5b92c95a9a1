"""Command-line front end.

    qforge verify --family clsxy --m-max 3 --order 60
    qforge pair-check --seed E3 --n-max 10 --order 40
    qforge expand --name partitions --order 6
    qforge catalog

Exit codes: 0 all cells pass, 1 some mismatch, 2 usage error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bailey import verify_pair
from .identities import (
    FAMILIES,
    CellSpec,
    ParamOutOfRange,
    UnknownFamily,
    default_jobs,
    get_family,
    verify_cells,
    verify_family,
)
from .qcore import ProductSpec, QSeries, pochhammer_inf, poch_inf
from .seeds import CATALOG_NAMES, UnknownSeed, catalog, catalog_get

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UnknownConstruct(KeyError):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own; raise instead so run() owns the exit code
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _positive(kind):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{kind} must be an integer, not {text!r}")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{kind} must be >= 1")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qforge", description="Exact q-series identity verification.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--order", type=_positive("order"), default=None,
                        help="truncation order (default: family default, or $QFORGE_DEFAULT_ORDER)")
        sp.add_argument("--format", choices=("json", "tsv"), default="json")
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")

    v = sub.add_parser("verify", help="verify identity families")
    v.add_argument("--family", default=None, help="family name, or 'all'")
    v.add_argument("--family-file", default=None, help="JSON file with explicit cells")
    v.add_argument("--m-max", type=_positive("m-max"), default=4)
    v.add_argument("--jobs", type=_positive("jobs"), default=None)
    common(v)

    pc = sub.add_parser("pair-check", help="check the defining relation of a seed pair")
    pc.add_argument("--seed", required=True, choices=CATALOG_NAMES)
    pc.add_argument("--n-max", type=_positive("n-max"), default=10)
    common(pc)

    e = sub.add_parser("expand", help="print the coefficients of a named series")
    e.add_argument("--name", required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--a", type=int, default=0)
    e.add_argument("--order", type=_positive("order"), default=20)

    c = sub.add_parser("catalog", help="list seed pairs and families")
    c.add_argument("--format", choices=("json", "tsv"), default="json")
    c.add_argument("--out", default=None)
    return p


def _default_order(fallback):
    env = os.environ.get("QFORGE_DEFAULT_ORDER")
    if env is None:
        return fallback
    try:
        v = int(env)
    except ValueError:
        raise UsageError(f"QFORGE_DEFAULT_ORDER must be an integer, not {env!r}")
    if v < 1:
        raise UsageError("QFORGE_DEFAULT_ORDER must be >= 1")
    return v


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def load_family_file(path: str) -> tuple[str, list, int | None]:
    """Read ``{"name", "order"?, "lhs_dilation"?, "cells": [CellSpec JSON, ...]}``."""
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "cells" not in obj:
        raise UsageError(f"{path}: expected an object with a 'cells' list")
    k = int(obj.get("lhs_dilation", 1))
    cells = [CellSpec.from_json(c, k) for c in obj["cells"]]
    order = obj.get("order")
    return obj.get("name", os.path.basename(path)), cells, None if order is None else int(order)


def _verify(args) -> int:
    timings = not args.no_timings
    jobs = args.jobs or default_jobs()
    if args.family_file:
        if args.family:
            raise UsageError("give --family or --family-file, not both")
        name, cells, file_order = load_family_file(args.family_file)
        order = args.order or _default_order(file_order or 100)
        report = verify_cells(name, cells, order, jobs)
        _emit(report.dumps(args.format, timings), args.out)
        return EXIT_OK if report.passed else EXIT_MISMATCH
    if not args.family:
        raise UsageError("verify needs --family or --family-file")
    names = list(FAMILIES) if args.family == "all" else [args.family]
    reports = []
    for name in names:
        fam = get_family(name)
        order = args.order or _default_order(fam.default_order)
        if args.m_max < fam.m_min:
            if len(names) > 1:
                continue
            raise UsageError(f"{name} starts at m = {fam.m_min}")
        reports.append(verify_family(name, args.m_max, order, jobs))
    if len(reports) == 1:
        text = reports[0].dumps(args.format, timings)
    elif args.format == "json":
        text = json.dumps([r.to_json(timings) for r in reports], indent=2) + "\n"
    else:
        text = reports[0].to_tsv(timings) + "".join(r.to_tsv(timings).split("\n", 1)[1] for r in reports[1:])
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def _pair_check(args) -> int:
    order = args.order or _default_order(40)
    report = verify_pair(catalog_get(args.seed).pair, args.n_max, order)
    _emit(report.dumps(args.format, not args.no_timings), args.out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def construct(name: str, m: int, a: int, order) -> QSeries:
    """Resolve a named series: partitions, distinct-partitions, <family>-lhs, <family>-rhs."""
    if name == "partitions":
        return pochhammer_inf(ProductSpec((poch_inf(1, 1, -1),)), order)
    if name == "distinct-partitions":
        return pochhammer_inf(ProductSpec((poch_inf(1, 1, 1, a_sign=-1),)), order)
    fam, _, side = name.rpartition("-")
    if side in ("lhs", "rhs") and fam in FAMILIES:
        cell = FAMILIES[fam].cell(m, a)
        return cell.evaluate_lhs(order) if side == "lhs" else cell.evaluate_rhs(order)
    raise UnknownConstruct(name)


def _fmt(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else str(e)


def _expand(args) -> int:
    s = construct(args.name, args.m, args.a, args.order)
    start = min(Fraction(0), s.valuation)
    step = Fraction(1, s.den)
    lines = [f"{_fmt(start + i * step)}\t{c}" for i, c in enumerate(s.dense(start))]
    sys.stdout.write("\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def _catalog(args) -> int:
    seeds = [s.to_json() for s in catalog()]
    fams = [{"name": f.name, "m_min": f.m_min, "default_order": f.default_order,
             "lhs_dilation": f.lhs_dilation, "description": f.description} for f in FAMILIES.values()]
    if args.format == "json":
        text = json.dumps({"seeds": seeds, "families": fams}, indent=2) + "\n"
    else:
        rows = ["kind\tname\tdetail"]
        rows += [f"seed\t{s['name']}\tx={s['x']}" for s in seeds]
        rows += [f"family\t{f['name']}\tdefault_order={f['default_order']}" for f in fams]
        text = "\n".join(rows) + "\n"
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"verify": _verify, "pair-check": _pair_check, "expand": _expand, "catalog": _catalog}


def run(argv: list | None = None) -> int:
    """Execute one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(str(e).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (UnknownFamily, UnknownConstruct, UnknownSeed) as e:
        print(f"qforge: unknown name {e.args[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    except (ParamOutOfRange, json.JSONDecodeError, OSError) as e:
        print(f"qforge: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f"qforge: internal error: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
