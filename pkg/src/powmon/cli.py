"""Command-line interface: ``powmon atoms|factor|verify|census-sweep``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input or
configuration, 3 a search bound refused the request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .atoms import (
    DEFAULT_CENSUS_BOUND,
    CensusBoundError,
    Variant,
    atom_census,
    atom_flag,
    cache_path,
    cached_census,
    is_member,
    is_unit,
)
from .factor import (
    LengthSet,
    is_nr,
    length_set_truncated,
    minimal_factorizations,
    minimal_length_set,
)
from .ground import CYCLIC, CapacityError, GroundError, GroundMonoid, cyclic, load_table, natural_segment
from .powset import format_mask, parse_subset
from .verify import DEFAULT_GRID, SUITES, format_summary, reports_json, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BOUND = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def parse_range(text: str) -> list[int]:
    """``5..13``, ``3,5,7`` or a mix such as ``3,7..9``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if lo > hi:
                    raise ConfigError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise ConfigError(f"bad range {text!r}: {exc}") from None
    if not out:
        raise ConfigError(f"empty range {text!r}")
    return out


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_ground(p: argparse.ArgumentParser, required: bool = True) -> None:
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--cyclic", type=_positive, metavar="N", help="the group Z/NZ")
    grp.add_argument("--natural", type=_positive, metavar="CAP", help="(N,+) truncated at CAP")
    grp.add_argument("--table", type=Path, metavar="PATH", help="Cayley table file")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.REDUCED.value)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", dest="fmt", choices=["text", "json", "csv"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powmon", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atoms", help="list every atom of a power monoid")
    _add_ground(p)
    _add_common(p)
    p.add_argument("--census-bound", type=_positive, default=None)
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")

    p = sub.add_parser("factor", help="minimal factorizations and length sets of one set")
    _add_ground(p)
    _add_common(p)
    p.add_argument("--set", dest="set_literal", required=True, metavar="{r1,r2,...}")
    p.add_argument("--lmax", type=_positive, default=None, help="also report L(X) up to LMAX")

    p = sub.add_parser("verify", help="run the verification suites")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--suite", action="append", metavar="NAME", help=f"one of {', '.join(SUITES)}")
    grp.add_argument("--all", action="store_true")
    p.add_argument("--n", dest="grid", default=None, metavar="RANGE", help="moduli, e.g. 5..13")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    p.add_argument("--output", type=Path, default=None, help="also write the JSON reports here")

    p = sub.add_parser("census-sweep", help="compute and cache censuses for a range of moduli")
    p.add_argument("--n", dest="grid", required=True, metavar="RANGE")
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.REDUCED.value)
    p.add_argument("--census-bound", type=_positive, default=None)
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--refresh", action="store_true")
    return parser


def _ground(args: argparse.Namespace) -> GroundMonoid:
    if args.cyclic is not None:
        return cyclic(args.cyclic)
    if args.natural is not None:
        return natural_segment(args.natural)
    return load_table(args.table)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# commands ----------------------------------------------------------------------------


def cmd_atoms(args: argparse.Namespace) -> int:
    g = _ground(args)
    variant = Variant(args.variant)
    if args.no_cache:
        table = atom_census(g, variant, bound=args.census_bound, workers=args.workers)
    else:
        table = cached_census(g, variant, args.cache_dir, bound=args.census_bound, workers=args.workers)
    if args.fmt == "json":
        _emit(table.dumps())
    elif args.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["set", "size"])
        for a in table.atoms:
            w.writerow([format_mask(a), a.bit_count()])
        _emit(buf.getvalue())
    else:
        lines = [f"# {len(table)} atoms of the {variant.value} power monoid of {g.name}"]
        lines += [format_mask(a) for a in table.atoms]
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_factor(args: argparse.Namespace) -> int:
    g = _ground(args)
    variant = Variant(args.variant)
    try:
        X = parse_subset(args.set_literal, g)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not is_member(g, X.mask, variant):
        raise ConfigError(f"{X} is not an element of the {variant.value} power monoid of {g.name}")
    unit = is_unit(g, X.mask, variant)
    classes = minimal_factorizations(X, variant, workers=args.workers)
    lengths = minimal_length_set(X, variant) if unit else LengthSet(frozenset(len(c) for c in classes))
    nr = [is_nr(c.word) if g.kind == CYCLIC and len(c) else None for c in classes]
    full = length_set_truncated(X, variant, args.lmax) if args.lmax else None
    atom = not unit and atom_flag(g, X.mask, variant)
    if args.fmt == "json":
        doc = {
            "ground": g.name,
            "variant": variant.value,
            "set": str(X),
            "unit": unit,
            "atom": atom,
            "classes": [c.strings for c in classes],
            "nr": nr,
            "minimal_lengths": lengths.to_json(),
        }
        if full is not None:
            doc["lengths"] = full.to_json()
        _emit(json.dumps(doc, indent=1))
    elif args.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "length", "nr"])
        for c, flag in zip(classes, nr):
            w.writerow(["+".join(c.strings), len(c), "" if flag is None else int(flag)])
        _emit(buf.getvalue())
    else:
        lines = [f"{X} in the {variant.value} power monoid of {g.name}"]
        if unit:
            lines.append("unit: only the empty factorization")
        elif atom:
            lines.append("atom")
        lines.append(f"{len(classes)} minimal factorization class(es)")
        for c, flag in zip(classes, nr):
            if len(c):
                lines.append(f"  {c}" + ("  [NR]" if flag else ""))
        lines.append(f"L^m = {lengths}")
        if full is not None:
            lines.append(f"L up to {args.lmax} = {full}")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.all else args.suite
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    grid = parse_range(args.grid) if args.grid else list(DEFAULT_GRID)
    reports = run_suite(names, grid, workers=args.workers)
    if args.output:
        args.output.write_text(reports_json(reports) + "\n")
    _emit(reports_json(reports) if args.fmt == "json" else format_summary(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_census_sweep(args: argparse.Namespace) -> int:
    variant = Variant(args.variant)
    bound = args.census_bound or DEFAULT_CENSUS_BOUND
    for n in parse_range(args.grid):
        g = cyclic(n)
        table = cached_census(g, variant, args.cache_dir, bound=bound, workers=args.workers,
                              refresh=args.refresh)
        _emit(f"{g.name}\t{len(table)} atoms\t{cache_path(g, variant, args.cache_dir)}")
    return EXIT_OK


COMMANDS = {
    "atoms": cmd_atoms,
    "factor": cmd_factor,
    "verify": cmd_verify,
    "census-sweep": cmd_census_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except CensusBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (ConfigError, GroundError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
