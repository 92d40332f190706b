"""Command-line entry point.

Results go to stdout, progress and diagnostics to stderr.  Exit codes:
0 success, 2 bad arguments, 3 unreadable or malformed input, 4 refusal
because of size (too many patterns, n out of range).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from fractions import Fraction

from .core import expand_to_unit_demand, format_rational, parse_rational
from .enumeration import enumerate_classes, summary_line
from .errors import CSPError, KOutOfRange, NTooLarge, ParseError, PatternExplosion
from .formats import format_instance, read_classes, read_instance
from .metrics import CSV_HEADER, DEFAULT_PATTERN_CAP, csv_row, gaps, tighten_L, z_d_patterns

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SCALE = 4

log = logging.getLogger("irup")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def rational_arg(text: str) -> Fraction:
    try:
        value = parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an exact rational like 1/1, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("delta must be nonnegative")
    return value


# -- commands -------------------------------------------------------------


def cmd_classes(args) -> int:
    n = args.n
    started = time.perf_counter()
    hist: dict[int, int] = {}
    out = open(args.out, "w", encoding="ascii") if args.out else None

    def sink(c):
        if out is not None:
            out.write(c.to_line() + "\n")
        if args.hist:
            z = z_d_patterns(c.patterns, n)
            hist[z] = hist.get(z, 0) + 1

    try:
        total = enumerate_classes(
            n,
            sink if (out is not None or args.hist) else None,
            strategy=args.strategy,
            seed=args.seed,
            threads=args.threads,
        )
    finally:
        if out is not None:
            out.close()
    print(summary_line(n, total, started))
    if args.hist:
        for z, count in sorted(hist.items()):
            print(f"z_D={z} {count}")
    return EXIT_OK


def cmd_gap(args) -> int:
    parsed = [(path, read_instance(path)) for path in args.files]
    print(CSV_HEADER)
    for path, em in parsed:
        e = expand_to_unit_demand(em)
        if args.tighten_L:
            e = tighten_L(e)
        r = gaps(e, want_feasible=args.feasible, cap=args.cap)
        ident = os.path.splitext(os.path.basename(path))[0]
        print(csv_row(ident, e, r))
        if args.feasible:
            print(f"# {ident}: Delta = {format_rational(r.delta)}", file=sys.stderr)
    return EXIT_OK


def cmd_maxgap(args) -> int:
    from .search import MAXIMIZE, THRESHOLD, GapSearch

    mode = MAXIMIZE if args.maximize else THRESHOLD
    delta = args.delta if args.delta is not None else Fraction(0)
    started = time.perf_counter()
    res = GapSearch(args.n, delta, mode, args.strict, args.zd_floor).run(threads=args.threads)
    print(CSV_HEADER)
    for i, f in enumerate(res.found, start=1):
        print(f"# class {f.cls.to_line()}")
        print(f"# instance {f.instance}")
        print(csv_row(f"c{i}", f.instance, f.report))
    best = "-" if res.best is None else format_rational(res.best)
    elapsed = time.perf_counter() - started
    print(f"{args.n} {res.count} {best} {elapsed:.3f}")
    print(f"nodes {res.nodes}, pruned {res.pruned}", file=sys.stderr)
    return EXIT_OK


def cmd_realize(args) -> int:
    from .realization import realize

    for c in read_classes(args.file):
        e = realize(c)
        print(f"# {c.to_line()}")
        sys.stdout.write(format_instance(e.to_m_form()))
    return EXIT_OK


def cmd_wsg(args) -> int:
    from .wsg import count_weighted_games

    started = time.perf_counter()
    total = count_weighted_games(args.n, threads=args.threads)
    print(summary_line(args.n, total, started))
    return EXIT_OK


def cmd_export_ilp(args) -> int:
    from .ilp import big_m, variables, write_model

    if not 2 <= args.k <= args.n:
        raise KOutOfRange(f"k must satisfy 2 <= k <= n, got k={args.k}, n={args.n}")
    if args.out == "-":
        write_model(args.n, args.k, sys.stdout)
    else:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            write_model(args.n, args.k, fh)
    var = variables(args.n, args.k)
    print(
        f"M={big_m(args.n)} binary={len(var['binary'])} continuous={len(var['continuous'])} "
        f"integer={len(var['integer'])}",
        file=sys.stderr,
    )
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="irup",
        description="Exact experiments on the integer round-up property of unit-demand cutting stock.",
    )
    p.add_argument("--threads", type=positive_int, default=1, help="worker processes for subtree splitting")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more progress on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classes", help="enumerate all pattern-equivalence classes for n items")
    c.add_argument("n", type=positive_int)
    c.add_argument("--hist", action="store_true", help="print the number of classes per z_D")
    c.add_argument("--out", help="write the classes to this file, one per line")
    c.add_argument("--strategy", choices=["smallest", "random"], default="smallest")
    c.add_argument("--seed", type=int, default=None)
    c.set_defaults(func=cmd_classes)

    g = sub.add_parser("gap", help="gap report for instance files in m-form")
    g.add_argument("files", nargs="+")
    g.add_argument("--feasible", action="store_true", help="also compute z_C^f over all integer patterns")
    g.add_argument("--tighten-L", action="store_true", help="lower L to the longest proper pattern first")
    g.add_argument("--cap", type=positive_int, default=DEFAULT_PATTERN_CAP, help="pattern cap for --feasible")
    g.set_defaults(func=cmd_gap)

    m = sub.add_parser("maxgap", help="search classes with a large proper gap")
    m.add_argument("n", type=positive_int)
    m.add_argument("--delta", type=rational_arg, default=None, help="gap threshold p/q, default 0/1; a floor with --maximize")
    m.add_argument("--strict", action="store_true", help="require a gap strictly above delta")
    m.add_argument("--maximize", action="store_true", help="return the classes of maximum proper gap")
    m.add_argument("--zd-floor", type=positive_int, default=None, help="only classes with z_D at least this")
    m.set_defaults(func=cmd_maxgap)

    r = sub.add_parser("realize", help="integer instances for the classes in a class file")
    r.add_argument("file")
    r.set_defaults(func=cmd_realize)

    w = sub.add_parser("wsg", help="count weighted simple games with ordered voters")
    w.add_argument("n", type=positive_int)
    w.set_defaults(func=cmd_wsg)

    x = sub.add_parser("export-ilp", help="write the direct ILP model in LP format")
    x.add_argument("n", type=positive_int)
    x.add_argument("k", type=positive_int)
    x.add_argument("out", help="output path, or - for stdout")
    x.set_defaults(func=cmd_export_ilp)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except KOutOfRange as exc:
        print(f"irup: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PatternExplosion, NTooLarge) as exc:
        print(f"irup: refused: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except ParseError as exc:
        print(f"irup: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"irup: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CSPError as exc:
        print(f"irup: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
