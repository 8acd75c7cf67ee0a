"""Command line entry point: facets, rounds, experiment, gmi-only."""
import argparse
import logging
import os
import sys
import time

from . import cglp
from .harness import (HarnessError, RoundOptions, ValidityBreach, gap_experiment,
                      run_rounds)
from .instance_io import MpsError, read_mps, read_optima, write_report
from .octahedron import ParametricBody, render_svg
from .rowsystem import RowSystemError, alww_instance, from_tableau
from .simplex import OPTIMAL, extract_rows, solve_lp

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BREACH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="tworow", description="Two-row disjunctive cuts and separation rounds.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    f = sub.add_parser("facets", help="enumerate disjunctive hull facets of a two-row system")
    f.add_argument("--instance", default="builtin:alww",
                   help="builtin:alww or an MPS file (then give --rows)")
    f.add_argument("--rows", help="two basic variable names or indices, comma separated")
    f.add_argument("--mode", choices=cglp.MODES, default=cglp.MIP)
    f.add_argument("--check-ih", action="store_true", help="certify integer hull facets")
    f.add_argument("--svg", metavar="PATH", help="write one SVG per cut, PATH_<k>.svg")

    r = sub.add_parser("rounds", help="separation rounds on an MPS instance")
    _round_args(r)
    r.add_argument("--rounds", type=int, default=5)
    r.add_argument("--triangles", action="store_true")
    r.add_argument("--cones", action="store_true")
    r.add_argument("--strengthen", action="store_true")
    r.add_argument("--mode", choices=("mip", "binary"), default="mip")

    g = sub.add_parser("gmi-only", help="separation rounds with GMI cuts only")
    _round_args(g)
    g.add_argument("--rounds", type=int, default=5)

    e = sub.add_parser("experiment", help="random-objective gap study on the built-in system")
    e.add_argument("--objectives", type=int, default=1000)
    e.add_argument("--seed", type=int, default=1)
    return p


def _round_args(p):
    p.add_argument("mps", help="MPS file")
    p.add_argument("--optima", metavar="PATH", help="sidecar with name = value lines")
    p.add_argument("--report", metavar="PATH", help="CSV report destination")
    p.add_argument("--max-pairs", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None)


def _system_from_mps(path, rows_arg, out):
    inst = read_mps(path)
    if not rows_arg:
        raise _Usage("--rows is required with an MPS instance")
    names = [t.strip() for t in rows_arg.split(",")]
    if len(names) != 2:
        raise _Usage("--rows needs exactly two variables")
    idx = []
    for t in names:
        if t in inst.var_names:
            idx.append(inst.var_names.index(t))
        elif t.isdigit() and int(t) < inst.num_vars:
            idx.append(int(t))
        else:
            raise _Usage(f"unknown variable {t!r}")
    sol = solve_lp(inst)
    if sol.status != OPTIMAL:
        raise HarnessError(f"LP relaxation is {sol.status}")
    rows = extract_rows(sol, idx)
    ints = []
    for j, kind in sol.nonbasic_columns():
        ints.append(j < inst.num_vars and inst.is_integer[j])
    print(f"# {inst.name}: rows {names}, {len(rows[0].ray)} nonbasic columns", file=out)
    system = from_tableau(rows, ints)
    return system


class _Usage(Exception):
    pass


def cmd_facets(args, out):
    if args.instance == "builtin:alww":
        system = alww_instance()
    elif args.instance.startswith("builtin:"):
        raise _Usage(f"unknown builtin {args.instance!r}")
    else:
        system = _system_from_mps(args.instance, args.rows, out)
    t0 = time.perf_counter()
    cuts = cglp.enumerate_facets(system, args.mode)
    dt = time.perf_counter() - t0
    print(f"# mode={args.mode} facets={len(cuts)} bases={cuts.bases_visited} "
          f"candidates={cuts.candidates} time={dt:.2f}s", file=out)
    for k, cut in enumerate(cuts, 1):
        line = f"{k}: {cut.format()}"
        if args.check_ih and args.mode == cglp.MIP:
            cert = cglp.is_integer_hull_facet(system, cut)
            line += f" ; integer-hull-facet={'yes' if cert else 'no'}"
        print(line, file=out)
        if args.svg:
            root, ext = os.path.splitext(args.svg)
            body = ParametricBody.from_multipliers(cut.multipliers)
            with open(f"{root}_{k}{ext or '.svg'}", "w") as fh:
                fh.write(render_svg(body, system))
    return EXIT_OK


def _load_optimum(inst, path):
    if not path:
        raise _Usage("--optima is required for gap reporting")
    optima = read_optima(path)
    if inst.name not in optima:
        raise HarnessError(f"no optimum for {inst.name!r} in {path}")
    return optima[inst.name]


def cmd_rounds(args, out, gmi_only=False):
    inst = read_mps(args.mps)
    z_ip = _load_optimum(inst, args.optima)
    if gmi_only:
        opts = RoundOptions(args.rounds, max_pairs=args.max_pairs, time_limit=args.time_limit)
    else:
        opts = RoundOptions(args.rounds, True, args.triangles, args.cones, args.strengthen,
                            args.mode, args.max_pairs, args.time_limit)
    reports = run_rounds(inst, opts, z_ip)
    for r in reports:
        print(f"{r.instance} round {r.round}: gap closed {r.gap_closed_pct:.2f}% "
              f"added {r.cuts_added} deleted {r.cuts_deleted} "
              f"gen {r.t_generate:.3f}s lp {r.t_resolve:.3f}s", file=out)
    if args.report:
        write_report(reports, args.report)
    return EXIT_OK


def cmd_experiment(args, out):
    if args.objectives <= 0:
        raise _Usage("--objectives must be positive")
    system = alww_instance()
    mip = cglp.enumerate_facets(system, cglp.MIP)
    binary = cglp.enumerate_facets(system, cglp.BINARY)
    res = gap_experiment(system, mip, binary, args.objectives, args.seed)
    print(res.summary(), file=out)
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "facets":
            return cmd_facets(args, out)
        if args.command == "rounds":
            return cmd_rounds(args, out)
        if args.command == "gmi-only":
            return cmd_rounds(args, out, gmi_only=True)
        return cmd_experiment(args, out)
    except _Usage as e:
        print(f"tworow: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidityBreach as e:
        print(f"tworow: validity breach: {e}", file=sys.stderr)
        return EXIT_BREACH
    except (HarnessError, MpsError, RowSystemError, cglp.CglpError, OSError) as e:
        print(f"tworow: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
