"""Command-line front end.

Every subcommand reads a matrix file (``-`` for stdin) and prints its result
on stdout.  Diagnostics go to stderr.  Exit codes: 0 success, 2 input or
validation error, 3 Groebner pair budget exceeded, 4 a law was violated in
``random``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import harness, reescore
from .groebner import GroebnerBudgetExceeded, colon_power, minimal_generators, pair_budget
from .matfile import MatrixFileError, parse_matrix_file
from .polymatrix import hilbert_burch_generators
from .polyring import FieldSpec, Polynomial

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_VIOLATION = 4


class InputError(Exception):
    """Bad input; the message already carries the file position."""


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_input(path: str) -> reescore.PresentationInput:
    text, source = _read(path)
    mf = parse_matrix_file(text, source)
    try:
        inp = reescore.make_input(mf.matrix)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None
    for w in inp.warnings:
        logging.getLogger("reesalg").warning("%s: %s", source, w)
    return inp


def _bideg(f: Polynomial) -> str:
    bd = f.bidegree()
    return f"({bd[0]},{bd[1]})" if bd is not None else "(mixed)"


def _print_gens(gens, out, with_bidegree: bool = True):
    for g in reescore.sort_generators(list(gens)):
        out.write(f"{_bideg(g)}  {g}\n" if with_bidegree else f"{g}\n")


# --- subcommands ---------------------------------------------------------------------


def cmd_gens(args, out) -> int:
    inp = load_input(args.file)
    for i, a in enumerate(hilbert_burch_generators(inp.phi), start=1):
        out.write(f"a{i} = {a}\n")
    return EXIT_OK


def cmd_sym(args, out) -> int:
    inp = load_input(args.file)
    for j, g in enumerate(reescore.t_times(inp.phi), start=1):
        out.write(f"l{j} = {g}    bidegree {_bideg(g)}\n")
    return EXIT_OK


def cmd_dual(args, out) -> int:
    if args.level < 1:
        raise InputError("--level must be at least 1")
    inp = load_input(args.file)
    chain = reescore.dual_ladder(inp, args.method, level_cap=args.level - 1, pivot=args.pivot,
                                 run_to_cap=True)
    state = chain[-1]
    out.write(f"B_{state.level} ({state.B.rows}x{state.B.cols}):\n{state.B}\n")
    out.write(f"minimal generators of L + I_{inp.d}(B_{state.level}):\n")
    _print_gens(minimal_generators(state.dual_ideal), out)
    return EXIT_OK


def cmd_saturate(args, out) -> int:
    inp = load_input(args.file)
    L = reescore.symmetric_ideal(inp.phi)
    if args.power is not None:
        if args.power < 0:
            raise InputError("--power must be non-negative")
        if args.power == 0:
            _print_gens(L.generators, out)
            return EXIT_OK
        C = colon_power(L, reescore.x_ideal(inp.ring), args.power)
        _print_gens(minimal_generators(C), out)
        return EXIT_OK
    A, sat_index, ladder = reescore.rees_via_saturation(inp)
    for k, I in enumerate(ladder):
        mins = minimal_generators(I)
        out.write(f"L:(x)^{k}  {len(mins)} minimal generators\n")
    out.write(f"sat_index {sat_index}\n")
    _print_gens(minimal_generators(A), out)
    return EXIT_OK


def cmd_fiber(args, out) -> int:
    inp = load_input(args.file)
    A, _, _ = reescore.rees_via_saturation(inp)
    fib = reescore.special_fiber(A)
    if fib.is_principal:
        out.write(f"principal, degree {fib.degree}\n{fib.generator}\n")
    else:
        out.write(f"not principal, {len(fib.generators)} generators\n")
        for g in fib.generators:
            out.write(f"{g}\n")
    return EXIT_OK


def cmd_report(args, out) -> int:
    inp = load_input(args.file)
    r = reescore.run_full_report(inp, method=args.method, pivot=args.pivot)
    if args.json:
        out.write(json.dumps(r.to_json(), indent=2, sort_keys=False) + "\n")
        return EXIT_OK
    out.write(f"d={r.d} m={r.m} n={r.n}  linear_type={r.linear_type}\n")
    out.write(f"G_d: {r.Gd_ok}\n")
    for k, v in r.heights.items():
        out.write(f"height {k}: {v}\n")
    out.write(f"sat_index: {r.sat_index}\n")
    out.write(f"stabilization_level: {r.stabilization_level}\n")
    out.write(f"first colon equals L + I_d(B_1): {r.first_colon_equal}\n")
    out.write(f"forms_equal: {r.forms_equal}\n")
    if r.fiber.is_principal:
        out.write(f"fiber: principal of degree {r.fiber.degree}\n")
    else:
        out.write(f"fiber: {len(r.fiber.generators)} generators\n")
    out.write(f"relation_type: {r.relation_type}\n")
    for w in r.warnings:
        out.write(f"warning: {w}\n")
    out.write("minimal generators of L:(x)^inf:\n")
    _print_gens(r.minimal_generators, out)
    return EXIT_OK


def cmd_random(args, out) -> int:
    try:
        fld = FieldSpec.from_string(args.field)
        spec = harness.InstanceSpec(args.d, args.m, args.n, fld, args.seed, args.trials)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    s = harness.run_batch(spec, dump_dir=args.dump_dir, workers=args.workers,
                          max_pairs=args.max_pairs, method=args.method)
    if args.json:
        out.write(json.dumps(s.to_json(), indent=2) + "\n")
    else:
        for k, v in s.to_json().items():
            out.write(f"{k}: {v}\n")
    return EXIT_VIOLATION if s.failed else EXIT_OK


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reesalg", description=__doc__.split("\n\n")[0])
    p.add_argument("--max-pairs", type=int, default=None,
                   help="abort any Groebner computation after this many S-pairs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="matrix file, or - for stdin")
        return sp

    with_file("gens", "Hilbert-Burch generators").set_defaults(func=cmd_gens)
    with_file("sym", "generators of the symmetric algebra ideal").set_defaults(func=cmd_sym)

    sp = with_file("dual", "iterated Jacobian dual B_i")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--method", choices=reescore.METHODS, default="general")
    sp.add_argument("--pivot", choices=reescore.PIVOTS, default="first")
    sp.set_defaults(func=cmd_dual)

    sp = with_file("saturate", "colon ladder L:(x)^k")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--power", type=int, default=None)
    g.add_argument("--infinity", action="store_true", default=True)
    sp.set_defaults(func=cmd_saturate)

    with_file("fiber", "special fiber generator").set_defaults(func=cmd_fiber)

    sp = with_file("report", "full report")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--method", choices=reescore.METHODS, default="general")
    sp.add_argument("--pivot", choices=reescore.PIVOTS, default="first")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("random", help="batch of random instances")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--field", default="32003")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--method", choices=reescore.METHODS, default="general")
    sp.add_argument("--dump-dir", default="counterexamples")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_random)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        with pair_budget(args.max_pairs):
            return args.func(args, out)
    except (MatrixFileError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GroebnerBudgetExceeded as exc:
        print(f"error: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
