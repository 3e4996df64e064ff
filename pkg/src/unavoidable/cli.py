"""Command-line interface.

Exit codes: 0 success or witness found, 1 valid run with nothing found,
2 usage or input error, 3 budget exceeded, 4 a certified bound failed.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import ceil, comb

from .analysis import (
    EXACT_DISTANCE_MAX_N,
    count_directed_triangles,
    lower_bound_distance,
    transitivity_distance_exact,
    upper_bound_distance,
)
from .core import Color, make_dk, make_layered, random_coloring, random_tournament, verify_dk_witness, verify_fk_witness
from .dk import DkConfig, find_dk
from .errors import BudgetExceeded, CertificateViolation, ParseError, PreconditionError, UnavoidableError, VertexRangeError
from .experiments import fnt_sweep, tripartition_stats
from .fk import DrcConfig, as_fraction, find_fk, lower_bound_experiment
from .formats import (
    deserialize_dk_witness,
    deserialize_fk_witness,
    deserialize_tournament,
    parse_coloring,
    serialize,
    serialize_result,
)
from .transitivize import transitivize

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4


def _fraction_arg(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _emit(text: str, path: str | None, out) -> None:
    if path and path != "-":
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _fmt(x) -> str:
    return f"{float(x):.6f}"


# -- subcommands ---------------------------------------------------------------

def cmd_gen(args, out):
    if args.kind == "coloring":
        if args.n is None:
            raise PreconditionError("gen coloring needs --n")
        total = comb(args.n, 2)
        if args.m is not None:
            m = args.m
        elif args.epsilon is not None:
            m = ceil(args.epsilon * total)
        else:
            raise PreconditionError("gen coloring needs --m or --epsilon")
        obj = random_coloring(args.n, m, args.seed)
        note = f"# seed {args.seed} m {m}\n"
    elif args.kind == "tournament":
        if args.n is None:
            raise PreconditionError("gen tournament needs --n")
        obj = random_tournament(args.n, args.seed)
        note = f"# seed {args.seed}\n"
    elif args.kind == "dk":
        if args.k is None:
            raise PreconditionError("gen dk needs --k")
        obj, note = make_dk(args.k), ""
    else:
        if args.k is None or args.d is None:
            raise PreconditionError("gen layered needs --d and --k")
        obj, note = make_layered(args.d, args.k), ""
    text = serialize(obj)
    if note:
        head, _, rest = text.partition("\n")
        text = head + "\n" + note + rest
    _emit(text, args.out, out)
    if args.out and args.out != "-":
        out.write(f"wrote {args.out} n={obj.n}" + (f" seed={args.seed}" if note else "") + "\n")
    return EXIT_OK


def cmd_density(args, out):
    g = parse_coloring(_read(args.input))
    if g.n < 2:
        raise PreconditionError("density is undefined for n < 2")
    total = comb(g.n, 2)
    for c in (Color.RED, Color.BLUE):
        count = g.color_count(c)
        out.write(f"{c.value} {count}/{total} {_fmt(Fraction(count, total))}\n")
    return EXIT_OK


def cmd_find_fk(args, out):
    g = parse_coloring(_read(args.input))
    cfg = DrcConfig(args.epsilon / 4, 2 * args.k, args.k, None, args.trials, args.seed)
    rep = find_fk(g, args.k, args.epsilon, cfg, fallback=not args.no_fallback, budget=args.budget)
    out.write(f"seed {args.seed}\n")
    for key in ("S", "T", "trials", "beta_n", "certification", "fallback", "found_by"):
        if key in rep.stage_log:
            out.write(f"{key} {rep.stage_log[key]}\n")
    if rep.witness is None:
        out.write("result not-found" + (" (exhaustive)" if rep.exhausted else "") + "\n")
        return EXIT_NOT_FOUND
    out.write("result found\n")
    _emit(serialize(rep.witness), args.out, out)
    return EXIT_OK


def cmd_verify_fk(args, out):
    g = parse_coloring(_read(args.input))
    w = deserialize_fk_witness(_read(args.witness))
    ok = verify_fk_witness(g, w)
    out.write("valid\n" if ok else "invalid\n")
    return EXIT_OK if ok else EXIT_NOT_FOUND


def cmd_find_dk(args, out):
    t = deserialize_tournament(_read(args.input))
    cfg = DkConfig(d=args.d, d_cap=args.d_cap, retries=args.retries, seed=args.seed,
                   fallback=not args.no_fallback, budget=args.budget)
    rep = find_dk(t, args.k, cfg)
    out.write(f"seed {args.seed}\n")
    if args.report:
        _emit(rep.to_csv(), args.report, out)
    out.write(f"d {rep.d}{' (capped)' if rep.d_capped else ''}\n")
    out.write(f"reason {rep.reason}\n")
    if rep.witness is None:
        return EXIT_NOT_FOUND
    out.write(f"found_by {rep.found_by}\n")
    _emit(serialize(rep.witness), args.out, out)
    return EXIT_OK


def cmd_verify_dk(args, out):
    t = deserialize_tournament(_read(args.input))
    w = deserialize_dk_witness(_read(args.witness))
    try:
        ok = verify_dk_witness(t, w)
    except PreconditionError:
        ok = False
    out.write("valid\n" if ok else "invalid\n")
    return EXIT_OK if ok else EXIT_NOT_FOUND


def cmd_triangles(args, out):
    t = deserialize_tournament(_read(args.input))
    out.write(f"{count_directed_triangles(t)}\n")
    return EXIT_OK


def cmd_distance(args, out):
    t = deserialize_tournament(_read(args.input))
    if args.exact:
        if t.n > EXACT_DISTANCE_MAX_N:
            raise BudgetExceeded(f"exact distance limited to n <= {EXACT_DISTANCE_MAX_N}; use --bounds")
        rep = transitivity_distance_exact(t)
        out.write(f"{rep.distance}\n")
        return EXIT_OK
    lo = lower_bound_distance(t, args.seed)
    hi = upper_bound_distance(t)
    if args.seed is not None:
        out.write(f"seed {args.seed}\n")
    out.write(f"lower {lo.distance}\nupper {hi.distance}\n")
    out.write(f"epsilon_far_lower {_fmt(lo.epsilon_far)}\nepsilon_far_upper {_fmt(hi.epsilon_far)}\n")
    return EXIT_OK


def cmd_transitivize(args, out):
    t = deserialize_tournament(_read(args.input))
    res = transitivize(t, debug=args.debug)
    if args.out:
        _emit(serialize_result(res), args.out, out)
    out.write(res.summary() + "\n")
    return EXIT_OK


def cmd_experiment(args, out):
    if args.kind == "lower-bound":
        for name in ("k", "epsilon", "n"):
            if getattr(args, name) is None:
                raise PreconditionError(f"experiment lower-bound needs --{name}")
        rep = lower_bound_experiment(args.k, args.epsilon, args.n[0], args.trials, args.seed,
                                     args.budget, args.jobs)
        _emit(rep.to_csv(), args.out, out)
        out.write(f"# seed {args.seed} n {rep.n} m {rep.m} trials {rep.trials}\n")
        for col in ("red_kk", "red_kkk_bipartite", "fk_free"):
            out.write(f"# {col} {_fmt(rep.frequency(col))}\n")
        return EXIT_OK
    if args.kind == "fnt-sweep":
        if not args.n:
            raise PreconditionError("experiment fnt-sweep needs --n")
        text = fnt_sweep(args.n, args.trials, args.seed, args.jobs)
        _emit(text, args.out, out)
        out.write(f"# seed {args.seed}\n")
        return EXIT_OK
    if args.input:
        t = deserialize_tournament(_read(args.input))
    elif args.k is not None:
        t = make_dk(args.k)
    else:
        raise PreconditionError("experiment tripartition-stats needs --in or --k")
    text, summary = tripartition_stats(t, args.trials, args.seed)
    _emit(text, args.out, out)
    out.write(f"# seed {args.seed} n {summary['n']} t {summary['t']} mean {_fmt(summary['mean'])} "
              f"sd {_fmt(summary['sd'])} t_over_9 {_fmt(summary['t_over_9'])}\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unavoidable",
                                description="Unavoidable patterns in colorings and tournaments.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_in(sp, required=True):
        sp.add_argument("--in", dest="input", required=required, help="input file, '-' for stdin")

    g = sub.add_parser("gen", help="generate a coloring or tournament")
    g.add_argument("kind", choices=["coloring", "tournament", "dk", "layered"])
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int, help="number of red pairs (coloring)")
    g.add_argument("--epsilon", type=_fraction_arg, help="red fraction, m = ceil(eps*C(n,2))")
    g.add_argument("--k", type=int)
    g.add_argument("--d", type=int, help="number of D_k copies (layered)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("density", help="exact red and blue densities")
    add_in(d)
    d.set_defaults(func=cmd_density)

    f = sub.add_parser("find-fk", help="search for a member of F_k")
    add_in(f)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--epsilon", type=_fraction_arg, required=True)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--trials", type=int, default=64)
    f.add_argument("--budget", type=int)
    f.add_argument("--no-fallback", action="store_true")
    f.add_argument("--out", help="witness file")
    f.set_defaults(func=cmd_find_fk)

    v = sub.add_parser("verify-fk", help="check an F_k witness")
    add_in(v)
    v.add_argument("--witness", required=True)
    v.set_defaults(func=cmd_verify_fk)

    k = sub.add_parser("find-dk", help="search for D_k")
    add_in(k)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--d", type=int)
    k.add_argument("--d-cap", type=int, default=8)
    k.add_argument("--retries", type=int, default=16)
    k.add_argument("--budget", type=int)
    k.add_argument("--no-fallback", action="store_true")
    k.add_argument("--report", help="stage report CSV")
    k.add_argument("--out", help="witness file")
    k.set_defaults(func=cmd_find_dk)

    vk = sub.add_parser("verify-dk", help="check a D_k witness")
    add_in(vk)
    vk.add_argument("--witness", required=True)
    vk.set_defaults(func=cmd_verify_dk)

    t = sub.add_parser("triangles", help="count directed triangles")
    add_in(t)
    t.set_defaults(func=cmd_triangles)

    ds = sub.add_parser("distance", help="distance to transitivity")
    add_in(ds)
    mode = ds.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--bounds", action="store_true")
    ds.add_argument("--seed", type=int, help="shuffle seed for the packing bound")
    ds.set_defaults(func=cmd_distance)

    tr = sub.add_parser("transitivize", help="reverse arcs until transitive")
    add_in(tr)
    tr.add_argument("--out", help="result file")
    tr.add_argument("--debug", action="store_true", help="also check per-triangle weights")
    tr.set_defaults(func=cmd_transitivize)

    e = sub.add_parser("experiment", help="seeded sweeps writing CSV")
    e.add_argument("kind", choices=["lower-bound", "fnt-sweep", "tripartition-stats"])
    e.add_argument("--n", type=int, nargs="+")
    e.add_argument("--k", type=int)
    e.add_argument("--epsilon", type=_fraction_arg)
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--budget", type=int)
    e.add_argument("--in", dest="input")
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except CertificateViolation as exc:
        err.write(f"invariant breach: {exc}\n")
        return EXIT_INVARIANT
    except BudgetExceeded as exc:
        err.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (ParseError, PreconditionError, VertexRangeError, UnavoidableError, OSError, UnicodeDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
