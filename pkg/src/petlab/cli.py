"""The ``petlab`` command line.

Every subcommand writes one JSON document (or a CSV table with
``--format csv`` where the report is tabular) to stdout.  Exit status is 0
on success, 1 on domain errors (a JSON object with "error" and "message"
is printed instead of the report) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import io
from .counting import balanced_expansion, balanced_function, count_in_set
from .diophantine import (BohrSpec, bohr_contains, bohr_power_progression, brute_force_recurrence,
                          min_power_distance, rationalize, simultaneous_power_recurrence)
from .gowers import gowers_norm, gowers_norm_local, gowers_norm_scale
from .increment import density_iteration, find_power_increment, local_von_neumann_probe
from .pet import concrete_linearize, linearize
from .poly_config import degree_sequence, validate_configuration
from .verify import SUITES, run_suite


class DomainError(Exception):
    pass


def threads() -> int:
    """Worker cap from PETLAB_THREADS, else the machine's parallelism."""
    raw = os.environ.get("PETLAB_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(f"PETLAB_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise DomainError("PETLAB_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# argument helpers

def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


MAX_DENOMINATOR = 10 ** 6


def _rational(s: str) -> tuple[Fraction, str | None]:
    """(value, original text if it was a float that had to be rationalised)."""
    s = s.strip()
    try:
        if "/" in s or not any(ch in s for ch in ".eE"):
            return io.parse_frac(s), None
        return rationalize(float(s), MAX_DENOMINATOR), s
    except (ValueError, ZeroDivisionError, OverflowError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q or a decimal, got {s!r}")


def _rational_list(s: str) -> list[tuple[Fraction, str | None]]:
    out = [_rational(t) for t in s.split(",") if t.strip()]
    if not out:
        raise argparse.ArgumentTypeError("expected at least one rational")
    return out


def _unpack(args, *names):
    """Replace (value, source) pairs by values; collect the rationalised inputs."""
    notes = []
    for name in names:
        v = getattr(args, name)
        pairs = v if isinstance(v, list) else [v]
        for val, src in pairs:
            if src is not None:
                notes.append({"input": src, "value": val})
        setattr(args, name, [p[0] for p in pairs] if isinstance(v, list) else v[0])
    return notes


def _window(s: str) -> tuple[int, int]:
    try:
        a, n = (int(t) for t in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'start,length', got {s!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("window length must be positive")
    return a, n


def _config(path):
    c = io.load_config(path)
    rep = validate_configuration(c)
    if not rep.valid:
        raise DomainError(f"invalid configuration: {rep.reason}")
    return c


def _functions(spec: str, c):
    """``auto-balanced:A.txt`` or a comma-separated list of n + 1 CSV files.
    Returns (functions, N implied by a set file or None)."""
    if spec.startswith("auto-balanced:"):
        A = io.load_set(spec[len("auto-balanced:"):])
        f = balanced_function(A)
        return [f] * (c.n + 1), A.N
    paths = [p for p in spec.split(",") if p]
    if len(paths) == 1:
        paths = paths * (c.n + 1)
    if len(paths) != c.n + 1:
        raise DomainError(f"expected {c.n + 1} function files, got {len(paths)}")
    return [io.load_function(p) for p in paths], None


# ---------------------------------------------------------------------------
# subcommands; each returns (report, csv rows or None)

def cmd_linearize(args):
    c = _config(args.config)
    if args.mode == "symbolic":
        sys_ = linearize(c, max_slots=args.max_slots)
        out = io.linear_system_to_json(sys_)
        out["degree_sequence"] = degree_sequence(c).to_json()
        return out, None
    if not args.fns:
        raise DomainError("--mode concrete needs --fns")
    funcs, setN = _functions(args.fns, c)
    N = args.N if args.N is not None else setN
    if N is None:
        raise DomainError("--mode concrete needs --N")
    if args.H is None:
        raise DomainError("--mode concrete needs --H")
    sys_, trace = concrete_linearize(funcs, c, N, args.H, M=args.M, workers=threads())
    out = io.linear_system_to_json(sys_)
    out["trace"] = trace.to_json()
    out["M"] = trace.M
    return out, None


def cmd_gowers(args):
    f = io.load_function(args.fn)
    if args.scale is not None:
        if args.float:
            sn = gowers_norm_scale(f, args.scale, args.d)
            out = {"d": args.d, "M": args.scale, "value": sn.value,
                   "lower": sn.lower, "upper": sn.upper}
            powers = sn.powers
        else:
            powers = gowers_norm_scale(f, args.scale, args.d, exact=True)
            out = {"d": args.d, "M": args.scale}
        out["powers"] = [[x, p] for x, p in powers]
        rows = [["x", "power"]] + [[x, io.frac(p)] for x, p in powers]
        return out, rows
    if args.local is not None:
        nv = gowers_norm_local(f, args.local, args.d)
    else:
        nv = gowers_norm(f, args.d)
    out = {"d": args.d, "power": nv.power}
    if args.float:
        out["value"] = nv.value
    return out, None


def cmd_count(args):
    A = io.load_set(args.set)
    c = _config(args.config)
    return {"count": count_in_set(A, c, args.both_signs)}, None


def cmd_expand(args):
    A = io.load_set(args.set)
    c = _config(args.config)
    terms = balanced_expansion(A, c, args.both_signs)
    total = sum((t.value for t in terms), Fraction(0))
    out = {"terms": [{"label": t.label, "value": t.value} for t in terms],
           "total": total, "count": count_in_set(A, c, args.both_signs)}
    rows = [["label", "value"]] + [[t.label, io.frac(t.value)] for t in terms]
    return out, rows


def _noted(out: dict, notes: list) -> dict:
    if notes:
        out["rationalized"] = notes
        out["max_denominator"] = MAX_DENOMINATOR
    return out


def cmd_dioph(args):
    if args.dioph_cmd == "min":
        notes = _unpack(args, "alpha")
        q, dist = min_power_distance(args.alpha, args.k, args.Q)
        out = {"alpha": args.alpha, "k": args.k, "Q": args.Q, "q": q, "distance": dist}
        return _noted(out, notes), None
    notes = _unpack(args, "alphas")
    tr = simultaneous_power_recurrence(args.alphas, args.k, args.Q)
    out = tr.to_json()
    out.update({"alphas": list(args.alphas), "k": args.k, "Q": args.Q,
                "within_budget": tr.within_budget(), "inflation_holds": tr.inflation_holds()})
    if args.brute:
        bq, bd = brute_force_recurrence(args.alphas, args.k, args.Q)
        out["brute_force"] = {"q": bq, "distance": bd}
    return _noted(out, notes), None


def cmd_bohr(args):
    notes = _unpack(args, "freqs", "eta")
    spec = BohrSpec(tuple(args.freqs), args.eta, args.N)
    prog = bohr_power_progression(spec, args.k, args.mode, args.C)
    out = prog.to_json()
    out["verified"] = all(bohr_contains(x, spec) for x in prog)
    out["mode"] = args.mode
    return _noted(out, notes), None


def cmd_increment(args):
    A = io.load_set(args.set)
    res = find_power_increment(A, args.k, args.min_len)
    out = {"N": A.N, "density": A.density, "increment": None if res is None else res.to_json()}
    return out, None


def cmd_iterate(args):
    A = io.load_set(args.set)
    c = _config(args.config)
    tr = density_iteration(A, c, args.min_len, args.max_steps)
    rows = [["N", "density", "lacks", "start", "q", "k", "length"]]
    for e in tr.entries:
        p = e.progression
        rows.append([e.N, io.frac(e.density), int(e.lacks)]
                    + (["", "", "", ""] if p is None else [p.start, p.q, p.k, p.length]))
    return io.trajectory_to_json(tr), rows


def cmd_probe(args):
    c = _config(args.config)
    funcs, setN = _functions(args.fns, c)
    N = args.N if args.N is not None else setN
    if N is None:
        raise DomainError("probe needs --N")
    return local_von_neumann_probe(funcs, c, N, args.H, args.d).to_json(), None


def cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(n, args.trials, args.seed) for n in names]
    rows = [["suite", "passed", "failed"]] + [[r.suite, r.passed, r.failed] for r in results]
    if len(results) == 1:
        out = results[0].to_json()
        out["seed"] = args.seed
    else:
        out = {"seed": args.seed, "suites": [r.to_json() for r in results],
               "passed": sum(r.passed for r in results), "failed": sum(r.failed for r in results)}
    return out, rows


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="petlab",
        description="Exact tools for polynomial configurations: PET linearisation, Gowers "
                    "norms, counting, Diophantine recurrence and density increments.",
        epilog="PETLAB_THREADS caps the worker count (default: machine parallelism).")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="output format; csv only for tabular reports (default json)")
    sub = p.add_subparsers(dest="cmd", metavar="SUBCOMMAND", required=True)

    s = sub.add_parser("linearize", help="run PET differencing down to a linear system")
    s.add_argument("--config", required=True, help="configuration JSON file")
    s.add_argument("--mode", choices=["symbolic", "concrete"], default="symbolic",
                   help="symbolic shifts h_j, or concrete integer shifts chosen on data")
    s.add_argument("--fns", help="concrete mode: comma-separated CSV files, one per slot "
                                 "(a single file is reused), or auto-balanced:SET")
    s.add_argument("--N", type=_positive, help="concrete mode: ambient size")
    s.add_argument("--H", type=_positive, help="concrete mode: shifts range over [H]")
    s.add_argument("--M", type=_positive, help="concrete mode: y-range (default from N)")
    s.add_argument("--max-slots", type=_positive, default=20000,
                   help="abort when a step has more slots than this (default 20000)")
    s.set_defaults(func=cmd_linearize)

    s = sub.add_parser("gowers", help="Gowers U^d norm of a finitely supported function")
    s.add_argument("--fn", required=True, help="function CSV file with lines x,p/q")
    s.add_argument("--d", type=_positive, default=2, help="order d (default 2)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--local", type=_window, metavar="START,LEN",
                   help="restrict to START + [LEN]")
    g.add_argument("--scale", type=_positive, metavar="M",
                   help="sum of norms over all windows x + [M]")
    e = s.add_mutually_exclusive_group()
    e.add_argument("--exact", dest="float", action="store_false",
                   help="exact rationals only (default)")
    e.add_argument("--float", dest="float", action="store_true",
                   help="also report floating-point roots")
    s.set_defaults(func=cmd_gowers, float=False)

    for name, fn, text in (("count", cmd_count, "count configurations inside a set"),
                           ("expand", cmd_expand, "balanced-function expansion of the count")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--set", required=True, help="set file ('#N=' header)")
        s.add_argument("--config", required=True, help="configuration JSON file")
        s.add_argument("--both-signs", action="store_true", help="let y range over nonzero integers")
        s.set_defaults(func=fn)

    s = sub.add_parser("dioph", help="recurrence of alpha q^k near integers")
    dsub = s.add_subparsers(dest="dioph_cmd", metavar="{min,recur}", required=True)
    m = dsub.add_parser("min", help="argmin over q <= Q of ||alpha q^k||")
    m.add_argument("--alpha", type=_rational, required=True, help="alpha as p/q (decimals are rationalised)")
    m.add_argument("--k", type=_positive, required=True, help="power k")
    m.add_argument("--Q", type=_positive, required=True, help="search bound Q")
    m.set_defaults(func=cmd_dioph)
    r = dsub.add_parser("recur", help="simultaneous recurrence for several alphas")
    r.add_argument("--alphas", type=_rational_list, required=True, help="comma-separated p/q values (decimals are rationalised)")
    r.add_argument("--k", type=_positive, required=True, help="power k")
    r.add_argument("--Q", type=_positive, required=True, help="budget Q")
    r.add_argument("--brute", action="store_true", help="also report the brute-force optimum")
    r.set_defaults(func=cmd_dioph)

    s = sub.add_parser("bohr", help="symmetric k-th power progression inside a Bohr set")
    s.add_argument("--freqs", type=_rational_list, required=True, help="comma-separated p/q values (decimals are rationalised)")
    s.add_argument("--eta", type=_rational, required=True, help="radius eta in (0, 1/2]")
    s.add_argument("--N", type=_positive, required=True, help="window [-N/2, N/2)")
    s.add_argument("--k", type=_positive, required=True, help="power k")
    s.add_argument("--mode", choices=["theory", "optimal"], default="theory",
                   help="proof-driven q or exhaustive best q (default theory)")
    s.add_argument("--C", type=float, help="theory mode constant (default 5 ln k)")
    s.set_defaults(func=cmd_bohr)

    s = sub.add_parser("increment", help="densest k-th power progression in a set")
    s.add_argument("--set", required=True, help="set file")
    s.add_argument("--k", type=_positive, required=True, help="power k")
    s.add_argument("--min-len", type=_positive, default=3, help="minimum length (default 3)")
    s.set_defaults(func=cmd_increment)

    s = sub.add_parser("iterate", help="iterate density increments on a lacking set")
    s.add_argument("--set", required=True, help="set file")
    s.add_argument("--config", required=True, help="power-form configuration JSON file")
    s.add_argument("--min-len", type=_positive, default=3, help="minimum length (default 3)")
    s.add_argument("--max-steps", type=_nonneg, default=20, help="step cap (default 20)")
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("probe", help="experimental: both sides of the local inequality")
    s.add_argument("--config", required=True, help="configuration JSON file")
    s.add_argument("--fns", required=True, help="CSV files or auto-balanced:SET")
    s.add_argument("--N", type=_positive, help="ambient size (default from the set file)")
    s.add_argument("--H", type=_positive, required=True, help="shift range [H]")
    s.add_argument("--d", type=_positive, required=True, help="norm order d")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("verify", help="run a seeded property suite")
    s.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"], help="suite name")
    s.add_argument("--trials", type=_positive, help="number of trials (default per suite)")
    s.add_argument("--seed", type=_nonneg, default=0, help="PRNG seed (default 0)")
    s.set_defaults(func=cmd_verify)
    return p


def _csv(rows) -> str:
    import csv
    import io as _io
    buf = _io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        report, rows = args.func(args)
        if args.format == "csv":
            if rows is None:
                parser.error(f"--format csv is not available for {args.cmd}")
            out.write(_csv(rows))
        else:
            out.write(io.dumps(report) + "\n")
    except SystemExit as e:
        return int(e.code or 0)
    except (DomainError, ValueError, ArithmeticError, RuntimeError, OSError, KeyError) as e:
        out.write(io.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 1
    if args.cmd == "verify" and isinstance(report, dict) and report.get("failed"):
        return 1
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
