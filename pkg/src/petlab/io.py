"""File formats and exact JSON serialisation."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .counting import DensitySet
from .diophantine import PowerProgression, RecurrenceStep, RecurrenceTrace
from .gowers import NormValue
from .grid import GridFunction
from .increment import IncrementResult, IterationTrajectory, TrajectoryEntry
from .pet import BadGroup, BadSet, Lineage, LinearSystem
from .poly_config import Configuration
from .polynomials import ParamPoly, demote


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def dumps(obj) -> str:
    """Deterministic JSON; Fractions become "p/q" strings."""
    def default(o):
        if isinstance(o, Fraction):
            return frac(o)
        if isinstance(o, ParamPoly):
            return str(o)
        if isinstance(o, tuple):
            return list(o)
        raise TypeError(f"cannot serialise {type(o).__name__}")
    return json.dumps(obj, default=default, sort_keys=True)


# ---------------------------------------------------------------------------
# configurations

def load_config(path) -> Configuration:
    return Configuration.from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# functions: lines "x,p/q"

def parse_function_csv(text: str) -> GridFunction:
    vals = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            x, v = line.split(",")
            vals[int(x)] = parse_frac(v)
        except ValueError as e:
            raise ValueError(f"line {lineno}: expected 'x,p/q', got {line!r}") from e
    return GridFunction.from_dict(vals)


def function_to_csv(f: GridFunction) -> str:
    return "".join(f"{x},{frac(v)}\n" for x, v in f.items())


def load_function(path) -> GridFunction:
    return parse_function_csv(Path(path).read_text())


# ---------------------------------------------------------------------------
# sets: "#N=..." header then one integer per line, or "@rle r1,r2,..."
# (alternating absent/present run lengths starting at x = 1)

def parse_set(text: str) -> DensitySet:
    N = None
    members: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#N="):
            N = int(line[3:])
        elif line.startswith("#"):
            continue
        elif line.startswith("@rle"):
            x, present = 1, False
            for run in line[4:].replace(" ", "").split(","):
                if not run:
                    continue
                r = int(run)
                if present:
                    members.extend(range(x, x + r))
                x += r
                present = not present
        else:
            try:
                members.append(int(line))
            except ValueError as e:
                raise ValueError(f"line {lineno}: not an integer: {line!r}") from e
    if N is None:
        raise ValueError("set file needs a '#N=...' header")
    return DensitySet.from_members(N, members)


def set_to_rle(A: DensitySet) -> str:
    runs, x, present = [], 1, False
    while x <= A.N:
        r = 0
        while x <= A.N and (x in A) == present:
            r += 1
            x += 1
        runs.append(r)
        present = not present
    return f"#N={A.N}\n@rle {','.join(map(str, runs))}\n"


def load_set(path) -> DensitySet:
    return parse_set(Path(path).read_text())


# ---------------------------------------------------------------------------
# linear systems

def _coeff_str(c) -> str:
    return str(c)


def _coeff_parse(s: str):
    return demote(ParamPoly.parse(s))


def linear_system_to_json(sys: LinearSystem) -> dict:
    out = {
        "r": sys.r,
        "d": sys.d,
        "n": sys.n,
        "k": sys.k,
        "height": sys.height,
        "forms": [],
        "bad": [str(c) for c in sys.bad_conditions],
        "bad_steps": [{"var": b.var, "bound": b.bound, "conditions": b.to_json()}
                      for b in sys.bad_sets],
        "head": _lineage_json(sys.head),
    }
    for (a, b), f in zip(sys.forms, sys.funcs):
        entry = {"a": _coeff_str(a), "b": _coeff_str(b)}
        entry.update(_lineage_json(f))
        out["forms"].append(entry)
    if sys.r == 0:
        out["nominal_r"] = sys.nominal_r
    if sys.h_values is not None:
        out["h"] = list(sys.h_values)
    return out


def _lineage_json(f) -> dict:
    if isinstance(f, Lineage):
        return {"lineage": f.origin, "shifts": [str(s) for s in f.shifts]}
    return {"lineage": None, "shifts": []}


def linear_system_from_json(obj: dict) -> LinearSystem:
    forms, funcs = [], []
    for e in obj["forms"]:
        forms.append((_coeff_parse(e["a"]), _coeff_parse(e["b"])))
        funcs.append(Lineage(e["lineage"], tuple(_coeff_parse(s) for s in e.get("shifts", []))))
    bad_sets = []
    for b in obj.get("bad_steps", []):
        var = b["var"]
        groups = []
        for s in b["conditions"]:
            cond = ParamPoly.parse(s)
            groups.append(BadGroup(demote(cond.coefficient_of(var)), (cond.without(var),), (0,)))
        bad_sets.append(BadSet(tuple(groups), var, b["bound"]))
    head = obj.get("head", {"lineage": 0, "shifts": []})
    h = obj.get("h")
    return LinearSystem(tuple(forms), obj["r"], tuple(funcs),
                        Lineage(head["lineage"], tuple(_coeff_parse(s) for s in head["shifts"])),
                        tuple(bad_sets), obj.get("n", 0), obj.get("height", 0), obj.get("k", 1),
                        None if h is None else tuple(h), obj.get("nominal_r", obj["r"] or 1))


# ---------------------------------------------------------------------------
# progressions and traces

def progression_from_json(obj: dict) -> PowerProgression:
    return PowerProgression(obj["start"], obj["q"], obj["k"], obj["length"])


def recurrence_from_json(obj: dict, alphas: Iterable, k: int, Q: int) -> RecurrenceTrace:
    steps = tuple(RecurrenceStep(s["Q_i"], s["q_i"], parse_frac(s["distance"]))
                  for s in obj["steps"])
    return RecurrenceTrace(tuple(Fraction(a) for a in alphas), k, Q, steps, obj["q"],
                           tuple(parse_frac(d) for d in obj["distances"]))


def parse_fraction_list(text: str) -> list[Fraction]:
    return [parse_frac(t) for t in text.split(",") if t.strip()]


def norm_from_json(obj: dict) -> NormValue:
    return NormValue(parse_frac(obj["power"]), int(obj["d"]))


def increment_from_json(obj: dict) -> IncrementResult:
    return IncrementResult(progression_from_json(obj["progression"]), int(obj["hits"]),
                           parse_frac(obj["relative_density"]), parse_frac(obj["increment"]))


def trajectory_to_json(tr: IterationTrajectory) -> list[dict]:
    """One object per step; the last one also carries the stop reason."""
    out = [e.to_json() for e in tr.entries]
    if out:
        out[-1]["stop"] = tr.stop_reason
    return out


def trajectory_from_json(obj) -> IterationTrajectory:
    if isinstance(obj, dict):
        steps, stop = obj["steps"], obj["stop"]
    else:
        steps, stop = obj, obj[-1]["stop"] if obj else "max_steps"
    entries = []
    for s in steps:
        p = s.get("progression")
        entries.append(TrajectoryEntry(int(s["N"]), parse_frac(s["density"]), bool(s["lacks"]),
                                       None if p is None else progression_from_json(p)))
    return IterationTrajectory(tuple(entries), stop)
