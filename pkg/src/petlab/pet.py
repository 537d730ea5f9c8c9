"""PET induction: van der Corput differencing down to a linear system.

Every state carries a head function g_0 and slots (g_i, Q_i), standing for

    sum_x sum_{y in I} g_0(x) prod_i g_i(x + Q_i(y)).

One step applies Cauchy-Schwarz in x, van der Corput in y with a new shift
h, and the change of variables x -> x - Q_1(y).  The same step code runs in
symbolic mode (h is a fresh parameter, functions are lineage tags) and in
concrete mode (h is an integer, functions are :class:`GridFunction`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .grid import GridFunction
from .poly_config import (
    Configuration,
    ConfigurationError,
    DegreeSequence,
    colex_compare,
    degree_sequence_of,
    height,
    validate_configuration,
)
from .polynomials import Coeff, IntPoly, ParamPoly, demote


class BadParameter(ValueError):
    """A differencing parameter landed on a recorded bad condition."""


class EmptyParameterRange(ValueError):
    """No admissible shift is left in [H] after removing the bad set."""


class LinearisationBudgetExceeded(RuntimeError):
    """Raised when the number of slots outgrows ``max_slots``."""

    def __init__(self, steps: int, slots: int, degrees: DegreeSequence):
        super().__init__(f"{slots} slots after {steps} steps (degree sequence {degrees})")
        self.steps = steps
        self.slots = slots
        self.degrees = degrees


# ---------------------------------------------------------------------------
# lineage tags

@dataclass(frozen=True)
class Lineage:
    """f_origin with the multiplicative differences applied so far."""

    origin: int
    shifts: tuple[Coeff, ...] = ()

    def delta(self, s: Coeff) -> "Lineage":
        return Lineage(self.origin, self.shifts + (demote(s),))

    def __str__(self):
        out = f"f{self.origin}"
        for s in self.shifts:
            out = f"D[{s}]{out}"
        return out


def _lineage_delta(f: Lineage, s: Coeff) -> Lineage:
    return f.delta(s)


def _grid_delta(f: GridFunction, s: int) -> GridFunction:
    return f.delta(s)


# ---------------------------------------------------------------------------
# bad sets

@dataclass(frozen=True)
class BadGroup:
    """Conditions slope * h + u - v = 0 for u in ``shifted``, v in ``fixed``.

    ``slope`` is d a_d for a class of degree-d slots sharing the leading
    coefficient a_d; ``shifted`` holds the y^(d-1) coefficients of the slots
    that get shifted by h, ``fixed`` those of every slot in the class.
    """

    slope: Coeff
    shifted: tuple[Coeff, ...]
    fixed: tuple[Coeff, ...]


@dataclass(frozen=True)
class BadSet:
    """Conditions c(h_1..h_t) = 0 on the new parameter ``h_var``.

    Each condition is linear in ``h_var``.  They are kept grouped and
    expanded on demand into normalised (content one, positive leading sign),
    deduplicated polynomials, since late PET steps can produce millions.
    """

    groups: tuple[BadGroup, ...]
    var: int
    bound: int

    @property
    def raw_count(self) -> int:
        """Number of (i, j) pairs examined; at most ``bound``."""
        return sum(len(g.shifted) * len(g.fixed) for g in self.groups)

    @cached_property
    def conditions(self) -> tuple[ParamPoly, ...]:
        hv = ParamPoly.var(self.var)
        out: dict[ParamPoly, None] = {}
        for g in self.groups:
            lead = ParamPoly.coerce(g.slope) * hv
            for u in dict.fromkeys(g.shifted):
                for v in dict.fromkeys(g.fixed):
                    out.setdefault(_normalise(lead + u - v, self.var))
        return tuple(out)

    def __len__(self):
        return len(self.conditions)

    def solutions(self, relevant_only: bool = False) -> list[Coeff]:
        """Values L with condition equivalent to h_var = L.

        Conditions whose h_var coefficient is not a constant dividing the
        rest are skipped.  With ``relevant_only``, L that are negative for
        every positive choice of the earlier parameters are dropped too.
        """
        out = []
        for cond in self.conditions:
            sol = _solve(cond, self.var)
            if sol is None:
                continue
            if relevant_only and isinstance(sol, ParamPoly) and sol.nonpositive_nonzero():
                continue
            if relevant_only and isinstance(sol, int) and sol < 0:
                continue
            out.append(sol)
        return out

    def relevant(self) -> list[Coeff]:
        return self.solutions(relevant_only=True)

    def vanishing(self, values: Sequence[int]) -> ParamPoly | None:
        """A condition vanishing at ``values`` (h_1..h_var), or None."""
        h = values[self.var - 1]
        for g in self.groups:
            shift = _ev(g.slope, values) * h
            fixed = {}
            for v in g.fixed:
                fixed.setdefault(_ev(v, values), v)
            for u in g.shifted:
                v = fixed.get(_ev(u, values) + shift)
                if v is not None:
                    lead = ParamPoly.coerce(g.slope) * ParamPoly.var(self.var)
                    return _normalise(lead + u - v, self.var)
        return None

    def integer_solutions(self) -> list[int]:
        """Integer h solving some condition, when all data are integers."""
        out = set()
        for g in self.groups:
            for u in g.shifted:
                for v in g.fixed:
                    if (v - u) % g.slope == 0:
                        out.add((v - u) // g.slope)
        return sorted(out)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.conditions]


def _ev(c: Coeff, values: Sequence[int]) -> int:
    return c.evaluate(values) if isinstance(c, ParamPoly) else c


def _solve(cond: ParamPoly, var: int) -> Coeff | None:
    c = cond.coefficient_of(var)
    if not c.is_constant():
        return None
    c = c.constant_value()
    rest = cond.without(var)
    if not rest.terms:
        return 0
    if rest.content() % abs(c):
        return None
    return demote(rest.exact_div(-c))


def _normalise(cond: ParamPoly, var: int) -> ParamPoly:
    g = cond.content()
    if g > 1:
        cond = cond.exact_div(g)
    if cond.coefficient_of(var).leading_sign() < 0:
        cond = -cond
    return cond


def _bad_set(polys: Sequence[IntPoly], l: int, var: int) -> BadSet:
    """Conditions under which some Q_i(y + h) (i >= l) shares a non-constant
    part with some Q_j(y): the y^(d-1) coefficient of Q_i(y + h) is
    d a_d h + a_(d-1)."""
    classes: dict[tuple, list[int]] = {}
    for j, q in enumerate(polys):
        classes.setdefault((q.degree, q.leading), []).append(j)
    groups = []
    for (d, a), members in classes.items():
        shifted = tuple(polys[i].coeff(d - 1) for i in members if i >= l)
        if not shifted:
            continue
        fixed = tuple(polys[j].coeff(d - 1) for j in members)
        groups.append(BadGroup(demote(d * a), shifted, fixed))
    return BadSet(tuple(groups), var, len(polys) ** 2)


# ---------------------------------------------------------------------------
# the generic step

def _max_degree(polys: Sequence[IntPoly]) -> int:
    return max((p.degree or 0) for p in polys) if polys else 0


def _anchor(head, funcs: list, polys: list[IntPoly]):
    """Move a maximal-degree polynomial into the last slot by x -> x - P_j(y)."""
    k = _max_degree(polys)
    if polys[-1].degree == k:
        return head, funcs, polys, None
    j = max(i for i, p in enumerate(polys) if p.degree == k)
    pj = polys[j]
    new_funcs = list(funcs)
    new_polys = []
    for i, p in enumerate(polys):
        if i == j:
            new_funcs[i] = head
            new_polys.append(-pj)
        else:
            new_polys.append(p - pj)
    return funcs[j], new_funcs, new_polys, j


def _reorder(funcs: list, polys: list[IntPoly]):
    """Degree-one block first, then ascending degree; ties keep index order."""
    order = sorted(range(len(polys)), key=lambda i: (polys[i].degree, i))
    return [funcs[i] for i in order], [polys[i] for i in order]


def _first_nonlinear(polys: Sequence[IntPoly]) -> int:
    for i, p in enumerate(polys):
        if (p.degree or 0) > 1:
            return i
    return len(polys)


def _prepare(head, funcs, polys):
    head, funcs, polys, j = _anchor(head, list(funcs), list(polys))
    funcs, polys = _reorder(funcs, polys)
    return head, funcs, polys, j


def _difference(head, funcs, polys, l: int, h: Coeff, delta: Callable):
    """One van der Corput step with shift h on a prepared state."""
    f1, p1 = funcs[0], polys[0]
    new_funcs, new_polys = [], []
    if p1.degree == 1:
        new_head = delta(f1, demote(p1.coeff(1) * h))
    else:
        new_head = f1
    for i in range(1, l):
        new_funcs.append(delta(funcs[i], demote(polys[i].coeff(1) * h)))
        new_polys.append(polys[i] - p1)
    for i in range(l, len(polys)):
        if i != 0:
            new_funcs.append(funcs[i])
            new_polys.append(polys[i] - p1)
        new_funcs.append(funcs[i])
        new_polys.append(polys[i].shift(h) - p1)
    return new_head, new_funcs, new_polys


# ---------------------------------------------------------------------------
# symbolic states

@dataclass(frozen=True)
class StepRecord:
    step: int
    anchored: int | None
    first_nonlinear: int
    degrees_before: DegreeSequence
    degrees_after: DegreeSequence
    bad: BadSet


@dataclass(frozen=True)
class PetState:
    """funcs[0] is the head g_0; funcs[i] pairs with polys[i - 1].

    ``interval`` lists the shifts s with I' the intersection of the I - s.
    """

    funcs: tuple[Lineage, ...]
    polys: tuple[IntPoly, ...]
    interval: tuple[Coeff, ...] = (0,)
    step_count: int = 0
    history: tuple[StepRecord, ...] = ()

    @classmethod
    def initial(cls, c: Configuration) -> "PetState":
        rep = validate_configuration(c)
        if not rep:
            raise ConfigurationError(f"invalid configuration: {rep.reason} at {rep.pair}")
        return cls(tuple(Lineage(i) for i in range(c.n + 1)), tuple(c.polys))

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def max_degree(self) -> int:
        return _max_degree(self.polys)

    def degree_sequence(self) -> DegreeSequence:
        return degree_sequence_of(self.polys)

    def is_linear(self) -> bool:
        return self.max_degree <= 1

    def describe_interval(self) -> str:
        return " & ".join("I" if s == 0 else f"(I - ({s}))" for s in self.interval)

    def distinctness_violation(self) -> tuple[int, int] | None:
        parts = [IntPoly()] + [p.non_constant_part() for p in self.polys]
        seen: dict[IntPoly, int] = {}
        for i, q in enumerate(parts):
            if q in seen:
                return seen[q], i
            seen[q] = i
        return None


def _prepared(state: PetState):
    if state.max_degree <= 1:
        raise ValueError("PET step needs a polynomial of degree at least 2")
    head, funcs, polys, j = _prepare(state.funcs[0], state.funcs[1:], state.polys)
    return head, funcs, polys, j, _first_nonlinear(polys)


def bad_difference_set(state: PetState) -> BadSet:
    """Conditions on the next parameter that would void distinctness."""
    if state.max_degree <= 1:
        return BadSet((), state.step_count + 1, state.n ** 2)
    _, _, polys, _, l = _prepared(state)
    return _bad_set(polys, l, state.step_count + 1)


def pet_step(state: PetState) -> PetState:
    head, funcs, polys, j, l = _prepared(state)
    var = state.step_count + 1
    h = ParamPoly.var(var)
    bad = _bad_set(polys, l, var)
    new_head, new_funcs, new_polys = _difference(head, funcs, polys, l, h, _lineage_delta)
    interval = tuple(dict.fromkeys(
        [demote(s) for s in state.interval] + [demote(s + h) for s in state.interval]))
    rec = StepRecord(var, j, l + 1, state.degree_sequence(),
                     degree_sequence_of(new_polys), bad)
    return PetState((new_head,) + tuple(new_funcs), tuple(new_polys), interval, var,
                    state.history + (rec,))


# ---------------------------------------------------------------------------
# linear systems

@dataclass(frozen=True)
class LinearSystem:
    """Forms x + a_i y + b_i; ``funcs`` holds the differenced lineage of
    each form and ``head`` the function evaluated at x."""

    forms: tuple[tuple[Coeff, Coeff], ...]
    r: int
    funcs: tuple
    head: object
    bad_sets: tuple[BadSet, ...]
    n: int
    height: int
    k: int
    h_values: tuple[int, ...] | None = None
    nominal_r: int = 1
    history: tuple[StepRecord, ...] = field(default=(), compare=False)

    @property
    def d(self) -> int:
        return len(self.forms)

    @property
    def lineage(self) -> tuple[int, ...]:
        return tuple(f.origin if isinstance(f, Lineage) else None for f in self.funcs)

    @property
    def bad_conditions(self) -> list[ParamPoly]:
        return [c for b in self.bad_sets for c in b.conditions]

    def coefficients(self) -> list[Coeff]:
        return [a for a, _ in self.forms]

    def content(self) -> int:
        from math import gcd
        g = 0
        for a in self.coefficients():
            g = gcd(g, a.content() if isinstance(a, ParamPoly) else abs(a))
        return g or 1

    def normalized_coefficients(self) -> list[Coeff]:
        """The a_i divided by their common content."""
        g = self.content()
        out = []
        for a in self.coefficients():
            out.append(demote(a.exact_div(g)) if isinstance(a, ParamPoly) else a // g)
        return out

    def height_bound(self) -> int:
        """height(c) (4 H_1)^{r k} for the instantiated parameters."""
        if self.h_values is None:
            raise ValueError("system is symbolic")
        H1 = max((abs(v) for v in self.h_values), default=1) or 1
        return self.height * (4 * H1) ** (self.r * self.k)

    def symbolic_distinct(self) -> bool:
        a = self.coefficients()
        return all(x != 0 for x in a) and len(set(a)) == len(a)


def _system(head, funcs, polys, r, bad_sets, c_n, H, k, h_values=None, history=()):
    forms = tuple((demote(p.coeff(1)), demote(p.coeff(0))) for p in polys)
    return LinearSystem(forms, r, tuple(funcs), head, tuple(bad_sets), c_n, H, k,
                        h_values, r if r else 1, tuple(history))


def linearize(c: Configuration, max_slots: int = 20000) -> LinearSystem:
    """Iterate :func:`pet_step` until every argument is linear.

    ``max_slots`` guards against the doubly exponential growth of the slot
    count; :class:`LinearisationBudgetExceeded` is raised past it.
    """
    state = PetState.initial(c)
    while not state.is_linear():
        state = pet_step(state)
        if state.n > max_slots:
            raise LinearisationBudgetExceeded(state.step_count, state.n, state.degree_sequence())
    return _system(state.funcs[0], state.funcs[1:], state.polys, state.step_count,
                   [rec.bad for rec in state.history], c.n, height(c), c.max_degree,
                   history=state.history)


def instantiate(sys: LinearSystem, h_values: Sequence[int], H: int | None = None,
                H1: int | None = None) -> LinearSystem:
    """Substitute integers for h_1..h_r, checking every bad condition."""
    hv = tuple(int(v) for v in h_values)
    if len(hv) != sys.r:
        raise ValueError(f"expected {sys.r} parameter values, got {len(hv)}")
    for b in sys.bad_sets:
        cond = b.vanishing(hv[:b.var])
        if cond is not None:
            raise BadParameter(f"h{b.var} = {hv[b.var - 1]} satisfies bad condition {cond} = 0")
    forms = []
    for a, b in sys.forms:
        a = a.evaluate(hv) if isinstance(a, ParamPoly) else a
        b = b.evaluate(hv) if isinstance(b, ParamPoly) else b
        forms.append((a, b))
    coeffs = [a for a, _ in forms]
    if any(a == 0 for a in coeffs):
        raise BadParameter(f"a coefficient vanishes at h = {list(hv)}")
    if len(set(coeffs)) != len(coeffs):
        raise BadParameter(f"coefficients coincide at h = {list(hv)}")
    H = sys.height if H is None else H
    out = LinearSystem(tuple(forms), sys.r, sys.funcs, sys.head, sys.bad_sets, sys.n, H,
                       sys.k, hv, sys.nominal_r, sys.history)
    if H1 is not None:
        bound = H * (4 * max(H1, 1)) ** (sys.r * sys.k)
        if max(abs(a) for a in coeffs) > bound:
            raise ArithmeticError("instantiated height exceeds H (4 H_1)^{rk}")
    return out


# ---------------------------------------------------------------------------
# the van der Corput inequality

def verify_vdc(g, H_set: Iterable[int], S: Iterable[int]) -> tuple[Fraction, Fraction]:
    """Both sides of |sum_S g|^2 <= |S - H| / |H|^2 * sum_h r_H(h) sum_y g(y+h) g(y).

    ``g`` is a GridFunction or a mapping; values are real so conjugation is
    the identity.
    """
    Hs = sorted(set(H_set))
    Ss = sorted(set(S))
    if not Hs:
        raise ValueError("H must be nonempty")
    val = g if callable(g) else (lambda x, _g=g: Fraction(_g.get(x, 0)))
    lhs = sum((val(y) for y in Ss), Fraction(0)) ** 2
    reps: dict[int, int] = {}
    for a in Hs:
        for b in Hs:
            reps[a - b] = reps.get(a - b, 0) + 1
    sset = set(Ss)
    corr = Fraction(0)
    for h, w in reps.items():
        s = Fraction(0)
        for y in Ss:
            if y + h in sset:
                s += val(y + h) * val(y)
        corr += w * s
    diff = {s - h for s in Ss for h in Hs}
    rhs = Fraction(len(diff), len(Hs) ** 2) * corr
    return lhs, rhs


# ---------------------------------------------------------------------------
# concrete mode

def _interval_meet(iv: tuple[int, int], h: int) -> tuple[int, int]:
    lo, hi = iv
    return max(lo, lo - h), min(hi, hi - h)


def level_sum(head: GridFunction, funcs: Sequence[GridFunction], polys: Sequence[IntPoly],
              interval: tuple[int, int]) -> Fraction:
    """sum_x sum_{y in I} g_0(x) prod_i g_i(x + Q_i(y))."""
    lo, hi = interval
    total = Fraction(0)
    items = list(head.items())
    if not items:
        return total
    for y in range(lo, hi + 1):
        shifts = [p(y) for p in polys]
        for x, v in items:
            prod = v
            for f, s in zip(funcs, shifts):
                prod *= f(x + s)
                if not prod:
                    break
            total += prod
    return total


def _inner_square_sum(funcs, polys, interval) -> Fraction:
    """sum_x |sum_{y in I} prod_i g_i(x + Q_i(y))|^2 over all x."""
    lo, hi = interval
    if hi < lo or not polys:
        return Fraction(0)
    f1, p1 = funcs[0], polys[0]
    if f1.is_zero():
        return Fraction(0)
    xs = set()
    for y in range(lo, hi + 1):
        s = p1(y)
        xs.update(x - s for x in f1.support())
    total = Fraction(0)
    for x in xs:
        a = Fraction(0)
        for y in range(lo, hi + 1):
            prod = Fraction(1)
            for f, p in zip(funcs, polys):
                prod *= f(x + p(y))
                if not prod:
                    break
            a += prod
        total += a * a
    return total


def _default_M(c: Configuration, N: int) -> int:
    y = 1
    while max(abs(p(y + 1)) for p in c.polys) <= N:
        y += 1
    return y


@dataclass
class ConcreteTrace:
    steps: list[dict]
    M: int = 0

    def to_json(self) -> list[dict]:
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            if isinstance(v, dict):
                return {str(k): enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v
        return [enc(s) for s in self.steps]


def concrete_linearize(funcs: Sequence[GridFunction], c: Configuration, N: int, H: int,
                       M: int | None = None, workers: int | None = None):
    """Run the differencing chain on data.

    ``funcs`` are f_0..f_n (a list of length n alone is padded with 1_[N] as
    f_0).  y ranges over [M]; by default M is the largest y with every
    |P_i(y)| <= N.  At each step h is the argmax over [H] minus the bad set
    of the differenced level sum, ties to the smallest h.
    """
    rep = validate_configuration(c)
    if not rep:
        raise ConfigurationError(f"invalid configuration: {rep.reason} at {rep.pair}")
    fs = [f if isinstance(f, GridFunction) else GridFunction.from_dict(f) for f in funcs]
    if len(fs) == c.n:
        fs = [GridFunction.box(N)] + fs
    if len(fs) != c.n + 1:
        raise ValueError(f"expected {c.n + 1} functions, got {len(fs)}")
    for f in fs:
        f.check_one_bounded()
    M = _default_M(c, N) if M is None else M
    if H < 1 or H > M:
        raise ValueError(f"H must lie in [1, M] with M = {M}")
    head, slot_funcs, polys = fs[0], fs[1:], list(c.polys)
    interval = (1, M)
    hs: list[int] = []
    bad_sets: list[BadSet] = []
    steps: list[dict] = []
    t = 0
    while _max_degree(polys) > 1:
        t += 1
        lam = level_sum(head, slot_funcs, polys, interval)
        g0sq = sum((v * v for _, v in head.items()), Fraction(0))
        a_sq = _inner_square_sum(slot_funcs, polys, interval)
        hd, fu, po, j = _prepare(head, slot_funcs, polys)
        l = _first_nonlinear(po)
        # earlier shifts are already integers, so conditions involve h_t only
        bad = _bad_set(po, l, t)
        bad_vals = bad.integer_solutions()
        bad_sets.append(bad)
        admissible = [h for h in range(1, H + 1) if h not in bad_vals]
        if not admissible:
            raise EmptyParameterRange(f"[{H}] is inside the bad set {bad_vals} at step {t}")

        def corr(h, hd=hd, fu=fu, po=po, l=l, interval=interval):
            nh, nf, np_ = _difference(hd, fu, po, l, h, _grid_delta)
            return level_sum(nh, nf, np_, _interval_meet(interval, h))

        values = _map(corr, range(0, H + 1), workers)
        table = dict(zip(range(0, H + 1), values))
        best = max(admissible, key=lambda h: (table[h], -h))
        # r_[H](h) = H - |h|; the correlation is even in h
        vdc_sum = sum(((H - abs(h)) * table[abs(h)] for h in range(-H + 1, H)), Fraction(0))
        width = interval[1] - interval[0] + 1
        vdc_rhs = Fraction(width + H - 1, H * H) * vdc_sum
        steps.append({
            "step": t,
            "anchored": None if j is None else j + 1,
            "bad": bad_vals,
            "admissible": len(admissible),
            "correlations": {h: table[h] for h in admissible},
            "h": best,
            "value": table[best],
            "level_sum": lam,
            "head_energy": g0sq,
            "inner_square_sum": a_sq,
            "cauchy_schwarz": (lam * lam, g0sq * a_sq),
            "van_der_corput": (a_sq, vdc_rhs),
            "interval": _interval_meet(interval, best),
        })
        head, slot_funcs, polys = _difference(hd, fu, po, l, best, _grid_delta)
        interval = _interval_meet(interval, best)
        hs.append(best)
    system = _system(head, slot_funcs, polys, t, bad_sets, c.n, height(c), c.max_degree,
                     tuple(hs))
    return system, ConcreteTrace(steps, M)


def _map(fn, xs, workers):
    xs = list(xs)
    if workers and workers > 1 and len(xs) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, xs))
    return [fn(x) for x in xs]


def descends(state: PetState) -> bool:
    """True when every recorded step strictly lowered the degree sequence."""
    return all(colex_compare(r.degrees_after, r.degrees_before) < 0 for r in state.history)
