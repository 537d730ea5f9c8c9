"""Density increments on k-th power progressions and their iteration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .counting import DensitySet, count_in_set, count_operator
from .diophantine import PowerProgression
from .gowers import gowers_norm, gowers_norm_scale
from .grid import GridFunction
from .pet import EmptyParameterRange, concrete_linearize
from .poly_config import Configuration, ConfigurationError


@dataclass(frozen=True)
class IncrementResult:
    progression: PowerProgression
    hits: int
    relative_density: Fraction
    increment: Fraction

    def to_json(self) -> dict:
        s = lambda x: f"{x.numerator}/{x.denominator}"
        return {"progression": self.progression.to_json(), "hits": self.hits,
                "relative_density": s(self.relative_density), "increment": s(self.increment)}


def _better(c1: int, L1: int, q1: int, a1: int, c2: int, L2: int, q2: int, a2: int) -> bool:
    """(c1/L1, L1, -q1, -a1) > (c2/L2, L2, -q2, -a2)."""
    lhs, rhs = c1 * L2, c2 * L1
    if lhs != rhs:
        return lhs > rhs
    if L1 != L2:
        return L1 > L2
    if q1 != q2:
        return q1 < q2
    return a1 < a2


def find_power_increment(A: DensitySet, k: int, min_len: int = 3) -> IncrementResult | None:
    """Densest a + q^k {0..L-1} inside [N] with L >= min_len.

    Ties go to longer L, then smaller q, then smaller a.  None unless the
    relative density beats the density of A.
    """
    if min_len < 1:
        raise ValueError("min_len must be at least 1")
    N = A.N
    if N == 0 or not A.mask:
        return None
    bits = [0] * (N + 1)
    for x in A:
        bits[x] = 1
    best = None  # (count, L, q, a)
    q = 1
    # for larger q only length-1 progressions fit, and q = 1 already has those
    while q == 1 or 1 + q ** k * max(min_len - 1, 1) <= N:
        step = q ** k
        for a in range(1, N + 1):
            if a + step * (min_len - 1) > N:
                break
            cnt, L, x = 0, 0, a
            while x <= N:
                cnt += bits[x]
                L += 1
                if L >= min_len and (best is None or _better(cnt, L, q, a, *best)):
                    best = (cnt, L, q, a)
                x += step
        q += 1
    if best is None:
        return None
    cnt, L, q, a = best
    rel = Fraction(cnt, L)
    if rel <= A.density:
        return None
    return IncrementResult(PowerProgression(a, q, k, L), cnt, rel, rel - A.density)


def exhaustive_increment_oracle(A: DensitySet, k: int, min_len: int = 3):
    """Independent reference: list every progression, then take the maximum
    under the tie order.  Returns (a, q, L, hits, density) or None."""
    N = A.N
    members = set(A)
    cands = []
    for q in range(1, N + 1):
        step = q ** k
        for a in range(1, N + 1):
            hits = 0
            for L, x in enumerate(range(a, N + 1, step), start=1):
                hits += x in members
                if L >= min_len:
                    cands.append((Fraction(hits, L), L, -q, -a, hits))
        if step > N:
            break
    if not cands:
        return None
    rel, L, mq, ma, hits = max(cands)
    if rel <= A.density:
        return None
    return (-ma, -mq, L, hits, rel)


def rescale(A: DensitySet, prog: PowerProgression) -> DensitySet:
    """{x in [L] : a + q^k (x - 1) in A}."""
    step = prog.step
    return DensitySet.from_members(
        prog.length, [x for x in range(1, prog.length + 1) if prog.start + step * (x - 1) in A])


@dataclass(frozen=True)
class PartitionPick:
    index: int
    piece_sum: Fraction
    size: int


def partition_increment(f: GridFunction, pieces: Sequence[Iterable[int]]) -> PartitionPick | None:
    """The piece maximising sum/size among pieces with positive sum.

    If sum_i |sum_{P_i} f| >= theta sum_i |P_i| and f sums to zero, the
    positive parts carry half of the absolute total, so the pick has
    sum >= (theta / 2) |piece|.  None when no piece has a positive sum.
    """
    if f.total() != 0:
        raise ValueError("f must sum to zero")
    ps = [sorted(set(p)) for p in pieces]
    seen: set[int] = set()
    for p in ps:
        if seen.intersection(p):
            raise ValueError("pieces overlap")
        seen.update(p)
    if any(x not in seen for x in f.support()):
        raise ValueError("pieces do not cover the support of f")
    best = None
    for i, p in enumerate(ps):
        s = sum((f(x) for x in p), Fraction(0))
        if s > 0 and p and (best is None or s * best.size > best.piece_sum * len(p)):
            best = PartitionPick(i, s, len(p))
    return best


@dataclass(frozen=True)
class TrajectoryEntry:
    N: int
    density: Fraction
    lacks: bool
    progression: PowerProgression | None
    members: tuple[int, ...] = field(compare=False, default=())

    def to_json(self) -> dict:
        return {"N": self.N, "density": f"{self.density.numerator}/{self.density.denominator}",
                "lacks": self.lacks,
                "progression": None if self.progression is None else self.progression.to_json()}


@dataclass(frozen=True)
class IterationTrajectory:
    entries: tuple[TrajectoryEntry, ...]
    stop_reason: str

    def densities(self) -> list[Fraction]:
        return [e.density for e in self.entries]

    def strictly_increasing(self) -> bool:
        d = self.densities()
        return all(a < b for a, b in zip(d, d[1:]))

    def to_json(self) -> dict:
        return {"stop": self.stop_reason, "steps": [e.to_json() for e in self.entries]}


def density_iteration(A: DensitySet, c: Configuration, min_len: int = 3,
                      max_steps: int = 20) -> IterationTrajectory:
    """Repeatedly pass to a denser k-th power progression and rescale.

    Each A_i is recounted; the run stops when A_i contains the configuration,
    no increment exists, N_i < min_len or max_steps is reached.
    """
    if not c.is_power_form():
        raise ConfigurationError("density_iteration needs a power configuration")
    k = c.k
    entries = []
    cur = A
    reason = "max_steps"
    for _ in range(max_steps + 1):
        lacks = count_in_set(cur, c) == 0
        if not lacks:
            entries.append(TrajectoryEntry(cur.N, cur.density, False, None, tuple(cur)))
            reason = "contains configuration"
            break
        if cur.N < min_len:
            entries.append(TrajectoryEntry(cur.N, cur.density, True, None, tuple(cur)))
            reason = "N below min_len"
            break
        if len(entries) == max_steps:
            entries.append(TrajectoryEntry(cur.N, cur.density, True, None, tuple(cur)))
            break
        inc = find_power_increment(cur, k, min_len)
        if inc is None:
            entries.append(TrajectoryEntry(cur.N, cur.density, True, None, tuple(cur)))
            reason = "no increment"
            break
        entries.append(TrajectoryEntry(cur.N, cur.density, True, inc.progression, tuple(cur)))
        cur = rescale(cur, inc.progression)
    return IterationTrajectory(tuple(entries), reason)


@dataclass
class ProbeReport:
    """Both sides of the local von Neumann inequality, without a verdict."""

    count: Fraction
    normalisation_exponent: Fraction    # lhs = |count| * N^(-exponent)
    lhs_float: float
    M: int
    local_sum: float
    local_sum_bounds: tuple[Fraction, Fraction]
    unit_power: Fraction                # ||1_[M]||^(2^d)
    rhs_float: float
    h_values: tuple[int, ...]
    H_used: int
    trace: list = field(default_factory=list)
    experimental: bool = True

    def to_json(self) -> dict:
        s = lambda x: f"{x.numerator}/{x.denominator}"
        return {
            "experimental": True,
            "count": s(self.count),
            "normalisation": f"N^-({s(self.normalisation_exponent)})",
            "lhs": self.lhs_float,
            "M": self.M,
            "local_sum": self.local_sum,
            "local_sum_bounds": [s(b) for b in self.local_sum_bounds],
            "unit_power": s(self.unit_power),
            "rhs": self.rhs_float,
            "h": list(self.h_values),
            "H_used": self.H_used,
            "trace": self.trace,
        }


def local_von_neumann_probe(funcs: Sequence[GridFunction], c: Configuration, N: int, H: int,
                            d: int) -> ProbeReport:
    """EXPERIMENTAL.  Evaluates |T(f_0..f_n)| N^(-(k+1)/k) and the average of
    ||f_n||_{U^d(x+[M])} / ||1||_{U^d(x+[M])} over x, where M is the
    y-range of the concrete differencing chain.  Nothing is asserted:
    the constants in the inequality are not explicit.

    If the greedy chain leaves no admissible shift in [H], H is raised one
    at a time (concrete_linearize itself rejects H > M) and the value used
    is reported.
    """
    if len(funcs) != c.n + 1:
        raise ValueError(f"expected {c.n + 1} functions")
    k = c.max_degree
    T = count_operator(funcs, c).value
    expo = Fraction(k + 1, k)
    lhs = abs(float(T)) * N ** (-float(expo))
    # a greedy chain can exhaust [H] at a late step; widen H until it fits
    H_used = H
    while True:
        try:
            system, trace = concrete_linearize(funcs, c, N, H_used)
            break
        except EmptyParameterRange:
            H_used += 1
    M = trace.M
    scale = gowers_norm_scale(funcs[-1], M, d)
    unit = gowers_norm(GridFunction.box(M), d).power
    unit_root = float(unit) ** (1.0 / 2 ** d)
    rhs = scale.value / unit_root / N
    return ProbeReport(T, expo, lhs, M, scale.value, (scale.lower, scale.upper), unit, rhs,
                       system.h_values or (), H_used, trace.to_json())
