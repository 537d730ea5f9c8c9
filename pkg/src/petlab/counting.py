"""Counting polynomial configurations in sets and weighted functions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .grid import GridFunction
from .poly_config import Configuration, ConfigurationError, validate_configuration
from .polynomials import IntPoly


@dataclass(frozen=True)
class DensitySet:
    """A subset of [N] = {1..N} stored as a bitmask (bit x set iff x in A)."""

    N: int
    mask: int = 0

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be non-negative")
        if self.mask >> (self.N + 1) or self.mask & 1:
            raise ValueError("members must lie in [N]")

    @classmethod
    def from_members(cls, N: int, members: Iterable[int]) -> "DensitySet":
        m = 0
        for x in members:
            if not 1 <= x <= N:
                raise ValueError(f"{x} is outside [1, {N}]")
            m |= 1 << x
        return cls(N, m)

    @classmethod
    def full(cls, N: int) -> "DensitySet":
        return cls(N, ((1 << N) - 1) << 1)

    def __contains__(self, x: int) -> bool:
        return 1 <= x <= self.N and bool(self.mask >> x & 1)

    def __iter__(self):
        m, x = self.mask, 0
        while m:
            if m & 1:
                yield x
            m >>= 1
            x += 1

    def __len__(self):
        return self.mask.bit_count()

    @property
    def size(self) -> int:
        return len(self)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self), self.N) if self.N else Fraction(0)

    def members(self) -> list[int]:
        return list(self)

    def indicator(self) -> GridFunction:
        return GridFunction.indicator(self)

    def add(self, x: int) -> "DensitySet":
        return DensitySet.from_members(self.N, list(self) + [x])

    def issubset(self, other: "DensitySet") -> bool:
        return self.mask & ~other.mask == 0

    def to_text(self) -> str:
        return "\n".join([f"#N={self.N}"] + [str(x) for x in self]) + "\n"


def _check(funcs, c: Configuration):
    rep = validate_configuration(c)
    if not rep:
        raise ConfigurationError(f"invalid configuration: {rep.reason} at {rep.pair}")
    if len(funcs) != c.n + 1:
        raise ValueError(f"configuration needs {c.n + 1} functions, got {len(funcs)}")


def _y_bound(polys: Sequence[IntPoly], ranges: Sequence[tuple[int, int]]) -> int:
    """Y such that every |y| > Y pushes some x + P_i(y) out of range.

    ``ranges[i]`` bounds the admissible values of P_i(y).  For |y| >= 1,
    |P(y)| >= |y|^(d-1) (|a_d| |y| - S) with S the sum of the lower |a_j|,
    so |y| > S + B already forces |P(y)| > B.
    """
    best = None
    for p, (lo, hi) in zip(polys, ranges):
        B = max(abs(lo), abs(hi))
        S = sum(abs(a) for a in p.coeffs[:-1])
        Y = S + B
        best = Y if best is None else min(best, Y)
    return best if best is not None else 0


@dataclass(frozen=True)
class CountReport:
    value: Fraction
    y_range: tuple[int, int]
    term_count: int
    both_signs: bool = False

    def as_int(self) -> int:
        if self.value.denominator != 1:
            raise ValueError(f"count {self.value} is not integral")
        return int(self.value)


def count_operator(funcs: Sequence[GridFunction], c: Configuration,
                   both_signs: bool = False) -> CountReport:
    """sum_x sum_{y >= 1} f_0(x) prod_i f_i(x + P_i(y)), exactly.

    With ``both_signs`` y runs over all nonzero integers.  The y-range is
    derived from the supports, so nothing is truncated.
    """
    _check(funcs, c)
    fs = [f if isinstance(f, GridFunction) else GridFunction.from_dict(f) for f in funcs]
    if any(f.is_zero() for f in fs):
        return CountReport(Fraction(0), (1, 0), 0, both_signs)
    f0 = fs[0]
    ranges = [(f.lo - f0.hi, f.hi - f0.lo) for f in fs[1:]]
    Y = _y_bound(c.polys, ranges)
    ys = list(range(1, Y + 1))
    if both_signs:
        ys = list(range(-Y, 0)) + ys
    total = Fraction(0)
    terms = 0
    for y in ys:
        shifts = [p(y) for p in c.polys]
        lo, hi = f0.lo, f0.hi
        for f, s in zip(fs[1:], shifts):
            lo, hi = max(lo, f.lo - s), min(hi, f.hi - s)
        for x in range(lo, hi + 1):
            v = f0(x)
            for f, s in zip(fs[1:], shifts):
                if not v:
                    break
                v *= f(x + s)
            if v:
                total += v
                terms += 1
    return CountReport(total, (-Y if both_signs else 1, Y), terms, both_signs)


def naive_count(funcs: Sequence[GridFunction], c: Configuration, y_max: int,
                both_signs: bool = False) -> Fraction:
    """Plain double loop over x in supp f_0 and 1 <= |y| <= y_max."""
    ys = range(-y_max, y_max + 1) if both_signs else range(1, y_max + 1)
    total = Fraction(0)
    for y in ys:
        if y == 0:
            continue
        for x, v in funcs[0].items():
            for f, p in zip(funcs[1:], c.polys):
                v *= f(x + p(y))
            total += v
    return total


def count_in_set(A: DensitySet, c: Configuration, both_signs: bool = False) -> int:
    """Number of (x, y) with x and every x + P_i(y) in A (y >= 1 by default)."""
    _check([None] * (c.n + 1), c)
    if not A.mask:
        return 0
    rng = (1 - A.N, A.N - 1)
    Y = _y_bound(c.polys, [rng] * c.n)
    ys = range(-Y, Y + 1) if both_signs else range(1, Y + 1)
    total = 0
    for y in ys:
        if y == 0:
            continue
        m = A.mask
        for p in c.polys:
            s = p(y)
            m &= (A.mask >> s) if s >= 0 else (A.mask << -s)
            if not m:
                break
        total += m.bit_count()
    return total


def lacks(A: DensitySet, c: Configuration, both_signs: bool = False) -> bool:
    return count_in_set(A, c, both_signs) == 0


def trivial_count(N: int, c: Configuration) -> int:
    """sum over y >= 1 with c_n y^k < N of (N - c_n y^k)."""
    if not c.is_power_form():
        raise ConfigurationError("trivial_count needs a power configuration")
    cs = c.coefficients
    if cs[0] <= 0 or any(b <= a for a, b in zip(cs, cs[1:])):
        raise ConfigurationError("coefficients must be positive and increasing")
    top, k = cs[-1], c.k
    total, y = 0, 1
    while top * y ** k < N:
        total += N - top * y ** k
        y += 1
    return total


def balanced_function(A: DensitySet) -> GridFunction:
    """1_A - delta 1_[N]."""
    d = A.density
    return GridFunction(1, ((1 if x in A else 0) - d for x in range(1, A.N + 1)))


@dataclass(frozen=True)
class ExpansionTerm:
    """``label[i]`` is "d" for delta 1_[N] in slot i and "f" for f_A."""

    label: str
    value: Fraction

    @property
    def balanced_slots(self) -> int:
        return self.label.count("f")


def balanced_expansion(A: DensitySet, c: Configuration,
                       both_signs: bool = False) -> list[ExpansionTerm]:
    """T(1_A, ..., 1_A) split into 2^(n+1) terms via 1_A = delta 1_[N] + f_A."""
    dense = GridFunction.box(A.N, A.density)
    bal = balanced_function(A)
    out = []
    for label in itertools.product("df", repeat=c.n + 1):
        fs = [dense if s == "d" else bal for s in label]
        out.append(ExpansionTerm("".join(label), count_operator(fs, c, both_signs).value))
    return out
