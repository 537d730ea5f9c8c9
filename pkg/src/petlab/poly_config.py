"""Polynomial configurations, degree sequences and the colex order."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .polynomials import Coeff, IntPoly, ParamPoly


class ConfigurationError(ValueError):
    pass


class BoundExceeded(ArithmeticError):
    """Raised by :func:`bound_R` when the exact value is too large to compute.

    ``lower_bound`` is a certified lower bound for the requested value.
    """

    def __init__(self, lower_bound: int, message: str = ""):
        super().__init__(message or f"R exceeds {lower_bound}")
        self.lower_bound = lower_bound


@dataclass(frozen=True)
class Configuration:
    """x, x + P_1(y), ..., x + P_n(y).

    ``k`` and ``coefficients`` are set for the power form P_i = c_i y^k.
    """

    polys: tuple[IntPoly, ...]
    k: int | None = None
    coefficients: tuple[int, ...] | None = None

    @classmethod
    def power(cls, k: int, coefficients: Sequence[int]) -> "Configuration":
        if k < 1:
            raise ConfigurationError("k must be positive")
        cs = tuple(int(c) for c in coefficients)
        return cls(tuple(IntPoly.monomial(c, k) for c in cs), k, cs)

    @classmethod
    def general(cls, polys: Sequence[IntPoly | Sequence[int]]) -> "Configuration":
        ps = tuple(p if isinstance(p, IntPoly) else IntPoly(p) for p in polys)
        return cls(ps)

    @property
    def n(self) -> int:
        return len(self.polys)

    @property
    def max_degree(self) -> int:
        return max((p.degree or 0) for p in self.polys) if self.polys else 0

    def is_power_form(self) -> bool:
        return self.coefficients is not None

    def to_json(self) -> dict:
        if self.is_power_form():
            return {"k": self.k, "coefficients": list(self.coefficients)}
        return {"polys": [p.to_list() for p in self.polys]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Configuration":
        if "coefficients" in obj:
            return cls.power(int(obj["k"]), obj["coefficients"])
        if "polys" in obj:
            return cls.general([[int(c) for c in p] for p in obj["polys"]])
        raise ConfigurationError("configuration needs 'k'+'coefficients' or 'polys'")


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    pair: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.valid


@dataclass(frozen=True)
class HyperplaneSet:
    normals: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        for v in self.normals:
            if not any(v):
                raise ConfigurationError("hyperplane normals must be nonzero")

    def avoids(self, z: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(v, z)) != 0 for v in self.normals)


class DegreeSequence:
    """Finitely supported map degree -> count, zero entries dropped."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[int, int] | None = None):
        clean = {}
        for r, v in (entries or {}).items():
            if r < 1 or v < 0:
                raise ValueError(f"bad degree-sequence entry {r}: {v}")
            if v:
                clean[int(r)] = int(v)
        self.entries = dict(sorted(clean.items()))

    def __getitem__(self, r: int) -> int:
        return self.entries.get(r, 0)

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def __lt__(self, other: "DegreeSequence") -> bool:
        return colex_compare(self, other) < 0

    def __le__(self, other: "DegreeSequence") -> bool:
        return colex_compare(self, other) <= 0

    def __bool__(self):
        return bool(self.entries)

    @property
    def max_degree(self) -> int:
        return max(self.entries, default=0)

    @property
    def min_degree(self) -> int:
        return min(self.entries, default=0)

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.entries.items())

    def to_json(self) -> dict[str, int]:
        return {str(r): v for r, v in self.entries.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> "DegreeSequence":
        return cls({int(r): int(v) for r, v in obj.items()})

    def __repr__(self):
        return f"DegreeSequence({self.entries})"


def non_constant_part(p: IntPoly) -> IntPoly:
    return p.non_constant_part()


def validate_configuration(c: Configuration) -> ValidityReport:
    """Check that 0, P_1, ..., P_n have pairwise distinct non-constant parts.

    Indices in the report are 1-based for P_i; index 0 is the implicit zero
    polynomial.
    """
    if c.n < 1:
        return ValidityReport(False, None, "configuration needs at least one polynomial")
    parts = [IntPoly()] + [p.non_constant_part() for p in c.polys]
    seen: dict[IntPoly, int] = {}
    for i, q in enumerate(parts):
        if q in seen:
            j = seen[q]
            why = "constant polynomial" if j == 0 else "identical non-constant parts"
            return ValidityReport(False, (j, i), why)
        seen[q] = i
    if c.is_power_form():
        cs = c.coefficients
        for i, j in itertools.combinations(range(len(cs)), 2):
            if cs[i] == cs[j]:
                return ValidityReport(False, (i + 1, j + 1), "repeated coefficient")
        for i, ci in enumerate(cs):
            if ci == 0:
                return ValidityReport(False, (0, i + 1), "zero coefficient")
    return ValidityReport(True)


def degree_sequence_of(polys: Sequence[IntPoly]) -> DegreeSequence:
    leads: dict[int, set] = {}
    for p in polys:
        if p.degree is None or p.degree == 0:
            continue
        leads.setdefault(p.degree, set()).add(p.leading)
    return DegreeSequence({r: len(s) for r, s in leads.items()})


def degree_sequence(c: Configuration) -> DegreeSequence:
    return degree_sequence_of(c.polys)


def colex_compare(a: DegreeSequence, b: DegreeSequence) -> int:
    """-1, 0 or 1 as a precedes, equals or follows b in colex order."""
    top = max(a.max_degree, b.max_degree)
    for r in range(top, 0, -1):
        x, y = a[r], b[r]
        if x != y:
            return -1 if x < y else 1
    return 0


def height(c: Configuration | Sequence[IntPoly]) -> int:
    polys = c.polys if isinstance(c, Configuration) else c
    return max((p.height() for p in polys), default=0)


def shift(p: IntPoly, h: Coeff | str) -> IntPoly:
    """p(y + h); a string such as ``"h1"`` denotes a formal parameter."""
    if isinstance(h, str):
        h = ParamPoly.parse(h)
    return p.shift(h)


# ---------------------------------------------------------------------------
# The recursion R(n, m) bounding the number of differencing steps.

_MAX_BITS = 1 << 16


def descendants(n: int, m: DegreeSequence) -> list[DegreeSequence]:
    """The set M(n, m): entries below the least active degree t sum to at most
    2n, entry t is decremented, entries above t are kept."""
    if not m:
        return []
    t = m.min_degree
    upper = {r: v for r, v in m.entries.items() if r > t}
    if m[t] > 1:
        upper[t] = m[t] - 1
    out = []
    for lower in _compositions(2 * n, t - 1):
        entries = dict(upper)
        entries.update({r + 1: v for r, v in enumerate(lower) if v})
        out.append(DegreeSequence(entries))
    return out


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints with sum <= total."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bound_R(n: int, m: DegreeSequence, limit: int | None = None) -> int:
    """R(n, m) := 1 + max_{n' <= 2n, m' in M(n, m)} R(n', m'), R = 1 on degree 1.

    R is nondecreasing in n, so the maximum over n' is attained at n' = 2n.
    Degree <= 2 tails are evaluated in closed form; deeper ones enumerate M.
    Raises :class:`BoundExceeded` when an intermediate value passes ``limit``
    (default: numbers wider than 2**16 bits); the exception carries a
    certified lower bound for R(n, m).
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if not m:
        raise ValueError("degree sequence must be nonempty")
    cap = limit if limit is not None else None
    return _R(n, m.key(), cap)


def _too_big(x: int, cap: int | None) -> bool:
    if cap is not None:
        return x > cap
    return x.bit_length() > _MAX_BITS


def _R(n: int, m: tuple[tuple[int, int], ...], cap: int | None) -> int:
    entries = dict(m)
    if not entries or max(entries) == 1:
        return 1
    d1 = entries.pop(1, 0)
    if d1:
        # t = 1: no entries below t, so each step just removes one degree-1 entry
        rest = tuple(sorted(entries.items()))
        nn = n << d1
        if _too_big(nn, cap) and _depends_on_n(rest):
            raise BoundExceeded(d1 + 2 * nn)
        val = d1 + _R(nn, rest, cap)
        if cap is not None and val > cap:
            raise BoundExceeded(val)
        return val
    if max(entries) == 2:
        a = entries[2]
        return _F(n, a, cap)
    t = min(entries)
    if _too_big(2 * n, cap) or 2 * n > 64:
        # every m' in M(n, m) has a choice putting 2n at degree t-1 >= 2,
        # which forces R(2n, m') >= 2n
        raise BoundExceeded(2 * n)
    return _R_enum(n, m, cap)


@lru_cache(maxsize=None)
def _R_enum(n: int, m: tuple[tuple[int, int], ...], cap: int | None) -> int:
    best = 0
    for mp in descendants(n, DegreeSequence(dict(m))):
        best = max(best, _R(2 * n, mp.key(), cap) if mp else 1)
    val = 1 + best
    if cap is not None and val > cap:
        raise BoundExceeded(val)
    return val


def _depends_on_n(m: tuple[tuple[int, int], ...]) -> bool:
    entries = dict(m)
    if not entries:
        return False
    if max(entries) == 2 and entries[2] == 1 and len(entries) == 1:
        return False
    return True


def _F(n: int, a: int, cap: int | None) -> int:
    """R(n, {2: a}) = 1 + 2n + R(2^(2n+1) n, {2: a-1}) for a >= 2, R(n, {2: 1}) = 2."""
    if a == 1:
        return 2
    total = 0
    while True:
        total += 1 + 2 * n
        if a == 2:
            total += 2
            break
        if cap is not None and total > cap:
            raise BoundExceeded(total)
        if 2 * n + 1 > _MAX_BITS:
            raise BoundExceeded(total + 3)
        n = n << (2 * n + 1)
        a -= 1
    if cap is not None and total > cap:
        raise BoundExceeded(total)
    return total


# ---------------------------------------------------------------------------
# Homogeneous reduction


@dataclass(frozen=True)
class HomogeneousReduction:
    z: tuple[int, ...]
    coefficients: tuple[int, ...]
    distinct_nonzero: bool
    note: str = ""

    def configuration(self, k: int) -> Configuration:
        return Configuration.power(k, self.coefficients)


MultiPoly = Mapping[tuple[int, ...], int]


def _eval_multi(p: MultiPoly, z: Sequence[int]) -> int:
    total = 0
    for exps, c in p.items():
        t = c
        for zi, e in zip(z, exps):
            t *= zi ** e
        total += t
    return total


def homogeneous_degree(p: MultiPoly) -> int:
    degs = {sum(e) for e, c in p.items() if c}
    if len(degs) != 1:
        raise ConfigurationError("polynomial is not homogeneous (or is zero)")
    return degs.pop()


def reduce_homogeneous(polys: Sequence[MultiPoly], K: HyperplaneSet,
                       search_bound: int) -> HomogeneousReduction:
    """Pick z outside the hyperplanes of K and return c_i = P_i(z).

    Polynomials are maps from exponent tuples to coefficients.  The box
    [-B, B]^m is scanned lexicographically (z = 0 skipped) and the first
    admissible point wins.
    """
    if not polys:
        raise ConfigurationError("need at least one polynomial")
    if search_bound < 1:
        raise ValueError("search_bound must be positive")
    m = {len(e) for p in polys for e in p}
    if len(m) != 1:
        raise ConfigurationError("all polynomials must use the same number of variables")
    m = m.pop()
    if m < 1:
        raise ConfigurationError("need at least one variable")
    degs = {homogeneous_degree(p) for p in polys}
    if len(degs) != 1:
        raise ConfigurationError("polynomials must share one degree")
    for v in K.normals:
        if len(v) != m:
            raise ConfigurationError("normal dimension does not match variable count")
    rng = range(-search_bound, search_bound + 1)
    for z in itertools.product(rng, repeat=m):
        if not any(z) or not K.avoids(z):
            continue
        cs = tuple(_eval_multi(p, z) for p in polys)
        ok = len(set(cs)) == len(cs) and all(cs)
        note = "" if ok else "coefficients not distinct and nonzero"
        return HomogeneousReduction(tuple(z), cs, ok, note)
    raise ConfigurationError(f"no point in [-{search_bound}, {search_bound}]^{m} avoids K")
