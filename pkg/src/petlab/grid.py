"""Finitely supported functions Z -> Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class GridFunction:
    """f(offset + i) = values[i]; zero everywhere else.

    The stored window is trimmed so that both end values are nonzero (the
    zero function has an empty window).
    """

    __slots__ = ("offset", "values")

    def __init__(self, offset: int = 0, values: Iterable = ()):
        vals = [_q(v) for v in values]
        lo = 0
        while lo < len(vals) and vals[lo] == 0:
            lo += 1
        hi = len(vals)
        while hi > lo and vals[hi - 1] == 0:
            hi -= 1
        self.offset = offset + lo if hi > lo else 0
        self.values: tuple[Fraction, ...] = tuple(vals[lo:hi])

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls) -> "GridFunction":
        return cls()

    @classmethod
    def from_dict(cls, d: Mapping[int, object]) -> "GridFunction":
        items = {int(x): _q(v) for x, v in d.items() if v}
        if not items:
            return cls()
        lo, hi = min(items), max(items)
        return cls(lo, (items.get(x, 0) for x in range(lo, hi + 1)))

    @classmethod
    def indicator(cls, points: Iterable[int]) -> "GridFunction":
        return cls.from_dict({x: 1 for x in points})

    @classmethod
    def interval(cls, lo: int, hi: int, value=1) -> "GridFunction":
        """value * 1_{[lo, hi]} (inclusive)."""
        if hi < lo:
            return cls()
        return cls(lo, [value] * (hi - lo + 1))

    @classmethod
    def box(cls, N: int, value=1) -> "GridFunction":
        """value * 1_[N] with [N] = {1, ..., N}."""
        return cls.interval(1, N, value)

    # access -----------------------------------------------------------------
    def __call__(self, x: int) -> Fraction:
        i = x - self.offset
        if 0 <= i < len(self.values):
            return self.values[i]
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.values

    @property
    def lo(self) -> int | None:
        return self.offset if self.values else None

    @property
    def hi(self) -> int | None:
        return self.offset + len(self.values) - 1 if self.values else None

    @property
    def width(self) -> int:
        return len(self.values)

    def items(self):
        for i, v in enumerate(self.values):
            if v:
                yield self.offset + i, v

    def support(self) -> list[int]:
        return [x for x, _ in self.items()]

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def is_one_bounded(self) -> bool:
        return all(abs(v) <= 1 for v in self.values)

    def check_one_bounded(self) -> None:
        if not self.is_one_bounded():
            raise ValueError("function is not 1-bounded")

    # operations -------------------------------------------------------------
    def translate(self, t: int) -> "GridFunction":
        """x -> f(x + t)."""
        return GridFunction(self.offset - t, self.values)

    def scale(self, c) -> "GridFunction":
        c = _q(c)
        return GridFunction(self.offset, (c * v for v in self.values))

    def __mul__(self, other: "GridFunction") -> "GridFunction":
        if self.is_zero() or other.is_zero():
            return GridFunction()
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if hi < lo:
            return GridFunction()
        return GridFunction(lo, (self(x) * other(x) for x in range(lo, hi + 1)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return GridFunction(lo, (self(x) + other(x) for x in range(lo, hi + 1)))

    def __neg__(self) -> "GridFunction":
        return self.scale(-1)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self + (-other)

    def restrict(self, points: Iterable[int]) -> "GridFunction":
        return GridFunction.from_dict({x: self(x) for x in points})

    def restrict_interval(self, lo: int, hi: int) -> "GridFunction":
        if self.is_zero() or hi < lo:
            return GridFunction()
        a, b = max(lo, self.lo), min(hi, self.hi)
        if b < a:
            return GridFunction()
        return GridFunction(a, self.values[a - self.offset:b - self.offset + 1])

    def delta(self, h: int) -> "GridFunction":
        """x -> f(x + h) f(x)."""
        return self.translate(h) * self

    # equality ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.offset == other.offset and self.values == other.values

    def __hash__(self):
        return hash((self.offset, self.values))

    def __repr__(self):
        if self.is_zero():
            return "GridFunction()"
        return f"GridFunction({self.offset}, {[str(v) for v in self.values]})"

    def to_dict(self) -> dict[int, Fraction]:
        return dict(self.items())


def as_grid(f) -> GridFunction:
    if isinstance(f, GridFunction):
        return f
    if isinstance(f, Mapping):
        return GridFunction.from_dict(f)
    raise TypeError(f"cannot interpret {type(f).__name__} as a grid function")


def interval_points(S) -> list[int]:
    """Normalise a finite set or (start, length) pair to a sorted point list."""
    if isinstance(S, range):
        return list(S)
    if isinstance(S, tuple) and len(S) == 2 and all(isinstance(v, int) for v in S):
        start, length = S
        return list(range(start + 1, start + length + 1))
    return sorted(set(int(x) for x in S))


def sum_fractions(xs: Sequence[Fraction]) -> Fraction:
    return sum(xs, Fraction(0))
