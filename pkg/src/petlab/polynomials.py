"""Exact integer polynomials.

``ParamPoly`` is a sparse polynomial with integer coefficients in the
differencing parameters ``h1, h2, ...``.  ``IntPoly`` is a univariate
polynomial in ``y`` whose coefficients are either Python ints (concrete mode)
or ``ParamPoly`` values (symbolic mode).  Coefficients that happen to be
constant are always demoted to plain ints, so a concrete ``IntPoly`` never
carries a ``ParamPoly``.
"""

from __future__ import annotations

import re
from math import comb, gcd
from typing import Iterable, Mapping, Sequence, Union


def _trim(mono: Sequence[int]) -> tuple[int, ...]:
    mono = list(mono)
    while mono and mono[-1] == 0:
        mono.pop()
    return tuple(mono)


def _mono_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _mono_str(mono: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(f"h{i + 1}")
        elif e > 1:
            parts.append(f"h{i + 1}^{e}")
    return "*".join(parts)


def _mono_key(mono: tuple[int, ...]):
    # graded, then higher-indexed variables first; used only for printing
    return (-sum(mono), tuple(-e for e in reversed(mono)) if mono else ())


class ParamPoly:
    """Integer polynomial in the parameters h1, h2, ... (1-based names)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None):
        clean: dict[tuple[int, ...], int] = {}
        for mono, c in (terms or {}).items():
            if c:
                key = _trim(mono)
                clean[key] = clean.get(key, 0) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean
        self._hash = None

    @classmethod
    def var(cls, index: int) -> "ParamPoly":
        """The parameter ``h_index`` (1-based)."""
        if index < 1:
            raise ValueError("parameter indices start at 1")
        mono = [0] * index
        mono[-1] = 1
        return cls({tuple(mono): 1})

    @classmethod
    def const(cls, c: int) -> "ParamPoly":
        return cls({(): c})

    @classmethod
    def coerce(cls, x: "Coeff") -> "ParamPoly":
        return x if isinstance(x, ParamPoly) else cls.const(int(x))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = ParamPoly.const(other)
        elif not isinstance(other, ParamPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = ParamPoly.const(other)
        elif not isinstance(other, ParamPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ParamPoly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, ParamPoly):
            return NotImplemented
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = ParamPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({(): other} if other else {})
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), 0)

    def constant_term(self) -> int:
        return self.terms.get((), 0)

    def nvars(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def degree_in(self, index: int) -> int:
        i = index - 1
        return max((m[i] if i < len(m) else 0 for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.terms.get(_trim(mono), 0)

    def coefficient_of(self, index: int) -> "ParamPoly":
        """Coefficient of ``h_index`` when the polynomial is linear in it."""
        i = index - 1
        out = {}
        for m, c in self.terms.items():
            e = m[i] if i < len(m) else 0
            if e > 1:
                raise ValueError(f"{self} is not linear in h{index}")
            if e == 1:
                mm = list(m)
                mm[i] = 0
                out[tuple(mm)] = c
        return ParamPoly(out)

    def without(self, index: int) -> "ParamPoly":
        """Terms not involving ``h_index``."""
        i = index - 1
        return ParamPoly({m: c for m, c in self.terms.items() if i >= len(m) or m[i] == 0})

    def exact_div(self, d: int) -> "ParamPoly":
        if any(c % d for c in self.terms.values()):
            raise ValueError(f"{self} is not divisible by {d}")
        return ParamPoly({m: c // d for m, c in self.terms.items()})

    def evaluate(self, values: Sequence[int]) -> int:
        total = 0
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if i >= len(values):
                        raise ValueError(f"no value supplied for h{i + 1}")
                    t *= values[i] ** e
            total += t
        return total

    def nonpositive_nonzero(self) -> bool:
        """True when every coefficient is <= 0 and the polynomial is nonzero.

        Such a polynomial is strictly negative whenever all parameters are
        positive integers.
        """
        return bool(self.terms) and all(c <= 0 for c in self.terms.values())

    def leading_sign(self) -> int:
        if not self.terms:
            return 0
        mono = min(self.terms, key=_mono_key)
        return 1 if self.terms[mono] > 0 else -1

    def sort_key(self):
        return tuple(sorted((_mono_key(m), c) for m, c in self.terms.items()))

    # formatting -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mono in sorted(self.terms, key=_mono_key):
            c = self.terms[mono]
            body = _mono_str(mono)
            mag = abs(c)
            if body:
                piece = body if mag == 1 else f"{mag}*{body}"
            else:
                piece = str(mag)
            if not out:
                out.append(piece if c > 0 else f"-{piece}")
            else:
                out.append(("+ " if c > 0 else "- ") + piece)
        return " ".join(out)

    def __repr__(self):
        return f"ParamPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "ParamPoly":
        """Inverse of ``str``: accepts e.g. ``"2*h1 + h2^2 - 3"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        total = cls()
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coeff = 1
            mono: dict[int, int] = {}
            for factor in body.split("*"):
                m = re.fullmatch(r"h(\d+)(?:\^(\d+))?", factor)
                if m:
                    idx = int(m.group(1))
                    mono[idx] = mono.get(idx, 0) + int(m.group(2) or 1)
                elif re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                else:
                    raise ValueError(f"cannot parse term {body!r} in {text!r}")
            exps = [0] * max(mono, default=0)
            for idx, e in mono.items():
                exps[idx - 1] = e
            total = total + cls({tuple(exps): coeff if sign == "+" else -coeff})
        if len(re.sub(r"[+-]", "", s)) == 0:
            raise ValueError(f"cannot parse {text!r}")
        return total


Coeff = Union[int, ParamPoly]


def demote(c: Coeff) -> Coeff:
    """Return a plain int for constant ParamPolys."""
    if isinstance(c, ParamPoly) and c.is_constant():
        return c.constant_value()
    return c


def coeff_str(c: Coeff) -> str:
    return str(c)


def coeff_is_symbolic(c: Coeff) -> bool:
    return isinstance(c, ParamPoly)


class IntPoly:
    """Polynomial in y with exact integer (or parameter-polynomial) coefficients.

    ``coeffs`` is ascending in degree.  The zero polynomial has ``degree``
    ``None``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        cs = [demote(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Coeff, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def monomial(cls, c: Coeff, k: int) -> "IntPoly":
        return cls([0] * k + [c])

    @classmethod
    def y(cls) -> "IntPoly":
        return cls([0, 1])

    # inspection -------------------------------------------------------------
    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> Coeff:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> Coeff:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_symbolic(self) -> bool:
        return any(isinstance(c, ParamPoly) for c in self.coeffs)

    def height(self) -> int:
        h = 0
        for c in self.coeffs:
            h = max(h, c.max_abs_coeff() if isinstance(c, ParamPoly) else abs(c))
        return h

    def non_constant_part(self) -> "IntPoly":
        if not self.coeffs:
            return self
        return IntPoly((0,) + self.coeffs[1:])

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self.coeff(i) - other.coeff(i) for i in range(n))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def scale(self, c: Coeff) -> "IntPoly":
        return IntPoly(c * a for a in self.coeffs)

    def shift(self, h: Coeff) -> "IntPoly":
        """p(y + h), expanded with the binomial theorem."""
        n = len(self.coeffs)
        if n == 0:
            return self
        powers: list[Coeff] = [1]
        for _ in range(n - 1):
            powers.append(powers[-1] * h)
        out: list[Coeff] = [0] * n
        for j, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for i in range(j + 1):
                out[i] = out[i] + a * comb(j, i) * powers[j - i]
        return IntPoly(out)

    def __call__(self, y: int) -> Coeff:
        acc: Coeff = 0
        for a in reversed(self.coeffs):
            acc = acc * y + a
        return demote(acc)

    def substitute(self, values: Sequence[int]) -> "IntPoly":
        """Instantiate parameter coefficients at ``h = values``."""
        return IntPoly(c.evaluate(values) if isinstance(c, ParamPoly) else c for c in self.coeffs)

    # comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            ystr = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if isinstance(c, ParamPoly) and len(c.terms) > 1:
                cs = f"({c})"
            else:
                cs = str(c)
            if not ystr:
                parts.append(cs)
            elif cs == "1":
                parts.append(ystr)
            elif cs == "-1":
                parts.append(f"-{ystr}")
            else:
                parts.append(f"{cs}*{ystr}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"IntPoly({str(self)!r})"

    def to_list(self) -> list:
        return [c if isinstance(c, int) else str(c) for c in self.coeffs]
