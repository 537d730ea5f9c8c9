"""Gowers uniformity norms, computed exactly."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .grid import GridFunction, as_grid

__all__ = [
    "GridFunction", "NormValue", "ScaleNorm", "delta", "gowers_norm", "gowers_norm_local",
    "gowers_norm_scale", "fourier_transform", "fourier_residues", "u2_fourier_check",
    "root_bracket",
]


@dataclass(frozen=True)
class NormValue:
    """``power`` is ||f||^(2^d); for d = 1 it is (sum f)^2."""

    power: Fraction
    degree: int

    @property
    def real_root(self) -> float:
        return float(self.power) ** (1.0 / 2 ** self.degree)

    @property
    def value(self) -> float:
        return self.real_root

    def bracket(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        return root_bracket(self.power, self.degree, bits)


def delta(f: GridFunction, h: int) -> GridFunction:
    """x -> f(x + h) f(x)."""
    return as_grid(f).delta(h)


def _integerise(f: GridFunction) -> tuple[list[int], int]:
    """Scale values to integers; returns (ints, common denominator)."""
    den = 1
    for v in f.values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in f.values], den


def _autocorr(vals: Sequence[int]) -> list[int]:
    """c[h] = sum_x v[x + h] v[x] for h = 0 .. len - 1."""
    n = len(vals)
    out = []
    for h in range(n):
        out.append(sum(vals[x + h] * vals[x] for x in range(n - h)))
    return out


def _power_int(vals: list[int], d: int) -> int:
    if not vals:
        return 0
    if d == 1:
        return sum(vals) ** 2
    if d == 2:
        c = _autocorr(vals)
        return c[0] ** 2 + 2 * sum(x * x for x in c[1:])
    n = len(vals)
    total = _power_int([v * v for v in vals], d - 1)
    for h in range(1, n):
        dv = [vals[x + h] * vals[x] for x in range(n - h)]
        # the difference at -h is a translate of the one at h
        total += 2 * _power_int(_trim(dv), d - 1)
    return total


def _trim(vals: list[int]) -> list[int]:
    lo, hi = 0, len(vals)
    while lo < hi and vals[lo] == 0:
        lo += 1
    while hi > lo and vals[hi - 1] == 0:
        hi -= 1
    return vals[lo:hi]


def gowers_norm(f, d: int) -> NormValue:
    """||f||_{U^d}^(2^d), via ||f||^(2^d) = sum_h ||Delta_h f||^(2^(d-1))."""
    if d < 1:
        raise ValueError("d must be at least 1")
    f = as_grid(f)
    vals, den = _integerise(f)
    return NormValue(Fraction(_power_int(vals, d), den ** (2 ** d)), d)


def gowers_norm_local(f, S, d: int) -> NormValue:
    """||f 1_S||_{U^d}.  ``S`` is a range, a set of integers or (start, length)
    meaning start + [length]."""
    f = as_grid(f)
    if isinstance(S, tuple) and len(S) == 2:
        start, length = S
        g = f.restrict_interval(start + 1, start + length)
    elif isinstance(S, range) and S.step == 1:
        g = f.restrict_interval(S.start, S.stop - 1)
    else:
        g = f.restrict(S)
    return gowers_norm(g, d)


def root_bracket(p: Fraction, d: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """lo <= p^(1/2^d) <= hi with hi - lo <= 2^-bits."""
    p = Fraction(p)
    if p < 0:
        raise ValueError("negative power")
    m = 2 ** d
    scale = 1 << (bits * m)
    x = p.numerator * scale // p.denominator
    for _ in range(d):
        x = math.isqrt(x)
    lo = Fraction(x, 1 << bits)
    hi = lo if lo ** m == p else Fraction(x + 1, 1 << bits)
    return lo, hi


@dataclass(frozen=True)
class ScaleNorm:
    """sum_x ||f||_{U^d(x+[M])}: a float, certified bounds and the exact powers."""

    value: float
    lower: Fraction
    upper: Fraction
    powers: tuple[tuple[int, Fraction], ...]

    @property
    def error(self) -> Fraction:
        return self.upper - self.lower


def gowers_norm_scale(f, M: int, d: int, exact: bool = False, bits: int = 64):
    """Sum over x of the U^d norm of f restricted to x + [M].

    Only windows meeting the support contribute.  With ``exact`` the list of
    (x, power) pairs is returned instead of the sum of roots.
    """
    if M < 1:
        raise ValueError("M must be positive")
    if d < 1:
        raise ValueError("d must be at least 1")
    f = as_grid(f)
    powers = []
    if not f.is_zero():
        for x in range(f.lo - M, f.hi):
            p = gowers_norm(f.restrict_interval(x + 1, x + M), d).power
            if p:
                powers.append((x, p))
    if exact:
        return powers
    lo = hi = Fraction(0)
    val = 0.0
    for _, p in powers:
        a, b = root_bracket(p, d, bits)
        lo += a
        hi += b
        val += float(p) ** (1.0 / 2 ** d)
    return ScaleNorm(val, lo, hi, tuple(powers))


def fourier_residues(f, alpha: Fraction) -> tuple[int, list[Fraction]]:
    """For alpha = p/q, the class sums c_j = sum_{x = j mod q} f(x).

    f^(alpha) = sum_j c_j e(p j / q) exactly.
    """
    f = as_grid(f)
    alpha = Fraction(alpha)
    q = alpha.denominator
    cs = [Fraction(0)] * q
    for x, v in f.items():
        cs[x % q] += v
    return q, cs


def fourier_transform(f, alpha) -> complex:
    """sum_x f(x) e(alpha x) with e(t) = exp(2 pi i t).

    Rational alpha is reduced to a sum over residues mod its denominator;
    rounding below 1e-12 of the magnitude is snapped to zero.
    """
    f = as_grid(f)
    if isinstance(alpha, float):
        return sum(complex(v) * cmath.exp(2j * math.pi * alpha * x) for x, v in f.items())
    alpha = Fraction(alpha)
    q, cs = fourier_residues(f, alpha)
    p = alpha.numerator
    total = 0j
    mass = 0.0
    for j, c in enumerate(cs):
        if c:
            total += float(c) * _e(Fraction(p * j, q))
            mass += abs(float(c))
    re = total.real if abs(total.real) > 1e-12 * max(mass, 1) else 0.0
    im = total.imag if abs(total.imag) > 1e-12 * max(mass, 1) else 0.0
    return complex(re, im)


def _e(t: Fraction) -> complex:
    t = t - math.floor(t)
    # exact values at the quarter turns
    table = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if t in table:
        return table[t]
    return cmath.exp(2j * math.pi * float(t))


def default_grid(width: int) -> int:
    g = 1
    while g < 8 * max(width, 1):
        g *= 2
    return g


def u2_fourier_check(f, grid_size: int | None = None) -> tuple[Fraction, float, float]:
    """(||f||_{U^2}^4, discretised integral of |f^|^4, relative gap).

    The integral is the mean of |F|^4 over a length-``grid_size`` DFT, exact
    up to rounding once grid_size >= 4 W for a window of width W.
    """
    f = as_grid(f)
    W = f.width
    if grid_size is None:
        grid_size = default_grid(W)
    if grid_size < 4 * W:
        raise ValueError(f"grid of size {grid_size} is below 4 * window width {4 * W}")
    exact = gowers_norm(f, 2).power
    if W == 0:
        return exact, 0.0, 0.0
    arr = np.zeros(grid_size)
    arr[:W] = [float(v) for v in f.values]
    spec = np.fft.fft(arr)
    l4 = float(np.mean(np.abs(spec) ** 4))
    gap = abs(l4 - float(exact)) / float(exact) if exact else abs(l4)
    return exact, l4, gap


def indicator(points: Iterable[int]) -> GridFunction:
    return GridFunction.indicator(points)
