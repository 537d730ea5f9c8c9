"""Nearest-integer distances, k-th power recurrence and Bohr sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


def nearest_int_distance(x) -> Fraction:
    """||x|| = min over integers m of |x - m|."""
    x = Fraction(x)
    f = x - math.floor(x)
    return min(f, 1 - f)


def min_power_distance(alpha, k: int, Q: int) -> tuple[int, Fraction]:
    """argmin over 1 <= q <= Q of ||alpha q^k||, smallest q on ties."""
    if Q < 1:
        raise ValueError("Q must be at least 1")
    alpha = Fraction(alpha)
    alpha -= math.floor(alpha)
    best_q, best = 1, nearest_int_distance(alpha)
    den = alpha.denominator
    for q in range(2, Q + 1):
        if not best:
            break
        # only q^k mod den matters
        d = nearest_int_distance(Fraction(alpha.numerator * pow(q, k, den), den))
        if d < best:
            best_q, best = q, d
    return best_q, best


def iroot(x: int, n: int) -> int:
    """floor(x^(1/n)) for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2 or n == 1:
        return x
    lo, hi = 0, 1 << (x.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** n <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


def power_budget(Q: int, k: int, i: int) -> int:
    """floor(Q^(k^4 / (k^4 + 1)^i)), at least 1."""
    a = k ** 4
    b = (a + 1) ** i
    return max(1, iroot(Q ** a, b))


@dataclass(frozen=True)
class RecurrenceStep:
    budget: int        # Q_i
    q: int             # q_i
    distance: Fraction  # ||alpha_i (q_1 ... q_i)^k||


@dataclass(frozen=True)
class RecurrenceTrace:
    alphas: tuple[Fraction, ...]
    k: int
    Q: int
    steps: tuple[RecurrenceStep, ...]
    q: int
    distances: tuple[Fraction, ...]   # ||alpha_i q^k|| for the final q

    @property
    def max_distance(self) -> Fraction:
        return max(self.distances, default=Fraction(0))

    def within_budget(self) -> bool:
        """q <= Q^(1 - (k^4 + 1)^-r), checked as q^e <= Q^(e - 1) with
        e = (k^4 + 1)^r."""
        if self.k < 2:
            return self.q <= self.Q
        e = (self.k ** 4 + 1) ** len(self.alphas)
        if self.q == 1:
            return True
        # compare logarithms first; only near-ties need the exact powers
        lhs, rhs = e * math.log(self.q), (e - 1) * math.log(self.Q)
        if abs(lhs - rhs) > 1e-9 * max(lhs, rhs):
            return lhs < rhs
        return self.q ** e <= self.Q ** (e - 1)

    def composed_bounds(self) -> list[Fraction]:
        """b^k * ||alpha_i (q_1..q_i)^k|| with b = q_{i+1} ... q_r."""
        out = []
        for i, st in enumerate(self.steps):
            b = 1
            for later in self.steps[i + 1:]:
                b *= later.q
            out.append(b ** self.k * st.distance)
        return out

    def inflation_holds(self) -> bool:
        """||alpha a b|| <= b ||alpha a|| at every step, exactly."""
        prefix = 1
        for alpha, st in zip(self.alphas, self.steps):
            prefix *= st.q
            a = prefix ** self.k
            b = (self.q // prefix) ** self.k
            if nearest_int_distance(alpha * a * b) > b * nearest_int_distance(alpha * a):
                return False
        return True

    def to_json(self) -> dict:
        s = lambda x: f"{x.numerator}/{x.denominator}"
        return {
            "q": self.q,
            "max_distance": s(self.max_distance),
            "distances": [s(d) for d in self.distances],
            "steps": [{"Q_i": st.budget, "q_i": st.q, "distance": s(st.distance)}
                      for st in self.steps],
        }


def simultaneous_power_recurrence(alphas: Sequence, k: int, Q: int) -> RecurrenceTrace:
    """q <= Q making every ||alpha_i q^k|| small, by the iterative scheme:
    q_i minimises ||alpha_i (q_1 ... q_(i-1) q)^k|| over q <= Q_i.

    For k = 1 a joint exhaustive search over q <= Q replaces the iteration.
    """
    als = tuple(Fraction(a) - math.floor(Fraction(a)) for a in alphas)
    if not als:
        raise ValueError("need at least one frequency")
    if Q < 1:
        raise ValueError("Q must be at least 1")
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        best_q, best = 1, None
        for q in range(1, Q + 1):
            m = max(nearest_int_distance(a * q) for a in als)
            if best is None or m < best:
                best_q, best = q, m
            if not m:
                break
        dist = tuple(nearest_int_distance(a * best_q) for a in als)
        return RecurrenceTrace(als, k, Q, (RecurrenceStep(Q, best_q, max(dist)),), best_q, dist)
    steps = []
    prefix = 1
    for i, a in enumerate(als, start=1):
        Qi = power_budget(Q, k, i)
        qi, d = min_power_distance(a * prefix ** k, k, Qi)
        prefix *= qi
        steps.append(RecurrenceStep(Qi, qi, d))
    dist = tuple(nearest_int_distance(a * prefix ** k) for a in als)
    return RecurrenceTrace(als, k, Q, tuple(steps), prefix, dist)


def brute_force_recurrence(alphas: Sequence, k: int, Q: int) -> tuple[int, Fraction]:
    """min over q <= Q of max_i ||alpha_i q^k|| (smallest q on ties)."""
    als = [Fraction(a) % 1 for a in alphas]
    D = math.lcm(*(a.denominator for a in als))
    nums = [a.numerator * (D // a.denominator) for a in als]
    best_q, best = 1, None
    for q in range(1, Q + 1):
        qk = pow(q, k, D)
        # distances scaled by D, all integers
        m = max(min(r, D - r) for r in (n * qk % D for n in nums))
        if best is None or m < best:
            best_q, best = q, m
            if not m:
                break
    return best_q, Fraction(best, D)


# ---------------------------------------------------------------------------
# Bohr sets

@dataclass(frozen=True)
class BohrSpec:
    """B(K, eta) inside [-N/2, N/2)."""

    K: tuple[Fraction, ...]
    eta: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "K", tuple(Fraction(a) % 1 for a in self.K))
        object.__setattr__(self, "eta", Fraction(self.eta))
        if not 0 < self.eta <= Fraction(1, 2):
            raise ValueError("eta must lie in (0, 1/2]")
        if self.N < 1:
            raise ValueError("N must be positive")


def bohr_contains(x: int, spec: BohrSpec) -> bool:
    if not -spec.N <= 2 * x < spec.N:
        return False
    return all(nearest_int_distance(a * x) <= spec.eta for a in spec.K)


def rationalize(x: float, max_denominator: int = 10 ** 6) -> Fraction:
    return Fraction(x).limit_denominator(max_denominator)


@dataclass(frozen=True)
class PowerProgression:
    """start + q^k * {0, ..., length - 1}."""

    start: int
    q: int
    k: int
    length: int
    trace: RecurrenceTrace | None = field(default=None, compare=False)

    @property
    def step(self) -> int:
        return self.q ** self.k

    @property
    def L(self) -> int:
        """Half-length of a symmetric progression."""
        return (self.length - 1) // 2

    @classmethod
    def symmetric(cls, q: int, k: int, L: int, trace=None) -> "PowerProgression":
        return cls(-L * q ** k, q, k, 2 * L + 1, trace)

    def elements(self) -> list[int]:
        return [self.start + self.step * i for i in range(self.length)]

    def __iter__(self):
        return iter(self.elements())

    def to_json(self) -> dict:
        out = {"start": self.start, "q": self.q, "k": self.k, "step": self.step,
               "length": self.length, "L": self.L}
        if self.trace is not None:
            out["trace"] = self.trace.to_json()
        return out


def theory_Q(spec: BohrSpec, k: int, C: float | None = None) -> int:
    """ceil((N / eta)^(1 / (1 + exp(-C |K|)))) with C = 5 ln k by default."""
    if C is None:
        C = 5 * math.log(k) if k > 1 else 0.0
    expo = 1.0 / (1.0 + math.exp(-C * len(spec.K)))
    return max(1, math.ceil(float(spec.N / spec.eta) ** expo))


def _max_symmetric_L(spec: BohrSpec, step: int) -> int:
    L = 0
    while 2 * (L + 1) * step < spec.N:
        x = (L + 1) * step
        if not all(nearest_int_distance(a * x) <= spec.eta for a in spec.K):
            break
        L += 1
    return L


def bohr_power_progression(spec: BohrSpec, k: int, mode: str = "theory",
                           C: float | None = None) -> PowerProgression:
    """A symmetric k-th power progression inside B(K, eta).

    theory: q from the simultaneous recurrence with the proof's Q, then the
    largest L with L q^k < N/2 and L times the achieved distance <= eta.
    optimal: every q with q^k < N/2, keeping the longest certified L
    (smallest q on ties).  Every element is checked before returning.
    """
    if k < 1:
        raise ValueError("k must be positive")
    active = [a for a in spec.K if a]
    trace = None
    if mode == "theory":
        if active:
            trace = simultaneous_power_recurrence(active, k, theory_Q(spec, k, C))
            q, dist = trace.q, trace.max_distance
        else:
            q, dist = 1, Fraction(0)
        step = q ** k
        L = (spec.N - 1) // (2 * step)
        if dist:
            L = min(L, int(spec.eta / dist))
    elif mode == "optimal":
        q, L = 1, -1
        cand = 1
        while 2 * cand ** k < spec.N:
            Lc = _max_symmetric_L(spec, cand ** k)
            if Lc > L:
                q, L = cand, Lc
            cand += 1
        L = max(L, 0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    prog = PowerProgression.symmetric(q, k, L, trace)
    for x in prog:
        if not bohr_contains(x, spec):
            # never hand back an unverified progression
            return PowerProgression.symmetric(q, k, 0, trace)
    return prog
