"""Seeded property suites, shared by the CLI ``verify`` command and the tests.

Randomness comes from SplitMix64 so that a seed reproduces the same
instances in any implementation of the generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .counting import (DensitySet, balanced_expansion, balanced_function, count_in_set,
                       count_operator, naive_count)
from .diophantine import (BohrSpec, bohr_contains, bohr_power_progression,
                          brute_force_recurrence, nearest_int_distance,
                          simultaneous_power_recurrence, _max_symmetric_L)
from .gowers import delta, gowers_norm, u2_fourier_check
from .grid import GridFunction
from .increment import (exhaustive_increment_oracle, find_power_increment,
                        partition_increment, rescale)
from .diophantine import PowerProgression
from .pet import verify_vdc
from .poly_config import Configuration, DegreeSequence, colex_compare

_MASK = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea, Flood)."""

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n) (plain modulo reduction)."""
        return self.next() % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def fraction(self, bound: int = 5, den: int = 6) -> Fraction:
        return Fraction(self.randint(-bound, bound), self.randint(1, den))

    def sample(self, pool: list, k: int) -> list:
        pool = list(pool)
        out = []
        for _ in range(min(k, len(pool))):
            out.append(pool.pop(self.below(len(pool))))
        return out


@dataclass
class SuiteResult:
    suite: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, info=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(info)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        out = {"suite": self.suite, "passed": self.passed, "failed": self.failed}
        if self.failures:
            out["failures"] = [str(f) for f in self.failures]
        return out


# ---------------------------------------------------------------------------
# generators

def random_grid(rng: SplitMix64, max_support: int, one_bounded: bool = False,
                offset_range: int = 20) -> GridFunction:
    width = rng.randint(1, max_support)
    offset = rng.randint(-offset_range, offset_range)
    if one_bounded:
        vals = [Fraction(rng.randint(-4, 4), 4) for _ in range(width)]
    else:
        vals = [rng.fraction() for _ in range(width)]
    return GridFunction(offset, vals)


def random_power_config(rng: SplitMix64, n_max: int = 3, k_max: int = 3,
                        c_max: int = 3) -> Configuration:
    n = rng.randint(1, n_max)
    k = rng.randint(1, k_max)
    pool = [c for c in range(-c_max, c_max + 1) if c]
    return Configuration.power(k, rng.sample(pool, n))


def random_set(rng: SplitMix64, N: int, num: int = 1, den: int = 2) -> DensitySet:
    return DensitySet.from_members(N, [x for x in range(1, N + 1) if rng.chance(num, den)])


def random_lacking_set(rng: SplitMix64, N: int, c: Configuration) -> DensitySet:
    """Greedy insertion in random order, keeping the configuration out."""
    order = rng.sample(range(1, N + 1), N)
    A = DensitySet(N)
    for x in order:
        B = DensitySet(N, A.mask | (1 << x))
        if count_in_set(B, c) == 0:
            A = B
    return A


# ---------------------------------------------------------------------------
# suites

def suite_vdc(trials: int = 1000, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("vdc")
    for t in range(trials):
        g = random_grid(rng, 50)
        S = set(g.support())
        extra = rng.randint(0, 5)
        for _ in range(extra):
            S.add(rng.randint(g.offset - 10, g.offset + g.width + 10))
        H = {rng.randint(-10, 10) for _ in range(rng.randint(1, 6))}
        lhs, rhs = verify_vdc(g, H, S)
        res.record(lhs <= rhs, (t, lhs, rhs))
    return res


def _power_direct(f: GridFunction, d: int) -> Fraction:
    """sum over h_1..h_(d-1) of (sum_x Delta_{h} f(x))^2."""
    if f.is_zero():
        return Fraction(0)
    w = f.width
    total = Fraction(0)
    for hs in itertools.product(range(-w + 1, w), repeat=d - 1):
        g = f
        for h in hs:
            g = delta(g, h)
        total += g.total() ** 2
    return total


def suite_gowers(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("gowers")
    for t in range(trials):
        f = random_grid(rng, 30)
        for d in (2, 3):
            p = gowers_norm(f, d).power
            rec = Fraction(0)
            for h in range(-f.width + 1, f.width):
                rec += gowers_norm(delta(f, h), d - 1).power
            square = _power_direct(f, d) if d == 2 or f.width <= 12 else p
            res.record(p == rec and p >= 0 and p == square, (t, d, p, rec, square))
    return res


def suite_u2(trials: int = 50, seed: int = 0, grid: int = 512, tol: float = 1e-6) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("u2")
    for t in range(trials):
        f = random_grid(rng, 64, one_bounded=True)
        exact, l4, gap = u2_fourier_check(f, grid)
        res.record(gap <= tol or (exact == 0 and abs(l4) <= tol), (t, exact, l4, gap))
    return res


def suite_counting(trials: int = 200, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("counting")
    for t in range(trials):
        c = random_power_config(rng)
        N = rng.randint(1, 200)
        fs = []
        for _ in range(c.n + 1):
            if rng.chance(1, 2):
                fs.append(random_set(rng, N).indicator())
            else:
                fs.append(GridFunction(1, [Fraction(rng.randint(-3, 3), 3) for _ in range(N)]))
        fast = count_operator(fs, c).value
        # supports lie in [N] and |c y^k| >= y, so y < N covers everything
        slow = naive_count(fs, c, N)
        res.record(fast == slow, (t, c.coefficients, c.k, N, fast, slow))
    return res


def suite_expansion(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("expansion")
    for t in range(trials):
        c = random_power_config(rng, n_max=2)
        A = random_set(rng, rng.randint(1, 100))
        terms = balanced_expansion(A, c)
        total = sum((x.value for x in terms), Fraction(0))
        ok = (len(terms) == 2 ** (c.n + 1) and total == count_in_set(A, c)
              and balanced_function(A).total() == 0)
        res.record(ok, (t, A.N, c.coefficients, total))
    return res


def suite_diophantine(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("diophantine")
    for t in range(trials):
        r = rng.randint(1, 3)
        k = rng.randint(2, 3)
        Q = rng.randint(2, 10 ** 4)
        alphas = [Fraction(rng.randint(0, 999), rng.randint(1, 1000)) for _ in range(r)]
        tr = simultaneous_power_recurrence(alphas, k, Q)
        _, opt = brute_force_recurrence(alphas, k, Q)
        composed = tr.composed_bounds()
        ok = (tr.within_budget() and tr.q <= Q and tr.inflation_holds()
              and opt <= tr.max_distance
              and all(dd <= b for dd, b in zip(tr.distances, composed)))
        res.record(ok, (t, alphas, k, Q, tr.q))
    return res


def suite_bohr(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("bohr")
    for t in range(trials):
        K = [Fraction(rng.randint(0, 49), rng.randint(1, 50)) for _ in range(rng.randint(0, 3))]
        eta = Fraction(rng.randint(1, 50), 100)
        spec = BohrSpec(K, eta, rng.randint(1, 300))
        k = rng.randint(1, 3)
        ok = True
        for mode in ("theory", "optimal"):
            prog = bohr_power_progression(spec, k, mode)
            ok &= all(bohr_contains(x, spec) for x in prog)
            if mode == "optimal":
                ok &= prog.L == _max_symmetric_L(spec, prog.step)
        res.record(ok, (t, K, eta, spec.N, k))
    return res


def suite_rescale(trials: int = 100, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("rescale")
    for t in range(trials):
        k = rng.randint(1, 3)
        n = rng.randint(1, 2)
        c = Configuration.power(k, sorted(rng.sample([1, 2, 3], n)))
        N = rng.randint(3, 500)
        A = random_lacking_set(rng, N, c)
        q = 1
        while rng.chance(1, 2) and (q + 1) ** k < N:
            q += 1
        step = q ** k
        a = rng.randint(1, N)
        L = rng.randint(1, (N - a) // step + 1)
        B = rescale(A, PowerProgression(a, q, k, L))
        res.record(count_in_set(A, c) == 0 and count_in_set(B, c) == 0, (t, N, a, q, L))
    return res


def suite_increment(trials: int = 30, seed: int = 0, N_max: int = 200) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("increment")
    for t in range(trials):
        N = rng.randint(1, N_max)
        A = random_set(rng, N, rng.randint(1, 3), 4)
        k = rng.randint(1, 3)
        m = rng.randint(1, 4)
        got = find_power_increment(A, k, m)
        want = exhaustive_increment_oracle(A, k, m)
        if got is None or want is None:
            ok = got is None and want is None
        else:
            p = got.progression
            ok = (p.start, p.q, p.length, got.hits, got.relative_density) == want
        res.record(ok, (t, N, k, m))
    return res


def suite_partition(trials: int = 200, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("partition")
    for t in range(trials):
        N = rng.randint(2, 60)
        raw = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(N)]
        mean = sum(raw, Fraction(0)) / N
        f = GridFunction(1, [v - mean for v in raw])
        cuts = sorted(set(rng.sample(range(2, N + 1), rng.randint(0, N - 1))))
        bounds = [1] + cuts + [N + 1]
        pieces = [list(range(a, b)) for a, b in zip(bounds, bounds[1:])]
        sums = [sum((f(x) for x in p), Fraction(0)) for p in pieces]
        theta = sum(abs(s) for s in sums) / N
        pick = partition_increment(f, pieces)
        if theta == 0:
            ok = pick is None or pick.piece_sum > 0
        else:
            ok = pick is not None and pick.piece_sum >= theta / 2 * pick.size
        res.record(ok, (t, N, theta))
    return res


def suite_colex(trials: int = 10 ** 4, seed: int = 0) -> SuiteResult:
    rng = SplitMix64(seed)
    res = SuiteResult("colex")

    def rand_seq():
        return DegreeSequence({r: rng.randint(0, 3) for r in range(1, rng.randint(1, 5) + 1)})

    for t in range(trials):
        a, b, c = rand_seq(), rand_seq(), rand_seq()
        ab, ba = colex_compare(a, b), colex_compare(b, a)
        ok = ab == -ba and (ab != 0 or a == b)
        if colex_compare(a, b) <= 0 and colex_compare(b, c) <= 0:
            ok &= colex_compare(a, c) <= 0
        res.record(ok, (t, a, b, c))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "vdc": suite_vdc,
    "gowers": suite_gowers,
    "u2": suite_u2,
    "counting": suite_counting,
    "expansion": suite_expansion,
    "diophantine": suite_diophantine,
    "bohr": suite_bohr,
    "rescale": suite_rescale,
    "increment": suite_increment,
    "partition": suite_partition,
    "colex": suite_colex,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = SUITES[name]
    return fn(seed=seed) if trials is None else fn(trials=trials, seed=seed)
