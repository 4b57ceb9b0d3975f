"""The rough-number indicator, Buchstab's identity, the minorant and interval experiments.

With z = X^(2/11) the minorant is

    rho-(n) = rho(n, z) - sum_{n = q m, z <= q < 2 X^(1/2)} rho(m, z)
              + sum_{n = q1 q2 m} rho(m, z) - sum_{n = q1 q2 q3 m} rho(m, z),

the last two sums over primes z <= ... < q2 < q1 < X^(1/4 - 2 eps) with
q1 q2^4 < X^(1 - 2 eps). Each sum enumerates a prime value q dividing n
once, with cofactor m = n/q.

Since every q is at least z, rho(m, z) = rho(n, z) whenever m = n/(q...).
Hence rho-(n) = rho(n, z) (1 - c1 + c2 - c3) where c1, c2, c3 count the
admissible single primes, pairs and triples dividing n. The array code
uses this; :func:`rho_minus` evaluates the definition term by term and
serves as its oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core_arith import PrimeTable, factorize, segmented_big_omega
from .errors import InvalidArgumentError

A_SLACK = 1e-4


@dataclass(frozen=True)
class MinorantParams:
    """Scales of the minorant experiment.

    ``a`` must lie in [c - 1 - 1/10000, c - 1] unless ``exploratory`` is set.
    """

    X: int
    eps: float = 0.01
    c: float = 2.1
    a: float = 1.1
    exploratory: bool = False

    def __post_init__(self):
        if int(self.X) != self.X or self.X < 3:
            raise InvalidArgumentError(f"X must be an integer >= 3, got {self.X}")
        if not 0.0 < self.eps < 1.0 / 8:
            raise InvalidArgumentError(f"eps must lie in (0, 1/8), got {self.eps}")
        if self.c <= 1.0 or self.a <= 0.0:
            raise InvalidArgumentError(f"need c > 1 and a > 0, got c={self.c}, a={self.a}")
        lo, hi = self.c - 1.0 - A_SLACK, self.c - 1.0
        if not self.exploratory and not lo - 1e-12 <= self.a <= hi + 1e-12:
            raise InvalidArgumentError(
                f"a={self.a} outside [c-1-1/10000, c-1] = [{lo}, {hi}]; "
                "set exploratory=True to relax")

    @property
    def log_X(self) -> float:
        return math.log(self.X)

    @property
    def z(self) -> float:
        return self.X ** (2.0 / 11.0)

    @property
    def P1(self) -> float:
        return self.log_X ** self.a

    @property
    def h(self) -> float:
        return self.log_X ** self.c

    @property
    def h1(self) -> float:
        return self.X ** 0.99

    @property
    def n_lo(self) -> int:
        """Smallest integer in [2 sqrt(X), 3X]."""
        r = math.isqrt(4 * self.X)
        return r if r * r == 4 * self.X else r + 1

    @property
    def n_hi(self) -> int:
        return 3 * self.X

    @property
    def q_single_cap(self) -> float:
        return 2.0 * math.sqrt(self.X)

    @property
    def q_cap(self) -> float:
        return self.X ** (0.25 - 2 * self.eps)

    @property
    def line_cap(self) -> float:
        return self.X ** (1.0 - 2 * self.eps)

    def bound_factor(self) -> float:
        """4 (log 3X / log z)^3, the size bound on |rho-| for z-rough n."""
        return 4.0 * (math.log(3 * self.X) / math.log(self.z)) ** 3


def _rough(m: int, z: float, spf: np.ndarray) -> int:
    return 1 if m == 1 or spf[m] >= z else 0


def rho_rough(n: int, z: float, table: PrimeTable) -> int:
    """1 iff n has no prime factor below z (so ``rho_rough(1, z) == 1``)."""
    table._check(n)
    if z < 2:
        raise InvalidArgumentError(f"z must be >= 2, got {z}")
    return _rough(int(n), z, table.spf)


def buchstab_identity_residual(n: int, w: float, z: float, table: PrimeTable) -> int:
    """rho(n, z) - rho(n, w) + sum_{q | n, w <= q < z} rho(n/q, q); always 0.

    ``w == z`` is accepted and gives the empty sum.
    """
    table._check(n)
    if not 2 <= w <= z:
        raise InvalidArgumentError(f"need 2 <= w <= z, got w={w}, z={z}")
    spf = table.spf
    total = _rough(n, z, spf) - _rough(n, w, spf)
    for q, _ in factorize(n, table).factors:
        if w <= q < z:
            total += _rough(n // q, q, spf)
    return total


def buchstab_residual_array(N: int, w: float, z: float, table: PrimeTable) -> np.ndarray:
    """Vectorised residual of Buchstab's identity for every 1 <= n <= N (index n - 1)."""
    if not 1 <= N <= table.limit:
        raise InvalidArgumentError(f"N={N} outside [1, {table.limit}]")
    if not 2 <= w <= z:
        raise InvalidArgumentError(f"need 2 <= w <= z, got w={w}, z={z}")
    spf = table.spf[1:N + 1].astype(np.int64)
    one = np.zeros(N, dtype=bool)
    one[0] = True
    res = ((spf >= z) | one).astype(np.int64) - ((spf >= w) | one)
    for q in table.primes(math.ceil(w) - 1, min(math.ceil(z) - 1, N)):
        q = int(q)
        if q < w or q >= z:
            continue
        m = np.arange(1, N // q + 1)
        cof_rough = (m == 1) | (table.spf[m] >= q)
        res[q - 1::q] += cof_rough
    return res


def _admissible_tuples(qs: Sequence[int], params: MinorantParams, size: int):
    """Strictly decreasing tuples q1 > q2 > ... from ``qs`` meeting the cap constraints."""
    cands = sorted((q for q in qs if params.z <= q < params.q_cap), reverse=True)
    for tup in itertools.combinations(cands, size):
        q1, q2 = tup[0], tup[1]
        if q1 * q2 ** 4 < params.line_cap:
            yield tup


def rho_minus(n: int, params: MinorantParams, table: PrimeTable) -> int:
    """The minorant at ``n``, evaluated directly from its definition."""
    n = int(n)
    if not params.n_lo <= n <= params.n_hi:
        raise InvalidArgumentError(
            f"n={n} outside [2 sqrt(X), 3X] = [{params.n_lo}, {params.n_hi}]")
    table._check(n)
    spf = table.spf
    z = params.z
    primes = [p for p, _ in factorize(n, table).factors]
    value = _rough(n, z, spf)
    for q in primes:
        if z <= q < params.q_single_cap:
            value -= _rough(n // q, z, spf)
    for sign, size in ((1, 2), (-1, 3)):
        for tup in _admissible_tuples(primes, params, size):
            value += sign * _rough(n // math.prod(tup), z, spf)
    return value


def rho_minus_array(params: MinorantParams, table: PrimeTable,
                    lo: Optional[int] = None, hi: Optional[int] = None) -> np.ndarray:
    """rho-(n) for ``lo <= n <= hi`` (defaults: the whole range [2 sqrt X, 3X]); int8."""
    lo = params.n_lo if lo is None else int(lo)
    hi = params.n_hi if hi is None else int(hi)
    if not params.n_lo <= lo <= hi <= params.n_hi:
        raise InvalidArgumentError(
            f"[{lo}, {hi}] not inside [2 sqrt(X), 3X] = [{params.n_lo}, {params.n_hi}]")
    if hi > table.limit:
        raise InvalidArgumentError(f"range end {hi} exceeds table limit {table.limit}")
    z = params.z
    count = np.ones(hi - lo + 1, dtype=np.int16)

    def add(step: int, sign: int):
        start = -(-lo // step) * step
        if start <= hi:
            count[start - lo::step] += sign

    singles = table.primes(math.ceil(z) - 1, min(params.q_single_cap, hi))
    for q in singles:
        if q >= z and q < params.q_single_cap:
            add(int(q), -1)
    small = [int(q) for q in table.primes(math.ceil(z) - 1, min(params.q_cap, hi)) if q >= z]
    for sign, size in ((1, 2), (-1, 3)):
        for tup in _admissible_tuples(small, params, size):
            step = math.prod(tup)
            if step <= hi:
                add(step, sign)
    rough = table.spf[lo:hi + 1] >= z
    return np.where(rough, count, 0).astype(np.int8)


@dataclass(frozen=True)
class ScanReport:
    X: int
    n_lo: int
    n_hi: int
    upper_violations: int  # n with rho-(n) > 1_P(n)
    size_violations: int  # n with |rho-(n)| > 4 (log 3X / log z)^3 rho(n, z)
    prime_mismatches: int  # primes with rho-(p) != 1
    primes_checked: int
    histogram: Dict[int, int]


def minorant_scan(params: MinorantParams, table: PrimeTable) -> ScanReport:
    """Check the upper bound and the size bound for every n in [2 sqrt X, 3X]."""
    if params.n_hi > table.limit:
        raise InvalidArgumentError(
            f"scan needs the table up to 3X = {params.n_hi}, limit is {table.limit}")
    lo, hi = params.n_lo, params.n_hi
    rho = rho_minus_array(params, table).astype(np.int64)
    idx = np.arange(lo, hi + 1)
    is_prime = table.spf[lo:hi + 1] == idx
    rough = table.spf[lo:hi + 1] >= params.z
    upper = int(np.count_nonzero(rho > is_prime))
    size = int(np.count_nonzero(np.abs(rho) > params.bound_factor() * rough))
    mismatch = int(np.count_nonzero(rho[is_prime] != 1))
    values, counts = np.unique(rho, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    return ScanReport(params.X, lo, hi, upper, size, mismatch,
                      int(np.count_nonzero(is_prime)), hist)


def dyadic_primes(P1: float, table: PrimeTable) -> np.ndarray:
    """Primes p with P1 < p <= 2 P1."""
    return table.primes(P1, 2 * P1)


@dataclass(frozen=True)
class WindowSums:
    """Prefix sums of w(m) = sum_{p1 in (P1, 2P1], p1 | m} rho-(m / p1) for m in (X, 3X].

    ``prefix[i]`` is the sum of w(m) over X < m <= X + i.
    """

    X: int
    prefix: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, params: MinorantParams, table: PrimeTable) -> "WindowSums":
        X = params.X
        p1s = dyadic_primes(params.P1, table)
        if p1s.size == 0:
            return cls.from_weights(X, np.zeros(2 * X, dtype=np.int64))
        n_lo = X // int(p1s[-1]) + 1
        n_hi = params.n_hi // int(p1s[0])
        if n_lo < params.n_lo:
            raise InvalidArgumentError(
                f"cofactors down to {n_lo} fall below 2 sqrt(X); X too small for P1")
        rho = rho_minus_array(params, table, n_lo, n_hi).astype(np.int64)
        w = np.zeros(2 * X, dtype=np.int64)  # w[i] is w(X + 1 + i)
        for p in p1s:
            p = int(p)
            n0 = X // p + 1  # smallest n with p n > X
            n1 = params.n_hi // p
            w[p * n0 - X - 1::p] += rho[n0 - n_lo:n1 - n_lo + 1]
        return cls.from_weights(X, w)

    @classmethod
    def from_weights(cls, X: int, w: np.ndarray) -> "WindowSums":
        prefix = np.zeros(w.size + 1, dtype=np.int64)
        np.cumsum(w, out=prefix[1:])
        prefix.setflags(write=False)
        return cls(int(X), prefix)

    def window(self, x: float, hwin: float) -> int:
        """Sum of w(m) over x < m <= x + hwin."""
        if hwin < 0:
            raise InvalidArgumentError(f"hwin must be >= 0, got {hwin}")
        a = math.floor(x) - self.X
        b = math.floor(x + hwin) - self.X
        if a < 0 or b >= self.prefix.size:
            raise InvalidArgumentError(
                f"window ({x}, {x + hwin}] leaves (X, 3X] with X={self.X}")
        return int(self.prefix[b] - self.prefix[a])

    def windows(self, x: np.ndarray, hwin: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        a = np.floor(x).astype(np.int64) - self.X
        b = np.floor(x + hwin).astype(np.int64) - self.X
        if a.min(initial=0) < 0 or b.max(initial=0) >= self.prefix.size:
            raise InvalidArgumentError(f"a window leaves (X, 3X] with X={self.X}")
        return self.prefix[b] - self.prefix[a]


def weighted_window_sum(x: float, hwin: float, params: MinorantParams, table: PrimeTable,
                        sums: Optional[WindowSums] = None) -> int:
    """sum over x < p1 n <= x + hwin, p1 in (P1, 2P1] prime, of rho-(n).

    Pass a prebuilt ``sums`` to answer many windows in O(1) each.
    """
    if not params.X < x <= 2 * params.X:
        raise InvalidArgumentError(f"x={x} outside (X, 2X]")
    if x + hwin > params.n_hi or params.n_hi > table.limit:
        raise InvalidArgumentError(
            f"window end {x + hwin} must be <= 3X = {params.n_hi} <= table limit {table.limit}")
    if sums is None:
        sums = WindowSums.build(params, table)
    return sums.window(x, hwin)


def weighted_window_sum_naive(x: float, hwin: float, params: MinorantParams,
                              table: PrimeTable) -> int:
    """Direct double loop over p1 and n (oracle for the prefix-sum version)."""
    total = 0
    for p in dyadic_primes(params.P1, table):
        p = int(p)
        for n in range(math.floor(x) // p + 1, math.floor(x + hwin) // p + 1):
            total += rho_minus(n, params, table)
    return total


def x_grid(X: int, sample: int) -> np.ndarray:
    """Deterministic midpoint grid of ``sample`` points in (X, 2X]."""
    return X + X * (np.arange(sample) + 0.5) / sample


@dataclass(frozen=True)
class VarianceReport:
    X: int
    sample: int
    mean_square: float
    ratio: float  # mean_square * (log X)^2
    ci_low: float
    ci_high: float


def variance_experiment(params: MinorantParams, table: PrimeTable, sample: int,
                        sums: Optional[WindowSums] = None, h: Optional[float] = None,
                        h1: Optional[float] = None) -> VarianceReport:
    """Average of |S(x, h)/h - S(x, h1)/h1|^2 over a grid of x in (X, 2X].

    The ratio to (log X)^-2 is reported with a normal-approximation 95%
    interval; there is no pass/fail threshold.
    """
    if sample < 100:
        raise InvalidArgumentError(f"sample must be >= 100, got {sample}")
    h = params.h if h is None else float(h)
    h1 = params.h1 if h1 is None else float(h1)
    if sums is None:
        sums = WindowSums.build(params, table)
    xs = x_grid(params.X, sample)
    d = sums.windows(xs, h) / h - sums.windows(xs, h1) / h1
    sq = d * d
    mean = float(math.fsum(sq) / sample)
    sd = float(np.std(sq, ddof=1))
    scale = params.log_X ** 2
    half = 1.96 * sd / math.sqrt(sample)
    return VarianceReport(params.X, sample, mean, mean * scale,
                          max(0.0, mean - half) * scale, (mean + half) * scale)


@dataclass(frozen=True)
class IntervalReport:
    x_grid: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    predictions: np.ndarray = field(repr=False)
    failures: int
    predicted: float  # mean prediction per interval
    mean_count: float

    @property
    def hit_fraction(self) -> float:
        return 1.0 - self.failures / max(1, self.counts.size)

    @property
    def mean_ratio(self) -> float:
        """Mean count over mean prediction."""
        return self.mean_count / self.predicted if self.predicted > 0 else math.nan


def _report(xs, counts, preds) -> IntervalReport:
    counts = np.asarray(counts, dtype=np.int64)
    preds = np.asarray(preds, dtype=float)
    return IntervalReport(np.asarray(xs), counts, preds, int(np.count_nonzero(counts == 0)),
                          float(preds.mean()) if preds.size else 0.0,
                          float(counts.mean()) if counts.size else 0.0)


def count_E2_intervals(X: int, params: MinorantParams, table: PrimeTable, sample: int,
                       window: Optional[float] = None) -> IntervalReport:
    """Count m = p1 p2 in (x, x + (log x)^c] with p1 in (P1, 2P1], P1 = (log x)^a.

    ``sample`` points are evenly spaced on [X, 2X]; ``window`` overrides the
    interval length. Primality of the cofactor p2 <= (2X + h)/P1 is read
    from the table, so the table only has to reach that far.
    """
    if sample < 1:
        raise InvalidArgumentError(f"sample must be >= 1, got {sample}")
    X = int(X)
    xs = np.linspace(X, 2 * X, sample)
    logs = np.log(xs)
    hs = logs ** params.c if window is None else np.full(sample, float(window))
    P1s = logs ** params.a
    top = int(np.max((xs + hs) / P1s)) + 1
    if top > table.limit:
        raise InvalidArgumentError(
            f"cofactors reach {top}, above the table limit {table.limit}")
    spf = table.spf
    counts = np.zeros(sample, dtype=np.int64)
    preds = np.zeros(sample)
    for i, (x, h, P1) in enumerate(zip(xs, hs, P1s)):
        p1s = dyadic_primes(P1, table)
        found = set()
        for p in p1s:
            p = int(p)
            q = np.arange(math.floor(x) // p + 1, math.floor(x + h) // p + 1)
            q = q[(q >= 2) & (spf[q] == q)]
            found.update((p * q).tolist())
        counts[i] = len(found)
        preds[i] = h * float(np.sum(1.0 / (p1s * np.log(x / p1s))))
    return _report(xs, counts, preds)


def count_E3_all_intervals(x_lo: int, x_hi: int, grid: int, table: PrimeTable,
                           window_exponent: float = 1.55,
                           window: Optional[float] = None) -> IntervalReport:
    """Count n with Omega(n) = 3 in (x, x + sqrt(x) (log x)^1.55] on a geometric grid.

    Omega is computed by a segmented sieve, so the table only needs the
    primes up to sqrt(x_hi + H). The prediction is H (log log x)^2 / (2 log x).
    """
    if grid < 1 or not 2 <= x_lo <= x_hi:
        raise InvalidArgumentError(f"need grid >= 1 and 2 <= x_lo <= x_hi, got {grid}, {x_lo}, {x_hi}")
    xs = np.geomspace(x_lo, x_hi, grid) if grid > 1 else np.array([float(x_lo)])
    logs = np.log(xs)
    hs = np.sqrt(xs) * logs ** window_exponent if window is None else np.full(grid, float(window))
    end = int(np.max(xs + hs)) + 1
    root = math.isqrt(end)
    if root > table.limit:
        raise InvalidArgumentError(f"need primes up to {root}, table limit is {table.limit}")
    base = table.primes(0, root)
    counts = np.zeros(grid, dtype=np.int64)
    for i, (x, h) in enumerate(zip(xs, hs)):
        a = math.floor(x) + 1
        b = math.floor(x + h) + 1
        if b > a:
            counts[i] = int(np.count_nonzero(segmented_big_omega(a, b, base) == 3))
    preds = hs * np.log(logs) ** 2 / (2.0 * logs)
    return _report(xs, counts, preds)
