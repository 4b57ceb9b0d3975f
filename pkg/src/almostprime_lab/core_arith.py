"""Sieves, factorisation and divisor / smooth-number counting.

Everything else in the package is built on :class:`PrimeTable`, a
smallest-prime-factor table. Per-number queries go through the table in
O(log n); the ``*_array`` helpers compute whole ranges with numpy by
repeatedly peeling off the smallest prime factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

DEFAULT_CEILING = 300_000_000


@dataclass(frozen=True)
class PrimeTable:
    """Smallest prime factor of every integer in ``[2, limit]``.

    ``spf[n]`` is stored for ``0 <= n <= limit``; entries 0 and 1 are 0.
    The table is never mutated after construction, so it can be shared
    freely between threads.
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.spf.setflags(write=False)

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and int(self.spf[n]) == n

    def prime_mask(self) -> np.ndarray:
        """Boolean array ``mask[n] = n is prime`` for ``0 <= n <= limit``."""
        idx = np.arange(self.limit + 1)
        return self.spf == idx

    def primes(self, lo: float = 0, hi: float | None = None) -> np.ndarray:
        """Primes ``p`` with ``lo < p <= hi`` (``hi`` defaults to the limit)."""
        if hi is None:
            hi = self.limit
        if hi > self.limit:
            raise InvalidArgumentError(
                f"prime range upper end {hi} exceeds table limit {self.limit}")
        start = max(int(math.floor(lo)) + 1, 2)
        stop = int(math.floor(hi))
        if stop < start:
            return np.zeros(0, dtype=np.int64)
        seg = self.spf[start:stop + 1]
        return (np.flatnonzero(seg == np.arange(start, stop + 1)) + start).astype(np.int64)

    def prime_count(self, x: int | None = None) -> int:
        return int(self.primes(0, self.limit if x is None else x).size)

    def _check(self, n: int):
        if not 1 <= n <= self.limit:
            raise InvalidArgumentError(f"n={n} outside [1, {self.limit}]")


@dataclass(frozen=True)
class Factorization:
    """Canonical factorisation: ``factors`` holds (prime, exponent), primes increasing."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p ** e
        return out

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def small_omega(self) -> int:
        return len(self.factors)


def build_prime_table(limit: int, ceiling: int = DEFAULT_CEILING) -> PrimeTable:
    """Build the smallest-prime-factor table up to ``limit`` (inclusive).

    Raises:
        InvalidArgumentError: ``limit < 2``.
        ResourceLimitError: ``limit`` above ``ceiling`` entries.
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidArgumentError(f"limit must be >= 2, got {limit}")
    if limit > ceiling:
        raise ResourceLimitError(
            f"limit {limit} exceeds the table ceiling {ceiling}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p]:
            continue
        # p is prime; claim the multiples not yet owned by a smaller prime
        view = spf[p * p::p]
        view[view == 0] = p
    idx = np.arange(limit + 1, dtype=np.int32)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[0] = spf[1] = 0
    return PrimeTable(limit, spf)


def simple_primes(limit: int) -> np.ndarray:
    """Plain Eratosthenes sieve; returns the primes ``<= limit``."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mark[p]:
            mark[p * p::p] = False
    return np.flatnonzero(mark).astype(np.int64)


def segmented_primes(lo: int, hi: int, segment: int = 1 << 20) -> np.ndarray:
    """Primes in ``[lo, hi)`` by a segmented sieve of Eratosthenes.

    Independent of :class:`PrimeTable`; used to cross-check it and for
    ranges beyond the table.
    """
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    base = simple_primes(math.isqrt(hi - 1) + 1)
    chunks = []
    for a in range(lo, hi, segment):
        b = min(a + segment, hi)
        mark = np.ones(b - a, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= b:
                break
            start = max(p * p, -(-a // p) * p)
            mark[start - a::p] = False
        chunks.append(np.flatnonzero(mark) + a)
    return np.concatenate(chunks).astype(np.int64)


def segmented_big_omega(lo: int, hi: int, base_primes: np.ndarray | None = None) -> np.ndarray:
    """Omega(n) (prime factors with multiplicity) for every n in ``[lo, hi)``.

    ``base_primes`` must contain every prime up to ``isqrt(hi - 1)`` (the
    caller is trusted on this); it is computed if omitted.
    """
    lo = int(lo)
    hi = int(hi)
    if lo < 1 or hi <= lo:
        raise InvalidArgumentError(f"bad range [{lo}, {hi})")
    root = math.isqrt(hi - 1)
    if base_primes is None:
        base_primes = simple_primes(root)
    rem = np.arange(lo, hi, dtype=np.int64)
    omega = np.zeros(hi - lo, dtype=np.int8)
    for p in base_primes:
        p = int(p)
        if p > root:
            break
        q = p
        while q < hi:
            start = -(-lo // q) * q
            if start >= hi:
                break
            sl = slice(start - lo, None, q)
            omega[sl] += 1
            rem[sl] //= p
            q *= p
    omega += rem > 1
    return omega


def factorize(n: int, table: PrimeTable) -> Factorization:
    """Factor ``n`` using the smallest-prime-factor table."""
    table._check(n)
    spf = table.spf
    out: List[Tuple[int, int]] = []
    m = int(n)
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(int(n), tuple(out))


def is_Ek(n: int, k: int, table: PrimeTable, distinct: bool = False) -> bool:
    """True iff n has exactly ``k`` prime factors.

    Factors are counted with multiplicity (Omega) unless ``distinct`` is
    set, in which case distinct primes are counted (omega).
    """
    if k < 0:
        raise InvalidArgumentError(f"k must be >= 0, got {k}")
    f = factorize(n, table)
    return (f.small_omega if distinct else f.big_omega) == k


def divisor_function(n: int, k: int, table: PrimeTable) -> int:
    """d_k(n): number of ordered k-tuples of positive integers with product n."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    out = 1
    for _, e in factorize(n, table).factors:
        out *= math.comb(e + k - 1, k - 1)
    return out


def _check_array_limit(x: int, table: PrimeTable):
    if not 1 <= x <= table.limit:
        raise InvalidArgumentError(f"x={x} outside [1, {table.limit}]")


def divisor_function_array(x: int, k: int, table: PrimeTable) -> np.ndarray:
    """``d_k(n)`` for ``0 <= n <= x`` (entry 0 is 0).

    int64 when every prime-power factor fits comfortably, otherwise an
    object array of Python ints. Values are always exact.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    _check_array_limit(x, table)
    spf = table.spf
    n = np.arange(x + 1, dtype=np.int64)
    rest = n.copy()
    rest[0] = 1
    out = np.ones(x + 1, dtype=np.int64)
    # largest exponent possible is log2(x); C(e+k-1, k-1) looked up by e
    emax = max(1, x.bit_length())
    lookup = np.array([math.comb(e + k - 1, k - 1) for e in range(emax + 1)], dtype=object)
    if all(v < 2 ** 62 for v in lookup):
        lookup = lookup.astype(np.int64)
    else:
        out = out.astype(object)
    active = np.flatnonzero(rest > 1)
    while active.size:
        r = rest[active]
        p = spf[r].astype(np.int64)
        e = np.zeros(active.size, dtype=np.int64)
        while True:
            div = r % p == 0
            if not div.any():
                break
            r = np.where(div, r // p, r)
            e += div
        out[active] = out[active] * lookup[e]
        rest[active] = r
        active = active[r > 1]
    out[0] = 0
    return out


def big_omega_array(x: int, table: PrimeTable) -> np.ndarray:
    """Omega(n) for ``0 <= n <= x`` (entries 0 and 1 are 0)."""
    _check_array_limit(x, table)
    spf = table.spf
    rest = np.arange(x + 1, dtype=np.int64)
    rest[0] = 1
    out = np.zeros(x + 1, dtype=np.int8)
    active = np.flatnonzero(rest > 1)
    while active.size:
        r = rest[active] // spf[rest[active]]
        out[active] += 1
        rest[active] = r
        active = active[r > 1]
    return out


def largest_prime_factor_array(x: int, table: PrimeTable) -> np.ndarray:
    """P^+(n) for ``0 <= n <= x``; P^+(1) = 1 and P^+(0) = 0."""
    _check_array_limit(x, table)
    spf = table.spf
    rest = np.arange(x + 1, dtype=np.int64)
    out = np.ones(x + 1, dtype=np.int64)
    out[0] = 0
    rest[0] = 1
    active = np.flatnonzero(rest > 1)
    while active.size:
        p = spf[rest[active]].astype(np.int64)
        out[active] = p
        r = rest[active] // p
        rest[active] = r
        active = active[r > 1]
    return out


def shiu_ratio(X: int, j: int, c: int, k: int, d: int, table: PrimeTable) -> float:
    """Normalised divisor moment ``sum_{n<=X} d_j^c d_k^d / (X (log X)^(j^c k^d - 1))``.

    The numerator is accumulated exactly with Python integers. Callers
    compare the ratio across a grid of X to check that it stays bounded.
    """
    if X < 100:
        raise InvalidArgumentError(f"X must be >= 100, got {X}")
    for name, v in (("j", j), ("c", c), ("k", k), ("d", d)):
        if not 1 <= v <= 4:
            raise InvalidArgumentError(f"{name} must lie in [1, 4], got {v}")
    X = int(X)
    dj = divisor_function_array(X, j, table)[1:]
    dk = dj if k == j else divisor_function_array(X, k, table)[1:]
    bound = int(dj.max()) ** c * int(dk.max()) ** d
    if bound * X < 2 ** 62:
        total = int(np.sum(dj.astype(np.int64) ** c * dk.astype(np.int64) ** d))
    else:
        total = sum(int(a) ** c * int(b) ** d for a, b in zip(dj, dk))
    expo = j ** c * k ** d - 1
    return total / (X * math.log(X) ** expo)


def smooth_count(x: int, y: int, table: PrimeTable) -> int:
    """Psi(x, y): number of ``n <= x`` all of whose prime factors are ``<= y`` (n = 1 counts)."""
    x = int(x)
    if not 1 <= y <= x <= table.limit:
        raise InvalidArgumentError(
            f"need 1 <= y <= x <= {table.limit}, got x={x}, y={y}")
    gpf = largest_prime_factor_array(x, table)
    return int(np.count_nonzero(gpf[1:] <= y))
