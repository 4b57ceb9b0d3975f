"""Dirichlet polynomials, their mean squares and the mean-value / large-value bounds.

A :class:`DirichletPolynomial` stores a sparse coefficient vector a_n. On
the one-line the polynomial is evaluated at 1 + it, which we implement
by folding 1/n into the coefficients, so both lines share one kernel
sum_n c_n n^(-it).

The ``*_rhs`` functions evaluate right-hand sides of mean-value bounds
with the implied constant set to 1. Comparing them with sampled
left-hand sides gives observed constants; the test suite asserts only
audited ceilings on those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np
from threadpoolctl import threadpool_limits

from .core_arith import PrimeTable
from .errors import InvalidArgumentError, ResourceLimitError, UndefinedRatioError

EXACT_LIMIT = 10_000
SAMPLE_LIMIT = 1e9
MIN_PANELS = 1024  # short intervals still get a fine grid
MAX_SUPPORT = 20_000_000
LINES = ("zero", "one")


@dataclass(frozen=True)
class DirichletPolynomial:
    """sum_n a_n n^(-s) with ``n`` strictly increasing positive integers.

    Attributes:
        n: support (int64), possibly empty.
        coeffs: complex coefficients a_n aligned with ``n``.
        line: ``"zero"`` evaluates at s = it, ``"one"`` at s = 1 + it.
    """

    n: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    line: str = "zero"

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64)
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if n.shape != c.shape or n.ndim != 1:
            raise InvalidArgumentError("support and coefficients must be 1-d of equal length")
        if n.size and (n[0] < 1 or np.any(np.diff(n) <= 0)):
            raise InvalidArgumentError("support must be strictly increasing positive integers")
        if self.line not in LINES:
            raise InvalidArgumentError(f"line must be one of {LINES}, got {self.line!r}")
        n.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, complex], line: str = "zero") -> "DirichletPolynomial":
        keys = sorted(k for k, v in coeffs.items() if v != 0)
        return cls(np.array(keys, dtype=np.int64),
                   np.array([coeffs[k] for k in keys], dtype=np.complex128), line)

    @classmethod
    def dyadic(cls, N: int, line: str = "one") -> "DirichletPolynomial":
        """sum_{N < n <= 2N} n^(-s)."""
        n = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
        return cls(n, np.ones(n.size), line)

    @classmethod
    def primes_window(cls, P1: float, table: PrimeTable, line: str = "one") -> "DirichletPolynomial":
        """sum over primes P1 < p <= 2 P1 of p^(-s)."""
        p = table.primes(P1, 2 * P1)
        return cls(p, np.ones(p.size), line)

    @property
    def size(self) -> int:
        return int(self.n.size)

    @property
    def support_lo(self) -> int:
        return int(self.n[0]) if self.size else 0

    @property
    def support_hi(self) -> int:
        return int(self.n[-1]) if self.size else 0

    @property
    def length(self) -> int:
        """support_hi - support_lo + 1 (0 when empty)."""
        return self.support_hi - self.support_lo + 1 if self.size else 0

    @property
    def effective(self) -> np.ndarray:
        """Coefficients of the zero-line kernel: a_n, or a_n / n on the one-line."""
        return self.coeffs / self.n if self.line == "one" else self.coeffs

    @property
    def S1(self) -> float:
        return math.fsum(np.abs(self.effective))

    @property
    def S2(self) -> float:
        return math.fsum(np.abs(self.effective) ** 2)

    @property
    def amax(self) -> float:
        return float(np.abs(self.coeffs).max()) if self.size else 0.0


def evaluate(poly: DirichletPolynomial, t: float) -> complex:
    """The polynomial at it (zero-line) or 1 + it (one-line); compensated sums."""
    if not math.isfinite(t):
        raise InvalidArgumentError(f"t must be finite, got {t}")
    if poly.size == 0:
        return 0j
    terms = poly.effective * np.exp(-1j * t * np.log(poly.n))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def mean_square_exact(poly: DirichletPolynomial, T: float, chunk: int = 1024) -> float:
    """int_{-T}^{T} |A|^2 dt = sum_{m,n} c_m conj(c_n) 2 sin(T log(n/m)) / log(n/m).

    The diagonal terms are 2T |c_n|^2. O(N^2) with N the number of terms.

    Raises:
        ResourceLimitError: more than 10^4 terms.
    """
    if T <= 0:
        raise InvalidArgumentError(f"T must be > 0, got {T}")
    if poly.size > EXACT_LIMIT:
        raise ResourceLimitError(
            f"{poly.size} terms exceed the exact-formula limit {EXACT_LIMIT}; use mean_square_sampled")
    if poly.size == 0:
        return 0.0
    c = poly.effective
    logs = np.log(poly.n.astype(float))
    parts = []
    with threadpool_limits(limits=1):
        for a in range(0, poly.size, chunk):
            L = logs[None, :] - logs[a:a + chunk, None]
            K = 2.0 * T * np.sinc(T * L / math.pi)
            parts.append(float(np.real(np.conj(c[a:a + chunk]) @ (K @ c))))
    return math.fsum(parts)


def _max_frequency(poly: DirichletPolynomial) -> float:
    return math.log(max(poly.support_hi, 2))


def max_step(*factors: Tuple[DirichletPolynomial, int]) -> float:
    """Largest admissible grid step pi / (4 sum_i k_i log hi_i) for a product of |P_i|^(2 k_i)."""
    freq = sum(k * _max_frequency(p) for p, k in factors)
    return math.pi / (4.0 * max(freq, math.log(2)))


def _grid_values(poly: DirichletPolynomial, t0: float, step: float, count: int,
                 block: int = 512) -> np.ndarray:
    """Values at t0 + j step, j < count.

    Each block of ``block`` points is a fixed kernel E[j, n] = n^(-i j step)
    applied to the twisted coefficients c_n n^(-i t_start). BLAS runs on
    one thread so the bits do not depend on the thread count.
    """
    out = np.empty(count, dtype=np.complex128)
    if poly.size == 0:
        out[:] = 0
        return out
    logs = np.log(poly.n.astype(float))
    c = poly.effective
    j = np.arange(min(block, count))
    E = np.exp(-1j * step * j[:, None] * logs[None, :])
    with threadpool_limits(limits=1):
        for a in range(0, count, block):
            b = min(a + block, count)
            twist = c * np.exp(-1j * (t0 + a * step) * logs)
            out[a:b] = E[:b - a] @ twist
    return out


def _simpson(values: np.ndarray, h: float) -> float:
    m = values.size - 1
    w = np.ones(values.size)
    w[1:m:2] = 4.0
    w[2:m:2] = 2.0
    return math.fsum(w * values) * h / 3.0


def product_moment_sampled(factors: Sequence[Tuple[DirichletPolynomial, int]], t_lo: float,
                           t_hi: float, step: Optional[float] = None) -> float:
    """Composite Simpson estimate of int_{t_lo}^{t_hi} prod_i |P_i(s)|^(2 k_i) dt.

    ``step`` defaults to a quarter of :func:`max_step`; it is shrunk so the
    interval holds an even number of panels, and at least ``MIN_PANELS``.
    """
    if not t_hi > t_lo:
        raise InvalidArgumentError(f"need t_hi > t_lo, got [{t_lo}, {t_hi}]")
    cap = max_step(*factors)
    step = cap / 4.0 if step is None else float(step)
    if not 0 < step <= cap * (1 + 1e-12):
        raise InvalidArgumentError(f"step {step} exceeds the resolution limit {cap}")
    if (t_hi - t_lo) / step > SAMPLE_LIMIT:
        raise ResourceLimitError(f"{(t_hi - t_lo) / step:.3g} grid points exceed {SAMPLE_LIMIT:g}")
    panels = max(int(math.ceil((t_hi - t_lo) / step)), MIN_PANELS)
    panels += panels % 2
    h = (t_hi - t_lo) / panels
    f = np.ones(panels + 1)
    for poly, k in factors:
        f *= np.abs(_grid_values(poly, t_lo, h, panels + 1)) ** (2 * k)
    return _simpson(f, h)


def mean_square_sampled(poly: DirichletPolynomial, T: float, step: Optional[float] = None) -> float:
    """Composite Simpson estimate of int_{-T}^{T} |A|^2 dt.

    Raises:
        InvalidArgumentError: ``step`` above pi / (4 log support_hi).
    """
    if T <= 0:
        raise InvalidArgumentError(f"T must be > 0, got {T}")
    if poly.size == 0:
        return 0.0
    cap = math.pi / (4.0 * _max_frequency(poly))
    step = cap / 4.0 if step is None else float(step)
    if step > cap * (1 + 1e-12):
        raise InvalidArgumentError(f"step {step} exceeds pi/(4 log support_hi) = {cap}")
    return product_moment_sampled([(poly, 1)], -T, T, step)


def mvt_defect(poly: DirichletPolynomial, T: float) -> float:
    """|int |A|^2 - 2T S2| / (N S2) with N = support_hi: the observed O(N) constant."""
    s2 = poly.S2
    if s2 == 0:
        raise UndefinedRatioError("polynomial has S2 = 0")
    return abs(mean_square_exact(poly, T) - 2.0 * T * s2) / (poly.support_hi * s2)


def improved_mvt_rhs(poly: DirichletPolynomial, T: float) -> float:
    """T sum |c_n|^2 + T sum_{0 < |k| < N/T} sum_n |c_n| |c_(n+k)|, N = support_hi."""
    if T < 1:
        raise InvalidArgumentError(f"T must be >= 1, got {T}")
    if poly.size == 0:
        return 0.0
    # strict k < N/T, so T >= N leaves only the diagonal
    K = int(math.ceil(poly.support_hi / T)) - 1
    dense = np.zeros(poly.length)
    dense[poly.n - poly.support_lo] = np.abs(poly.effective)
    off = [2.0 * float(dense[:-k] @ dense[k:]) for k in range(1, min(K, poly.length - 1) + 1)]
    return T * poly.S2 + T * math.fsum(off)


def hb_third_term_dropped(card_M: int, N: float, T: float) -> bool:
    """Whether the |M|^(7/4) term may be deleted: N^3 >= T^2 or card_M^3 < T.

    The second test is strict; at card_M^3 == T the term is kept, which
    only enlarges the bound.
    """
    return N ** 3 >= T ** 2 or card_M ** 3 < T


def hb_sparse_rhs(card_M: int, M: float, N: float, T: float, eta: float, amax: float,
                  drop_third: Optional[bool] = None) -> float:
    """((|M|/M)^2 + (NT)^eta (|M| T/(M^2 N) + |M|^(7/4) T^(3/4)/(M^2 N))) max|a_n|^2.

    ``drop_third`` forces (True) or forbids (False) deleting the last
    term; by default :func:`hb_third_term_dropped` decides.
    """
    if not (T >= M >= 1 and N >= 2 and card_M >= 0 and eta > 0):
        raise InvalidArgumentError(
            f"need T >= M >= 1, N >= 2, card_M >= 0, eta > 0; got "
            f"card_M={card_M}, M={M}, N={N}, T={T}, eta={eta}")
    if drop_third is None:
        drop_third = hb_third_term_dropped(card_M, N, T)
    inner = card_M * T / (M * M * N)
    if not drop_third:
        inner += card_M ** 1.75 * T ** 0.75 / (M * M * N)
    return ((card_M / M) ** 2 + (N * T) ** eta * inner) * amax ** 2


def twisted_moment_rhs(which: str, N: float, A: float, T: float, eps: float, norm: float) -> float:
    """Right-hand side of the Watt or Deshouillers-Iwaniec twisted fourth moment.

    ``norm`` is max|a_m|^2 for ``"watt"`` and (1/A) sum|a_m|^2 for
    ``"deshouillers-iwaniec"``.
    """
    if min(N, A, T, norm) <= 0 or eps < 0:
        raise InvalidArgumentError("N, A, T, norm must be positive and eps >= 0")
    head = T + A * A * math.sqrt(T)
    if which == "deshouillers-iwaniec":
        head += A ** 1.25 * T ** 0.75
    elif which != "watt":
        raise InvalidArgumentError(f"unknown moment {which!r}; use 'watt' or 'deshouillers-iwaniec'")
    return T ** eps * (head / (N * N * A) + (T + A) / (T ** 4 * A)) * norm


@dataclass(frozen=True)
class PowerPolynomial:
    """Coefficients b_m of (sum_{P1_lo < p <= 2 P1_lo} p^(-s))^k and their statistics."""

    P1_lo: float
    k: int
    m: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)  # exact int64 counts
    prime_count: int

    @property
    def support_size(self) -> int:
        return int(self.m.size)

    @property
    def max_coeff(self) -> int:
        return int(self.b.max()) if self.b.size else 0

    @property
    def sum_sq(self) -> int:
        return int(sum(int(v) * int(v) for v in self.b))

    @property
    def sparsity_exponent(self) -> float:
        """log |support| / log M with M = P1_lo^k."""
        M = self.P1_lo ** self.k
        return math.log(self.support_size) / math.log(M) if self.support_size and M > 1 else math.nan

    def polynomial(self, line: str = "one") -> DirichletPolynomial:
        return DirichletPolynomial(self.m, self.b.astype(float), line)


def power_polynomial(P1_lo: float, k: int, table: PrimeTable) -> PowerPolynomial:
    """Expand the k-th power of the prime polynomial on (P1_lo, 2 P1_lo] by repeated convolution.

    Raises:
        InvalidArgumentError: k outside [1, 12] or (2 P1_lo)^k above the table limit.
        ResourceLimitError: an intermediate support exceeds 2e7 terms.
    """
    if not 1 <= k <= 12:
        raise InvalidArgumentError(f"k must lie in [1, 12], got {k}")
    if P1_lo <= 0 or (2 * P1_lo) ** k > table.limit:
        raise InvalidArgumentError(
            f"(2 P1_lo)^k = {(2 * P1_lo) ** k:.4g} exceeds the table limit {table.limit}")
    p = table.primes(P1_lo, 2 * P1_lo)
    m = np.array([1], dtype=np.int64)
    b = np.array([1], dtype=np.int64)
    for _ in range(k):
        if m.size * p.size > MAX_SUPPORT:
            raise ResourceLimitError(
                f"support bound {m.size * p.size} exceeds {MAX_SUPPORT} terms")
        prod = (m[:, None] * p[None, :]).ravel()
        weight = np.repeat(b, p.size)
        m, inv = np.unique(prod, return_inverse=True)
        b = np.bincount(inv, weights=weight).astype(np.int64)
        if p.size == 0:
            break
    return PowerPolynomial(float(P1_lo), int(k), m, b, int(p.size))


@dataclass(frozen=True)
class LargeValueReport:
    measure: float
    ratio: float  # measure / T^(2 sigma)
    threshold: float
    N: int
    points: int


def large_value_measure(poly: DirichletPolynomial, T: float, sigma: float,
                        step: Optional[float] = None,
                        threshold: Optional[float] = None) -> LargeValueReport:
    """Grid estimate of |{t in [-T, T] : |poly(1 + it)| > N^(-sigma)}|, N = support length.

    The grid has cell midpoints at spacing at most ``step``; each cell
    counts fully when its midpoint exceeds the threshold. ``threshold``
    overrides N^(-sigma).
    """
    if poly.line != "one":
        raise InvalidArgumentError("large values are measured on the one-line")
    if T <= 0:
        raise InvalidArgumentError(f"T must be > 0, got {T}")
    cap = math.pi / (4.0 * _max_frequency(poly)) if poly.size else 1.0
    step = cap / 2.0 if step is None else float(step)
    if step > cap * (1 + 1e-12):
        raise InvalidArgumentError(f"step {step} exceeds pi/(4 log support_hi) = {cap}")
    count = int(math.ceil(2 * T / step))
    if count > SAMPLE_LIMIT:
        raise ResourceLimitError(f"{count} grid points exceed {SAMPLE_LIMIT:g}")
    h = 2 * T / count
    N = max(poly.length, 1)
    thr = N ** (-sigma) if threshold is None else float(threshold)
    vals = np.abs(_grid_values(poly, -T + 0.5 * h, h, count))
    measure = int(np.count_nonzero(vals > thr)) * h
    return LargeValueReport(measure, measure / T ** (2 * sigma), thr, N, count)


def jutila_bound(G: float, V: float, N: float, T: float, k: int, slack: float = 0.0) -> float:
    """(R + R^(-1/k) G^3 N T / V^6 + R^(4k) T / N^(2k)) (NT)^slack with R = G N / V^2."""
    if min(G, V, N, T) <= 0 or k < 1:
        raise InvalidArgumentError("G, V, N, T must be positive and k >= 1")
    R = G * N / (V * V)
    terms = (R, R ** (-1.0 / k) * G ** 3 * N * T / V ** 6, R ** (4 * k) * T / N ** (2 * k))
    return math.fsum(terms) * (N * T) ** slack
