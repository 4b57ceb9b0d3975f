"""Exact rational certification of the exponent bookkeeping.

Every quantity here is a :class:`fractions.Fraction`; floats never enter a
comparison. Inputs may be given as ints, Fractions, Decimals or strings
such as ``"49/206"`` or ``"1e-6"``. Floats are accepted through their
shortest decimal representation, so ``0.1`` means exactly 1/10.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import List, Tuple, Union

from .errors import DomainWarning, InvalidArgumentError
from .sieve_integrals import integral_I4_bound

BigRational = Fraction
RationalLike = Union[int, str, Fraction, Decimal, float]

JUTILA_SIGMA = Fraction(49, 206)
TYPE_II_THETA = Fraction(2, 11)
DEFAULT_EPS = Fraction(1, 10 ** 6)


def Q(x: RationalLike) -> Fraction:
    """Exact rational from an int, Fraction, Decimal, decimal string or float repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidArgumentError("booleans are not rationals")
    if isinstance(x, float):
        x = repr(x)
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"cannot read {x!r} as a rational: {exc}") from None


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cgen(theta: RationalLike, sigma: RationalLike, eps: RationalLike) -> Fraction:
    """Interval exponent c = 1 + 1/(1 - theta (1 - 2 sigma) - eps).

    Warns with :class:`DomainWarning` when sigma lies outside
    [1/5 + 2 eps, 1/2], where the formula is not claimed.

    Raises:
        InvalidArgumentError: the denominator is not positive.
    """
    theta, sigma, eps = Q(theta), Q(sigma), Q(eps)
    den = 1 - theta * (1 - 2 * sigma) - eps
    if den <= 0:
        raise InvalidArgumentError(f"1 - theta(1 - 2 sigma) - eps = {den} is not positive")
    if not Fraction(1, 5) + 2 * eps <= sigma <= Fraction(1, 2):
        warnings.warn(f"sigma={sigma} outside [1/5 + 2 eps, 1/2]", DomainWarning, stacklevel=2)
    return 1 + 1 / den


def jutila_sigma_threshold(beta: RationalLike) -> Fraction:
    """sigma solving 1 + beta ((40/7) sigma - 2) = 2 sigma, i.e. 7(1 - 2 beta)/(14 - 40 beta).

    This balances the middle term T N^((6 - 2/7) sigma - 2) of Jutila's
    bound (k = 7, N = T^beta) against T^(2 sigma).
    """
    beta = Q(beta)
    den = 14 - 40 * beta
    if den == 0:
        raise InvalidArgumentError("beta = 7/20 makes the threshold equation singular")
    return 7 * (1 - 2 * beta) / den


def jutila_exponents(sigma: RationalLike, k: int = 7) -> List[Tuple[Fraction, Fraction]]:
    """Exponent pairs (of N, of T) of the three Jutila terms at G = 1/N, V = N^-sigma.

    They are N^(2 sigma), T N^((6 - 2/k) sigma - 2) and T N^((8 sigma - 2) k).
    """
    sigma = Q(sigma)
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    return [(2 * sigma, Fraction(0)),
            ((6 - Fraction(2, k)) * sigma - 2, Fraction(1)),
            ((8 * sigma - 2) * k, Fraction(1))]


@dataclass(frozen=True)
class TypeIIVerdict:
    feasible: bool
    branch: str  # "first", "second" or "none"
    first: bool
    second: bool
    degenerate: bool  # sigma1 = 1/2: the monotonicity reduction of the second branch breaks down
    first_threshold: Fraction  # a must exceed this for the first branch
    second_lhs: Fraction
    second_rhs: Fraction


def typeII_feasible(sigma1: RationalLike, sigma2: RationalLike, theta: RationalLike,
                    a: RationalLike, eps: RationalLike = DEFAULT_EPS) -> TypeIIVerdict:
    """Decide whether the type II large-value set is handled at the given exponents.

    First branch (sparse mean value with N = M2): needs
    eps/5 + eps^2 < 2 sigma1 theta (so that M^(eps/5) << M1^(2 sigma1) / T1^(eps^2)
    with M <= T1 = X and M1 = X^theta) and
    a > 1/(1 - theta (1 - 2 sigma1) - eps) (from M1^(1 - 2 sigma1) << T1^(-eps/3) M^(1 - 1/a)).

    Second branch (with M1^5 in place of M2): needs
    (5 - 8 sigma1) theta + (1 - theta) 2 sigma2 > 1/a + 25 eps.

    Raises:
        InvalidArgumentError: sigma_i below 49/206 - 10 eps or above 1/2,
            theta outside [eps/2, 2/11], or a, eps not positive.
    """
    s1, s2, th, a, eps = Q(sigma1), Q(sigma2), Q(theta), Q(a), Q(eps)
    if a <= 0 or eps <= 0:
        raise InvalidArgumentError("a and eps must be positive")
    floor = JUTILA_SIGMA - 10 * eps
    for name, s in (("sigma1", s1), ("sigma2", s2)):
        if not floor <= s <= Fraction(1, 2):
            raise InvalidArgumentError(f"{name}={s} outside [49/206 - 10 eps, 1/2]")
    if not eps / 2 <= th <= TYPE_II_THETA:
        raise InvalidArgumentError(f"theta={th} outside [eps/2, 2/11]")

    den = 1 - th * (1 - 2 * s1) - eps
    threshold = 1 / den if den > 0 else None
    first = (threshold is not None and a > threshold
             and eps / 5 + eps * eps < 2 * s1 * th)
    lhs = (5 - 8 * s1) * th + (1 - th) * 2 * s2
    rhs = 1 / a + 25 * eps
    second = lhs > rhs
    branch = "first" if first else "second" if second else "none"
    return TypeIIVerdict(first or second, branch, first, second, s1 == Fraction(1, 2),
                         threshold if threshold is not None else Fraction(0), lhs, rhs)


def typeII_uniform_threshold(eps: RationalLike = 0) -> Fraction:
    """6 / (5 + 49/103 - 100 eps): the type II chain closes for every theta once a exceeds this.

    At eps = 0 it equals 103/94.
    """
    eps = Q(eps)
    den = 5 + Fraction(49, 103) - 100 * eps
    if den <= 0:
        raise InvalidArgumentError(f"eps={eps} too large")
    return 6 / den


def typeI_II_admissible(log_m1: RationalLike, log_m2: RationalLike, eps: RationalLike) -> bool:
    """Size constraints M1^2 M2 <= X^(1 - eps) and M2 <= X^(1/4 - eps), in units of log X.

    Exposed for exploration; there is no headline number attached to it.
    """
    m1, m2, eps = Q(log_m1), Q(log_m2), Q(eps)
    return 2 * m1 + m2 <= 1 - eps and m2 <= Fraction(1, 4) - eps


def sparsity_exponent(a: RationalLike) -> Fraction:
    """1 - 1/a: the support of P1(s)^k with P1 = (log X)^a has size M^(1 - 1/a + o(1))."""
    a = Q(a)
    if a <= 0:
        raise InvalidArgumentError("a must be positive")
    return 1 - 1 / a


def all_intervals_exponent(a: RationalLike) -> Fraction:
    """c = 1 + a/2 for the sqrt(x) (log x)^c window of the E3 result."""
    return 1 + Q(a) / 2


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def headline_constants_check() -> List[Check]:
    """The five exact checks behind the headline exponents."""
    out = []
    lhs, rhs = Fraction(103, 94), Fraction(10999, 10000)
    out.append(Check("type II threshold", lhs < rhs,
                     f"103*10000 = {103 * 10000} < {94 * 10999} = 94*10999"))
    i4 = Fraction(integral_I4_bound())
    out.append(Check("I4 majorant", i4 == Fraction(11, 32000) and i4 < Fraction(4, 10000),
                     f"I4 bound = {fraction_str(i4)} < 4/10000"))
    sig = jutila_sigma_threshold(Fraction(9, 11))
    out.append(Check("Jutila sigma", sig == JUTILA_SIGMA,
                     f"sigma(9/11) = {fraction_str(sig)}"))
    c = cgen(Fraction(1, 3), Fraction(7, 32), 0)
    out.append(Check("cgen(1/3, 7/32, 0)", c == Fraction(29, 13), f"c = {fraction_str(c)}"))
    c3 = all_intervals_exponent(Fraction(11, 10))
    out.append(Check("E3 window exponent", c3 == Fraction(31, 20),
                     f"1 + (11/10)/2 = {fraction_str(c3)} = {float(c3)}"))
    return out
