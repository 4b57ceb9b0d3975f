"""The deficiency integrals I2(eps), I4(eps) and the density margin.

The long-interval count of the minorant is (h / log y) (1 - I2 - I4 + o(1))
where, with w = omega (Buchstab's function, 0 below 1),

    I2 = int_{2/11}^{1/2} int_{2/11}^{a1} [a1 >= 1/4 - 2 eps or a1 + 4 a2 >= 1 - 2 eps]
             w((1 - a1 - a2) / a2) / (a1 a2^2)  da2 da1,

    I4 = int over 2/11 <= a4 < a3 < a2 < a1 < 1/4 - 2 eps of
             [a1 + 4 a2 <= 1 - 2 eps] w((1 - a1 - a2 - a3 - a4) / a4) / (a1 a2 a3 a4^2).

Both regions are polytopes. We cut them along the indicator boundaries
and along the hyperplanes where the omega argument crosses 1, 2, 3 (jump
at 1, kinks above), so the integrand is smooth on every piece and no
cell straddles a discontinuity. The reported ``boundary_measure`` is
therefore always 0; ``zero_measure`` is the area/volume of the pieces
where the omega argument is below 1 and the integrand vanishes by
convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np

from .buchstab import OmegaTable, build_omega_table
from .errors import ConvergenceError, InvalidArgumentError
from .quadrature import decompose, integrate_cells

TWO_ELEVENTHS = 2.0 / 11.0
MARGIN_TARGET = 0.0096

OmegaLike = Union[OmegaTable, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    cells: int
    boundary_measure: float
    zero_measure: float
    order: int


@dataclass(frozen=True)
class MarginResult:
    margin: float
    error_estimate: float
    I2: QuadratureResult
    I4: QuadratureResult
    certified: bool  # margin - error >= MARGIN_TARGET (only meaningful at eps = 0)


@lru_cache(maxsize=1)
def default_omega() -> OmegaTable:
    return build_omega_table(20.0, 1e-4)


def _check(eps: float, tol: float):
    if not 0.0 <= eps <= 1e-2:
        raise InvalidArgumentError(f"eps must lie in [0, 0.01], got {eps}")
    if not 1e-6 <= tol <= 1e-2:
        raise InvalidArgumentError(f"tol must lie in [1e-6, 1e-2], got {tol}")


def _result(res, argument) -> QuadratureResult:
    zero = 0.0
    for cell in res.pieces:
        if argument(cell.centroid) < 1.0:
            zero += cell.volume
    return QuadratureResult(res.value, res.error_estimate, res.cells, 0.0, zero, res.order)


def _run(integrand, cells, tol, argument) -> QuadratureResult:
    try:
        res = integrate_cells(integrand, cells, tol)
    except ConvergenceError as exc:
        raise ConvergenceError(str(exc), value=exc.value,
                               error_estimate=exc.error_estimate) from None
    return _result(res, argument)


def integral_I2(eps: float = 0.0, tol: float = 1e-4, omega: Optional[OmegaLike] = None,
                *, alpha1_cut: Optional[float] = None,
                line_cut: Optional[float] = None) -> QuadratureResult:
    """Compute I2(eps).

    ``alpha1_cut`` (default 1/4 - 2 eps) and ``line_cut`` (default 1 - 2 eps)
    move the two indicator boundaries; lowering either enlarges the
    region where the indicator is 1.
    """
    _check(eps, tol)
    w = default_omega() if omega is None else omega
    c1 = 0.25 - 2 * eps if alpha1_cut is None else float(alpha1_cut)
    c2 = 1.0 - 2 * eps if line_cut is None else float(line_cut)

    # (a1, a2): a2 >= 2/11, a2 <= a1, a1 <= 1/2
    A = np.array([[0.0, -1.0], [-1.0, 1.0], [1.0, 0.0]])
    b = np.array([-TWO_ELEVENTHS, 0.0, 0.5])
    cuts = [((1.0, 0.0), c1), ((1.0, 4.0), c2)]
    # omega argument (1 - a1 - a2)/a2 = k  <=>  a1 + (k+1) a2 = 1; it is at most 3.5 here
    cuts += [((1.0, k + 1.0), 1.0) for k in (1, 2, 3)]
    cells = decompose(A, b, cuts)

    def integrand(p):
        a1, a2 = p[:, 0], p[:, 1]
        on = (a1 >= c1) | (a1 + 4.0 * a2 >= c2)
        return np.where(on, w((1.0 - a1 - a2) / a2) / (a1 * a2 * a2), 0.0)

    return _run(integrand, cells, tol, lambda x: (1.0 - x[0] - x[1]) / x[1])


def integral_I4_direct(eps: float = 0.0, tol: float = 1e-5,
                       omega: Optional[OmegaLike] = None) -> QuadratureResult:
    """Compute I4(eps) by cut-polytope quadrature in four dimensions.

    Coordinates are ordered (a1, a2, a3, a4), outermost first.
    """
    _check(eps, tol)
    w = default_omega() if omega is None else omega
    top = 0.25 - 2 * eps
    if top <= TWO_ELEVENTHS:
        return QuadratureResult(0.0, 0.0, 0, 0.0, 0.0, 0)
    A = np.array([
        [0.0, 0.0, 0.0, -1.0],   # a4 >= 2/11
        [0.0, 0.0, -1.0, 1.0],   # a4 <= a3
        [0.0, -1.0, 1.0, 0.0],   # a3 <= a2
        [-1.0, 1.0, 0.0, 0.0],   # a2 <= a1
        [1.0, 0.0, 0.0, 0.0],    # a1 <= 1/4 - 2 eps
    ])
    b = np.array([-TWO_ELEVENTHS, 0.0, 0.0, 0.0, top])
    line = 1.0 - 2 * eps
    cuts = [((1.0, 4.0, 0.0, 0.0), line)]
    # omega argument (1 - a1 - a2 - a3 - a4)/a4 = k  <=>  a1 + a2 + a3 + (k+1) a4 = 1
    cuts += [((1.0, 1.0, 1.0, k + 1.0), 1.0) for k in (1, 2)]
    cells = decompose(A, b, cuts)

    def integrand(p):
        a1, a2, a3, a4 = p.T
        on = a1 + 4.0 * a2 <= line
        u = (1.0 - a1 - a2 - a3 - a4) / a4
        return np.where(on, w(u) / (a1 * a2 * a3 * a4 * a4), 0.0)

    return _run(integrand, cells, tol,
                lambda x: (1.0 - x[0] - x[1] - x[2] - x[3]) / x[3])


def integral_I4_bound() -> Fraction:
    """Exact majorant (11/2)^5 (1/4 - 2/11) (1/5 - 2/11)^3 / 3! of I4(eps).

    On the support of the I4 integrand a2 <= 1/5, every a_i >= 2/11 and the
    omega factor is at most 1, which gives the box-volume bound.
    """
    return (Fraction(11, 2) ** 5 * (Fraction(1, 4) - Fraction(2, 11))
            * (Fraction(1, 5) - Fraction(2, 11)) ** 3 / math.factorial(3))


def density_margin(eps: float = 0.0, tol: float = 1e-4, omega: Optional[OmegaLike] = None,
                   tol_I4: float = 1e-5, **i2_cuts) -> MarginResult:
    """1 - I2(eps) - I4(eps) with the two error estimates added.

    ``certified`` records whether margin - error >= 0.0096, the level that
    I2(0) <= 0.99 together with I4 < 0.0004 guarantees.
    """
    i2 = integral_I2(eps, tol, omega, **i2_cuts)
    i4 = integral_I4_direct(eps, tol_I4, omega)
    margin = 1.0 - i2.value - i4.value
    err = i2.error_estimate + i4.error_estimate
    return MarginResult(margin, err, i2, i4, margin - err >= MARGIN_TARGET)
