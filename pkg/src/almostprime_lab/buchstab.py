"""Buchstab's function omega(u).

omega(u) = 1/u on [1, 2], and for u >= 2 it solves (u omega(u))' = omega(u - 1).
Integrating once gives the Volterra form

    u omega(u) = 1 + int_1^{u-1} omega(t) dt,      u >= 2,

which only looks one unit back and so can be stepped forward panel by
panel ([k, k+1] for k = 2, 3, ...) without differentiating across the
derivative jump at u = 2. The running integral is a cumulative Simpson
rule restarted on each panel, so the kinks at the integers never sit
inside a Simpson pair.

Below u = 1 we use omega(u) = 0. The sieve integrals hit that region on
part of their boundary; there the sifted count is O(1) and contributes
nothing to the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, OutOfDomainError

EXP_MINUS_GAMMA = math.exp(-0.57721566490153286060651209)


@dataclass(frozen=True)
class OmegaTable:
    """omega and its running integral on a uniform grid over [1, u_max].

    ``per_unit`` grid intervals per unit length (even, so each unit panel
    is a whole number of Simpson pairs); the grid step is ``1/per_unit``.
    ``values[i]`` and ``cum[i]`` refer to ``u = 1 + i/per_unit``, with
    ``cum`` the integral of omega from 1.
    """

    u_max: float
    per_unit: int
    values: np.ndarray = field(repr=False)
    cum: np.ndarray = field(repr=False)

    @property
    def step(self) -> float:
        return 1.0 / self.per_unit

    def grid(self) -> np.ndarray:
        return 1.0 + np.arange(self.values.size) / self.per_unit

    def __call__(self, u):
        return omega(u, self)


def _cumulative_simpson_panel(f: np.ndarray, h: float) -> np.ndarray:
    """Running integral of samples ``f`` (odd length) from the first node.

    Even nodes get the composite Simpson value; odd nodes add the
    third-order one-interval rule h/12 (5 f0 + 8 f1 - f2) to the previous
    even node.
    """
    m = f.size - 1
    out = np.zeros(f.size)
    pairs = h / 3.0 * (f[0:m - 1:2] + 4.0 * f[1:m:2] + f[2::2])
    out[2::2] = np.cumsum(pairs)
    out[1::2] = out[0:m - 1:2] + h / 12.0 * (5.0 * f[0:m - 1:2] + 8.0 * f[1:m:2] - f[2::2])
    return out


def build_omega_table(u_max: float = 20.0, step: float = 1e-4) -> OmegaTable:
    """Tabulate omega on [1, u_max] with grid spacing about ``step``.

    The spacing is rounded down to ``1/n`` with ``n`` even so that every
    integer is a grid point.

    Raises:
        InvalidArgumentError: ``u_max`` outside [2, 100] or ``step`` outside
            [1e-6, 1e-2].
    """
    if not 2.0 <= u_max <= 100.0:
        raise InvalidArgumentError(f"u_max must lie in [2, 100], got {u_max}")
    if not 1e-6 <= step <= 1e-2:
        raise InvalidArgumentError(f"step must lie in [1e-6, 1e-2], got {step}")
    n = int(math.ceil(1.0 / step - 1e-9))
    n += n % 2
    panels = int(math.ceil(u_max - 1.0 - 1e-12))
    size = panels * n + 1
    values = np.empty(size)
    cum = np.empty(size)
    h = 1.0 / n

    # [1, 2]: closed form, integral is log u
    u = 1.0 + np.arange(n + 1) / n
    values[:n + 1] = 1.0 / u
    cum[:n + 1] = np.log(u)

    for k in range(1, panels):
        lo = k * n
        u = 1.0 + (lo + np.arange(n + 1)) / n
        back = cum[lo - n:lo + 1]  # integral up to u - 1
        f = (1.0 + back) / u
        values[lo:lo + n + 1] = f
        cum[lo:lo + n + 1] = cum[lo] + _cumulative_simpson_panel(f, h)

    values.setflags(write=False)
    cum.setflags(write=False)
    return OmegaTable(float(u_max), n, values, cum)


def omega(u, table: OmegaTable):
    """Evaluate omega(u) from the table (scalar or array input).

    Exact 1/u on [1, 2], 0 below 1, and 4-point Lagrange interpolation
    elsewhere. The stencil is kept inside the unit panel that contains u,
    so it never straddles the integer points where omega loses smoothness.

    Raises:
        OutOfDomainError: some u exceeds ``table.u_max``.
    """
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if np.any(u > table.u_max):
        raise OutOfDomainError(
            f"omega evaluated at u={float(np.max(u))} beyond u_max={table.u_max}")
    out = np.zeros(u.shape)
    low = (u >= 1.0) & (u <= 2.0)
    out[low] = 1.0 / u[low]
    hi = u > 2.0
    if np.any(hi):
        uh = u[hi]
        n = table.per_unit
        k = np.floor(uh).astype(np.int64)
        # right endpoint of the last panel belongs to that panel
        k = np.minimum(k, table.values.size // n)
        pos = (uh - k) * n  # position inside panel, in [0, n]
        i0 = np.clip(np.floor(pos).astype(np.int64) - 1, 0, n - 3)
        x = pos - i0
        base = (k - 1) * n + i0
        v = table.values
        f0, f1, f2, f3 = v[base], v[base + 1], v[base + 2], v[base + 3]
        out[hi] = (-f0 * (x - 1) * (x - 2) * (x - 3) / 6.0
                   + f1 * x * (x - 2) * (x - 3) / 2.0
                   - f2 * x * (x - 1) * (x - 3) / 2.0
                   + f3 * x * (x - 1) * (x - 2) / 6.0)
    return float(out) if scalar else out


def omega_oracle_23(u: float) -> float:
    """Closed form of omega on [2, 3]: (1 + log(u - 1)) / u."""
    if not 2.0 <= u <= 3.0:
        raise InvalidArgumentError(f"closed form only valid on [2, 3], got u={u}")
    return (1.0 + math.log(u - 1.0)) / u
