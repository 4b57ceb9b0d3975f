"""Regenerate oracles.json with iterated scipy quadrature, independent of the package.

omega is used in closed form: 1/u on [1, 2], (1 + log(u - 1))/u on [2, 3],
and on [3, 4] through u omega(u) = 1 + log 2 + int_2^{u-1} (1 + log(t - 1))/t dt.
For I4 the innermost a4 integral is done analytically since u <= 3/2 there.

Run: python3 tests/fixtures/compute_oracles.py
"""

import json
import math
from pathlib import Path

import mpmath as mp
from scipy import integrate

LOW = 2 / 11


def omega(u: float) -> float:
    if u < 1:
        return 0.0
    if u <= 2:
        return 1 / u
    if u <= 3:
        return (1 + math.log(u - 1)) / u
    tail = float(mp.quad(lambda t: (1 + mp.log(t - 1)) / t, [2, u - 1]))
    return (1 + math.log(2) + tail) / u


def quad(f, a, b, **kw):
    return integrate.quad(f, a, b, epsabs=1e-15, epsrel=1e-12, limit=200, **kw)[0]


def I2(eps: float) -> float:
    c1, c2 = 0.25 - 2 * eps, 1 - 2 * eps

    def inner(a1):
        pts = sorted({LOW, a1} | {x for x in ((1 - a1) / 2, (1 - a1) / 3, (1 - a1) / 4,
                                               (c2 - a1) / 4) if LOW < x < a1})
        total = 0.0
        for a, b in zip(pts, pts[1:]):
            mid = 0.5 * (a + b)
            if a1 >= c1 or a1 + 4 * mid >= c2:
                total += quad(lambda a2: omega((1 - a1 - a2) / a2) / (a1 * a2 * a2), a, b)
        return total

    bps = sorted({LOW, 0.2, c1, 0.25, 3 / 11, 1 / 3, 5 / 11, 0.5})
    return sum(quad(inner, a, b) for a, b in zip(bps, bps[1:]))


def I4(eps: float) -> float:
    top, line = 0.25 - 2 * eps, 1 - 2 * eps

    def g(a3, a2, a1):
        s3 = a1 + a2 + a3
        hi = min(a3, (1 - s3) / 2)
        if hi <= LOW:
            return 0.0
        F = lambda x: (math.log(x) - math.log(1 - s3 - x)) / (1 - s3)
        return (F(hi) - F(LOW)) / (a1 * a2 * a3)

    def a3int(a2, a1):
        pts = sorted({LOW, a2} | {x for x in [(1 - a1 - a2) / 3] if LOW < x < a2})
        return sum(quad(g, a, b, args=(a2, a1)) for a, b in zip(pts, pts[1:]))

    def a2int(a1):
        hi = min(a1, (line - a1) / 4)
        if hi <= LOW:
            return 0.0
        return quad(a3int, LOW, hi, args=(a1,))

    return quad(a2int, LOW, top)


if __name__ == "__main__":
    out = {
        "I2_0": round(I2(0.0), 12),
        "I2_0005": round(I2(0.005), 12),
        "I4_0": float(f"{I4(0.0):.12e}"),
        "I4_0005": float(f"{I4(0.005):.12e}"),
        "omega_3_5": omega(3.5),
        "exp_minus_gamma": math.exp(-0.5772156649015329),
    }
    path = Path(__file__).with_name("oracles.json")
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))
