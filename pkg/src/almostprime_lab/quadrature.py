"""Quadrature over polytopes cut along hyperplanes.

The integrands in :mod:`sieve_integrals` are smooth except across a few
known hyperplanes (indicator boundaries and the lines where the argument
of omega crosses an integer). We split the integration polytope along
every such hyperplane, triangulate each convex piece, and integrate on
every simplex with a collapsed-coordinate (Duffy) tensor Gauss-Legendre
rule. On each piece the integrand is smooth, so the rules converge
geometrically in the order; the order is raised until two successive
orders agree to the tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import Delaunay, HalfspaceIntersection

from .errors import ConvergenceError

DEFAULT_ORDERS = (4, 6, 8, 12, 16, 24, 32)


@dataclass(frozen=True)
class Cell:
    """A convex piece of the region on which the integrand is smooth."""

    vertices: np.ndarray  # (k, d)
    simplices: np.ndarray  # (s, d+1, d) vertex coordinates
    volume: float
    centroid: np.ndarray
    signs: Tuple[int, ...]  # side of each cut hyperplane


@dataclass(frozen=True)
class PolytopeIntegral:
    value: float
    error_estimate: float
    cells: int  # number of leaf simplices
    order: int
    volume: float
    pieces: Tuple[Cell, ...]


def _interior_point(A: np.ndarray, b: np.ndarray):
    """Chebyshev centre of {A x <= b}; returns (point, radius) or (None, 0)."""
    norms = np.linalg.norm(A, axis=1)
    d = A.shape[1]
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, norms[:, None]])
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=[(None, None)] * d + [(0, None)],
                  method="highs")
    if res.status != 0:
        return None, 0.0
    return res.x[:d], float(res.x[-1])


def _dedupe(points: np.ndarray, scale: float) -> np.ndarray:
    key = np.round(points / scale, 9)
    _, idx = np.unique(key, axis=0, return_index=True)
    return points[np.sort(idx)]


def _simplex_volume(simplex: np.ndarray) -> float:
    d = simplex.shape[1]
    edges = simplex[1:] - simplex[0]
    return abs(np.linalg.det(edges)) / math.factorial(d)


def decompose(A: np.ndarray, b: np.ndarray, cuts: Sequence[Tuple[Sequence[float], float]],
              min_radius: float = 1e-12) -> List[Cell]:
    """Split ``{A x <= b}`` along the hyperplanes ``c . x = d`` in ``cuts``.

    Returns one :class:`Cell` per sign pattern with non-empty interior,
    each already triangulated.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    d = A.shape[1]
    cells = []
    for signs in itertools.product((-1, 1), repeat=len(cuts)):
        rows = [A]
        rhs = [b]
        for s, (cvec, off) in zip(signs, cuts):
            rows.append(s * np.asarray(cvec, dtype=float)[None, :])
            rhs.append(np.array([s * off]))
        Ac = np.vstack(rows)
        bc = np.concatenate(rhs)
        centre, radius = _interior_point(Ac, bc)
        if centre is None or radius <= min_radius:
            continue
        hs = HalfspaceIntersection(np.hstack([Ac, -bc[:, None]]), centre)
        verts = _dedupe(hs.intersections, max(radius, 1e-300))
        if verts.shape[0] < d + 1:
            continue
        if verts.shape[0] == d + 1:
            simplices = verts[None, :, :]
        else:
            tri = Delaunay(verts)
            simplices = verts[tri.simplices]
        vols = np.array([_simplex_volume(s) for s in simplices])
        keep = vols > 0
        simplices = simplices[keep]
        vols = vols[keep]
        if simplices.shape[0] == 0:
            continue
        vol = float(vols.sum())
        centroid = (vols[:, None] * simplices.mean(axis=1)).sum(axis=0) / vol
        cells.append(Cell(verts, simplices, vol, centroid, tuple(signs)))
    return cells


@lru_cache(maxsize=64)
def simplex_rule(d: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Collapsed tensor Gauss-Legendre rule on the unit simplex.

    Returns ``(lam, w)``: barycentric coordinates of shape (P, d+1) and
    weights summing to the simplex volume 1/d!.
    The map from the cube is
    x = v0 + t1 (v1 - v0 + t2 (v2 - v1 + t3 (...))), with Jacobian
    d! vol * t1^(d-1) t2^(d-2) ... t_{d-1}.
    """
    g, gw = np.polynomial.legendre.leggauss(order)
    g = 0.5 * (g + 1.0)
    gw = 0.5 * gw
    grids = np.meshgrid(*([g] * d), indexing="ij")
    wgrids = np.meshgrid(*([gw] * d), indexing="ij")
    t = np.stack([x.ravel() for x in grids], axis=1)
    w = np.prod(np.stack([x.ravel() for x in wgrids], axis=1), axis=1)
    for j in range(d - 1):
        w = w * t[:, j] ** (d - 1 - j)
    # barycentric: coefficient of v_j is prod_{i<j} t_i * (1 - t_j), last is prod of all
    lam = np.zeros((t.shape[0], d + 1))
    run = np.ones(t.shape[0])
    for j in range(d):
        lam[:, j] = run * (1.0 - t[:, j])
        run = run * t[:, j]
    lam[:, d] = run
    return lam, w


def _integrate_simplices(f, simplices: np.ndarray, order: int, chunk: int = 1 << 21) -> np.ndarray:
    """Per-simplex integrals of ``f`` with the rule of the given order."""
    s, _, d = simplices.shape
    lam, w = simplex_rule(d, order)
    jac = np.array([math.factorial(d) * _simplex_volume(x) for x in simplices])
    out = np.empty(s)
    per = max(1, chunk // lam.shape[0])
    for a in range(0, s, per):
        block = simplices[a:a + per]
        pts = np.einsum("pj,sjd->spd", lam, block)
        vals = f(pts.reshape(-1, d)).reshape(block.shape[0], -1)
        out[a:a + per] = vals @ w * jac[a:a + per]
    return out


def integrate_cells(f: Callable[[np.ndarray], np.ndarray], cells: Sequence[Cell], tol: float,
                    orders: Sequence[int] = DEFAULT_ORDERS) -> PolytopeIntegral:
    """Integrate ``f`` (vectorised over rows of an (m, d) array) over the cells.

    The error estimate is the summed absolute per-simplex difference
    between the last two orders; the finer value is returned.

    Raises:
        ConvergenceError: the estimate is still above ``tol`` at the
            highest order; carries the best value.
    """
    if not cells:
        return PolytopeIntegral(0.0, 0.0, 0, orders[0], 0.0, ())
    simplices = np.concatenate([c.simplices for c in cells])
    volume = float(sum(c.volume for c in cells))
    prev = _integrate_simplices(f, simplices, orders[0])
    err = math.inf
    order = orders[0]
    for order in orders[1:]:
        cur = _integrate_simplices(f, simplices, order)
        err = math.fsum(np.abs(cur - prev))
        prev = cur
        if err <= tol:
            break
    value = math.fsum(prev)
    if err > tol:
        raise ConvergenceError(
            f"quadrature error {err:.3g} above tolerance {tol:.3g} at order {order}",
            value=value, error_estimate=err)
    return PolytopeIntegral(value, err, int(simplices.shape[0]), order, volume, tuple(cells))
