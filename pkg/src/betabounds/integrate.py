"""Exact integration of piecewise-polynomial copula integrands.

Every copula in the closed family is, cell by cell, a polynomial of degree
at most one in each variable, with cells bounded by the copula's kink lines.
Splitting the domain at every place where the active piece can change
leaves integrands of degree <= 3, on which Simpson's rule is exact.
"""

from __future__ import annotations

import warnings
from itertools import combinations

import numpy as np

from .copula import CopulaExpr, Line, ShuffleOfM

KNOT_MERGE_TOL = 1e-14


class ConvergenceWarning(UserWarning):
    pass


def _merge_knots(knots) -> np.ndarray:
    knots = np.sort(np.asarray(knots, dtype=float))
    keep = [knots[0]]
    for k in knots[1:]:
        if k - keep[-1] > KNOT_MERGE_TOL:
            keep.append(k)
    # the right endpoint must survive even if an interior knot sat next to it
    keep[-1] = knots[-1]
    return np.asarray(keep)


def _simpson(f, left: np.ndarray, right: np.ndarray) -> float:
    mid = 0.5 * (left + right)
    return float(np.sum((right - left) / 6.0 * (f(left) + 4.0 * f(mid) + f(right))))


def path_integral(path: ShuffleOfM, c2: CopulaExpr) -> float:
    """Integral of c2(u, s(u)) over [0, 1], s being the support map of ``path``."""
    lines = c2.kink_lines()
    lefts, rights, alphas, slopes = [], [], [], []
    for lo, hi, off, flip in path.pieces():
        # on this piece v = alpha + slope * u
        slope = 1.0 if flip > 0 else -1.0
        alpha = off - lo if flip > 0 else off + hi
        knots = [lo, hi]
        for a, b, k in lines:
            denom = a + b * slope
            if denom != 0.0:
                x = (k - b * alpha) / denom
                if lo < x < hi:
                    knots.append(x)
        knots = _merge_knots(knots)
        n = len(knots) - 1
        lefts.append(knots[:-1])
        rights.append(knots[1:])
        alphas.append(np.full(n, alpha))
        slopes.append(np.full(n, slope))
    left = np.concatenate(lefts)
    right = np.concatenate(rights)
    alpha = np.concatenate(alphas)
    slope = np.concatenate(slopes)

    def integrand(u):
        return c2(u, np.clip(alpha + slope * u, 0.0, 1.0))

    return _simpson(integrand, left, right)


def _strip_breaks(lines: list[Line]) -> np.ndarray:
    """u-values where the vertical order of the kink lines inside the square can change."""
    xs = [0.0, 1.0]
    slanted = []
    for a, b, k in lines:
        if b == 0.0:
            xs.append(k / a)
        else:
            slanted.append((a, b, k))
    for (a1, b1, k1), (a2, b2, k2) in combinations(slanted, 2):
        det = a1 * b2 - a2 * b1
        if det != 0.0:
            xs.append((k1 * b2 - k2 * b1) / det)
    xs = [x for x in xs if 0.0 <= x <= 1.0]
    return _merge_knots(xs)


def square_integral(c2: CopulaExpr) -> float:
    """Integral of c2(u, v) over the unit square, by exact iterated Simpson."""
    lines = list(c2.kink_lines()) + [(0.0, 1.0, 0.0), (0.0, 1.0, 1.0)]
    slanted = np.array([(a, b, k) for a, b, k in lines if b != 0.0])
    ubreaks = _strip_breaks(lines)

    def inner(u: float) -> float:
        vs = (slanted[:, 2] - slanted[:, 0] * u) / slanted[:, 1]
        vs = _merge_knots([v for v in vs if 0.0 <= v <= 1.0] + [0.0, 1.0])
        return _simpson(lambda v: c2(np.full_like(v, u), v), vs[:-1], vs[1:])

    g = np.vectorize(inner)
    return _simpson(g, ubreaks[:-1], ubreaks[1:])


def gauss_legendre_square(c2: CopulaExpr, tol: float = 1e-10, start: int = 16, cap: int = 1024):
    """Tensor Gauss-Legendre integral of c2 over the square with order doubling.

    Returns ``(value, order, converged)``. A ConvergenceWarning is emitted when
    ``cap`` is reached before two successive orders agree within ``tol``.
    Kinked integrands converge slowly, so this is a cross-check only.
    """
    prev = None
    order = start
    while order <= cap:
        x, w = np.polynomial.legendre.leggauss(order)
        x = 0.5 * (x + 1.0)
        w = 0.5 * w
        uu, vv = np.meshgrid(x, x, indexing="ij")
        val = float(np.einsum("i,j,ij->", w, w, c2(uu, vv)))
        if prev is not None and abs(val - prev) < tol:
            return val, order, True
        prev = val
        order *= 2
    warnings.warn(
        f"Gauss-Legendre did not converge to {tol:g} by order {cap}", ConvergenceWarning
    )
    return prev, cap, False
