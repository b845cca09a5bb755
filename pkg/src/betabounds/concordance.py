"""The concordance function Q and the five measures of concordance built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import stats

from .copula import (
    PI,
    CopulaExpr,
    M,
    Mixture,
    Product,
    W,
    _draw_uv,
    as_shuffle,
    reflect,
    transpose,
)
from .integrate import gauss_legendre_square, path_integral, square_integral


class MeasureKind(str, Enum):
    BETA = "beta"
    RHO = "rho"
    TAU = "tau"
    FOOTRULE = "footrule"
    GAMMA = "gamma"


class UnsupportedIntegrator(TypeError):
    pass


class TooFewPoints(ValueError):
    pass


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    count: int
    seed: int

    def agrees_with(self, exact: float, floor: float = 0.005, k: float = 3.0) -> bool:
        return abs(self.mean - exact) <= max(k * self.std_error, floor)


def concordance_q(c1: CopulaExpr, c2: CopulaExpr, method: str = "exact") -> float:
    """Q(C1, C2) = 4 * int C2 dC1 - 1, integrating against the measure of ``c1``.

    Mixtures in the first argument are expanded linearly; a mixture in the
    second argument is integrated directly. ``method="gauss-legendre"`` only
    changes how the Pi case is handled and is meant as a cross-check.
    """
    if isinstance(c1, Mixture):
        return sum(w * concordance_q(t, c2, method) for w, t in c1.terms)
    if isinstance(c1, Product):
        if method == "gauss-legendre":
            value, _, _ = gauss_legendre_square(c2)
        else:
            value = square_integral(c2)
        return 4.0 * value - 1.0
    path = as_shuffle(c1)
    if path is None:
        raise UnsupportedIntegrator(f"cannot integrate against {c1!r}")
    return 4.0 * path_integral(path, c2) - 1.0


def _tau(c: CopulaExpr) -> float:
    if not isinstance(c, Mixture):
        return concordance_q(c, c)
    total = 0.0
    for i, (wi, ci) in enumerate(c.terms):
        for j, (wj, cj) in enumerate(c.terms):
            if j < i:
                continue
            q = concordance_q(ci, cj)
            total += wi * wj * q * (1 if i == j else 2)
    return total


def measure(kind: MeasureKind | str, c: CopulaExpr) -> float:
    kind = MeasureKind(kind)
    if kind is MeasureKind.BETA:
        return 4.0 * float(c(0.5, 0.5)) - 1.0
    if kind is MeasureKind.RHO:
        return 3.0 * concordance_q(c, PI)
    if kind is MeasureKind.TAU:
        return _tau(c)
    if kind is MeasureKind.FOOTRULE:
        return 0.5 * (3.0 * concordance_q(c, M) - 1.0)
    return concordance_q(c, M) + concordance_q(c, W)


MC_CHUNK = 1 << 15


@lru_cache(maxsize=4)
def _cached_draw(c: CopulaExpr, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = _draw_uv(c, count, np.random.default_rng(seed))
    u.setflags(write=False)
    v.setflags(write=False)
    return u, v


def mc_concordance_q(c1: CopulaExpr, c2: CopulaExpr, count: int, seed: int) -> McEstimate:
    """Monte Carlo estimate of Q(c1, c2) as 4 * E[c2(U, V)] - 1 with (U, V) ~ c1.

    Points come from ``numpy.random.default_rng(seed)``, so the estimate is a
    pure function of ``(c1, c2, count, seed)``.
    """
    if count < 1000:
        raise ValueError("mc_concordance_q needs count >= 1000")
    u, v = _cached_draw(c1, count, seed)
    y = np.empty(count)
    # cache-sized chunks: shuffle evaluation is memory bound
    for i in range(0, count, MC_CHUNK):
        y[i : i + MC_CHUNK] = c2(u[i : i + MC_CHUNK], v[i : i + MC_CHUNK])
    y = 4.0 * y - 1.0
    return McEstimate(float(y.mean()), float(y.std(ddof=1) / math.sqrt(count)), count, seed)


def mc_measure(kind: MeasureKind | str, c: CopulaExpr, count: int, seed: int) -> McEstimate:
    """Monte Carlo counterpart of :func:`measure`, using one draw from ``c``."""
    kind = MeasureKind(kind)
    u, v = _cached_draw(c, count, seed)
    if kind is MeasureKind.BETA:
        # C(1/2, 1/2) = P(U <= 1/2, V <= 1/2)
        y = 4.0 * ((u <= 0.5) & (v <= 0.5)) - 1.0
    elif kind is MeasureKind.RHO:
        y = 3.0 * (4.0 * u * v - 1.0)
    elif kind is MeasureKind.TAU:
        y = 4.0 * np.asarray(c(u, v)) - 1.0
    elif kind is MeasureKind.FOOTRULE:
        y = 0.5 * (3.0 * (4.0 * M(u, v) - 1.0) - 1.0)
    else:
        y = 4.0 * M(u, v) + 4.0 * W(u, v) - 2.0
    return McEstimate(float(y.mean()), float(y.std(ddof=1) / math.sqrt(count)), count, seed)


def empirical_measures(points) -> dict[MeasureKind, float]:
    """Sample tau, rho and beta of a point cloud given as an (n, 2) array.

    tau is (concordant - discordant) / (n choose 2), rho is the Pearson
    correlation of ranks and beta is 4 * (share of points with both
    coordinates at or below their sample medians) - 1. Ties are broken by
    index order.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (n, 2)")
    if len(pts) < 10:
        raise TooFewPoints(f"need at least 10 points, got {len(pts)}")
    ru = stats.rankdata(pts[:, 0], method="ordinal")
    rv = stats.rankdata(pts[:, 1], method="ordinal")
    # no ties remain after ordinal ranking, so scipy's tau-b equals tau-a
    tau = float(stats.kendalltau(ru, rv).statistic)
    rho = float(np.corrcoef(ru, rv)[0, 1])
    mu, mv = np.median(pts, axis=0)
    beta = 4.0 * float(np.mean((pts[:, 0] <= mu) & (pts[:, 1] <= mv))) - 1.0
    return {MeasureKind.TAU: tau, MeasureKind.RHO: rho, MeasureKind.BETA: beta}


@dataclass(frozen=True)
class AxiomResult:
    name: str
    value: float
    expected: float
    passed: bool


@dataclass(frozen=True)
class AxiomReport:
    kind: MeasureKind
    results: tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]


def axiom_check(kind: MeasureKind | str, c: CopulaExpr, tol: float) -> AxiomReport:
    """Check transpose invariance, both reflection sign flips and kappa(Pi) = 0 for ``c``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    kind = MeasureKind(kind)
    base = measure(kind, c)
    checks = [
        ("transpose", measure(kind, transpose(c)), base),
        ("reflect_first", measure(kind, reflect(c, "first")), -base),
        ("reflect_second", measure(kind, reflect(c, "second")), -base),
        ("independence", measure(kind, PI), 0.0),
    ]
    return AxiomReport(
        kind,
        tuple(AxiomResult(name, val, exp, abs(val - exp) <= tol) for name, val, exp in checks),
    )
