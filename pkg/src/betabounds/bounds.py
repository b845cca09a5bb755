"""Extremal copulas for a fixed Blomqvist beta, their Q values and envelopes.

The bounds of the family with prescribed asymmetry ``C(a, b) - C(b, a) = c``
are 4-piece shuffles of M. At ``a = b = 1/2`` they are also the pointwise
bounds of the copulas with ``beta = t``, which gives closed-form envelopes of
the other four measures as functions of beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .concordance import MeasureKind, concordance_q
from .copula import PI, M, ShuffleOfM, W

ADMISSIBLE_TOL = 1e-12
# pieces narrower than this are treated as empty
MIN_WIDTH = 1e-14


class InadmissibleC(ValueError):
    pass


class ConditionViolated(ValueError):
    pass


class OutOfRange(ValueError):
    pass


def max_asymmetry(u: float, v: float) -> float:
    """Largest possible |C(u, v) - C(v, u)| over all copulas."""
    return min(u, v, 1.0 - u, 1.0 - v, abs(v - u))


def max_width_c(a: float, b: float) -> float:
    """Largest c for which the bound formulas still describe a shuffle (no negative pieces)."""
    return min(a, b, 1.0 - a, 1.0 - b)


@dataclass(frozen=True)
class BoundParams:
    """Parameters (a, b, c) of the extremal copulas.

    By default c must satisfy ``0 <= c <= max_asymmetry(a, b)``. With
    ``extended=True`` the weaker ``c <= max_width_c(a, b)`` is used, which
    is what the beta bounds need at a = b = 1/2 where the maximal asymmetry
    vanishes but the formulas remain valid shuffles.
    """

    a: float
    b: float
    c: float
    extended: bool = False

    def __post_init__(self):
        for name in ("a", "b"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {x}")
        cmax = max_width_c(self.a, self.b) if self.extended else max_asymmetry(self.a, self.b)
        if self.c < 0.0 or self.c > cmax + ADMISSIBLE_TOL:
            raise InadmissibleC(f"c={self.c} outside [0, {cmax}] for (a, b)=({self.a}, {self.b})")
        object.__setattr__(self, "c", min(float(self.c), cmax))

    @property
    def d1(self) -> float:
        return max(self.a + self.b - 1.0, 0.0) + self.c

    @property
    def d2(self) -> float:
        return min(self.a, self.b) - self.c


def _shuffle(breaks, perm, flip) -> ShuffleOfM:
    """Build a shuffle from raw breaks, dropping empty pieces and reindexing perm."""
    keep_breaks = [0.0]
    keep_perm = []
    for i, p in enumerate(perm):
        hi = min(max(breaks[i + 1], keep_breaks[-1]), 1.0)
        if hi - keep_breaks[-1] <= MIN_WIDTH:
            continue
        keep_breaks.append(hi)
        keep_perm.append(p)
    keep_breaks[-1] = 1.0
    ranks = {p: r for r, p in enumerate(sorted(keep_perm), start=1)}
    return ShuffleOfM(
        tuple(keep_breaks), tuple(ranks[p] for p in keep_perm), (flip,) * len(keep_perm)
    )


def lower_bound_copula(p: BoundParams) -> ShuffleOfM:
    a, b, d1 = p.a, p.b, p.d1
    return _shuffle([0.0, a - d1, a, 1.0 - b + d1, 1.0], (4, 2, 3, 1), -1)


def upper_bound_copula(p: BoundParams) -> ShuffleOfM:
    a, b, d2 = p.a, p.b, p.d2
    return _shuffle([0.0, d2, b, a + b - d2, 1.0], (1, 3, 2, 4), 1)


def lower_closed_form(p: BoundParams, u, v):
    """Pointwise formula of the lower bound, independent of the shuffle machinery."""
    a, b, d1 = p.a, p.b, p.d1
    inner = np.minimum(np.minimum(d1, u - a + d1), np.minimum(v - b + d1, u + v - a - b + d1))
    return np.maximum(W(u, v), inner)


def upper_closed_form(p: BoundParams, u, v):
    a, b, d2 = p.a, p.b, p.d2
    inner = np.maximum(np.maximum(d2, u - b + d2), np.maximum(v - a + d2, u + v - a - b + d2))
    return np.minimum(M(u, v), inner)


def beta_bound_copulas(t: float) -> tuple[ShuffleOfM, ShuffleOfM]:
    """Pointwise lower and upper bounds of all copulas with Blomqvist's beta equal to t."""
    if not -1.0 <= t <= 1.0:
        raise OutOfRange(f"t must lie in [-1, 1], got {t}")
    lower = lower_bound_copula(BoundParams(0.5, 0.5, (1.0 + t) / 4.0, extended=True))
    upper = upper_bound_copula(BoundParams(0.5, 0.5, (1.0 - t) / 4.0, extended=True))
    return lower, upper


Q_ITEMS = "abcdefg"


def item_d_condition(p: BoundParams) -> bool:
    a, b, d2 = p.a, p.b, p.d2
    return d2 <= min(1 - a, 1 - b, 2 * a + b - 1, a + 2 * b - 1) + ADMISSIBLE_TOL


def q_item(item: str, p: BoundParams) -> float:
    """Closed-form Q of the extremal copulas against W, Pi, M and themselves.

    Items (a)-(c) concern the lower bound, (d)-(g) the upper one; see
    :func:`q_item_pair` for the pair of copulas each item refers to. Item (d)
    is only valid under :func:`item_d_condition`.
    """
    a, b, d1, d2 = p.a, p.b, p.d1, p.d2
    if item in ("a", "c"):
        return 4 * d1 * (1 - a - b + d1) - 1
    if item == "b":
        return 2 * d1 * (1 - a - b + d1) * (1 - a - b + 2 * d1) - 1 / 3
    if item == "d":
        if not item_d_condition(p):
            raise ConditionViolated(
                f"item (d) needs d2 <= min(1-a, 1-b, 2a+b-1, a+2b-1); got d2={d2}"
            )
        return (a - 1) ** 2 + (b - 1) ** 2 + 2 * d2 * (a + b - d2) - 1
    if item == "e":
        return 1 / 3 - 2 * (a + b - 2 * d2) * (a - d2) * (b - d2)
    if item in ("f", "g"):
        return 1 - 4 * (a - d2) * (b - d2)
    raise ValueError(f"unknown item {item!r}; expected one of {Q_ITEMS}")


def q_item_pair(item: str, p: BoundParams):
    lower, upper = lower_bound_copula(p), upper_bound_copula(p)
    return {
        "a": (W, lower),
        "b": (PI, lower),
        "c": (lower, lower),
        "d": (W, upper),
        "e": (PI, upper),
        "f": (upper, upper),
        "g": (M, upper),
    }[item]


def q_item_value(item: str, p: BoundParams) -> tuple[float, bool]:
    """Closed form when available, otherwise exact numeric Q; the flag says which."""
    try:
        return q_item(item, p), True
    except ConditionViolated:
        return concordance_q(*q_item_pair(item, p)), False


# Envelopes in beta ---------------------------------------------------------

ENVELOPE_KINDS = (MeasureKind.RHO, MeasureKind.TAU, MeasureKind.FOOTRULE, MeasureKind.GAMMA)

RANGES = {
    MeasureKind.RHO: (-1.0, 1.0),
    MeasureKind.TAU: (-1.0, 1.0),
    MeasureKind.FOOTRULE: (-0.5, 1.0),
    MeasureKind.GAMMA: (-1.0, 1.0),
    MeasureKind.BETA: (-1.0, 1.0),
}


def _lower_env(kind: MeasureKind, t: float) -> float:
    if kind is MeasureKind.RHO:
        return 3.0 / 16.0 * (1 + t) ** 3 - 1
    if kind is MeasureKind.TAU:
        return (1 + t) ** 2 / 4.0 - 1
    if kind is MeasureKind.FOOTRULE:
        return 3.0 * (1 + t) ** 2 / 16.0 - 0.5
    return 3.0 * (1 + t) ** 2 / 8.0 - 1


def _upper_env(kind: MeasureKind, t: float) -> float:
    if kind is MeasureKind.RHO:
        return 1 - 3.0 / 16.0 * (1 - t) ** 3
    if kind is MeasureKind.TAU:
        return 1 - (1 - t) ** 2 / 4.0
    # footrule and gamma share the upper envelope
    return 1 - 3.0 * (1 - t) ** 2 / 8.0


def _envelope_kind(kind) -> MeasureKind:
    kind = MeasureKind(kind)
    if kind is MeasureKind.BETA:
        raise ValueError("beta has no envelope in beta")
    return kind


def envelope(kind: MeasureKind | str, side: str, t: float) -> float:
    """Value of ``kind`` at the lower or upper extremal copula with beta = t."""
    kind = _envelope_kind(kind)
    if not -1.0 <= t <= 1.0:
        raise OutOfRange(f"t must lie in [-1, 1], got {t}")
    if side == "lower":
        return _lower_env(kind, t)
    if side == "upper":
        return _upper_env(kind, t)
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def _clip(x: float) -> float:
    return min(1.0, max(-1.0, x))


def beta_interval(kind: MeasureKind | str, value: float) -> tuple[float, float]:
    """Closed interval of beta values compatible with ``kind(C) = value``."""
    kind = _envelope_kind(kind)
    lo_range, hi_range = RANGES[kind]
    if not lo_range <= value <= hi_range:
        raise OutOfRange(f"{kind.value}={value} outside [{lo_range}, {hi_range}]")
    x = value
    if kind is MeasureKind.RHO:
        lo = -1.0 if x <= -0.5 else 1 - 2 * np.cbrt(2 * (1 - x) / 3)
        hi = 1.0 if x >= 0.5 else -1 + 2 * np.cbrt(2 * (1 + x) / 3)
    elif kind is MeasureKind.TAU:
        lo = -1.0 if x <= 0 else 1 - 2 * math.sqrt(1 - x)
        hi = 1.0 if x >= 0 else -1 + 2 * math.sqrt(1 + x)
    elif kind is MeasureKind.FOOTRULE:
        lo = 1 - 4 * math.sqrt((1 - x) / 6)
        hi = 1.0 if x >= 0.25 else -1 + 4 * math.sqrt((1 + 2 * x) / 6)
    else:
        lo = -1.0 if x <= -0.5 else 1 - 2 * math.sqrt(2 * (1 - x) / 3)
        hi = 1.0 if x >= 0.5 else -1 + 2 * math.sqrt(2 * (1 + x) / 3)
    return _clip(float(lo)), _clip(float(hi))
