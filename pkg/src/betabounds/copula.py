"""Shuffles of M and the small closed family of copulas built from them.

Every copula here is an immutable value object that can be evaluated on
scalars or numpy arrays. A shuffle is described by a partition of the
u-axis (``breaks``), a 1-based permutation giving the vertical slot each
piece is moved to (``perm``) and the slope sign of each piece (``flips``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

WEIGHT_TOL = 1e-12

# A kink line ``A*u + B*v = K`` across which a copula's active linear piece may change.
Line = tuple[float, float, float]


class ShuffleError(ValueError):
    """Base class for malformed shuffle descriptions."""


class NonMonotoneBreaks(ShuffleError):
    pass


class BadEndpoints(ShuffleError):
    pass


class BadPermutation(ShuffleError):
    pass


class BadFlipCount(ShuffleError):
    pass


class CopulaSpecError(ValueError):
    """Raised for JSON copula specs that do not follow the schema."""


def unit_value(x: float) -> float:
    """Return ``float(x)`` after checking that it lies in [0, 1]."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"expected a value in [0, 1], got {x!r}")
    return x


class SamplePoint(NamedTuple):
    u: float
    v: float


class Piece(NamedTuple):
    """One segment of a shuffle: u in [lo, hi] is sent into [offset, offset + hi - lo]."""

    lo: float
    hi: float
    offset: float
    flip: int


@dataclass(frozen=True)
class UpperFrechet:
    """M(u, v) = min(u, v)."""

    def __call__(self, u, v):
        return np.minimum(u, v)

    def kink_lines(self) -> list[Line]:
        return [(1.0, -1.0, 0.0)]

    def __repr__(self) -> str:
        return "M"


@dataclass(frozen=True)
class LowerFrechet:
    """W(u, v) = max(0, u + v - 1)."""

    def __call__(self, u, v):
        return np.maximum(0.0, np.add(u, v) - 1.0)

    def kink_lines(self) -> list[Line]:
        return [(1.0, 1.0, 1.0)]

    def __repr__(self) -> str:
        return "W"


@dataclass(frozen=True)
class Product:
    """Independence copula Pi(u, v) = u * v."""

    def __call__(self, u, v):
        return np.multiply(u, v)

    def kink_lines(self) -> list[Line]:
        return []

    def __repr__(self) -> str:
        return "Pi"


M = UpperFrechet()
W = LowerFrechet()
PI = Product()


@dataclass(frozen=True)
class ShuffleOfM:
    breaks: tuple[float, ...]
    perm: tuple[int, ...]
    flips: tuple[int, ...]
    _offsets: tuple[float, ...] = field(init=False, repr=False, compare=False)
    # on piece i the support map is v = _alpha[i] + _slope[i] * u
    _alpha: np.ndarray = field(init=False, repr=False, compare=False)
    _slope: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        breaks = tuple(float(b) for b in self.breaks)
        perm = tuple(int(p) for p in self.perm)
        flips = tuple(int(f) for f in self.flips)
        if len(breaks) < 2:
            raise BadEndpoints("need at least the two endpoints 0 and 1")
        if any(b1 <= b0 for b0, b1 in zip(breaks, breaks[1:])):
            raise NonMonotoneBreaks(f"breaks must be strictly increasing: {breaks}")
        if breaks[0] != 0.0 or breaks[-1] != 1.0:
            raise BadEndpoints(f"breaks must start at 0 and end at 1: {breaks}")
        n = len(breaks) - 1
        if sorted(perm) != list(range(1, n + 1)):
            raise BadPermutation(f"perm must be a permutation of 1..{n}: {perm}")
        if len(flips) != n or any(f not in (1, -1) for f in flips):
            raise BadFlipCount(f"need {n} flips from {{+1, -1}}, got {flips}")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "flips", flips)

        widths = np.diff(breaks)
        offsets = [0.0] * n
        acc = 0.0
        for i in sorted(range(n), key=lambda i: perm[i]):
            offsets[i] = acc
            acc += widths[i]
        object.__setattr__(self, "_offsets", tuple(offsets))
        slope = np.array(flips, dtype=float)
        alpha = np.where(slope > 0, np.subtract(offsets, breaks[:-1]), np.add(offsets, breaks[1:]))
        object.__setattr__(self, "_slope", slope)
        object.__setattr__(self, "_alpha", alpha)

    @property
    def n(self) -> int:
        return len(self.perm)

    def pieces(self) -> list[Piece]:
        return [
            Piece(self.breaks[i], self.breaks[i + 1], self._offsets[i], self.flips[i])
            for i in range(self.n)
        ]

    @classmethod
    def from_pieces(cls, pieces: Iterable[Sequence[float]]) -> "ShuffleOfM":
        """Rebuild a shuffle from pieces given in any order.

        Only the u-intervals, the vertical order of the image slots and the
        flips are used; slot offsets are recomputed from the widths.
        """
        ps = sorted((Piece(*p) for p in pieces), key=lambda p: p.lo)
        slot_order = sorted(range(len(ps)), key=lambda i: ps[i].offset)
        perm = [0] * len(ps)
        for rank, i in enumerate(slot_order, start=1):
            perm[i] = rank
        breaks = [p.lo for p in ps] + [1.0]
        breaks[0] = 0.0
        return cls(tuple(breaks), tuple(perm), tuple(p.flip for p in ps))

    def support_map(self, u):
        """Image of u under the measure-preserving map carrying the shuffle's mass.

        Right-continuous at interior breaks; u = 1 belongs to the last piece.
        """
        u = np.asarray(u, dtype=float)
        inner = self.breaks[1:-1]
        if len(inner) <= 8:
            # a few comparisons beat a binary search per element
            idx = np.zeros(u.shape, dtype=np.intp)
            for b in inner:
                idx += u >= b
        else:
            idx = np.searchsorted(inner, u, side="right")
        v = self._alpha[idx] + self._slope[idx] * u
        return v if v.ndim else float(v)

    def __call__(self, u, v):
        # C(u, v) = |{x <= u : s(x) <= v}|, summed piece by piece.
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        shape = np.broadcast(u, v).shape
        total = np.zeros(shape)
        a = np.empty(shape)
        b = np.empty(shape)
        for lo, hi, off, flip in self.pieces():
            np.minimum(u, hi, out=a)
            if flip > 0:
                np.add(v, lo - off, out=b)
                np.minimum(a, b, out=a)
                a -= lo
            else:
                np.subtract(hi + off, v, out=b)
                np.maximum(b, lo, out=b)
                a -= b
            np.maximum(a, 0.0, out=a)
            total += a
        # exact uniform margins
        edge = (u >= 1.0) | (v >= 1.0)
        if edge.any():
            total = np.where(u >= 1.0, v, np.where(v >= 1.0, u, total))
        return total if total.ndim else float(total)

    def kink_lines(self) -> list[Line]:
        lines: set[Line] = set()
        for lo, hi, off, flip in self.pieces():
            lines.update({(1.0, 0.0, lo), (1.0, 0.0, hi)})
            lines.update({(0.0, 1.0, off), (0.0, 1.0, off + hi - lo)})
            if flip > 0:
                lines.add((1.0, -1.0, lo - off))
            else:
                lines.add((1.0, 1.0, hi + off))
        return sorted(lines)


def validate_shuffle(raw) -> ShuffleOfM:
    """Build a validated shuffle from a mapping with breaks/perm/flips (and optional n)."""
    if isinstance(raw, ShuffleOfM):
        return raw
    n = raw.get("n")
    shuffle = ShuffleOfM(tuple(raw["breaks"]), tuple(raw["perm"]), tuple(raw["flips"]))
    if n is not None and int(n) != shuffle.n:
        raise BadFlipCount(f"n={n} but the description has {shuffle.n} pieces")
    return shuffle


IDENTITY_SHUFFLE = ShuffleOfM((0.0, 1.0), (1,), (1,))
ANTI_SHUFFLE = ShuffleOfM((0.0, 1.0), (1,), (-1,))


@dataclass(frozen=True)
class Mixture:
    """Finite convex combination of non-mixture copulas."""

    terms: tuple[tuple[float, "CopulaExpr"], ...]

    def __post_init__(self):
        flat: list[tuple[float, CopulaExpr]] = []
        for w, c in self.terms:
            w = float(w)
            if w < 0:
                raise ValueError(f"mixture weights must be nonnegative, got {w}")
            if isinstance(c, Mixture):
                flat.extend((w * wi, ci) for wi, ci in c.terms)
            else:
                flat.append((w, c))
        if not flat:
            raise ValueError("a mixture needs at least one term")
        total = sum(w for w, _ in flat)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"mixture weights sum to {total!r}, not 1")
        object.__setattr__(self, "terms", tuple((w / total, c) for w, c in flat))

    def __call__(self, u, v):
        return sum(w * c(u, v) for w, c in self.terms)

    def kink_lines(self) -> list[Line]:
        lines: set[Line] = set()
        for _, c in self.terms:
            lines.update(c.kink_lines())
        return sorted(lines)


CopulaExpr = Union[UpperFrechet, LowerFrechet, Product, ShuffleOfM, Mixture]


def mixture(*terms: tuple[float, CopulaExpr]) -> Mixture:
    return Mixture(tuple(terms))


def as_shuffle(c: CopulaExpr) -> ShuffleOfM | None:
    """M and W as one-piece shuffles; other shuffles unchanged; None otherwise."""
    if isinstance(c, ShuffleOfM):
        return c
    if isinstance(c, UpperFrechet):
        return IDENTITY_SHUFFLE
    if isinstance(c, LowerFrechet):
        return ANTI_SHUFFLE
    return None


def support_map(s: ShuffleOfM, u: float) -> float:
    return s.support_map(unit_value(u))


def eval_copula(c: CopulaExpr, u: float, v: float) -> float:
    return float(c(unit_value(u), unit_value(v)))


# Symmetry transforms. Each is a map on the support: transpose (x, y) -> (y, x),
# first reflection (x, y) -> (1 - x, y), second reflection (x, y) -> (x, 1 - y).


def transpose(c: CopulaExpr) -> CopulaExpr:
    if isinstance(c, Mixture):
        return Mixture(tuple((w, transpose(t)) for w, t in c.terms))
    if isinstance(c, ShuffleOfM):
        return ShuffleOfM.from_pieces(
            (off, off + hi - lo, lo, flip) for lo, hi, off, flip in c.pieces()
        )
    return c


def reflect(c: CopulaExpr, axis: str) -> CopulaExpr:
    if axis not in ("first", "second"):
        raise ValueError(f"axis must be 'first' or 'second', got {axis!r}")
    if isinstance(c, Mixture):
        return Mixture(tuple((w, reflect(t, axis)) for w, t in c.terms))
    if isinstance(c, UpperFrechet):
        return W
    if isinstance(c, LowerFrechet):
        return M
    if isinstance(c, Product):
        return c
    if axis == "first":
        return ShuffleOfM.from_pieces(
            (1.0 - hi, 1.0 - lo, off, -flip) for lo, hi, off, flip in c.pieces()
        )
    return ShuffleOfM.from_pieces(
        (lo, hi, 1.0 - off - (hi - lo), -flip) for lo, hi, off, flip in c.pieces()
    )


def survival(c: CopulaExpr) -> CopulaExpr:
    return reflect(reflect(c, "first"), "second")


def sample_copula(c: CopulaExpr, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` points from ``c`` as a (count, 2) array.

    Uses numpy's PCG64 generator (``numpy.random.default_rng(seed)``). For
    shuffles the u-coordinates are the first ``count`` uniforms of the
    stream and v is their image under the support map.
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    return _draw(c, count, rng)


def _draw(c: CopulaExpr, count: int, rng: np.random.Generator) -> np.ndarray:
    return np.column_stack(_draw_uv(c, count, rng))


def _draw_uv(c: CopulaExpr, count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(c, Mixture):
        weights = np.array([w for w, _ in c.terms])
        which = rng.choice(len(c.terms), size=count, p=weights / weights.sum())
        u = np.empty(count)
        v = np.empty(count)
        for k, (_, term) in enumerate(c.terms):
            mask = which == k
            if mask.any():
                u[mask], v[mask] = _draw_uv(term, int(mask.sum()), rng)
        return u, v
    u = rng.random(count)
    if isinstance(c, Product):
        return u, rng.random(count)
    return u, as_shuffle(c).support_map(u)


def sample_support(s: ShuffleOfM, count: int, seed: int) -> np.ndarray:
    """Seeded points (u, s(u)) on the support of a shuffle, as a (count, 2) array."""
    if as_shuffle(s) is None:
        raise TypeError("sample_support expects a shuffle, M or W")
    return sample_copula(s, count, seed)


# JSON copula specs ---------------------------------------------------------

_SIMPLE = {"M": M, "W": W, "Pi": PI}
_SHUFFLE_FIELDS = {"breaks", "perm", "flips"}


def _expect_keys(obj, allowed: set[str], where: str):
    if not isinstance(obj, dict):
        raise CopulaSpecError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise CopulaSpecError(f"{where}: unknown fields {sorted(extra)}")


def copula_from_spec(obj) -> CopulaExpr:
    if not isinstance(obj, dict) or "type" not in obj:
        raise CopulaSpecError("copula spec needs a 'type' field")
    kind = obj["type"]
    if kind in _SIMPLE:
        _expect_keys(obj, {"type"}, kind)
        return _SIMPLE[kind]
    if kind == "shuffle":
        _expect_keys(obj, {"type", "shuffle"}, "shuffle")
        body = obj.get("shuffle")
        _expect_keys(body, _SHUFFLE_FIELDS, "shuffle")
        missing = _SHUFFLE_FIELDS - set(body)
        if missing:
            raise CopulaSpecError(f"shuffle: missing fields {sorted(missing)}")
        return validate_shuffle(body)
    if kind == "mixture":
        _expect_keys(obj, {"type", "mixture"}, "mixture")
        body = obj.get("mixture")
        _expect_keys(body, {"terms"}, "mixture")
        terms = []
        for term in body.get("terms", []):
            _expect_keys(term, {"weight", "copula"}, "mixture term")
            terms.append((float(term["weight"]), copula_from_spec(term["copula"])))
        return Mixture(tuple(terms))
    raise CopulaSpecError(f"unknown copula type {kind!r}")


def copula_to_spec(c: CopulaExpr) -> dict:
    if isinstance(c, UpperFrechet):
        return {"type": "M"}
    if isinstance(c, LowerFrechet):
        return {"type": "W"}
    if isinstance(c, Product):
        return {"type": "Pi"}
    if isinstance(c, ShuffleOfM):
        return {
            "type": "shuffle",
            "shuffle": {"breaks": list(c.breaks), "perm": list(c.perm), "flips": list(c.flips)},
        }
    return {
        "type": "mixture",
        "mixture": {"terms": [{"weight": w, "copula": copula_to_spec(t)} for w, t in c.terms]},
    }


def load_copula(path: str | Path) -> CopulaExpr:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CopulaSpecError(f"{path}: not valid JSON ({exc})") from exc
    return copula_from_spec(obj)
