"""Attainable (beta, measure) regions: sampling, membership and export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .bounds import ENVELOPE_KINDS, RANGES, beta_interval, envelope
from .concordance import MeasureKind

MEMBERSHIP_TOL = 1e-12

AXIS_LABELS = {
    MeasureKind.RHO: "Spearman's rho",
    MeasureKind.TAU: "Kendall's tau",
    MeasureKind.FOOTRULE: "Spearman's footrule",
    MeasureKind.GAMMA: "Gini's gamma",
}

# styling only; tests look at geometry
FILL = "#9ecae1"
STROKE = "#08519c"
GRID = "#dddddd"
MARGIN = 50


class RegionPoint(NamedTuple):
    beta: float
    value: float


@dataclass(frozen=True)
class RegionCurve:
    kind: MeasureKind
    points: tuple[tuple[float, float, float], ...]

    @property
    def resolution(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "resolution": self.resolution,
            "points": [list(p) for p in self.points],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RegionCurve":
        points = tuple(tuple(float(x) for x in p) for p in obj["points"])
        if obj.get("resolution", len(points)) != len(points):
            raise ValueError("resolution does not match the number of points")
        return cls(MeasureKind(obj["kind"]), points)


def _kind(kind) -> MeasureKind:
    kind = MeasureKind(kind)
    if kind not in ENVELOPE_KINDS:
        raise ValueError(f"no region for {kind.value}")
    return kind


def beta_grid(resolution: int) -> list[float]:
    # (2i - (n - 1)) / (n - 1) hits -1, 0 (odd n) and 1 exactly
    n = resolution - 1
    return [(2 * i - n) / n for i in range(resolution)]


def sample_region(kind: MeasureKind | str, resolution: int) -> RegionCurve:
    kind = _kind(kind)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    points = tuple(
        (t, envelope(kind, "lower", t), envelope(kind, "upper", t)) for t in beta_grid(resolution)
    )
    return RegionCurve(kind, points)


def contains(kind: MeasureKind | str, p: RegionPoint) -> bool:
    lo, hi = beta_interval(_kind(kind), p.value)
    return lo - MEMBERSHIP_TOL <= p.beta <= hi + MEMBERSHIP_TOL


def _num(x: float) -> str:
    return format(x + 0.0, ".17g")


def export_curve(curve: RegionCurve, fmt: str) -> bytes:
    if fmt == "csv":
        rows = ["t,lower,upper"]
        rows += [",".join(_num(x) for x in p) for p in curve.points]
        return ("\n".join(rows) + "\n").encode()
    if fmt == "json":
        return (json.dumps(curve.to_dict(), indent=2) + "\n").encode()
    raise ValueError(f"unknown export format {fmt!r}")


def parse_curve(data: bytes, fmt: str, kind: MeasureKind | str | None = None) -> RegionCurve:
    """Inverse of :func:`export_curve`. CSV carries no kind, so pass it explicitly."""
    text = data.decode()
    if fmt == "json":
        return RegionCurve.from_dict(json.loads(text))
    if fmt == "csv":
        lines = text.strip().splitlines()
        if lines[0] != "t,lower,upper":
            raise ValueError(f"unexpected CSV header {lines[0]!r}")
        points = tuple(tuple(float(x) for x in line.split(",")) for line in lines[1:])
        return RegionCurve(_kind(kind), points)
    raise ValueError(f"unknown export format {fmt!r}")


@dataclass(frozen=True)
class Viewport:
    """Affine map from (beta, value) to SVG pixel coordinates."""

    width: int
    height: int
    vmin: float
    vmax: float
    margin: int = MARGIN

    def x(self, beta: float) -> float:
        return self.margin + (beta + 1.0) / 2.0 * (self.width - 2 * self.margin)

    def y(self, value: float) -> float:
        span = self.vmax - self.vmin
        return self.margin + (self.vmax - value) / span * (self.height - 2 * self.margin)


def viewport_for(kind: MeasureKind | str, width: int, height: int) -> Viewport:
    vmin, vmax = RANGES[_kind(kind)]
    return Viewport(width, height, vmin, vmax)


def _f(x: float) -> str:
    return f"{x:.4f}"


def render_svg(curve: RegionCurve, width: int = 500, height: int = 500) -> bytes:
    if width < 100 or height < 100:
        raise ValueError("width and height must be at least 100")
    vp = viewport_for(curve.kind, width, height)
    lower = [(vp.x(t), vp.y(lo)) for t, lo, _ in curve.points]
    upper = [(vp.x(t), vp.y(hi)) for t, _, hi in reversed(curve.points)]
    polygon = " ".join(f"{_f(x)},{_f(y)}" for x, y in lower + upper)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f"<desc>beta vs {curve.kind.value}; x = {vp.margin} + (beta + 1) / 2 * "
        f"{width - 2 * vp.margin}; y = {vp.margin} + ({vp.vmax:g} - value) / "
        f"{vp.vmax - vp.vmin:g} * {height - 2 * vp.margin}</desc>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    ticks_v = [vp.vmin + i * 0.5 for i in range(int(round((vp.vmax - vp.vmin) / 0.5)) + 1)]
    ticks_b = [-1.0, -0.5, 0.0, 0.5, 1.0]
    for b in ticks_b:
        out.append(
            f'<line x1="{_f(vp.x(b))}" y1="{_f(vp.y(vp.vmin))}" x2="{_f(vp.x(b))}" '
            f'y2="{_f(vp.y(vp.vmax))}" stroke="{GRID}"/>'
        )
        out.append(
            f'<text x="{_f(vp.x(b))}" y="{_f(vp.y(vp.vmin) + 16)}" font-size="11" '
            f'text-anchor="middle">{b:g}</text>'
        )
    for v in ticks_v:
        out.append(
            f'<line x1="{_f(vp.x(-1))}" y1="{_f(vp.y(v))}" x2="{_f(vp.x(1))}" '
            f'y2="{_f(vp.y(v))}" stroke="{GRID}"/>'
        )
        out.append(
            f'<text x="{_f(vp.x(-1) - 6)}" y="{_f(vp.y(v) + 4)}" font-size="11" '
            f'text-anchor="end">{v:g}</text>'
        )
    out.append(
        f'<polygon id="region" points="{polygon}" fill="{FILL}" stroke="{STROKE}" '
        'stroke-width="1.5"/>'
    )
    out.append(
        f'<rect x="{_f(vp.x(-1))}" y="{_f(vp.y(vp.vmax))}" width="{_f(vp.x(1) - vp.x(-1))}" '
        f'height="{_f(vp.y(vp.vmin) - vp.y(vp.vmax))}" fill="none" stroke="black"/>'
    )
    out.append(
        f'<text id="xlabel" x="{_f(width / 2)}" y="{_f(height - 12)}" font-size="13" '
        "text-anchor=\"middle\">Blomqvist's beta</text>"
    )
    out.append(
        f'<text id="ylabel" x="14" y="{_f(height / 2)}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {_f(height / 2)})">{AXIS_LABELS[curve.kind]}</text>'
    )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()
