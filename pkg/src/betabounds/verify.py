"""End-to-end checks: closed forms vs. exact integration vs. Monte Carlo.

Each ``criterion_*`` function returns a :class:`Check`. ``run_all`` runs them
in order; the CLI ``verify`` command and the acceptance tests both use it.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import (
    ENVELOPE_KINDS,
    BoundParams,
    ConditionViolated,
    Q_ITEMS,
    beta_bound_copulas,
    beta_interval,
    envelope,
    lower_bound_copula,
    max_asymmetry,
    item_d_condition,
    q_item_pair,
    q_item,
    upper_bound_copula,
)
from .concordance import (
    MeasureKind,
    axiom_check,
    concordance_q,
    empirical_measures,
    mc_concordance_q,
    measure,
)
from .copula import PI, M, W, Mixture, sample_support, survival
from .region import beta_grid, export_curve, render_svg, sample_region

GRID = np.linspace(0.0, 1.0, 101)
MC_COUNT = 1_000_000


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def t_grid() -> list[float]:
    return beta_grid(101)


def random_params(seed: int, count: int = 50) -> list[BoundParams]:
    """Seeded (a, b, c) with a, b uniform on [0, 1] and c uniform on [0, max_asymmetry(a, b)]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a, b = rng.random(2)
        out.append(BoundParams(float(a), float(b), float(rng.random() * max_asymmetry(a, b))))
    return out


def _timed(number, name, fn):
    start = time.perf_counter()
    passed, detail = fn()
    return Check(number, name, passed, detail, time.perf_counter() - start)


def criterion_1(tol: float = 1e-9) -> Check:
    def run():
        worst = 0.0
        start = time.perf_counter()
        for t in t_grid():
            lo, up = beta_bound_copulas(t)
            worst = max(
                worst,
                abs(measure("rho", lo) - (3 * (1 + t) ** 3 / 16 - 1)),
                abs(measure("rho", up) - (1 - 3 * (1 - t) ** 3 / 16)),
            )
        elapsed = time.perf_counter() - start
        return worst <= tol and elapsed < 10.0, f"max err {worst:.2e}, {elapsed:.2f}s < 10s"

    return _timed(1, "rho envelopes", run)


def criterion_2(tol: float = 1e-9) -> Check:
    formulas = {
        MeasureKind.TAU: (lambda t: (1 + t) ** 2 / 4 - 1, lambda t: 1 - (1 - t) ** 2 / 4),
        MeasureKind.FOOTRULE: (
            lambda t: 3 * (1 + t) ** 2 / 16 - 0.5,
            lambda t: 1 - 3 * (1 - t) ** 2 / 8,
        ),
        MeasureKind.GAMMA: (lambda t: 3 * (1 + t) ** 2 / 8 - 1, lambda t: 1 - 3 * (1 - t) ** 2 / 8),
    }

    def run():
        worst = {k.value: 0.0 for k in formulas}
        worst_q = 0.0
        for t in t_grid():
            lo, up = beta_bound_copulas(t)
            for kind, (flo, fup) in formulas.items():
                err = max(abs(measure(kind, lo) - flo(t)), abs(measure(kind, up) - fup(t)))
                worst[kind.value] = max(worst[kind.value], err)
            worst_q = max(worst_q, abs(concordance_q(lo, M) - (1 + t) ** 2 / 8))
        ok = max(worst.values()) <= tol and worst_q <= tol
        parts = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
        return ok, f"max err {parts}, Q(lower, M) {worst_q:.2e}"

    return _timed(2, "tau/footrule/gamma envelopes", run)


def criterion_3(tol: float = 1e-9, seed: int = 42) -> Check:
    def run():
        worst = 0.0
        tested_d = raised_d = outside_d = 0
        for p in random_params(seed):
            for item in Q_ITEMS:
                if item == "d" and not item_d_condition(p):
                    outside_d += 1
                    try:
                        q_item(item, p)
                    except ConditionViolated:
                        raised_d += 1
                    continue
                tested_d += item == "d"
                worst = max(worst, abs(q_item(item, p) - concordance_q(*q_item_pair(item, p))))
        ok = worst <= tol and raised_d == outside_d and tested_d > 0
        return ok, (
            f"max err {worst:.2e}; item d tested on {tested_d}, "
            f"ConditionViolated {raised_d}/{outside_d} outside"
        )

    return _timed(3, "closed-form Q of extremal copulas", run)


BETA_T0_SHUFFLES = (
    ((0.0, 0.25, 0.5, 0.75, 1.0), (4, 2, 3, 1), (-1, -1, -1, -1)),
    ((0.0, 0.25, 0.5, 0.75, 1.0), (1, 3, 2, 4), (1, 1, 1, 1)),
)


def criterion_4() -> Check:
    def run():
        worst = 0.0
        for t in t_grid():
            lo, up = beta_bound_copulas(t)
            worst = max(worst, abs(measure("beta", lo) - t), abs(measure("beta", up) - t))
        lo, up = beta_bound_copulas(0.0)
        verbatim = all(
            (s.breaks, s.perm, s.flips) == expected for s, expected in zip((lo, up), BETA_T0_SHUFFLES)
        )
        return worst <= 1e-12 and verbatim, f"max |beta - t| {worst:.2e}, t=0 shuffles verbatim: {verbatim}"

    return _timed(4, "beta of the bounds", run)


# (kind, side of the interval, threshold, constant, direction in which the constant holds)
THRESHOLDS = (
    (MeasureKind.RHO, 0, -0.5, -1.0, -1),
    (MeasureKind.RHO, 1, 0.5, 1.0, 1),
    (MeasureKind.TAU, 0, 0.0, -1.0, -1),
    (MeasureKind.TAU, 1, 0.0, 1.0, 1),
    (MeasureKind.FOOTRULE, 1, 0.25, 1.0, 1),
    (MeasureKind.GAMMA, 0, -0.5, -1.0, -1),
    (MeasureKind.GAMMA, 1, 0.5, 1.0, 1),
)


def criterion_5(tol: float = 1e-9) -> Check:
    def run():
        worst = 0.0
        for kind in ENVELOPE_KINDS:
            for t in t_grid():
                worst = max(
                    worst,
                    abs(beta_interval(kind, envelope(kind, "upper", t))[0] - t),
                    abs(beta_interval(kind, envelope(kind, "lower", t))[1] - t),
                )
        bad = []
        eps = 1e-6
        for kind, side, x0, const, direction in THRESHOLDS:
            at = beta_interval(kind, x0)[side]
            past = beta_interval(kind, x0 + direction * eps)[side]
            before = beta_interval(kind, x0 - direction * eps)[side]
            if not (at == const and past == const and before != const):
                bad.append(f"{kind.value}@{x0:g}")
        ok = worst <= tol and not bad
        return ok, f"max round-trip err {worst:.2e}; threshold faults: {bad or 'none'}"

    return _timed(5, "inverse round trips", run)


def axiom_family():
    fam = {"M": M, "W": W, "Pi": PI}
    for t in (-0.9, 0.0, 0.9):
        lo, up = beta_bound_copulas(t)
        fam[f"lower({t:g})"] = lo
        fam[f"upper({t:g})"] = up
    return fam


def _below(c, d) -> bool:
    uu, vv = np.meshgrid(GRID, GRID, indexing="ij")
    return bool(np.all(c(uu, vv) <= d(uu, vv) + 1e-15))


def criterion_6(tol: float = 1e-9) -> Check:
    def run():
        fam = axiom_family()
        failures = []
        for kind in MeasureKind:
            for name, c in fam.items():
                for r in axiom_check(kind, c, tol).failures():
                    failures.append(f"{kind.value}/{r.name}/{name}")
        items = list(fam.items())
        sym = surv = mono = 0.0
        for na, a in items:
            for nb, b in items:
                q = concordance_q(a, b)
                sym = max(sym, abs(q - concordance_q(b, a)))
                surv = max(surv, abs(q - concordance_q(survival(a), survival(b))))
                if _below(a, b):
                    for e in (M, PI, W):
                        mono = max(mono, concordance_q(e, a) - concordance_q(e, b))
        q_ok = sym <= tol and surv <= tol and mono <= tol
        if not q_ok:
            failures.append("Q properties")
        shown = ", ".join(failures[:6]) + (" ..." if len(failures) > 6 else "")
        detail = (
            f"Q symmetry {sym:.1e}, survival {surv:.1e}, monotonicity excess {mono:.1e}; "
            f"{len(failures)} axiom failures" + (f": {shown}" if failures else "")
        )
        return not failures, detail

    return _timed(6, "measure axioms and Q properties", run)


def _mc_pairs(seed: int):
    for t in t_grid():
        lo, up = beta_bound_copulas(t)
        for c in (lo, up):
            for d in (PI, c, M, W):
                yield c, d
    for p in random_params(seed):
        for item in Q_ITEMS:
            if item == "d" and not item_d_condition(p):
                continue
            yield q_item_pair(item, p)


def criterion_7(seed: int = 42) -> Check:
    def run():
        start = time.perf_counter()
        n = bad = 0
        worst = 0.0
        for c1, c2 in _mc_pairs(seed):
            est = mc_concordance_q(c1, c2, MC_COUNT, seed)
            exact = concordance_q(c1, c2)
            n += 1
            worst = max(worst, abs(est.mean - exact))
            bad += not est.agrees_with(exact)
        _, up0 = beta_bound_copulas(0.0)
        emp = empirical_measures(sample_support(up0, MC_COUNT, seed))
        target = {MeasureKind.TAU: 0.75, MeasureKind.RHO: 13 / 16, MeasureKind.BETA: 0.0}
        emp_err = max(abs(emp[k] - v) for k, v in target.items())
        elapsed = time.perf_counter() - start
        ok = bad == 0 and emp_err <= 0.01 and elapsed < 60.0
        return ok, (
            f"{n - bad}/{n} Q estimates in band (max dev {worst:.1e}); "
            f"rank stats of upper(0) off by {emp_err:.1e}; {elapsed:.1f}s < 60s"
        )

    return _timed(7, "Monte Carlo oracle", run)


def criterion_8(tol: float = 1e-9) -> Check:
    def run():
        worst_beta = 0.0
        excess = 0.0
        for t in (-0.9, 0.0, 0.9):
            lo, up = beta_bound_copulas(t)
            for alpha in np.arange(1, 10) / 10:
                mix = Mixture(((alpha, lo), (1 - alpha, up)))
                worst_beta = max(worst_beta, abs(measure("beta", mix) - t))
                for kind in ENVELOPE_KINDS:
                    val = measure(kind, mix)
                    excess = max(
                        excess,
                        envelope(kind, "lower", t) - val,
                        val - envelope(kind, "upper", t),
                    )
        ok = worst_beta <= 1e-12 and excess <= tol
        return ok, f"max |beta - t| {worst_beta:.1e}, max envelope excess {excess:.1e}"

    return _timed(8, "mixture sandwich", run)


def copula_validity(c, rng=None) -> tuple[float, bool]:
    """Smallest rectangle volume on the grid and whether margins are exact."""
    uu, vv = np.meshgrid(GRID, GRID, indexing="ij")
    z = c(uu, vv)
    cells = z[1:, 1:] - z[:-1, 1:] - z[1:, :-1] + z[:-1, :-1]
    worst = float(cells.min())
    if rng is not None:
        i1, i2, j1, j2 = (rng.integers(0, 101, 2000) for _ in range(4))
        i1, i2 = np.minimum(i1, i2), np.maximum(i1, i2)
        j1, j2 = np.minimum(j1, j2), np.maximum(j1, j2)
        rect = z[i2, j2] - z[i1, j2] - z[i2, j1] + z[i1, j1]
        worst = min(worst, float(rect.min()))
    margins = (
        np.all(z[:, 0] == 0.0)
        and np.all(z[0, :] == 0.0)
        and np.all(z[:, -1] == GRID)
        and np.all(z[-1, :] == GRID)
    )
    return worst, bool(margins)


def extremal_copulas(seed: int = 42):
    for t in t_grid():
        yield from beta_bound_copulas(t)
    for p in random_params(seed):
        yield lower_bound_copula(p)
        yield upper_bound_copula(p)


def criterion_9(seed: int = 42) -> Check:
    def run():
        rng = np.random.default_rng(seed)
        worst = np.inf
        bad_margins = n = 0
        for c in extremal_copulas(seed):
            vol, margins = copula_validity(c, rng)
            worst = min(worst, vol)
            bad_margins += not margins
            n += 1
        ok = worst >= -1e-12 and bad_margins == 0
        return ok, f"{n} copulas, min rectangle volume {worst:.1e}, margin faults {bad_margins}"

    return _timed(9, "copula validity", run)


T0_ROWS = {
    MeasureKind.RHO: "0,-0.8125,0.8125",
    MeasureKind.TAU: "0,-0.75,0.75",
    MeasureKind.FOOTRULE: "0,-0.3125,0.625",
    MeasureKind.GAMMA: "0,-0.625,0.625",
}


def criterion_10(outdir: str | Path | None = None) -> Check:
    def run():
        problems = []
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(outdir or tmp)
            for kind in ENVELOPE_KINDS:
                curve = sample_region(kind, 201)
                csv_path = root / f"region_{kind.value}.csv"
                svg_path = root / f"region_{kind.value}.svg"
                csv_path.write_bytes(export_curve(curve, "csv"))
                svg_path.write_bytes(render_svg(curve))
                rows = csv_path.read_text().splitlines()
                if len(rows) != 202 or T0_ROWS[kind] not in rows:
                    problems.append(f"{kind.value} csv")
                if not svg_path.read_text().rstrip().endswith("</svg>"):
                    problems.append(f"{kind.value} svg")
        return not problems, f"CSV + SVG for 4 measures at 201 points; problems: {problems or 'none'}"

    return _timed(10, "figure artifacts", run)


def run_all(tol: float = 1e-9, seed: int = 42) -> list[Check]:
    return [
        criterion_1(tol),
        criterion_2(tol),
        criterion_3(tol, seed),
        criterion_4(),
        criterion_5(tol),
        criterion_6(tol),
        criterion_7(seed),
        criterion_8(tol),
        criterion_9(seed),
        criterion_10(),
    ]
