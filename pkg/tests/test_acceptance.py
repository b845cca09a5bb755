"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line straight to the terminal
(bypassing capture) and then asserts.
"""

import pytest

from betabounds import verify
from betabounds.bounds import ENVELOPE_KINDS
from betabounds.cli import run


def report(capsys, check):
    with capsys.disabled():
        print("\n" + check.line())
    assert check.passed, check.detail


def test_criterion_1_rho_envelopes(capsys):
    report(capsys, verify.criterion_1(1e-9))


def test_criterion_2_tau_footrule_gamma_envelopes(capsys):
    report(capsys, verify.criterion_2(1e-9))


def test_criterion_3_closed_forms_vs_integration(capsys):
    report(capsys, verify.criterion_3(1e-9, seed=42))


def test_criterion_4_beta_bounds(capsys):
    report(capsys, verify.criterion_4())


def test_criterion_5_inverse_round_trips(capsys):
    report(capsys, verify.criterion_5(1e-9))


def test_criterion_6_axioms(capsys):
    # footrule takes values in [-1/2, 1], so its reflection sign flip cannot hold
    # on M and W; this criterion is expected to fail for that reason
    report(capsys, verify.criterion_6(1e-9))


def test_criterion_7_monte_carlo(capsys):
    report(capsys, verify.criterion_7(seed=42))


def test_criterion_8_mixture_sandwich(capsys):
    report(capsys, verify.criterion_8(1e-9))


def test_criterion_9_copula_validity(capsys):
    report(capsys, verify.criterion_9(seed=42))


def test_criterion_10_figure_artifacts(capsys, tmp_path):
    report(capsys, verify.criterion_10(tmp_path))


@pytest.mark.parametrize("kind", [k.value for k in ENVELOPE_KINDS])
def test_criterion_10_through_cli(tmp_path, kind):
    csv_path = tmp_path / f"{kind}.csv"
    svg_path = tmp_path / f"{kind}.svg"
    base = ["region", "--measure", kind, "--resolution", "201", "--out"]
    assert run(base + [str(csv_path), "--format", "csv"]) == 0
    assert run(base + [str(svg_path), "--format", "svg"]) == 0
    rows = csv_path.read_text().splitlines()
    assert len(rows) == 202
    assert verify.T0_ROWS[kind] in rows
    assert svg_path.read_text().rstrip().endswith("</svg>")
