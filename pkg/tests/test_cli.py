import io
import json
import subprocess
import sys

import pytest

from betabounds.bounds import beta_bound_copulas
from betabounds.cli import fmt, run
from betabounds.copula import copula_to_spec


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def spec_files(tmp_path):
    low, up = beta_bound_copulas(0.0)
    paths = {}
    for name, spec in [
        ("B_lower_t0", copula_to_spec(low)),
        ("B_upper_t0", copula_to_spec(up)),
        ("Pi", {"type": "Pi"}),
        ("bad", {"type": "Pi", "oops": 1}),
    ]:
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(spec))
    return paths


def test_fmt():
    assert fmt(-0.8125) == "-0.8125"
    assert fmt(-0.0) == "0"
    assert fmt(1e-17) == "0"
    assert fmt(13 / 16 - 1e-15) == "0.8125"


def test_measure_rho(spec_files):
    assert call("measure", "--kind", "rho", "--copula", str(spec_files["B_lower_t0"])) == (0, "-0.8125\n", "")


def test_measure_beta_pi(spec_files):
    assert call("measure", "--kind", "beta", "--copula", str(spec_files["Pi"]))[1] == "0\n"


def test_eval(spec_files):
    code, out, _ = call("eval", "--copula", str(spec_files["B_lower_t0"]), "--u", "0.6", "--v", "0.6")
    assert (code, out) == (0, "0.25\n")


def test_bounds_tau():
    code, out, _ = call("bounds", "--t", "0", "--measure", "tau")
    assert code == 0
    assert out.splitlines()[-1] == "tau -0.75 0.75"
    assert '"perm": [4, 2, 3, 1]' in out.splitlines()[0]


def test_bounds_json_envelope():
    code, out, _ = call("--json", "bounds", "--t", "0")
    payload = json.loads(out)
    assert payload["ok"] and payload["error"] is None and payload["command"] == "bounds"
    assert payload["result"]["envelopes"]["tau"] == [-0.75, 0.75]
    assert payload["result"]["upper"]["shuffle"]["perm"] == [1, 3, 2, 4]
    # --json also works after the subcommand
    assert call("bounds", "--t", "0", "--json")[1] == out


@pytest.mark.parametrize("fmt_", ["csv", "json", "svg"])
def test_region(tmp_path, fmt_):
    out_path = tmp_path / "sub" / f"r.{fmt_}"
    code, _, _ = call("region", "--measure", "tau", "--resolution", "3", "--format", fmt_, "--out", str(out_path))
    assert code == 0
    text = out_path.read_text()
    if fmt_ == "csv":
        assert "0,-0.75,0.75" in text.splitlines()
    elif fmt_ == "json":
        assert json.loads(text)["resolution"] == 3
    else:
        assert text.rstrip().endswith("</svg>")


def test_sample_deterministic(spec_files):
    a = call("sample", "--copula", str(spec_files["B_lower_t0"]), "--count", "5", "--seed", "3")
    b = call("sample", "--copula", str(spec_files["B_lower_t0"]), "--count", "5", "--seed", "3")
    assert a == b
    lines = a[1].splitlines()
    assert lines[0] == "u,v" and len(lines) == 6


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["measure", "--kind", "kappa", "--copula", "x.json"],
        ["eval", "--copula", "x.json", "--u", "2", "--v", "0.5"],
        ["bounds", "--t", "1.5"],
        ["region", "--measure", "rho", "--resolution", "1", "--format", "csv", "--out", "x.csv"],
        ["measure", "--kind", "rho", "--copula", "does-not-exist.json"],
        ["verify", "--tolerance", "0"],
    ],
)
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2
    assert out == "" and err


def test_bad_spec_json_envelope(spec_files):
    code, out, _ = call("--json", "measure", "--kind", "rho", "--copula", str(spec_files["bad"]))
    payload = json.loads(out)
    assert code == 2 and not payload["ok"] and "oops" in payload["error"]


def test_module_entry_point(spec_files):
    proc = subprocess.run(
        [sys.executable, "-m", "betabounds", "measure", "--kind", "gamma", "--copula", str(spec_files["B_lower_t0"])],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "-0.625\n"


def test_verify_exit_codes(monkeypatch):
    from betabounds import cli
    from betabounds.verify import Check

    good = [Check(1, "a", True, "ok"), Check(2, "b", True, "ok")]
    monkeypatch.setattr(cli, "run_all", lambda tol, seed: good)
    code, out, _ = call("verify")
    assert code == 0 and out.splitlines()[-1] == "2/2 passed"
    monkeypatch.setattr(cli, "run_all", lambda tol, seed: good + [Check(3, "c", False, "bad")])
    code, out, _ = call("--json", "verify", "--seed", "1")
    assert code == 1 and json.loads(out)["result"]["passed"] is False
