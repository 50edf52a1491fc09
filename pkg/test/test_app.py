import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app import cli, run
from orchestrator.router import PIPELINES, dispatch
from tools.errors import InputError
from tools.settings import get_settings


@pytest.fixture(autouse=True)
def coarse_scan(monkeypatch):
    monkeypatch.setenv("HESSFIELD_SCAN_RESOLUTION", "96")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def invoke(runner, *args):
    result = runner.invoke(cli, [str(a) for a in args])
    payload = json.loads(result.stdout) if result.stdout.strip() else None
    return result, payload


def test_classify_C3(runner, exp):
    result, payload = invoke(runner, "classify", "--field", exp / "rho2_plus_rho4.json", "--point", "0,0")
    assert result.exit_code == 0
    assert (payload["class"], payload["k"], payload["mu2"]) == ("C3", 1, "4/1")


def test_classify_violation_exits_2(runner, tmp_path):
    field = tmp_path / "u.json"
    field.write_text(json.dumps({"terms": [[2, 0, "1"], [0, 2, "1"], [2, 1, "1"]]}))
    result, payload = invoke(runner, "classify", "--field", field, "--point", "0,0")
    assert result.exit_code == 2
    assert payload["class"] == "violation"


def test_index_harmonic_cubic(runner, exp):
    result, payload = invoke(runner, "index", "--field", exp / "rho2_plus_rez3.json", "--center", "0,0",
                             "--radius", "0.1")
    assert result.exit_code == 0
    assert payload["index"] == "-1/2"
    assert payload["branch_index"] == {"L1": "-1/2", "L2": "-1/2"}


def test_boundary_index(runner, exp):
    result, payload = invoke(runner, "index", "--field", exp / "rho2_plus_rez3.json", "--center", "0,0",
                             "--radius", "0.1", "--boundary", "--tangent", "1,0")
    assert result.exit_code == 0
    assert payload["index"] == "-1/4"
    assert payload["inward_normal"] == [-0.0, 1.0]
    assert "convention" in payload


def test_index_on_degenerate_circle_exits_1(runner, exp):
    result, payload = invoke(runner, "index", "--field", exp / "torsion.json", "--center", "0,0",
                             "--radius", "0.1")
    assert result.exit_code == 1
    assert payload is None
    assert "DegenerateOnCircle" in result.stderr


def test_index_pipeline_evaluates_each_radius_once(exp, monkeypatch):
    import tools.linefield as linefield

    calls = []
    real = linefield.winding_raw
    monkeypatch.setattr(linefield, "winding_raw", lambda *a, **kw: calls.append(a[2]) or real(*a, **kw))
    code, payload = dispatch("index", field=str(exp / "rho2_plus_rez3.json"), center="0,0", radius=0.1)
    assert code == 0 and payload["index"] == "-1/2"
    assert calls == [0.1, 0.05, 0.025]


def test_boundary_index_needs_tangent(runner, exp):
    result = runner.invoke(cli, ["index", "--field", str(exp / "rho2_plus_rez3.json"), "--center", "0,0",
                                 "--radius", "0.1", "--boundary"])
    assert result.exit_code == 1
    assert "--tangent" in result.stderr


def test_audit_torsion(runner, exp):
    result, payload = invoke(runner, "audit", "--field", exp / "torsion.json", "--domain", "disk:1", "--c", "1/2")
    assert result.exit_code == 0
    assert payload["conclusion"]["tag"] == "radial_disk"
    assert payload["pde_consistent"] and payload["boundary_ok"]


def test_audit_shifted_radial(runner, exp):
    result, payload = invoke(runner, "audit", "--field", exp / "shifted_radial.json", "--domain", "disk:1,1,0",
                             "--c", "1")
    assert result.exit_code == 0
    assert payload["conclusion"]["center"] == ["1/1", "0/1"]


def test_audit_boundary_violation(runner, exp):
    result, payload = invoke(runner, "audit", "--field", exp / "torsion.json", "--domain", "disk:1", "--c", "1")
    assert result.exit_code == 2
    assert payload["conclusion"]["error"] == "BoundaryViolation"
    assert payload["conclusion"]["report"]["passed"] is False


def test_annulus_report_and_dump(runner, exp, tmp_path):
    report, dump = tmp_path / "report.json", tmp_path / "field.csv"
    result, payload = invoke(runner, "annulus", "--curve", exp / "circle_r2.json", "--report", report,
                             "--dump-field", dump)
    assert result.exit_code == 0
    assert all(check["passed"] for check in payload["checks"].values())
    assert payload["conclusion"] == {"tag": "hypothesis_not_met", "which": "simply-connected"}
    assert payload["ph"]["index_sum"] == "0/1"
    assert json.loads(report.read_text()) == payload
    frame = pd.read_csv(dump)
    assert list(frame.columns) == ["x", "y", "u", "ux", "uy", "uxx", "uxy", "uyy", "discriminant"]
    assert len(frame) == 128 * 17


def test_annulus_on_ellipse(exp, settings):
    from pipelines.annulus_pipeline import run_annulus_pipeline

    code, payload = run_annulus_pipeline(str(exp / "ellipse.json"), settings=settings)
    assert code == 0
    assert all(check["passed"] for check in payload["checks"].values())
    assert payload["tangency"]["passed"]
    assert payload["ph"]["verdict"] == "consistent"
    assert payload["conclusion"] == {"tag": "hypothesis_not_met", "which": "simply-connected"}


def test_annulus_too_curved(runner, tmp_path):
    curve = tmp_path / "c.json"
    curve.write_text(json.dumps({"x_cos": ["0", "1"], "y_sin": ["0", "1"]}))
    result = runner.invoke(cli, ["annulus", "--curve", str(curve)])
    assert result.exit_code == 1
    assert result.stderr.startswith("error:")


def test_bump(runner, exp):
    result, payload = invoke(runner, "bump", "--disks", exp / "disks.json", "--domain", "disk:4")
    assert result.exit_code == 0
    assert payload["passed"] and payload["margin"] == pytest.approx(1e-3)


def test_identities_are_reproducible(runner):
    args = ["identities", "--max-n", "2", "--max-m", "4", "--trials", "2", "--seed", "7"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["all_true"]


@pytest.mark.parametrize("family, params, c2", [
    ("linear", "t=3/5,c0=0", "16/25"),
    ("quadratic", "t1=1,t2=-1,c0=0", "5/1"),
])
def test_ode(runner, family, params, c2):
    result, payload = invoke(runner, "ode", "--family", family, "--params", params)
    assert result.exit_code == 0
    assert payload["c_squared"] == c2
    assert ("nodal" in payload) == (family == "linear")


@pytest.mark.parametrize("params", ["t=2,c0=0", "c0=0", "t=1/2,s=1", "t"])
def test_ode_bad_params(runner, params):
    result = runner.invoke(cli, ["ode", "--family", "linear", "--params", params])
    assert result.exit_code == 1


def test_missing_file(runner, tmp_path):
    result = runner.invoke(cli, ["classify", "--field", str(tmp_path / "nope.json"), "--point", "0,0"])
    assert result.exit_code == 1
    assert "cannot read" in result.stderr


def test_output_option(runner, exp, tmp_path):
    out = tmp_path / "out.json"
    result = runner.invoke(cli, ["--output", str(out), "classify", "--field", str(exp / "rho2_plus_rho4.json"),
                                 "--point", "0,0"])
    assert result.exit_code == 0
    assert result.stdout == ""
    assert json.loads(out.read_text())["class"] == "C3"


def test_run_returns_codes(exp, capsys):
    assert run(["classify", "--field", str(exp / "rho2_plus_rho4.json"), "--point", "0,0"]) == 0
    assert json.loads(capsys.readouterr().out)["k"] == 1
    assert run(["classify", "--point", "0,0"]) == 1
    assert run(["nonsense"]) == 1
    assert run(["audit", "--field", str(exp / "torsion.json"), "--domain", "disk:1", "--c", "1"]) == 2


def test_router():
    assert set(PIPELINES) == {"classify", "index", "audit", "annulus", "bump", "identities", "ode"}
    with pytest.raises(InputError):
        dispatch("plot")
