import csv
import json

import pytest
from pytest import approx, raises
from typer.testing import CliRunner

from cli import app, parse_group, run
from errors import InputError
from repos.configs import config_from_dict

runner = CliRunner()

N = 256
F2 = {"family": "free", "rank": 2}
Z2 = {"family": "free_abelian", "rank": 2}
SINE = {"generators": {"a": {"kind": "sine", "theta": 0.1, "a": 0.1},
                       "b": {"kind": "sine", "theta": 0.37, "a": 0.1}}}


def _config(tmp_path, data, name="run.json"):
    path = tmp_path / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _invoke(tmp_path, command, data, *extra):
    path = _config(tmp_path, data)
    out = tmp_path / "out"
    result = runner.invoke(app, [command, "--config", str(path), "--out", str(out), *extra])
    return result, out


def _report(out, command):
    return json.loads((out / f"{command}.json").read_text(encoding="utf-8"))


def test_certify_writes_report(tmp_path):
    result, out = _invoke(tmp_path, "certify", {"group": F2, "grid": N, "action": SINE})
    assert result.exit_code == 0, result.output
    data = _report(out, "certify")
    assert data["command"] == "certify"
    assert data["result"]["verdict"] == "CertifiedNotAmenable"
    assert data["provenance"]["N"] == N
    assert "tau_diffeo" in data["provenance"]["tolerances"]
    assert "CertifiedNotAmenable" in result.output


def test_certify_with_estimate_is_policy_error(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "lambda1": {"kind": "dirichlet", "radius": 2}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 4
    assert not (out / "certify.json").exists()


def test_certify_sweep_csv(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "params": {"sweep": {"amplitudes": [0.0, 0.1, 0.2]}}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 0, result.output
    with open(out / "certify_sweep.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["a", "avg_h_sq", "margin", "verdict"]
    assert len(rows) == 4
    assert _report(out, "certify")["result"]["sweep_csv"] == "certify_sweep.csv"


def test_certify_derivative_route(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "params": {"route": "derivative"}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 0, result.output
    assert _report(out, "certify")["result"]["route"] == "generator_derivative"


def test_unknown_route(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "params": {"route": "otra"}}
    result, _ = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 2


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"group\": ", encoding="utf-8")
    result = runner.invoke(app, ["certify", "--config", str(path), "--out", str(tmp_path)])
    assert result.exit_code == 2


@pytest.mark.parametrize("data", [
    {"grid": N},
    {"group": F2, "grid": 100},
    {"group": F2, "grid": N, "colour": "rojo"},
    {"group": F2, "grid": N, "action": {"generators": {"c": {"kind": "rotation", "theta": 0.1}}}},
    {"group": F2, "grid": N, "action": {"generators": {"a": {"kind": "sine", "theta": 0.1, "a": 1.5},
                                                       "b": {"kind": "rotation", "theta": 0.2}}}},
])
def test_invalid_configs_exit_2(tmp_path, data):
    result, _ = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 2


def test_reports_are_deterministic(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "seed": 7}
    first, out1 = _invoke(tmp_path / "one", "certify", data)
    second, out2 = _invoke(tmp_path / "two", "certify", data)
    assert first.exit_code == second.exit_code == 0
    assert (out1 / "certify.json").read_bytes() == (out2 / "certify.json").read_bytes()


def test_lambda1_exact_from_flags(tmp_path):
    result = runner.invoke(app, ["lambda1", "--group", "F2", "--exact", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    data = _report(tmp_path, "lambda1")["result"]
    assert data["kind"] == "exact_closed_form"
    assert data["value"] == approx(1 - 3**0.5 / 2)


def test_lambda1_dirichlet_from_flags(tmp_path):
    result = runner.invoke(app, ["lambda1", "--group", "F2", "--radius", "2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert _report(tmp_path, "lambda1")["result"]["kind"] == "estimate_from_above"


def test_lambda1_needs_group(tmp_path):
    result = runner.invoke(app, ["lambda1", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_lambda1_series_csv(tmp_path):
    data = {"group": F2, "params": {"radii": [1, 2, 3]}}
    result, out = _invoke(tmp_path, "lambda1", data)
    assert result.exit_code == 0, result.output
    lines = (out / "lambda1_series.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "R,value"
    assert len(lines) == 4


def test_ball_limit_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("AMENCERT_MAX_BALL", "10")
    result, _ = _invoke(tmp_path, "lambda1", {"group": F2, "lambda1": {"kind": "dirichlet", "radius": 3}})
    assert result.exit_code == 2


def test_eigensolver_failure_exit_3(tmp_path):
    data = {"group": F2, "lambda1": {"kind": "dirichlet", "radius": 7}, "tolerances": {"eigen_maxiter": 1}}
    result, _ = _invoke(tmp_path, "lambda1", data)
    assert result.exit_code == 3


def test_hellinger_between_measures(tmp_path):
    half = [2.0] * (N // 2) + [0.0] * (N // 2)
    data = {"group": F2, "grid": N, "params": {"mu1": {"kind": "lebesgue"},
                                               "mu2": {"kind": "density", "values": half}}}
    result, out = _invoke(tmp_path, "hellinger", data)
    assert result.exit_code == 0, result.output
    report = _report(out, "hellinger")["result"]
    assert report["hellinger"] == approx(0.54120, abs=1e-5)
    assert report["total_variation"] == approx(0.5)


def test_hellinger_needs_something(tmp_path):
    result, _ = _invoke(tmp_path, "hellinger", {"group": F2, "grid": N})
    assert result.exit_code == 2


def test_evidence_series(tmp_path):
    data = {"group": F2, "grid": N, "radius": 2, "action": SINE}
    result, out = _invoke(tmp_path, "evidence", data)
    assert result.exit_code == 0, result.output
    assert _report(out, "evidence")["result"]["radii"] == [0, 1, 2]
    assert (out / "evidence_series.csv").read_text(encoding="utf-8").startswith("R,sup_integral,inf_integral")


def test_near_isometry_default_comparison(tmp_path):
    data = {"group": F2, "grid": N, "radius": 2, "action": SINE, "params": {"arc": [0.0, 0.5]}}
    result, out = _invoke(tmp_path, "near-isometry", data)
    assert result.exit_code == 0, result.output
    assert _report(out, "near-isometry")["result"]["criterion_met"]


def test_near_isometry_bad_arc(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "params": {"arc": [0.0]}}
    result, _ = _invoke(tmp_path, "near-isometry", data)
    assert result.exit_code == 2


def test_witness_folner(tmp_path):
    data = {"group": Z2, "grid": 16, "action": {"power_of": {"kind": "rotation", "theta": 0.1}},
            "params": {"witness": {"kind": "folner", "n": 4}, "epsilon": 0.5}}
    result, out = _invoke(tmp_path, "witness", data)
    assert result.exit_code == 0, result.output
    report = _report(out, "witness")["result"]
    assert report["exact_overlap_defect"] == {"numerator": 1, "denominator": 4, "value": 0.25}
    assert report["c_within_epsilon"]
    assert (out / "witness_xi.json").exists()


def test_replay_from_saved_witness(tmp_path):
    data = {"group": Z2, "grid": 16, "action": {"power_of": {"kind": "rotation", "theta": 0.1}},
            "params": {"witness": {"kind": "folner", "n": 3}}}
    result, out = _invoke(tmp_path, "witness", data)
    assert result.exit_code == 0, result.output
    data["radius"] = 4
    data["params"] = {"witness": {"kind": "file", "path": str(out / "witness_xi.json")}}
    result, out = _invoke(tmp_path, "replay", data)
    assert result.exit_code == 0, result.output
    flags = _report(out, "replay")["result"]["flags"]
    assert flags["chain_holds"] and flags["contrapositive_holds"]


def test_replay_refused_witness(tmp_path):
    data = {"group": F2, "grid": N, "radius": 1, "action": SINE,
            "params": {"witness": {"kind": "entries", "entries": {"e": -1.0}}}}
    result, out = _invoke(tmp_path, "replay", data)
    assert result.exit_code == 0, result.output
    assert _report(out, "replay")["result"]["refused"]


def test_replay_needs_certified_lambda1(tmp_path):
    data = {"group": F2, "grid": N, "radius": 1, "action": SINE, "lambda1": {"kind": "dirichlet", "radius": 2}}
    result, _ = _invoke(tmp_path, "replay", data)
    assert result.exit_code == 4


def test_run_unknown_command(tmp_path):
    assert run(config_from_dict({"group": F2}), "nada", tmp_path) == 2


def test_parse_group():
    assert parse_group("F3") == {"family": "free", "rank": 3}
    assert parse_group("z^2") == {"family": "free_abelian", "rank": 2}
    with raises(InputError):
        parse_group("SL2")


def test_minimal_rotation_config(tmp_path):
    data = {"group": F2, "grid": N, "action": {"generators": {"a": {"kind": "rotation", "theta": 0.1},
                                                               "b": {"kind": "rotation", "theta": 0.37}}}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 0, result.output
    report = _report(out, "certify")
    assert report["result"]["verdict"] == "CertifiedNotAmenable"
    assert report["provenance"]["config"] == data


def test_lower_bound_on_abelian_group_is_policy_error(tmp_path):
    data = {"group": Z2, "grid": N, "action": {"power_of": {"kind": "rotation", "theta": 0.1}},
            "lambda1": {"kind": "lower_bound", "value": 0.1, "source": "usuario"}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 4
    assert not (out / "certify.json").exists()


def test_lower_bound_within_exact_value_certifies(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE,
            "lambda1": {"kind": "lower_bound", "value": 0.1, "source": "usuario"}}
    result, out = _invoke(tmp_path, "certify", data)
    assert result.exit_code == 0, result.output
    assert _report(out, "certify")["result"]["verdict"] == "CertifiedNotAmenable"


def test_non_numeric_arc_exit_2(tmp_path):
    data = {"group": F2, "grid": N, "action": SINE, "params": {"arc": ["x", 0.5]}}
    result, _ = _invoke(tmp_path, "near-isometry", data)
    assert result.exit_code == 2


def test_non_numeric_witness_entries_exit_2(tmp_path):
    data = {"group": F2, "grid": 16, "radius": 1, "action": SINE,
            "params": {"witness": {"kind": "entries", "entries": {"e": ["q"] + [1.0] * 15}}}}
    result, _ = _invoke(tmp_path, "replay", data)
    assert result.exit_code == 2
