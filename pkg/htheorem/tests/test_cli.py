import json
import sys

import orjson
import pytest
from typer.testing import CliRunner

from cli import output
from cli.main import app, run
from core.linalg import ComplexMatrix
from services.documents import MatrixDocument
from services.scenarios import build_heat_swap_unitary

runner = CliRunner()


def _write_request(path, unitary, env, split=(2, 2), **extra):
    doc = MatrixDocument.from_matrix(unitary).model_dump(mode="json", exclude_none=True)
    doc["split"] = {"dim_system": split[0], "dim_reservoir": split[1]}
    env_doc = MatrixDocument.from_matrix(env).model_dump(mode="json", exclude_none=True)
    path.write_bytes(orjson.dumps({"unitary": doc, "env": env_doc, **extra}))
    return str(path)


class TestDemon:
    def test_defaults(self):
        result = runner.invoke(app, ["demon", "--format", "json"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.stdout)
        assert payload["heat_extracted"] == pytest.approx(0.693147, abs=1e-6)
        assert payload["passed"] is True
        assert all(payload["verdicts"].values())

    def test_text_report(self):
        result = runner.invoke(app, ["demon"])
        assert result.exit_code == 0
        assert "heat extracted from bath: 0.693147181" in result.stdout
        assert "\x1b[" not in result.stdout

    def test_cold_qubit(self):
        result = runner.invoke(app, ["demon", "--rho-ee", "0", "--format", "json"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["heat_extracted"] == 0.0

    def test_kb_units(self):
        result = runner.invoke(app, ["demon", "--kb-units", "--format", "json"])
        payload = json.loads(result.stdout)
        assert payload["entropy_unit"] == "kB_ln2"
        assert payload["stages"][1]["system_entropy"] == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "args",
        [
            ["--rho-ee", "1.5"],
            ["--temperature", "0"],
            ["--tol", "-1"],
            ["--temperature", "inf"],
            ["--temperature", "nan"],
            ["--rho-ee", "0", "--delta-e-x", "inf"],
            ["--tol", "inf"],
        ],
    )
    def test_bad_parameters_exit_1(self, args):
        result = runner.invoke(app, ["demon", *args])
        assert result.exit_code == 1
        assert "error:" in result.output

    def test_strict_tolerance(self):
        assert runner.invoke(app, ["demon", "--tol", "1e-15"]).exit_code == 0


class TestSwap:
    def test_json(self):
        result = runner.invoke(app, ["swap", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        heating, cooling = payload["unitality"]
        assert heating["is_unital"] is True
        assert cooling["is_unital"] is False
        assert payload["heat_extracted"] is None

    def test_strict_tolerance(self):
        assert runner.invoke(app, ["swap", "--tol", "1e-15"]).exit_code == 0

    @pytest.mark.parametrize("tol", ["inf", "nan", "0"])
    def test_bad_tolerance_exit_1(self, tol):
        result = runner.invoke(app, ["swap", "--tol", tol])
        assert result.exit_code == 1
        assert "error:" in result.output


class TestCheck:
    def test_non_unital_exit_3(self, tmp_path):
        u = build_heat_swap_unitary().swap_roles().matrix
        path = _write_request(tmp_path / "cooling.json", u, ComplexMatrix.diag([1, 0]))
        result = runner.invoke(app, ["check", path, "--format", "json"])
        assert result.exit_code == 3
        payload = json.loads(result.stdout)
        assert payload["is_unital"] is False
        assert payload["direct"]["identity_image"]["entries"][0][0] == [2.0, 0.0]

    def test_unital_exit_0(self, tmp_path):
        u = build_heat_swap_unitary().matrix
        path = _write_request(tmp_path / "heating.json", u, ComplexMatrix.diag([0.5, 0.5]))
        result = runner.invoke(app, ["check", path])
        assert result.exit_code == 0
        assert "verdict: unital" in result.stdout

    def test_request_tolerance_is_used(self, tmp_path):
        u = build_heat_swap_unitary().swap_roles().matrix
        path = _write_request(tmp_path / "loose.json", u, ComplexMatrix.diag([1, 0]), tol=2.0)
        assert runner.invoke(app, ["check", path]).exit_code == 0
        assert runner.invoke(app, ["check", path, "--tol", "1e-9"]).exit_code == 3

    def test_non_unitary_exit_1(self, tmp_path):
        path = _write_request(tmp_path / "broken.json", ComplexMatrix.diag([1, 1, 1, 0]), ComplexMatrix.diag([1, 0]))
        result = runner.invoke(app, ["check", path])
        assert result.exit_code == 1
        assert "unitarity violation" in result.output

    def test_malformed_file_exit_1(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2")
        result = runner.invoke(app, ["check", str(path)])
        assert result.exit_code == 1
        assert "malformed JSON" in result.output

    def test_missing_file_exit_1(self, tmp_path):
        assert runner.invoke(app, ["check", str(tmp_path / "nope.json")]).exit_code == 1


class TestSweep:
    def test_maximally_mixed(self):
        result = runner.invoke(
            app, ["sweep", "--env-mode", "maxmixed", "--trials", "500", "--states-per-channel", "4", "--format", "json"]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.stdout)
        assert payload["unital_count"] == 500
        assert payload["min_entropy_delta_unital"] >= -1e-9

    def test_trivial_reservoir(self):
        result = runner.invoke(app, ["sweep", "--dim-env", "1", "--trials", "100", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["unital_count"] == 100
        assert payload["max_abs_entropy_delta_unital"] <= 1e-9

    def test_reproducible_output(self):
        args = ["sweep", "--seed", "42", "--trials", "1000", "--states-per-channel", "2", "--format", "json"]
        first = runner.invoke(app, args)
        second = runner.invoke(app, args)
        assert first.exit_code == 0
        assert first.stdout == second.stdout

    def test_bad_dimension_exit_1(self):
        result = runner.invoke(app, ["sweep", "--dim-sys", "0"])
        assert result.exit_code == 1

    def test_text_summary(self):
        result = runner.invoke(app, ["sweep", "--trials", "20", "--states-per-channel", "2"])
        assert result.exit_code == 0
        assert result.stdout.startswith("sweep (dim_sys=2, dim_env=2, env_mode=pure, seed=42")


def test_help_lists_commands():
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    for name in ("demon", "swap", "check", "sweep"):
        assert name in result.stdout


class TestRun:
    @pytest.mark.parametrize(
        "argv",
        [
            ["sweep", "--trials", "abc"],
            ["sweep", "--env-mode", "lukewarm"],
            ["demon", "--no-such-option"],
            ["no-such-command"],
        ],
    )
    def test_usage_errors_exit_1_without_traceback(self, monkeypatch, capsys, argv):
        monkeypatch.setattr(sys, "argv", ["htheorem", *argv])
        with pytest.raises(SystemExit) as exc:
            run()
        assert exc.value.code == 1
        err = capsys.readouterr().err
        assert "Error" in err
        assert "Traceback" not in err

    def test_success_exits_0(self, monkeypatch, capsys):
        monkeypatch.setattr(sys, "argv", ["htheorem", "swap", "--format", "json"])
        with pytest.raises(SystemExit) as exc:
            run()
        assert exc.value.code == 0
        assert json.loads(capsys.readouterr().out)["unitality"][0]["is_unital"] is True


class TestStyle:
    def test_no_color_setting_disables_styling(self, monkeypatch):
        monkeypatch.delenv("NO_COLOR", raising=False)
        monkeypatch.setattr(output.settings, "NO_COLOR", "1")
        assert output.style("PASS", True) == "PASS"

    def test_no_color_environment_disables_styling(self, monkeypatch):
        monkeypatch.setattr(output.settings, "NO_COLOR", "")
        monkeypatch.setenv("NO_COLOR", "1")
        assert output.style("FAIL", False) == "FAIL"

    def test_colored_when_enabled(self, monkeypatch):
        monkeypatch.delenv("NO_COLOR", raising=False)
        monkeypatch.setattr(output.settings, "NO_COLOR", "")
        assert output.style("PASS", True) != "PASS"
        assert "PASS" in output.style("PASS", True)
