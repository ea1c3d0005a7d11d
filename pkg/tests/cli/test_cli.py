from __future__ import annotations

import json
import sys

import pytest

from folres import __version__
from folres.cli.main import main
from folres.io import load_report, report_json

NON_MONOMIAL = "vars x y! z;\ntheta y*d/dx + x*d/dz;\nideal x, z;\n"


def run_cli(monkeypatch, *args: str) -> None:
    monkeypatch.setattr(sys, "argv", ["folres", *args])
    main()


def exit_status(monkeypatch, *args: str) -> int:
    with pytest.raises(SystemExit) as exc_info:
        run_cli(monkeypatch, *args)
    return exc_info.value.code


@pytest.fixture(autouse=True)
def _no_config_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


@pytest.mark.integration
class TestCommands:
    def test_invariants_json(self, tangency_case_file, monkeypatch, capsys):
        run_cli(monkeypatch, "invariants", "--input", str(tangency_case_file), "--format", "json")

        payload = json.loads(capsys.readouterr().out)
        assert payload["command"] == "invariants"
        assert payload["invariants"]["nu"] == 2
        assert payload["invariants"]["type"] == 1
        assert payload["invariants"]["unit_at"] == 2
        assert payload["problem"]["variables"] == "x! y z"

    def test_invariants_text(self, tangency_case_file, monkeypatch, capsys):
        run_cli(monkeypatch, "invariants", "--input", str(tangency_case_file))

        out = capsys.readouterr().out
        assert "residual: nu = 2, type 1" in out
        assert "nu = 2, type 1 (before factoring)" in out

    def test_invariants_of_the_ideal_and_of_its_residual(self, write_problem, monkeypatch, capsys):
        path = write_problem("vars x! y;\ntheta d/dy;\nideal x^2*y + x^3;\n")

        run_cli(monkeypatch, "invariants", "--input", str(path), "--format", "json")

        record = json.loads(capsys.readouterr().out)["invariants"]
        assert record["monomial"] == [2, 0]
        assert (record["nu"], record["type"]) == (1, 1)
        assert (record["ideal_nu"], record["ideal_type"]) == (1, 2)

    def test_admissible(self, tangency_case_file, monkeypatch, capsys):
        run_cli(monkeypatch, "admissible", "--input", str(tangency_case_file), "--center", "x,z", "--format", "json")

        record = json.loads(capsys.readouterr().out)["admissibility"]
        assert record["center"] == ["x", "z"]
        assert record["admissible"] is True
        assert record["k0"] == 1

    def test_center_is_required(self, tangency_case_file, monkeypatch):
        assert exit_status(monkeypatch, "admissible", "--input", str(tangency_case_file)) == 1

    def test_blowup(self, write_problem, monkeypatch, capsys):
        path = write_problem("vars x! y z;\ntheta d/dy, d/dz;\nideal y^2 + x*z^3 + x^4;\ncenter x,z;\n")
        run_cli(monkeypatch, "blowup", "--input", str(path), "--format", "json")

        payload = json.loads(capsys.readouterr().out)
        assert len(payload["nodes"]) == 3
        assert {e["chart_variable"] for e in payload["edges"]} == {"x", "z"}
        assert all(n["invariant"] is not None for n in payload["nodes"])

    def test_principal_ideal_resolves_to_the_root(self, write_problem, monkeypatch, capsys):
        path = write_problem("vars x! y;\ntheta d/dy;\nideal 1;\n")
        run_cli(monkeypatch, "resolve", "--input", str(path), "--format", "json")

        payload = json.loads(capsys.readouterr().out)
        assert len(payload["nodes"]) == 1
        assert payload["verification"]["is_valid"] is True

    def test_resolve_then_verify(self, tangency_case_file, tmp_path, monkeypatch, capsys):
        report_path = tmp_path / "resolved.json"
        run_cli(monkeypatch, "resolve", "--input", str(tangency_case_file), "--output", str(report_path))
        capsys.readouterr()

        assert report_json(load_report(report_path)) == report_path.read_text(encoding="utf-8")
        run_cli(monkeypatch, "verify", "--input", str(report_path), "--format", "json")
        payload = json.loads(capsys.readouterr().out)
        assert payload["command"] == "verify"
        assert payload["verification"]["is_valid"] is True

    def test_single_step(self, tangency_case_file, monkeypatch, capsys):
        run_cli(monkeypatch, "resolve", "--step", "2", "--input", str(tangency_case_file), "--format", "json")

        payload = json.loads(capsys.readouterr().out)
        assert payload["verification"] is None
        assert payload["counters"]["steps"]["step2"] == 1

    def test_command_flag(self, tangency_case_file, monkeypatch, capsys):
        run_cli(monkeypatch, "--command", "invariants", "--input", str(tangency_case_file), "--format", "json")

        assert json.loads(capsys.readouterr().out)["invariants"]["nu"] == 2

    def test_options_reach_the_report(self, tangency_case_file, monkeypatch, capsys):
        run_cli(
            monkeypatch, "invariants", "--input", str(tangency_case_file), "--membership", "jet:6", "--format", "json"
        )

        assert json.loads(capsys.readouterr().out)["options"]["membership"] == "jet:6"


@pytest.mark.integration
class TestExitCodes:
    def test_tampered_report(self, tangency_case_file, tmp_path, monkeypatch, capsys):
        report_path = tmp_path / "resolved.json"
        run_cli(monkeypatch, "resolve", "--input", str(tangency_case_file), "--output", str(report_path))
        payload = json.loads(report_path.read_text(encoding="utf-8"))
        parents = {e["parent"] for e in payload["edges"]}
        leaf = next(n for n in payload["nodes"] if n["id"] not in parents)
        leaf["ideal"] = ["x + y"]
        report_path.write_text(json.dumps(payload), encoding="utf-8")

        assert exit_status(monkeypatch, "verify", "--input", str(report_path)) == 4

    def test_non_monomial_distribution(self, write_problem, monkeypatch):
        path = write_problem(NON_MONOMIAL)

        assert exit_status(monkeypatch, "resolve", "--input", str(path)) == 2

    def test_stage_budget(self, tangency_case_file, monkeypatch):
        assert exit_status(monkeypatch, "resolve", "--input", str(tangency_case_file), "--max-stages", "1") == 3

    def test_missing_input(self, tmp_path, monkeypatch):
        assert exit_status(monkeypatch, "invariants", "--input", str(tmp_path / "missing.folres")) == 1

    def test_parse_error(self, write_problem, monkeypatch, caplog):
        path = write_problem("vars x y;\ntheta d/dx;\nideal x + w;\n")

        assert exit_status(monkeypatch, "invariants", "--input", str(path)) == 1
        assert "parse.unknown_variable" in caplog.text
        assert "line 3" in caplog.text

    def test_bad_config_file(self, tangency_case_file, tmp_path, monkeypatch, caplog):
        config = tmp_path / "folres.yaml"
        config.write_text("jet_order: 0\n", encoding="utf-8")

        assert exit_status(monkeypatch, "invariants", "--input", str(tangency_case_file)) == 1
        assert "config.invalid_value" in caplog.text


@pytest.mark.unit
class TestArguments:
    def test_conflicting_command(self, tangency_case_file, monkeypatch):
        assert exit_status(monkeypatch, "--command", "resolve", "invariants", "--input", str(tangency_case_file)) == 2

    def test_command_is_required(self, tangency_case_file, monkeypatch):
        assert exit_status(monkeypatch, "--input", str(tangency_case_file)) == 2

    def test_input_is_required(self, monkeypatch):
        assert exit_status(monkeypatch, "invariants") == 2

    def test_version(self, monkeypatch, capsys):
        assert exit_status(monkeypatch, "--version") == 0
        assert __version__ in capsys.readouterr().out
