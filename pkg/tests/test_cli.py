from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from boxcert import ValidationError
from boxcert.cli import explain_text, main, parse_query, run_query

GOLDEN = Path(__file__).resolve().parent.parent / "src" / "boxcert" / "golden"


def write_query(tmp_path: Path, body: dict, name: str = "query.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return path


def confirm_query() -> dict:
    return {
        "op": "existsValue",
        "maxFuel": 4,
        "n": 1,
        "classifier": {"kind": "hyperplane", "w": [1], "b": "-1/2"},
        "region": {"type": "box", "sides": [[0, 1]]},
    }


class TestVerifyCommand:
    def test_committed_answer_exits_zero(self, tmp_path, capsys):
        query = write_query(tmp_path, confirm_query())
        code = main(["verify", str(query)])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["verdict"] == "confirmed"
        assert report["witnesses"]

    def test_fuel_starved_run_exits_two(self, tmp_path, capsys):
        body = confirm_query()
        body["region"] = {"type": "box", "sides": [["5/8", "3/4"]]}
        query = write_query(tmp_path, body)
        code = main(["verify", str(query), "--max-fuel", "0"])
        report = json.loads(capsys.readouterr().out)
        assert code == 2
        assert report["verdict"] == "unknown"
        assert report["diagnostics"]["fuelExhausted"] is True

    def test_parse_error_exits_one(self, tmp_path, capsys):
        body = confirm_query()
        body["classifier"]["b"] = "1/0"
        query = write_query(tmp_path, body)
        code = main(["verify", str(query)])
        err = capsys.readouterr().err
        assert code == 1
        assert "error" in err

    def test_reports_are_byte_identical_across_runs(self, tmp_path, capsys):
        query = write_query(tmp_path, confirm_query())
        main(["verify", str(query)])
        first = capsys.readouterr().out
        main(["verify", str(query)])
        second = capsys.readouterr().out
        assert first == second

    def test_timing_flag_adds_wall_time(self, tmp_path, capsys):
        query = write_query(tmp_path, confirm_query())
        main(["verify", str(query), "--timing"])
        report = json.loads(capsys.readouterr().out)
        assert "wallTimeSeconds" in report
        main(["verify", str(query)])
        report = json.loads(capsys.readouterr().out)
        assert "wallTimeSeconds" not in report

    def test_out_writes_the_report_to_a_file(self, tmp_path, capsys):
        query = write_query(tmp_path, confirm_query())
        out_path = tmp_path / "report.json"
        code = main(["verify", str(query), "--out", str(out_path)])
        assert code == 0
        assert capsys.readouterr().out == ""
        report = json.loads(out_path.read_text())
        assert report["verdict"] == "confirmed"

    def test_text_format_is_line_oriented(self, tmp_path, capsys):
        query = write_query(tmp_path, confirm_query())
        main(["verify", str(query), "--format", "text"])
        out = capsys.readouterr().out
        assert out.startswith("diagnostics:")
        assert "verdict:" in out

    def test_operands_load_from_sibling_files(self, tmp_path, capsys):
        (tmp_path / "clf.json").write_text(
            json.dumps({"kind": "hyperplane", "w": [1], "b": "-1/2"})
        )
        body = confirm_query()
        body["classifier"] = "clf.json"
        query = write_query(tmp_path, body)
        code = main(["verify", str(query)])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["verdict"] == "confirmed"

    def test_unknown_op_is_a_validation_error(self, tmp_path):
        body = confirm_query()
        body["op"] = "frobnicate"
        query = write_query(tmp_path, body)
        with pytest.raises(ValidationError):
            parse_query(query)
        assert main(["verify", str(query)]) == 1

    def test_missing_field_is_a_parse_error(self, tmp_path):
        body = confirm_query()
        del body["region"]
        query = write_query(tmp_path, body)
        assert main(["verify", str(query)]) == 1


class TestTwoBotReports:
    def test_bot_at_budget_exits_two(self, tmp_path, capsys):
        body = {
            "op": "locallyConstant",
            "maxFuel": 3,
            "classifier": {"kind": "hyperplane", "w": [1, 0], "b": 0},
            "point": [1, 0],
            "radius": 1,
        }
        query = write_query(tmp_path, body)
        code = main(["verify", str(query)])
        report = json.loads(capsys.readouterr().out)
        assert code == 2
        assert report["verdict"] == "bot"
        assert len(report["perFuelTrace"]) == 4

    def test_committed_zero_exits_zero(self, tmp_path, capsys):
        body = {
            "op": "locallyConstant",
            "maxFuel": 6,
            "classifier": {"kind": "hyperplane", "w": [1, 0], "b": 0},
            "point": [1, 0],
            "radius": 2,
        }
        query = write_query(tmp_path, body)
        code = main(["verify", str(query)])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["verdict"] == "0"
        assert len(report["witnesses"]) == 2


class TestExplain:
    def test_quantifier_structure_is_described(self, tmp_path, capsys):
        body = {
            "op": "locallyConstant",
            "maxFuel": 2,
            "classifier": {"kind": "hyperplane", "w": [1, 0], "b": 0},
            "point": [1, 0],
            "radius": 1,
        }
        query = write_query(tmp_path, body)
        assert main(["explain", str(query)]) == 0
        out = capsys.readouterr().out
        assert "closed ball" in out
        assert "open ball" in out

    def test_optimal_radius_names_both_streams(self):
        text = explain_text("optimalRadius")
        assert "lower" in text and "upper" in text

    def test_unknown_op_rejected(self):
        with pytest.raises(ValidationError):
            explain_text("frobnicate")


class TestSelftest:
    def test_corpus_matches_and_is_deterministic(self):
        cmd = [sys.executable, "-m", "boxcert", "selftest"]
        first = subprocess.run(cmd, capture_output=True, text=True)
        second = subprocess.run(cmd, capture_output=True, text=True)
        assert first.returncode == 0
        assert second.returncode == 0
        assert first.stdout == second.stdout
        assert "10/10 cases matched" in first.stdout


class TestManifestContract:
    def test_every_case_honors_its_expected_exit_code(self):
        manifest = json.loads((GOLDEN / "manifest.json").read_text())
        assert len(manifest["cases"]) == 10
        for case in manifest["cases"]:
            result = subprocess.run(
                [sys.executable, "-m", "boxcert", "verify", str(GOLDEN / case["query"])],
                capture_output=True,
                text=True,
            )
            assert result.returncode == case["expectExit"], case["name"]
            if case["expectExit"] != 1:
                report = json.loads(result.stdout)
                assert report["verdict"] == case["expectVerdict"], case["name"]

    def test_run_query_matches_the_subprocess_surface(self, tmp_path):
        spec = parse_query(GOLDEN / "cases" / "exists-hyperplane.json")
        report = run_query(spec)
        assert report.verdict == "confirmed"
        assert report.exit_code == 0
