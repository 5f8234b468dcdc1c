"""Tests for the command-line interface and the text reports."""

import json

import pytest
from click.testing import CliRunner

from dehn_volume import __version__
from dehn_volume.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, cli
from dehn_volume.dilog import psi_difference
from dehn_volume.pipeline import CheckResult
from dehn_volume.report import format_complex, render_checks, render_history
from dehn_volume.triangulation.census import FIGURE_EIGHT_REFERENCE, FIGURE_EIGHT_VOLUME

FAST = ["--k-range", "-3:-1"]


def _invoke(args, db_url="sqlite:///:memory:"):
    return CliRunner().invoke(cli, ["--db-url", db_url, *args])


def _json(result):
    return json.loads(result.stdout)


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------


class TestVolume:
    def test_reference_row_json(self):
        args = ["volume", "--fill", "1/5", "--reference-uv", "--link-exterior", "--json"]
        result = _invoke(args + FAST)
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["selected"]["uv"] == [[4, 0]]
        assert data["selected"]["k"] == [-2]
        assert data["passed"] is True
        psi = complex(*data["selected"]["psi"])
        assert psi_difference(psi, FIGURE_EIGHT_REFERENCE[(1, 5)].psi) < 1e-7

    def test_text_report(self):
        result = _invoke(["volume", "--fill", "inf", "--precision", "6"])
        assert result.exit_code == EXIT_OK, result.output
        assert "Manifold:   fig8" in result.stdout
        assert f"Volume:     {FIGURE_EIGHT_VOLUME:.6f}" in result.stdout
        assert "(mod pi^2/2)" in result.stdout
        assert "Checks:     all passed" in result.stdout

    def test_perturbed_run_exits_with_failure(self):
        result = _invoke(["volume", "--fill", "1/5", "--debug-perturb-a", "0.5"] + FAST)
        assert result.exit_code == EXIT_FAILURE
        assert "FAILED:" in result.stdout

    def test_non_primitive_filling(self):
        result = _invoke(["volume", "--fill", "2/4"])
        assert result.exit_code == EXIT_CONFIG
        assert "not primitive" in result.output

    def test_missing_config_file(self, tmp_path):
        result = _invoke(["volume", "--config", str(tmp_path / "missing.json")])
        assert result.exit_code == EXIT_CONFIG
        assert "Run config not found" in result.output

    def test_config_error_as_json(self):
        result = _invoke(["volume", "--fill", "1/7", "--reference-uv", "--json"])
        assert result.exit_code == EXIT_CONFIG
        payload = json.loads(result.output.strip().splitlines()[-1])
        assert payload["error"]["type"] == "ConfigError"
        assert "No reference" in payload["error"]["message"]

    def test_config_file_with_flag_override(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"filling": "2/5", "k_range": "-3:-1", "uv": "2,0"}))
        args = ["volume", "--config", str(path), "--fill", "1/5", "--uv", "4,0", "--json"]
        result = _invoke(args)
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["input"]["filling"] == "1/5"
        assert data["selected"]["uv"] == [[4, 0]]


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


class TestCheck:
    def test_all_checks_pass(self):
        result = _invoke(["check", "--fill", "inf", "--json"])
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["passed"] is True
        assert set(data["checks"]) >= {"ptolemy", "edge", "cusp", "dehn_filling"}

    def test_perturbation_fails(self):
        result = _invoke(["check", "--fill", "1/5", "--debug-perturb-a", "0.5"] + FAST)
        assert result.exit_code == EXIT_FAILURE
        assert "FAIL" in result.stdout
        assert result.stdout.startswith("check")


# ---------------------------------------------------------------------------
# apoly
# ---------------------------------------------------------------------------


class TestApoly:
    def test_figure_eight(self):
        result = CliRunner().invoke(cli, ["apoly", "--at-meridian", "1"])
        assert result.exit_code == EXIT_OK, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "L - L*M^2 - M^4 - 2*L*M^4 - L^2*M^4 - L*M^6 + L*M^8"
        assert lines[1] == "M = 1: -(L + 1)^2"

    def test_json(self):
        result = CliRunner().invoke(cli, ["apoly", "--census", "4_1", "--json"])
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["manifold"] == "fig8"
        assert "at_meridian" not in data

    def test_unknown_census(self):
        result = CliRunner().invoke(cli, ["apoly", "--census", "m999"])
        assert result.exit_code == EXIT_CONFIG


# ---------------------------------------------------------------------------
# table and history
# ---------------------------------------------------------------------------


class TestTableAndHistory:
    def test_table_saves_rows(self, tmp_path):
        db_url = f"sqlite:///{tmp_path / 'runs.db'}"
        args = ["table", "--fill", "1/5", "--fill", "2/5", "--reference-uv", "--link-exterior"]
        args.append("--save")
        result = _invoke(args + FAST, db_url)
        assert result.exit_code == EXIT_OK, result.output
        assert result.stdout.splitlines()[0].startswith("filling")
        assert "1/5" in result.stdout and "2/5" in result.stdout

        history = _invoke(["history", "--json"], db_url)
        assert history.exit_code == EXIT_OK
        runs = _json(history)
        assert {run["filling"] for run in runs} == {"1/5", "2/5"}
        assert {tuple(run["uv"]) for run in runs} == {(4, 0), (2, 0)}

        deleted = _invoke(["history", "--delete", str(runs[0]["id"])], db_url)
        assert deleted.stdout.strip() == f"Deleted run {runs[0]['id']}"
        assert len(_json(_invoke(["history", "--json"], db_url))) == 1

    def test_empty_history(self, tmp_path):
        result = _invoke(["history"], f"sqlite:///{tmp_path / 'empty.db'}")
        assert result.exit_code == EXIT_OK
        assert result.stdout.strip() == "No stored runs."

    def test_delete_missing_run(self, tmp_path):
        result = _invoke(["history", "--delete", "99"], f"sqlite:///{tmp_path / 'empty.db'}")
        assert result.exit_code == EXIT_CONFIG
        assert "No stored run with id 99" in result.output


def test_version():
    result = CliRunner().invoke(cli, ["--version"])
    assert __version__ in result.output


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class TestReports:
    def test_format_complex(self):
        assert format_complex(1.5 - 0.25j, 3) == "1.500 - 0.250 i"
        assert format_complex(-1 + 0j, 1) == "-1.0 + 0.0 i"

    def test_check_table(self):
        text = render_checks([CheckResult("edge", 1e-12, 1e-9), CheckResult("cusp", 1.0, 1e-9)])
        lines = text.splitlines()
        assert len(lines) == 3
        assert lines[1].startswith("edge") and lines[1].endswith("ok")
        assert lines[2].endswith("FAIL")

    @pytest.mark.parametrize("runs", [[], ()])
    def test_empty_history(self, runs):
        assert render_history(runs) == "No stored runs.\n"
