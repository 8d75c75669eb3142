import csv
import io
import json
import math

import pytest

from casimir_plates import regsum
from casimir_plates.cli import main
from casimir_plates.units import SI


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0] == "# schema_version=1"
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


class TestForce:
    def test_human_output(self, capsys):
        code, out, _ = run_cli(capsys, "force", "--a", "1", "--lambda", "1")
        assert code == 0
        assert "force_per_area = -0.0808486" in out
        assert "attract" in out

    def test_json_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "force", "--a", "1", "--lambda", "0.1",
                               "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        row = doc["row"]
        assert row["force_per_area"] == regsum.force_closed_form(
            1.0, regsum.Regulator(0.1))
        parts = regsum.asymptotic_parts(1.0)
        assert row["finite_part"] == parts.finite_part
        assert row["remainder"] == pytest.approx(
            row["force_per_area"] - row["divergent_part"] - row["finite_part"])

    def test_si_units(self, capsys):
        code, out, _ = run_cli(capsys, "force", "--a", "1e-6", "--lambda",
                               "3e-8", "--units", "si", "--json")
        assert code == 0
        row = json.loads(out)["row"]
        assert row["finite_part"] == pytest.approx(
            regsum.casimir_closed_form(1e-6, SI), rel=1e-14)

    def test_numeric_route(self, capsys):
        code, out, _ = run_cli(capsys, "force", "--a", "1", "--lambda", "0.2",
                               "--route", "numeric_sum", "--json")
        assert code == 0
        row = json.loads(out)["row"]
        closed = regsum.force_closed_form(1.0, regsum.Regulator(0.2))
        assert row["force_per_area"] == pytest.approx(closed, rel=1e-8)

    def test_precision_loss_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "force", "--a", "1", "--lambda", "1e-10")
        assert code == 2
        assert "numerical failure" in err

    def test_bad_route_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["force", "--a", "1", "--lambda", "1", "--route", "magic"])
        assert info.value.code == 2


class TestSweep:
    def test_csv_schema_and_cardinality(self, capsys):
        code, out, err = run_cli(capsys, "sweep", "--a", "0.5,1",
                                 "--lambda", "0.1,0.2,0.5",
                                 "--routes", "closed_form,series")
        assert code == 0
        assert err == ""
        lines = out.splitlines()
        assert lines[1] == ("a,lambda,route,force_per_area,divergent_part,"
                            "finite_part,remainder,error_estimate")
        rows = parse_csv(out)
        assert len(rows) == 2 * 3 * 2
        # deterministic nested order: a, then lambda, then route
        assert [r["route"] for r in rows[:2]] == ["closed_form", "series"]
        assert [float(r["a"]) for r in rows] == [0.5] * 6 + [1.0] * 6

    def test_values_round_trip(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--a", "1", "--lambda", "0.1",
                            "--routes", "closed_form")
        row = parse_csv(out)[0]
        assert float(row["force_per_area"]) == regsum.force_closed_form(
            1.0, regsum.Regulator(0.1))

    def test_byte_determinism(self, capsys):
        args = ("sweep", "--a", "0.5,1", "--lambda", "0.05,0.1",
                "--routes", "closed_form,numeric_sum,series")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_json_document(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--a", "1", "--lambda",
                               "0.1,0.2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert len(doc["rows"]) == 2
        assert set(doc["rows"][0]) == {"a", "lambda", "route",
                                       "force_per_area", "divergent_part",
                                       "finite_part", "remainder",
                                       "error_estimate"}

    def test_failed_cell_keeps_row_and_exits_2(self, capsys):
        code, out, err = run_cli(capsys, "sweep", "--a", "1",
                                 "--lambda", "1e-10,0.1",
                                 "--routes", "closed_form")
        assert code == 2
        assert "significant digits" in err
        rows = parse_csv(out)
        assert len(rows) == 2
        assert rows[0]["force_per_area"] == ""
        assert rows[1]["force_per_area"] != ""


class TestExtract:
    def test_default_grid(self, capsys):
        code, out, _ = run_cli(capsys, "extract", "--a", "1", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["finite_part_rel_error"] < 1e-4
        assert doc["casimir_closed_form"] == pytest.approx(
            math.pi**2 / 240.0, rel=1e-15)
        assert doc["exponents"] == [-4.0, 0.0, 1.0, 2.0]

    def test_clustered_grid_exits_1(self, capsys):
        grid = ",".join(str((0.3 + i * 1e-6) / math.pi) for i in range(5))
        code, _, err = run_cli(capsys, "extract", "--a", "1",
                               "--lambda-grid", grid)
        assert code == 1
        assert "fit failed" in err

    def test_out_of_window_grid_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "extract", "--a", "1",
                               "--lambda-grid", "0.01,0.05,0.1,0.3")
        assert code == 2
        assert "window" in err


class TestModes:
    def test_table_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "modes", "--n-max", "2", "--a", "0.7",
                               "--L", "2")
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 8
        from casimir_plates.modes import CavityGeometry, ModeIndex
        from casimir_plates.stress import sigma_zz_mode
        from casimir_plates.units import NATURAL
        want = sigma_zz_mode(ModeIndex(2, 1, 2),
                             CavityGeometry(a=0.7, L=2.0), NATURAL)
        got = next(r for r in rows if r["n_x"] == "2" and r["n_y"] == "1"
                   and r["n_z"] == "2")
        assert float(got["sigma_zz"]) == want.sigma_zz
        assert float(got["kappa"]) == want.kappa


class TestVerifyCommand:
    def test_fault_injection_fails_oracle_check(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--inject-fault")
        assert code == 1
        failing = [line for line in out.splitlines() if line.startswith("FAIL")]
        assert len(failing) == 1
        assert "sigma_oracle_agreement" in failing[0]

    def test_json_shape(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert {"name", "residual", "bound", "passed", "detail"} == set(
            doc["checks"][0])


class TestConfigPrecedence:
    def test_config_file_sets_sweep_grid(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "casimir.cfg"
        cfg.write_text("sweep_a = 2.0\nsweep_lambda = 0.1\n"
                       "sweep_routes = closed_form\n# comment\n")
        monkeypatch.delenv("CASIMIR_SWEEP_A", raising=False)
        _, out, _ = run_cli(capsys, "sweep", "--config", str(cfg))
        rows = parse_csv(out)
        assert [float(r["a"]) for r in rows] == [2.0]

    def test_env_overrides_config(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "casimir.cfg"
        cfg.write_text("sweep_a = 2.0\nsweep_lambda = 0.1\n"
                       "sweep_routes = closed_form\n")
        monkeypatch.setenv("CASIMIR_SWEEP_A", "3.0")
        _, out, _ = run_cli(capsys, "sweep", "--config", str(cfg))
        rows = parse_csv(out)
        assert [float(r["a"]) for r in rows] == [3.0]

    def test_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("CASIMIR_SWEEP_A", "3.0")
        monkeypatch.setenv("CASIMIR_SWEEP_LAMBDA", "0.1")
        monkeypatch.setenv("CASIMIR_SWEEP_ROUTES", "closed_form")
        _, out, _ = run_cli(capsys, "sweep", "--a", "4.0")
        rows = parse_csv(out)
        assert [float(r["a"]) for r in rows] == [4.0]

    def test_config_env_var_names_file(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "alt.cfg"
        cfg.write_text("sweep_a = 1.5\nsweep_lambda = 0.2\n"
                       "sweep_routes = closed_form\n")
        monkeypatch.setenv("CASIMIR_CONFIG", str(cfg))
        _, out, _ = run_cli(capsys, "sweep")
        rows = parse_csv(out)
        assert [float(r["a"]) for r in rows] == [1.5]

    def test_units_env(self, capsys, monkeypatch):
        monkeypatch.setenv("CASIMIR_UNITS", "si")
        _, out, _ = run_cli(capsys, "force", "--a", "1e-6", "--lambda",
                            "3e-8", "--json")
        row = json.loads(out)["row"]
        assert row["finite_part"] == pytest.approx(
            regsum.casimir_closed_form(1e-6, SI), rel=1e-14)

    def test_malformed_config_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("sweep_a\n")
        code, _, err = run_cli(capsys, "sweep", "--config", str(cfg))
        assert code == 2
        assert "key = value" in err
