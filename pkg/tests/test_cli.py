"""CLI tests: output formats, determinism and exit codes."""

import csv
import io
import json
import subprocess
import sys

import pytest

from qcorr import cli


def run_cli(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCompute:
    def test_json_default(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "--c", "0.7,-1,0.7")
        assert code == 0
        body = json.loads(out)
        assert body["eof"] == pytest.approx(0.591857407, abs=1e-9)
        assert body["discord"] == pytest.approx(0.390159695, abs=1e-9)
        assert body["branch"] == "D2"
        assert body["region"]["entanglement_region"] == "tau1"

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "--c", "0.7,-1,0.7", "--format", "csv")
        assert code == 0
        header, row = out.strip().split("\n")
        assert header.startswith("concurrence,eof,discord")
        values = row.split(",")
        assert float(values[0]) == pytest.approx(0.7, abs=1e-9)

    def test_probability_input_all_zero(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "--p", "0.25,0.25,0.25,0.25")
        body = json.loads(out)
        assert code == 0
        assert body["concurrence"] == 0.0
        assert body["discord"] == 0.0

    def test_numeric_matches_analytic(self, capsys):
        code, out, _ = run_cli(capsys, "compute", "--c", "0.7,-1,0.7", "--numeric")
        body = json.loads(out)
        assert code == 0
        assert body["source"] == "numeric"
        assert abs(body["discord"] - 0.390159695) <= 1e-4

    def test_matrix_file(self, capsys, tmp_path):
        matrix = [[[0.25, 0.0] if i == j else [0.0, 0.0] for j in range(4)] for i in range(4)]
        path = tmp_path / "state.json"
        path.write_text(json.dumps(matrix), encoding="utf-8")
        code, out, _ = run_cli(capsys, "compute", "--matrix", str(path))
        assert code == 0
        assert json.loads(out)["mutual_information"] == 0.0

    def test_invalid_state_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "compute", "--c", "1,1,1")
        assert code == 2
        assert "tetrahedron" in err

    def test_invalid_matrix_exit_2(self, capsys, tmp_path):
        matrix = [[[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(4)] for i in range(4)]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(matrix), encoding="utf-8")
        code, _, err = run_cli(capsys, "compute", "--matrix", str(path))
        assert code == 2
        assert "trace" in err

    def test_missing_matrix_file_exit_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["compute", "--matrix", "/nonexistent/state.json"])
        assert info.value.code == 2


class TestClassify:
    def test_boundary_point(self, capsys):
        code, out, _ = run_cli(
            capsys, "classify", "--c", "0.333333333,-0.333333333,-0.333333333"
        )
        body = json.loads(out)
        assert code == 0
        assert body["region"]["entanglement_region"] == "octahedron_boundary"
        assert len(body["region"]["on_branch_boundary"]) == 3

    def test_axis_note(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--c", "0,0,0.5")
        body = json.loads(out)
        assert body["region"]["entanglement_region"] == "separable_octahedron"
        assert body["region"]["discord_branch"] == "D3"
        assert body["zero_discord_axis"] is True

    def test_entangled_point(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--c", "0.9,-0.9,0.9")
        assert json.loads(out)["region"]["entanglement_region"] == "tau1"


class TestSweep:
    def test_frozen_line_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--poly", "c1=u; c2=u-1.7; c3=0.7",
            "--range", "0.7:1", "--samples", "64",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "param,c1,c2,c3,C,E,D,D1,D2,D3,branch,region"
        data_lines = [l for l in lines[1:] if not l.startswith("#")]
        assert len(data_lines) == 64
        trailer = [l for l in lines if l.startswith("#")]
        assert trailer[0] == "# EVENTS"
        assert any("discord_fracture,0.85," in l for l in trailer)
        assert sum("dominance_crossing" in l for l in trailer) == 2

    def test_csv_parses_back(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--poly", "c1=u; c2=-u; c3=2*u-1",
            "--range", "1:0", "--samples", "16",
        )
        assert code == 0
        data = [l for l in out.strip().split("\n") if not l.startswith("#")]
        rows = list(csv.DictReader(io.StringIO("\n".join(data))))
        assert len(rows) == 16
        for row in rows:
            param = float(row["param"])
            assert float(row["c1"]) == pytest.approx(param, abs=1e-9)
            assert float(row["D"]) <= float(row["D1"]) + 1e-9

    def test_line_flag(self, capsys):
        code, out, _ = run_cli(capsys, "sweep", "--line", "0,0,0:0,0,1", "--samples", "8")
        assert code == 0
        assert "param,c1,c2,c3" in out

    def test_byte_identical_reruns(self, capsys):
        args = (
            "sweep", "--poly", "c1=u; c2=-0.7*u; c3=0.7",
            "--range", "-1:0", "--samples", "32", "--nu", "0.005",
        )
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_out_of_tetrahedron_exit_2(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--poly", "c1=u; c2=0; c3=0.5", "--range", "0:1"
        )
        assert code == 2
        assert "parameter" in err

    def test_poly_requires_range(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--poly", "c1=u; c2=0; c3=0")
        assert code == 2


class TestTomo:
    def test_table_and_summary(self, capsys):
        code, out, _ = run_cli(
            capsys, "tomo", "--p", "0.85,0,0,0.15",
            "--counts", "20000", "--seeds", "3", "--no-report",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("seed,fidelity")
        assert len([l for l in lines if not l.startswith("#")]) == 4
        assert any(l.startswith("# mean_fidelity,") for l in lines)
        assert any(l.startswith("# min_fidelity,") for l in lines)

    def test_reports_included_by_default(self, capsys):
        code, out, _ = run_cli(
            capsys, "tomo", "--c", "1,-1,1", "--counts", "1000000", "--seeds", "1"
        )
        assert code == 0
        row = out.strip().split("\n")[1].split(",")
        assert float(row[1]) > 0.998  # fidelity
        assert abs(float(row[4]) - 1.0) <= 0.02  # discord

    def test_byte_identical_reruns(self, capsys):
        args = ("tomo", "--p", "0.85,0,0,0.15", "--counts", "5000", "--seeds", "2")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_seed_flag_changes_counts(self, capsys):
        _, first, _ = run_cli(
            capsys, "tomo", "--p", "0.85,0,0,0.15", "--counts", "1000", "--seeds", "1",
            "--no-report",
        )
        _, second, _ = run_cli(
            capsys, "tomo", "--p", "0.85,0,0,0.15", "--counts", "1000", "--seeds", "1",
            "--seed", "5", "--no-report",
        )
        assert first != second


class TestRegions:
    def test_corner_grid(self, capsys):
        code, out, _ = run_cli(capsys, "regions", "--grid", "2")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "c1,c2,c3,in_tetrahedron,region,branch,C,E,D"
        rows = lines[1:]
        assert len(rows) == 8
        inside = [r for r in rows if r.split(",")[3] == "1"]
        assert len(inside) == 4

    def test_center_separable(self, capsys):
        code, out, _ = run_cli(capsys, "regions", "--grid", "3")
        row = next(
            l for l in out.strip().split("\n")[1:] if l.startswith("0,0,0,")
        )
        assert "separable_octahedron" in row

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "regions", "--grid", "2", "--format", "json")
        assert code == 0
        assert len(json.loads(out)["points"]) == 8


class TestConsoleScript:
    def test_installed_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "qcorr.cli", "compute", "--c", "0,0,0"],
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert result.returncode == 0
        assert json.loads(result.stdout)["discord"] == 0.0
