"""CLI surface: records, exit codes, round trips, grid syntax."""

import csv
import io
import json
import math

import pytest

from cutofflab import cli
from cutofflab.cli import OutputRecord, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_moments_sphere2(capsys):
    code, out = run_cli(capsys, "moments", "--space", "sphere", "--dim", "2",
                        "--k-max", "4", "--method", "both")
    assert code == 0
    rec = OutputRecord.from_json(out)
    rows = {r["k"]: r for r in rec.rows}
    assert rows[1]["quadrature"] == pytest.approx(1.0, rel=1e-6)
    assert rows[2]["quadrature"] == pytest.approx(math.pi ** 2 / 3 - 2, rel=1e-6)
    assert rows[1]["spectral"] is None  # below the validity threshold
    assert rows[3]["rel_disagreement"] < 1e-6
    assert rows[4]["rel_disagreement"] < 1e-6


def test_moments_torus_factor(capsys):
    code, out = run_cli(capsys, "moments", "--space", "torus-factor",
                        "--k-max", "1")
    assert code == 0
    rec = OutputRecord.from_json(out)
    assert rec.rows[0]["quadrature"] == pytest.approx(1 / 3, rel=1e-8)


def test_bad_dimension_exit_code(capsys):
    code = main(["moments", "--space", "cp", "--dim", "5", "--k-max", "1"])
    assert code == 2


def test_tail_command(capsys):
    code, out = run_cli(capsys, "tail", "--space", "sphere", "--dim", "2",
                        "--x-grid", "0.5:2.0:4", "--tol", "1e-10")
    assert code == 0
    rec = OutputRecord.from_json(out)
    assert [r["x"] for r in rec.rows] == [0.5, 1.0, 1.5, 2.0]
    assert all(r["ok"] for r in rec.rows)
    assert all(0 <= r["tail"] <= 1 for r in rec.rows)
    assert all(r["truncation_bound"] < 1e-10 for r in rec.rows)


def test_tail_flags_bad_rows_but_succeeds(capsys):
    code, out = run_cli(capsys, "tail", "--space", "sphere", "--dim", "2",
                        "--x-grid", "1e-13:1.0:2")
    assert code == 0
    rec = OutputRecord.from_json(out)
    assert not rec.rows[0]["ok"] and rec.rows[1]["ok"]


def test_tail_all_rows_bad_exits_3(capsys):
    code = main(["tail", "--space", "sphere", "--dim", "2",
                 "--x-grid", "1e-13:1e-12:2"])
    assert code == 3


def test_profile_command(capsys):
    code, out = run_cli(capsys, "profile", "--family", "sphere",
                        "--n-list", "50,100", "--c-grid", "0:1:2")
    assert code == 0
    rec = OutputRecord.from_json(out)
    assert len(rec.rows) == 4
    assert all(r["valid"] for r in rec.rows)


def test_simulate_command(capsys, tmp_path):
    export = tmp_path / "s.csv"
    code, out = run_cli(capsys, "simulate", "--space", "torus-factor",
                        "--paths", "200", "--dt", "1e-3", "--seed", "11",
                        "--export", str(export))
    assert code == 0
    rec = OutputRecord.from_json(out)
    row = rec.rows[0]
    assert row["paths"] == 200
    assert row["analytic_mean"] == pytest.approx(1 / 3)
    assert export.exists()


def test_simulate_bad_config_exit_code(capsys):
    code = main(["simulate", "--space", "torus-factor", "--paths", "50",
                 "--dt", "1e-2"])
    assert code == 4


def test_json_round_trip(capsys):
    _, out = run_cli(capsys, "moments", "--space", "sphere", "--dim", "3",
                     "--k-max", "2")
    rec = OutputRecord.from_json(out)
    assert OutputRecord.from_json(rec.to_json()) == rec


def test_csv_json_numeric_equality(capsys):
    _, jout = run_cli(capsys, "tail", "--space", "sphere", "--dim", "2",
                      "--x-grid", "0.3:1.7:3")
    rec = OutputRecord.from_json(jout)
    text = rec.to_csv()
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(io.StringIO("\n".join(body)))
    for parsed, row in zip(reader, rec.rows):
        assert float(parsed["tail"]) == row["tail"]
        assert float(parsed["x"]) == row["x"]


def test_verify_exit_codes(monkeypatch, capsys):
    from cutofflab.verify import CriterionResult

    def fake(level, workers):
        return [CriterionResult("x", True, 0.0, 1.0, "stub", 0.0)]

    monkeypatch.setattr("cutofflab.verify.run_criteria",
                        lambda level, workers: fake(level, workers))
    assert main(["verify", "--level", "fast"]) == 0

    def fake_fail(level, workers):
        return [CriterionResult("x", False, 2.0, 1.0, "stub", 0.0)]

    monkeypatch.setattr("cutofflab.verify.run_criteria",
                        lambda level, workers: fake_fail(level, workers))
    assert main(["verify", "--level", "fast"]) == 1


def test_verify_detects_perturbed_coefficients(monkeypatch, capsys):
    # the documented test hook: inflating every tail coefficient by 1% must
    # break the tail-integral identity and flip the exit code
    monkeypatch.setenv("CUTOFFLAB_PERTURB_CK", "1.01")
    code = main(["verify", "--level", "fast"])
    capsys.readouterr()
    assert code == 1
    from cutofflab import spectral
    assert spectral._COEFF_SCALE == 1.0  # hook restored


def test_output_flags_accepted_after_subcommand(tmp_path, capsys):
    out = tmp_path / "rec.json"
    code = main(["moments", "--space", "sphere", "--dim", "3", "--k-max", "1",
                 "--out", str(out), "--format", "json"])
    capsys.readouterr()
    assert code == 0
    rec = OutputRecord.from_json(out.read_text())
    assert rec.rows[0]["quadrature"] == pytest.approx(0.75, rel=1e-8)


def test_negative_grid_values(capsys):
    code, outtext = run_cli(capsys, "profile", "--family", "sphere",
                            "--n-list", "50", "--c-grid", "-1:1:3")
    assert code == 0
    rec = OutputRecord.from_json(outtext)
    assert [r["c"] for r in rec.rows] == [-1.0, 0.0, 1.0]


def test_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("CUTOFFLAB_TOL", "1e-6")
    _, out = run_cli(capsys, "tail", "--space", "sphere", "--dim", "2",
                     "--x-grid", "1.0:1.0:1")
    rec = OutputRecord.from_json(out)
    assert rec.params["tol"] == 1e-6
