"""Verification harness: determinism, schemas, emission, CLI wiring."""

import csv
import json
import math

import numpy as np
import pytest

from psikern import (
    ExperimentConfig,
    classical_lebesgue_check,
    sharpness_probe,
    verify_lebesgue,
)
from psikern.cli import main as cli_main

SMALL = ExperimentConfig(
    psi_specs=({"kind": "geometric", "q": 0.5},),
    n_list=(4,),
    n_functions=3,
    x_grid=32,
)


def test_config_round_trip_and_unknown_keys():
    c = ExperimentConfig.from_dict(SMALL.to_dict())
    assert c == SMALL
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"grid": 10})
    # lists from JSON become tuples
    c2 = ExperimentConfig.from_dict({"n_list": [2, 3]})
    assert c2.n_list == (2, 3)


def test_verify_small_run_passes():
    rows, summary = verify_lebesgue(SMALL)
    assert len(rows) == 3 * 32
    assert summary["fail"] == 0 and summary["pass"] == len(rows)
    assert 0.0 < summary["worst_ratio"] <= 1.0
    for r in rows:
        assert r.lhs <= r.rhs_thm1 + 1e-9 * (1.0 + r.lhs + r.rhs_thm1)
        assert r.rhs_thm1 <= r.rhs_thm1_modified + 1e-15
        assert r.thm2_lo <= r.thm2_hi
        assert r.dual_lo is None and r.ok_dual_in_thm2 is None
        assert r.psi == "geometric(q=0.5)"


def test_verify_is_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    verify_lebesgue(SMALL, out_csv=str(p1))
    verify_lebesgue(SMALL, out_csv=str(p2))
    b1, b2 = p1.read_bytes(), p2.read_bytes()
    assert b1 == b2 and len(b1) > 1000


def test_csv_and_json_emission(tmp_path):
    csv_path = tmp_path / "rows.csv"
    json_path = tmp_path / "summary.json"
    rows, summary = verify_lebesgue(SMALL, out_csv=str(csv_path),
                                    out_json=str(json_path))
    with open(csv_path, newline="") as fh:
        got = list(csv.reader(fh))
    assert got[0] == ["psi", "beta", "n", "phi_index", "x", "lhs", "E",
                      "rhs_thm1", "rhs_thm1_modified", "thm2_lo", "thm2_hi",
                      "dual_lo", "dual_hi", "ok_thm1", "ok_dual_in_thm2"]
    assert len(got) == len(rows) + 1
    first = got[1]
    assert first[13] == "1" and first[14] == ""    # bool and absent dual
    assert float(first[5]) == rows[0].lhs          # repr round trips
    assert json.loads(json_path.read_text()) == summary


def test_duality_columns_when_enabled():
    cfg = ExperimentConfig(
        psi_specs=({"kind": "geometric", "q": 0.5},),
        n_list=(4,), n_functions=1, x_grid=8, with_duality=True)
    rows, _ = verify_lebesgue(cfg)
    for r in rows:
        assert r.dual_lo is not None and r.dual_hi is not None
        assert r.dual_lo <= r.dual_hi
        assert r.ok_dual_in_thm2 is True
        assert r.thm2_lo - 1e-9 <= r.dual_lo and r.dual_hi <= r.thm2_hi + 1e-9


def test_plot_script_contents(tmp_path):
    csv_path = tmp_path / "rows.csv"
    gp_path = tmp_path / "plot.gp"
    verify_lebesgue(SMALL, out_csv=str(csv_path), plot_script=str(gp_path))
    text = gp_path.read_text()
    assert "plot " in text and str(csv_path) in text
    assert "set datafile separator ','" in text


def test_sharpness_rows_approach_one():
    cfg = ExperimentConfig(
        psi_specs=({"kind": "geometric", "q": math.exp(-1.0)},),
        n_list=(4, 8, 16))
    rows, summary = sharpness_probe(cfg)
    assert [r.n for r in rows] == [4, 8, 16]
    gaps = [r.gap_to_one for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]
    for r in rows:
        assert r.env_lo <= r.ratio <= r.env_hi
        assert r.x == pytest.approx(math.pi / (2 * r.n - 1))
        assert r.limit_ratio > 0.0
    assert summary["fail"] == 0


def test_classical_check_small_run():
    rows, summary = classical_lebesgue_check(SMALL)
    assert summary["fail"] == 0
    assert len(rows) == 3 * 32
    for r in rows:
        assert r.lhs <= r.rhs_classical + 1e-9 * (1.0 + r.lhs + r.rhs_classical)
        assert r.E_uniform >= 0.0
        assert math.isnan(r.ratio_thm1_classical) or r.ratio_thm1_classical >= 0.0


def test_function_corpus_spreads_over_cells():
    cfg = ExperimentConfig(
        psi_specs=({"kind": "geometric", "q": 0.5},
                   {"kind": "neumann", "q": 0.5}),
        n_list=(4, 8), n_functions=8, x_grid=4)
    rows, _ = verify_lebesgue(cfg)
    seen = {(r.psi, r.n, r.phi_index) for r in rows}
    # 8 functions round robin over 4 cells: 2 functions per cell
    assert len(seen) == 8
    per_cell: dict = {}
    for p, n, i in seen:
        per_cell.setdefault((p, n), set()).add(i)
    assert all(len(v) == 2 for v in per_cell.values())


def test_cli_psi_info_and_bestapprox(capsys):
    rc = cli_main(["psi-info", "--psi", '{"kind": "geometric", "q": 0.5}',
                   "--n", "4,8"])
    assert rc == 0
    info = json.loads(capsys.readouterr().out)
    assert info["label"] == "geometric(q=0.5)"
    assert info["n=4"]["tail_sum"] == pytest.approx(0.125, rel=1e-14)
    assert info["n=4"]["class_flags"]["is_dq"] is True
    assert info["n=8"]["limit_ratio"] == pytest.approx(0.125, rel=1e-12)

    rc = cli_main(["bestapprox", "--metric", "l1", "--order", "2",
                   "--grid", "128", "--fn", "cos2"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["metric"] == "L1"
    assert out["value"] == pytest.approx(3.996786721940289, rel=1e-6)


def test_cli_verify_and_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(SMALL.to_dict()))
    out_csv = tmp_path / "rows.csv"
    rc = cli_main(["verify-lebesgue", "--config", str(cfg_path),
                   "--out-csv", str(out_csv)])
    capsys.readouterr()
    assert rc == 0
    assert out_csv.exists()
    # domain errors exit 2
    rc = cli_main(["psi-info", "--psi", '{"kind": "no_such_family"}',
                   "--n", "4"])
    capsys.readouterr()
    assert rc == 2


def test_cli_lebesgue_and_bounds(capsys):
    rc = cli_main(["lebesgue", "--order", "6", "--grid", "64"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "max" in out and "node_value" in out

    rc = cli_main(["bounds", "--psi", '{"kind": "geometric", "q": 0.5}',
                   "--order", "5", "--beta", "0.0", "--E", "1.0",
                   "--x-grid", "16"])
    assert rc == 0
    assert "rhs_thm1" in capsys.readouterr().out
