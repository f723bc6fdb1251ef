"""End-to-end CLI runs on small grids: outputs, schemas, determinism."""
import math
import subprocess

import pytest

from foragedp.cli import main
from foragedp.io import read_csv
from foragedp import phase_boundary

CFG = """
base.budget_n = 8
sweep.epsilon = 0,0.3
sweep.q = 0.6,0.9
sweep.gamma = 1
sweep.objectives = rewardmax,infomax
sweep.n_realizations = 50
sweep.master_seed = 7
dp.grid_points = 301
sweep.output_dir = {out}
"""


def _write_cfg(tmp_path, out_dir, text=CFG):
    path = tmp_path / "run.cfg"
    path.write_text(text.format(out=out_dir))
    return path


class TestSweepCommand:
    def test_writes_both_csvs(self, tmp_path, capsys):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        assert main(["sweep", "--config", str(cfg), "--workers", "1"]) == 0
        printed = capsys.readouterr().out.splitlines()
        assert str(tmp_path / "out" / "sweep.csv") in printed
        assert str(tmp_path / "out" / "differentials.csv") in printed

    def test_sweep_schema_and_row_order(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        main(["sweep", "--config", str(cfg), "--workers", "1"])
        header, rows = read_csv(tmp_path / "out" / "sweep.csv")
        assert header == [
            "objective", "epsilon", "q", "gamma",
            "burst_ratio_mean", "rate_mean", "rate_std", "kappa", "n",
        ]
        assert len(rows) == 8  # 2 objectives x 2 epsilon x 2 q
        key = [(r[0], float(r[1]), float(r[2])) for r in rows]
        assert key == sorted(key, key=lambda t: (t[0] != "rewardmax", t[1], t[2]))
        assert all(r[8] == "50" for r in rows)

    def test_differentials_schema(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        main(["sweep", "--config", str(cfg), "--workers", "1"])
        header, rows = read_csv(tmp_path / "out" / "differentials.csv")
        assert header == ["epsilon", "q", "gamma", "delta_rho", "delta_kappa", "n"]
        assert len(rows) == 4
        for r in rows:
            float(r[3])  # parses, possibly nan
            float(r[4])

    def test_single_objective_skips_differentials(self, tmp_path):
        text = CFG.replace("rewardmax,infomax", "rewardmax")
        cfg = _write_cfg(tmp_path, tmp_path / "out", text)
        assert main(["sweep", "--config", str(cfg), "--workers", "1"]) == 0
        assert not (tmp_path / "out" / "differentials.csv").exists()
        _, rows = read_csv(tmp_path / "out" / "sweep.csv")
        assert len(rows) == 4

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg_a = _write_cfg(tmp_path, tmp_path / "a")
        main(["sweep", "--config", str(cfg_a), "--workers", "1"])
        cfg_b = _write_cfg(tmp_path, tmp_path / "b")
        main(["sweep", "--config", str(cfg_b), "--workers", "1"])
        for name in ("sweep.csv", "differentials.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_worker_count_does_not_change_output(self, tmp_path):
        cfg_a = _write_cfg(tmp_path, tmp_path / "w1")
        main(["sweep", "--config", str(cfg_a), "--workers", "1"])
        cfg_b = _write_cfg(tmp_path, tmp_path / "w2")
        main(["sweep", "--config", str(cfg_b), "--workers", "2"])
        assert (tmp_path / "w1" / "sweep.csv").read_bytes() == (tmp_path / "w2" / "sweep.csv").read_bytes()

    def test_seed_override_changes_results(self, tmp_path):
        cfg_a = _write_cfg(tmp_path, tmp_path / "s7")
        main(["sweep", "--config", str(cfg_a), "--workers", "1"])
        cfg_b = _write_cfg(tmp_path, tmp_path / "s8")
        main(["sweep", "--config", str(cfg_b), "--workers", "1", "--seed", "8"])
        assert (tmp_path / "s7" / "sweep.csv").read_bytes() != (tmp_path / "s8" / "sweep.csv").read_bytes()

    def test_out_override_wins(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "ignored")
        main(["sweep", "--config", str(cfg), "--workers", "1", "--out", str(tmp_path / "chosen")])
        assert (tmp_path / "chosen" / "sweep.csv").exists()
        assert not (tmp_path / "ignored").exists()


class TestOtherCommands:
    def test_align_schema(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        assert main(["align", "--config", str(cfg), "--workers", "1"]) == 0
        header, rows = read_csv(tmp_path / "out" / "alignment.csv")
        assert header == ["epsilon", "q", "gamma", "driver", "alignment_mean", "n"]
        assert len(rows) == 4
        for r in rows:
            assert r[3] == "rewardmax"
            assert 0.0 <= float(r[4]) <= 1.0

    def test_boundary_matches_closed_form(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        assert main(["boundary", "--config", str(cfg)]) == 0
        header, rows = read_csv(tmp_path / "out" / "boundary.csv")
        assert header == ["q", "epsilon"]
        for q_str, e_str in rows:
            assert float(e_str) == phase_boundary(0.75, float(q_str))

    def test_solve_writes_one_table_per_cell(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        assert main(["solve", "--config", str(cfg)]) == 0
        tables = sorted((tmp_path / "out" / "tables").glob("*.csv"))
        assert len(tables) == 8
        header, rows = read_csv(tables[0])
        assert header == ["k", "p_node", "utility", "action"]
        assert len(rows) == 9 * 301
        assert rows[0][3] in ("commit_plus", "commit_minus", "sample")


class TestFailureModes:
    def test_bad_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("sweep.epsilon = 0,0.2\nnonsense.key = 1\n")
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_parameter_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("dp.grid_points = 300\n")  # must be odd
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_file_exits_1(self, tmp_path, capsys):
        assert main(["sweep", "--config", str(tmp_path / "absent.cfg")]) == 1
        assert "error:" in capsys.readouterr().err


class TestConsoleScript:
    def test_installed_entry_point_runs(self, tmp_path):
        cfg = _write_cfg(tmp_path, tmp_path / "out")
        proc = subprocess.run(
            ["foragedp", "boundary", "--config", str(cfg)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "boundary.csv" in proc.stdout
