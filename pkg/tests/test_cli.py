import json

import numpy as np

from kslab.cli import main
from kslab.runio import read_ledger_json, read_norm_csv

SMALL_CFG = """
domain.half_length = 4.0
domain.modes = 16
solver.dt = 0.005
solver.t_final = 0.1
checks.samples = 200
checks.sweep_paths = 3
"""

ZERO_CFG = SMALL_CFG + """
noise.sigma = 0.0
initial.amplitude = 0.0
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def manifest_without_clock(path):
    data = json.loads(path.read_text(encoding="utf-8"))
    data.pop("wall_clock_seconds")
    return data


class TestSimulate:
    def test_zero_run_writes_zero_csv(self, tmp_path):
        cfg = write_cfg(tmp_path, ZERO_CFG)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--seed", "1", "--paths", "1", "--out-dir", str(out)]) == 0
        cols = read_norm_csv(out / "path_0000.csv")
        for name in ("norm_H", "norm_V", "norm_L4", "wa_norm_H", "wa_norm_L4"):
            assert np.all(cols[name] == 0.0)
        assert np.all(cols["bound_H"] >= cols["norm_H"])

    def test_same_seed_byte_identical(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["simulate", "--config", str(cfg), "--seed", "7", "--paths", "2", "--out-dir", str(out)]) == 0
            outs.append(out)
        for fname in ("path_0000.csv", "path_0001.csv", "constants.json"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
        assert manifest_without_clock(outs[0] / "manifest.json") == manifest_without_clock(outs[1] / "manifest.json")

    def test_workers_do_not_change_output(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        serial = tmp_path / "serial"
        parallel = tmp_path / "parallel"
        main(["simulate", "--config", str(cfg), "--seed", "3", "--paths", "2", "--out-dir", str(serial)])
        main(["simulate", "--config", str(cfg), "--seed", "3", "--paths", "2", "--out-dir", str(parallel), "--workers", "2"])
        for fname in ("path_0000.csv", "path_0001.csv"):
            assert (serial / fname).read_bytes() == (parallel / fname).read_bytes()

    def test_manifest_contents(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = tmp_path / "out"
        main(["simulate", "--config", str(cfg), "--seed", "9", "--paths", "1", "--out-dir", str(out)])
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["master_seed"] == 9
        assert manifest["path_count"] == 1
        assert manifest["config"]["domain.modes"] == 16
        assert "path_0000.csv" in manifest["outputs"]
        assert manifest["wall_clock_seconds"] >= 0


class TestVerify:
    def test_default_small_config_passes(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = tmp_path / "verify"
        assert main(["verify", "--config", str(cfg), "--seed", "1", "--out-dir", str(out)]) == 0
        expected = {
            "picard_cross_check",
            "embedding",
            "energy_H",
            "energy_V",
            "G_lipschitz",
            "semigroup_regularity",
            "F_contraction",
            "continuous_dependence",
        }
        written = {p.stem for p in out.glob("*.json")}
        assert expected <= written
        for name in expected:
            payload = json.loads((out / f"{name}.json").read_text())
            assert payload["pass"] is True, name

    def test_invalid_shift_rejected(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG + "domain.shift = 0.1\n")
        assert main(["verify", "--config", str(cfg), "--seed", "1", "--out-dir", str(tmp_path / "v")]) == 2
        assert "domain.shift" in capsys.readouterr().err

    def test_zero_slack_permitted(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG + "checks.slack = 0.0\n")
        code = main(["verify", "--config", str(cfg), "--seed", "1", "--out-dir", str(tmp_path / "v0")])
        assert code in (0, 3)


class TestConverge:
    def test_needs_three_levels(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        assert main(["converge", "--config", str(cfg), "--seed", "1", "--levels", "1", "--out-dir", str(tmp_path / "c")]) == 2
        assert "levels" in capsys.readouterr().err

    def test_deterministic_order_at_least_one(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG + "noise.sigma = 0.0\ninitial.amplitude = 0.5\n")
        out = tmp_path / "conv"
        assert main(["converge", "--config", str(cfg), "--seed", "1", "--levels", "3", "--out-dir", str(out)]) == 0
        payload = json.loads((out / "converge.json").read_text())
        assert payload["fitted_order"] >= 1.0
        lines = (out / "converge.csv").read_text().strip().splitlines()
        assert lines[0] == "dt,error,order"
        assert len(lines) == 4

    def test_stochastic_common_path_order(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = tmp_path / "conv_noise"
        assert main(["converge", "--config", str(cfg), "--seed", "1", "--levels", "3", "--paths", "4", "--out-dir", str(out)]) == 0
        payload = json.loads((out / "converge.json").read_text())
        assert payload["fitted_order"] >= 0.8


class TestConstants:
    def test_ledger_file(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        out = tmp_path / "const"
        assert main(["constants", "--config", str(cfg), "--seed", "1", "--samples", "200", "--out-dir", str(out)]) == 0
        ledger = read_ledger_json(out / "constants.json")
        assert ledger.C2 == 1.0
        assert ledger.K == ledger.C1 * ledger.C2 / 2

    def test_seed_stable(self, tmp_path):
        cfg = write_cfg(tmp_path, SMALL_CFG)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["constants", "--config", str(cfg), "--seed", "4", "--samples", "200", "--out-dir", str(a)])
        main(["constants", "--config", str(cfg), "--seed", "4", "--samples", "200", "--out-dir", str(b)])
        assert (a / "constants.json").read_bytes() == (b / "constants.json").read_bytes()

    def test_single_mode_lower_bound(self, tmp_path):
        from kslab.config import load_config
        from kslab.spectral import l4_norm, norms

        cfg_path = write_cfg(tmp_path, SMALL_CFG)
        out = tmp_path / "const"
        main(["constants", "--config", str(cfg_path), "--seed", "4", "--samples", "200", "--out-dir", str(out)])
        ledger = read_ledger_json(out / "constants.json")
        cfg = load_config(cfg_path, environ={})
        dom = cfg.domain()
        best = 0.0
        for k in range(dom.modes):
            f = np.zeros(dom.modes)
            f[k] = 1.0
            best = max(best, l4_norm(f, dom) / norms(f, dom).hs_half)
        assert ledger.C1 >= best * (1 - 1e-12)
