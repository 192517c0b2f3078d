import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import elastodyne as ed

CONFIGS = Path(os.environ.get("ELASTODYNE_SOURCE_DIR", Path(__file__).resolve().parents[2])) / "configs"


def test_version():
    assert ed.__version__ == "0.1.0"


def test_sbp_identity():
    for n in (9, 13, 21):
        assert ed.sbp_identity_residual(n) < 1e-13


def test_planner_layered():
    layers = ed.load_config(CONFIGS / "layered_full.cfg").layer_plans()
    assert [p.dx for p in layers] == [1.0, 2.0, 3.0, 9.0]
    assert ed.plan_spacing(layers[0].c_min, 25.0, 12.0) == pytest.approx(1.0, rel=1e-2)
    r = ed.cost_ratios(layers, 1080.0, 1080.0, 1.0)
    assert r.spatial_ratio == pytest.approx(3.438, rel=1e-2)
    assert r.total_ratio == pytest.approx(19.1, rel=1e-2)
    assert ed.plan_timestep(layers) == pytest.approx(r.dt_nonuniform)


def test_config_roundtrip():
    c = ed.load_config(CONFIGS / "nonuniform_desk.cfg")
    assert c.layer_count == 3
    assert c.spacings == [1.0, 2.0, 3.0]
    assert c.step_count == math.ceil(0.5 / c.time_step - 1e-9)
    assert ed.config_errors(c.emit()) == []


def test_config_errors():
    errs = ed.config_errors("[domain]\nextent_x = 10\n")
    assert any("[layer]" in e for e in errs)
    with pytest.raises(ValueError):
        ed.load_config(CONFIGS / "does_not_exist.cfg")


def test_verify_passes():
    checks = ed.verify(["1:2"], oracle=False)
    assert checks
    assert all(passed for _, _, _, passed in checks)


def test_run_1d_conserves_energy():
    r = ed.run_1d(21, 1.0, 1.0, 1.0, 0.0, 400,
                  lambda x: math.sin(math.pi * x), lambda x: 0.0)
    e = r["energy"]
    assert isinstance(e, np.ndarray)
    assert len(r["sigma"]) == 21 and len(r["v"]) == 20
    assert np.ptp(e) <= 1e-12 * np.max(np.abs(e))


def test_run_small_config(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(
        "[domain]\nextent_x = 16\nextent_y = 12\n[time]\nc_cfl = 0.7\nsteps = 50\n"
        "[layer]\ndepth = 8\ndx = 1\nmedia = constant\ncp = 800\ncs = 300\nrho = 1600\n"
        "[layer]\ndepth = 16\ndx = 2\nmedia = constant\ncp = 1800\ncs = 600\nrho = 2100\n"
        "[source]\nx = 8\ny = 6\nz = 4\nfc = 100\n"
        "[receiver]\nname = a\nfield = vz\nx = 10\ny = 6\nz = 2.5\n")
    status, _, err = ed.run(cfg, output_dir=str(tmp_path / "out"))
    assert status == 0, err
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "OK"
    assert manifest["steps_done"] == 50
    assert (tmp_path / "out" / "seismogram_a.csv").read_text().count("\n") == 51
