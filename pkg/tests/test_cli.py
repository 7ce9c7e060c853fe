import csv
import json

import numpy as np
import pytest

from gaugered.cli import main
from gaugered.config import ConfigError, parse_config
from gaugered.gauge import curvature
from gaugered.io import read_snapshot, write_snapshot
from gaugered.lattice import FormField, LatticeChart
from gaugered.lie import SU2
from gaugered.samples import SmoothForm, random_form

WAVE = """\
chart.sizes = 12,4,4,16
chart.signature = -+++
init.kind = plane_wave
init.k = 6.283185307179586,0,0,6.283185307179586
init.eps = 0,1,0,0
"""


def run(tmp_path, command, text, *extra):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text(text)
    out = tmp_path / "out"
    return main([command, "--config", str(cfg), "--out", str(out), *extra]), out


# ---------------------------------------------------------------- config


def test_defaults_parse():
    cfg = parse_config("")
    assert cfg.theory.kind == "maxwell" and cfg.chart.sizes == (8, 8, 8)
    assert cfg.flow.gauge_penalty == 0.0 and cfg.seed == 0


def test_dotted_keys_and_overrides():
    cfg = parse_config("theory.kind = yang_mills\n# comment\nchart.sizes = 6,6,6\n", {"run.seed": 7})
    assert cfg.theory.algebra is SU2 and cfg.chart.sizes == (6, 6, 6) and cfg.seed == 7
    assert "chart.sizes" in cfg.explicit


@pytest.mark.parametrize("text", [
    "bogus.key = 1",
    "chart.sizes = 8,8\nchart.sizes = 9,9",
    "chart.sizes = 8,x",
    "theory.kind = gravity",
    "init.kind = plane_wave\ninit.k = 1,0,0\ninit.eps = 0,1,0",
    "init.zero_mean = maybe",
    "flow.step_size = 1.0",
    "chart.signature = -+++\n" + "init.kind = plane_wave\ninit.k = 6.283185307179586,0,0,0\ninit.eps = 0,1,0,0\n"
    + "chart.sizes = 8,8,8,8",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_initial_fields_are_seeded():
    cfg = parse_config("theory.kind = yang_mills\ninit.kind = random\ninit.amplitude = 0.1")
    np.testing.assert_array_equal(cfg.initial_field().data, cfg.initial_field().data)
    pair = parse_config("theory.kind = broken_product\ninit.kind = random").initial_field()
    assert pair[0].algebra is SU2 and pair[1].algebra.name == "u1"


# ---------------------------------------------------------------- exit codes


def test_usage_errors(tmp_path):
    assert main(["frobnicate"]) == 2
    assert main(["verify", "--threads", "0", "--out", str(tmp_path)]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert run(tmp_path, "verify", "verify.suites =\n")[0] == 2
    assert run(tmp_path, "verify", "verify.suites = nope\n")[0] == 2
    assert run(tmp_path, "sweep", "sweep.levels = 1\n")[0] == 2
    assert run(tmp_path, "solve", "theory.kind = yang_mills\nflow.step_size = 1.0\n")[0] == 2
    assert run(tmp_path, "solve", WAVE)[0] == 2
    assert run(tmp_path, "reconstruct", "")[0] == 2


def test_verify_calculus(tmp_path):
    code, out = run(tmp_path, "verify", "verify.suites = calculus\n")
    assert code == 0
    assert json.loads((out / "verify_calculus.json").read_text())["pass"] is True
    assert (out / "verify_calculus.txt").read_text().endswith("pass = True\n")


def test_verify_utiyama_reports_control(tmp_path):
    code, out = run(tmp_path, "verify", "verify.suites = utiyama\n")
    assert code == 0
    rows = json.loads((out / "verify_utiyama.json").read_text())
    controls = [r for r in rows["rows"] + rows["checks"] if r["control"]]
    assert controls and all(r["pass"] is False for r in controls)


def test_solve_zero_and_trace(tmp_path):
    code, out = run(tmp_path, "solve", "theory.kind = yang_mills\nchart.sizes = 6,6,6\n")
    assert code == 0
    rows = list(csv.reader((out / "trace.csv").open()))
    assert rows[0] == ["iter", "action", "residual_L2", "residual_Linf"] and len(rows) == 2
    assert read_snapshot(out / "final.snap").norm_inf() == 0.0


def test_solve_random_su2(tmp_path):
    text = ("theory.kind = yang_mills\nchart.sizes = 6,6,6\ninit.kind = random\ninit.amplitude = 0.1\n"
            "init.zero_mean = true\nflow.gauge_penalty = 1.0\n")
    code, out = run(tmp_path, "solve", text)
    assert code == 0
    last = list(csv.reader((out / "trace.csv").open()))[-1]
    assert float(last[3]) <= 1e-6


def test_solve_budget_exhausted(tmp_path):
    text = "theory.kind = yang_mills\nchart.sizes = 6,6,6\ninit.kind = random\nflow.max_iters = 3\n"
    assert run(tmp_path, "solve", text)[0] == 1


def test_sweep_wave(tmp_path):
    code, out = run(tmp_path, "sweep", WAVE + "sweep.residual = wave\n")
    assert code == 0
    rows = list(csv.DictReader((out / "sweep_wave.csv").open()))
    assert [r["level"] for r in rows] == ["0", "1", "2"]
    assert all(3.5 <= float(r["ratio"]) <= 4.5 for r in rows[1:])


def test_sweep_u1_gauge_exact(tmp_path):
    code, out = run(tmp_path, "sweep", "sweep.residual = u1_gauge\nchart.sizes = 6,6,6\n")
    assert code == 0
    rows = list(csv.DictReader((out / "sweep_u1_gauge.csv").open()))
    assert all(r["ratio"] == "exact" for r in rows[1:])


def test_reconstruct_commands(tmp_path, rng):
    chart = LatticeChart.uniform(3, 9, 1.0, "clamped")
    zero = write_snapshot(tmp_path / "zero.snap", FormField.zeros(chart, 2))
    code, out = run(tmp_path, "reconstruct", f"reconstruct.input = {zero}\n")
    assert code == 0 and np.abs(read_snapshot(out / "reconstructed.snap").data).max() == 0.0

    A0 = SmoothForm.random(rng, chart, 1, periods=(4.0,) * 3).sample(chart)
    good = write_snapshot(tmp_path / "F.snap", curvature(A0))
    code, out = run(tmp_path, "reconstruct", f"reconstruct.input = {good}\nreconstruct.loop = +x+y-x-y\n")
    assert code == 0
    assert "holonomy.0.value" in (out / "reconstruct_report.txt").read_text()

    bad = write_snapshot(tmp_path / "bad.snap", random_form(rng, chart, 2))
    assert run(tmp_path, "reconstruct", f"reconstruct.input = {bad}\n")[0] == 1


def test_reconstruct_message(tmp_path, rng, capsys):
    chart = LatticeChart.uniform(3, 8, 1.0, "clamped")
    bad = write_snapshot(tmp_path / "bad.snap", random_form(rng, chart, 2))
    run(tmp_path, "reconstruct", f"reconstruct.input = {bad}\n")
    assert "compatibility condition violated" in capsys.readouterr().out


def test_noether_commands(tmp_path):
    assert run(tmp_path, "noether", "theory.kind = yang_mills\nnoether.generators = 2\n")[0] == 0
    code, out = run(tmp_path, "noether", WAVE + "noether.levels = 3\nnoether.generators = 2\n")
    assert code == 0
    text = (out / "noether_report.txt").read_text()
    assert "xi1.ratio1.value" in text
    assert run(tmp_path, "noether", "theory.kind = kform\ntheory.degree = 2\n")[0] == 2


def test_seed_flag_changes_output(tmp_path):
    text = "verify.suites = calculus\n"
    (tmp_path / "c.cfg").write_text(text)
    outs = []
    for seed in ("1", "1", "2"):
        d = tmp_path / f"o{len(outs)}"
        assert main(["verify", "--config", str(tmp_path / "c.cfg"), "--seed", seed, "--out", str(d)]) == 0
        outs.append((d / "verify_calculus.txt").read_bytes())
    assert outs[0] == outs[1] and outs[0] != outs[2]
