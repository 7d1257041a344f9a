import json
import math
import subprocess
import sys

import numpy as np
import pytest

from polwigner import cli
from polwigner.cli import PRESETS, main
from polwigner.states import ModePair, even_ecs, stokes_oracle
from polwigner.wigner import find_peaks


def read_csv(path):
    meta, rows = {}, []
    lines = open(path).read().splitlines()
    for line in lines:
        if line.startswith("# "):
            k, v = line[2:].split("=", 1)
            meta[k] = v
    body = [l for l in lines if not l.startswith("#")]
    header = body[0].split(",")
    for l in body[1:]:
        rows.append(l.split(","))
    return meta, header, rows


def grid_array(path):
    meta, header, rows = read_csv(path)
    n1, n2 = int(meta["axis1_count"]), int(meta["axis2_count"])
    return meta, header, np.array([float(r[2]) for r in rows]).reshape(n1, n2)


def test_presets_carry_fixed_values():
    expected = {"1a": (0, 0, 1, 0), "1b": (math.pi / 6, math.pi / 6, 1, 0),
                "1c": (math.pi / 2, math.pi / 2, 1, 0), "1d": (math.pi / 2, math.pi, 1, 0),
                "1e": (math.pi, 0, 1, 0), "1f": (math.pi / 6, math.pi / 2, 1, 1)}
    assert set(PRESETS) == set(expected)
    for key, (pb, dhs, m, l) in expected.items():
        p = PRESETS[key]
        assert (p.phi_beta, p.delta_HS, p.m, p.l) == (pb, dhs, m, l)
        assert p.alpha_mod == 0.8 and p.beta_mod == 0.7


def test_figure_csv(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["figure", "1a", "--res", "64", "--format", "csv", "--out", str(out)]) == 0
    meta, header, values = grid_array(out)
    assert header == ["delta", "phi_x", "w"]
    assert values.shape == (64, 64) and np.all(values > 0)
    for key, val in {"alpha_mod": 0.8, "beta_mod": 0.7, "phi_beta": 0.0, "delta_HS": 0.0,
                     "m": 1, "l": 0, "preset": "1a"}.items():
        assert meta[key] == str(val) or float(meta[key]) == val
    _, _, rows = read_csv(out)
    assert float(rows[1][0]) == 0.0 and float(rows[1][1]) > 0  # delta outer, phi_x inner


def test_figure_nested_resolution(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["figure", "1c", "--res", "8", "--out", str(a)])
    main(["figure", "1c", "--res", "16", "--out", str(b)])
    assert np.array_equal(grid_array(a)[2], grid_array(b)[2][::2, ::2])


def test_figure_deterministic(tmp_path):
    for fmt in ("csv", "json", "svg"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        main(["figure", "1b", "--res", "16", "--format", fmt, "--out", str(a)])
        main(["figure", "1b", "--res", "16", "--format", fmt, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


def test_figure_json_and_svg(tmp_path):
    j, s = tmp_path / "f.json", tmp_path / "f.svg"
    main(["figure", "1d", "--res", "16", "--format", "json", "--out", str(j)])
    doc = json.loads(j.read_text())
    assert doc["metadata"]["preset"] == "1d"
    assert np.array(doc["values"]).shape == (16, 16)
    assert len(doc["peaks"]) == 4
    main(["figure", "1d", "--res", "16", "--format", "svg", "--out", str(s)])
    svg = s.read_text()
    assert svg.startswith("<svg") and "preset=1d" in svg and "max " in svg and "min " in svg


def test_figure_default_outdir_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUTDIR, str(tmp_path))
    assert main(["figure", "1e", "--res", "8"]) == 0
    assert (tmp_path / "figure_1e.csv").exists()


def test_config_file_sets_defaults(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(f"# defaults\nres = 8\nformat=json\noutdir={tmp_path}\n")
    monkeypatch.delenv(cli.ENV_OUTDIR, raising=False)
    assert main(["--config", str(cfg), "figure", "1a"]) == 0
    doc = json.loads((tmp_path / "figure_1a.json").read_text())
    assert doc["metadata"]["axis1_count"] == 8
    monkeypatch.setenv(cli.ENV_CONFIG, str(cfg))
    assert main(["figure", "1a", "--res", "16", "--format", "csv"]) == 0
    assert grid_array(tmp_path / "figure_1a.csv")[2].shape == (16, 16)


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.txt"
    cfg.write_text("res 8\n")
    assert main(["--config", str(cfg), "figure", "1a"]) == 1
    assert main(["--config", str(tmp_path / "missing.txt"), "figure", "1a"]) == 1


def test_figure_errors(tmp_path):
    assert main(["figure", "2z"]) == 1
    assert main(["figure", "1a", "--format", "png"]) == 1
    assert main(["figure", "1a", "--res", "8", "--out", str(tmp_path / "no" / "x.csv")]) == 2
    assert main([]) == 1


def test_figure_peaks_shift_between_1b_and_1f():
    def peaks(key):
        return find_peaks(PRESETS[key].grid(128))
    pb, pf = peaks("1b"), peaks("1f")
    assert len(pb) == len(pf) == 4
    # 1f has delta_HS = pi/2 against pi/6 for 1b: peaks move by pi/3 modulo pi in delta
    for q in pf:
        assert any(math.isclose((q.axis1 - p.axis1 - math.pi / 3) % math.pi, 0, abs_tol=0.05)
                   or math.isclose((q.axis1 - p.axis1 - math.pi / 3) % math.pi, math.pi, abs_tol=0.05)
                   for p in pb)


def test_verify_default(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["comparison"]["max_rel_error"] < 1e-6
    assert rep["dim"] == 32 and rep["points"] == 100 and rep["seed"] == cli.DEFAULT_SEED
    assert set(rep["criterion_residuals"]) == {"16", "24", "32"}
    assert rep["comparison"]["dims"] == [24, 32, 40]


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--points", "5", "--out", str(a)])
    main(["verify", "--points", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_verify_truncation(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--dim", "8", "--out", str(out)]) == 4
    assert "truncation" in capsys.readouterr().err
    assert "truncation" in json.loads(out.read_text())["failed"]


def test_verify_usage():
    assert main(["verify", "--points", "0"]) == 1
    assert main(["verify", "--dim", "1"]) == 1


def test_verify_bound_failure(monkeypatch, tmp_path, capsys):
    real = cli.compare_closed_form

    def worse(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.max_rel_error = 0.5
        return rep
    monkeypatch.setattr(cli, "compare_closed_form", worse)
    assert main(["verify", "--points", "3", "--out", str(tmp_path / "v.json")]) == 3
    assert "oracle_max_rel_error" in capsys.readouterr().err


def test_stokes_table(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["stokes", "--beta", "0.7", "--gamma", "0.7", "--out", str(out)]) == 0
    meta, header, rows = read_csv(out)
    assert header == cli.STOKES_COLUMNS
    table = [dict(zip(header, r)) for r in rows]
    first, last = table[0], table[-1]
    assert first["regime"] == "few-photon" and last["regime"] == "intense"
    assert [float(first[k]) for k in ("s0", "s1", "s2", "s3")] == [0, 0, 0, 0]
    assert all(float(r["s1"]) == 0 for r in table)
    lam = [float(r["cat_factor"]) for r in table]
    assert all(b >= a for a, b in zip(lam, lam[1:])) and lam[-1] <= 1.0
    row = next(r for r in table if float(r["scale"]) == 1.0)
    sv = stokes_oracle(even_ecs(ModePair(0.7, 0.7), 32), 32)
    for k in ("s0", "s1", "s2", "s3"):
        assert abs(float(row[k]) - getattr(sv, k)) < 1e-8


def test_stokes_inputs(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["stokes", "--beta", "0.5@1.0", "--gamma", "0.1+0.3j", "--sweep", "0.5:1:3",
                 "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert [float(r[0]) for r in rows] == [0.0, 0.5, 0.75, 1.0]
    assert main(["stokes", "--beta", "abc"]) == 1
    assert main(["stokes", "--sweep", "1:0:3"]) == 1


def test_complex_parser():
    assert cli.parse_complex("1@0") == 1
    assert cli.parse_complex(" 0.5 - 0.5j ") == 0.5 - 0.5j
    assert cli.parse_complex(f"2@{math.pi / 2}") == pytest.approx(2j)


def test_grid_order_three_flat(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["grid", "--order", "3", "--res", "8", "--out", str(out)]) == 0
    meta, _, values = grid_array(out)
    assert np.all(values == values[0])
    assert meta["normalization"] == "unnormalized"


def test_grid_radial_axis(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["grid", "--axes", "alpha_mod,phi_x", "--res", "8", "--out", str(out)]) == 0
    values = grid_array(out)[2]
    assert np.all(np.isfinite(values)) and np.all(values > 0)


def test_grid_matches_figure(tmp_path):
    f, g = tmp_path / "f.csv", tmp_path / "g.csv"
    main(["figure", "1b", "--res", "16", "--out", str(f)])
    pb = math.pi / 6
    assert main(["grid", "--res", "16", "--beta-phase", repr(pb), "--phs-phase", repr(2 * pb),
                 "--m", "1", "--out", str(g)]) == 0
    assert np.array_equal(grid_array(f)[2], grid_array(g)[2])


def test_grid_errors(tmp_path):
    assert main(["grid", "--axes", "delta,delta"]) == 1
    assert main(["grid", "--evaluator", "poincare", "--p2-mod", "2"]) == 1
    assert main(["grid", "--p2-mod", "2", "--res", "8", "--out", str(tmp_path / "g.csv")]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polwigner", "figure", "1a", "--res", "8", "--out", "-"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# alpha_mod=")
