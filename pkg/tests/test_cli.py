import csv
import json
from pathlib import Path

import numpy as np
import pytest

from unitary_fanout import cli, config
from unitary_fanout.errors import MalformedSettings, ParseError
from unitary_fanout.network import build_layers, propagate, single_port_input
from unitary_fanout.synthesis import TargetVector, program

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_synth_inline_e1(capsys):
    code, out, err = run(capsys, "synth", "1,0;0,0")
    assert code == 0
    data = json.loads(out)
    assert data["alphas"] == [[1, 1, 0.0]]
    assert data["thetas"] == [0.0, 0.0]
    assert "3 controls" in err


def test_synth_uniform(capsys):
    _, out, _ = run(capsys, "synth", "1,0;1,0;1,0;1,0")
    data = json.loads(out)
    assert all(a == pytest.approx(np.pi / 4) for _, _, a in data["alphas"])


def test_synth_padding(tmp_path, capsys):
    target = tmp_path / "x.csv"
    target.write_text("# three antennas\n1,0\n0,1\n-1,0\n")
    out = tmp_path / "s.json"
    assert run(capsys, "synth", str(target), "--out", str(out))[0] == 0
    data = json.loads(out.read_text())
    assert data["N"] == 4 and data["padded_from"] == 3
    assert len(data["alphas"]) == 3 and len(data["thetas"]) == 4


def test_synth_errors(capsys):
    code, _, err = run(capsys, "synth", "0,0;0,0")
    assert code == cli.EXIT_INPUT and "zero norm" in err
    code, _, err = run(capsys, "synth", "1,2,3")
    assert code == cli.EXIT_INPUT


def test_round_trip(tmp_path, capsys, rng):
    x = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    target = tmp_path / "x.csv"
    target.write_text(config.target_to_csv(x))
    settings_path = tmp_path / "s.json"
    run(capsys, "synth", str(target), "--out", str(settings_path))
    code, out, _ = run(capsys, "simulate", str(settings_path), "--target", str(target))
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["synthesis_residual"] < 1e-10
    assert report["unitarity_residual"] < 1e-12
    assert report["seed"] == 0


def test_simulate_identity(tmp_path, capsys):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"N": 2, "alphas": [[1, 1, 0.0]], "thetas": [0.5, 0.0]}))
    code, out, _ = run(capsys, "simulate", str(path), "--power", "4")
    report = json.loads(out)
    z = complex(*report["output"][0])
    assert z == pytest.approx(2 * np.exp(0.5j))
    assert report["output"][1] == [0.0, 0.0]


def test_simulate_detects_wrong_target(tmp_path, capsys):
    path = tmp_path / "s.json"
    config.save_settings(path, program([1, 1, 1, 1]))
    code, out, _ = run(capsys, "simulate", str(path), "--target", "1,0;1,0;1,0;-1,0")
    assert code == cli.EXIT_VERIFY
    assert not json.loads(out)["passed"]


def test_simulate_random_checks(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "16", "--trials", "20", "--seed", "7")
    report = json.loads(out)
    assert code == 0
    assert report["seed"] == 7
    assert report["max_unitarity_residual"] < 1e-12
    assert report["max_synthesis_residual"] < 1e-10


def test_simulate_matrix_export(tmp_path, capsys):
    s = tmp_path / "s.json"
    config.save_settings(s, program([1, 1j]))
    m = tmp_path / "v.csv"
    run(capsys, "simulate", str(s), "--matrix-out", str(m))
    rows = list(csv.reader(m.open()))
    assert rows[0] == ["re1", "im1", "re2", "im2"]
    v = np.array([[complex(float(r[2 * k]), float(r[2 * k + 1])) for k in range(2)] for r in rows[1:]])
    np.testing.assert_allclose(v[:, 0], np.array([1, 1j]) / np.sqrt(2), atol=1e-15)


def test_simulate_malformed(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"N": 4, "alphas": [[1, 1, 0.0]], "thetas": [0, 0, 0, 0]}))
    assert run(capsys, "simulate", str(path))[0] == cli.EXIT_INPUT
    path.write_text("{not json")
    assert run(capsys, "simulate", str(path))[0] == cli.EXIT_INPUT


def test_loss_golden(tmp_path, capsys):
    out = tmp_path / "t1.csv"
    assert run(capsys, "loss", "--out", str(out))[0] == 0
    assert out.read_bytes() == (GOLDEN / "stress_loss.csv").read_bytes()


def test_power_golden(tmp_path, capsys):
    out = tmp_path / "t2.csv"
    assert run(capsys, "power", "--out", str(out))[0] == 0
    assert out.read_bytes() == (GOLDEN / "equal_power.csv").read_bytes()


def test_loss_lossless_profile(tmp_path, capsys):
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps([{"name": "ideal", "t_tune_s": 1e-6, "l_phi_db": 0,
                                 "p_phi_w": 0, "l_hyb_db": 0}]))
    _, out, _ = run(capsys, "loss", "--profiles", str(prof))
    row = list(csv.DictReader(out.splitlines()))[0]
    assert all(float(row[f"L_net_N{n}_dB"]) == 0 for n in (2, 4, 8, 16))


def test_loss_extension_column(capsys):
    _, out, _ = run(capsys, "loss", "--n", "32", "--format", "json")
    data = json.loads(out)
    mems = next(r for r in data["rows"] if r["profile"] == "rf-mems")
    assert mems["L_net_dB_rounded"]["32"] == 1.9


def test_profiles_env_var(tmp_path, capsys, monkeypatch):
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps({"profiles": [{"name": "x", "t_tune_s": 1e-6, "l_phi_db": 1.0,
                                              "p_phi_w": 1e-3, "resolution": 5}]}))
    monkeypatch.setenv(config.PROFILES_ENV, str(prof))
    _, out, _ = run(capsys, "loss")
    assert out.splitlines()[1].startswith("x,")


def test_duplicate_profile_names(tmp_path):
    prof = tmp_path / "p.json"
    entry = {"name": "x", "t_tune_s": 1e-6, "l_phi_db": 1.0, "p_phi_w": 1e-3}
    prof.write_text(json.dumps([entry, entry]))
    with pytest.raises(ParseError):
        config.load_profiles(prof)


def test_power_validity_warning(capsys):
    code, out, err = run(capsys, "power", "--p-ant", "0.26")
    assert code == 0
    assert "outside" in err
    assert all(r["out_of_range"] == "1" for r in csv.DictReader(out.splitlines()))
    _, out, err = run(capsys, "power", "--p-ant", "0.2")
    assert err == ""


def test_power_custom_coeffs(tmp_path, capsys):
    coeffs = tmp_path / "c.json"
    coeffs.write_text(json.dumps({"alpha": 1.0, "beta": 0.0, "p_sh": 0.5}))
    _, out, _ = run(capsys, "power", "--coeffs", str(coeffs), "--n", "2", "8", "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["digital_W"] for r in rows] == [2.5, 8.5]


def test_power_rejects_non_power_of_two(capsys):
    assert run(capsys, "power", "--n", "3")[0] == cli.EXIT_INPUT


def test_sweep_long_form(capsys):
    _, out, _ = run(capsys, "sweep", "--max-n", "4096")
    rows = list(csv.DictReader(out.splitlines()))
    assert len(rows) == 12 * 5
    assert {r["series"] for r in rows} == {"digital", "rf-mems", "gan-switch", "ultracmos", "dps"}
    assert rows[0]["N"] == "2" and rows[-1]["N"] == "4096"


def test_timing_profile_long(capsys):
    _, out, _ = run(capsys, "timing", "--profile", "rf-mems", "--preset", "long", "--format", "json")
    rep = json.loads(out)
    assert rep["feasible"]
    assert rep["T_ss_us"] == pytest.approx(61.4, abs=0.1)


def test_timing_dps_short(capsys):
    _, out, _ = run(capsys, "timing", "--profile", "dps", "--preset", "short", "--format", "json")
    assert json.loads(out)["feasible"]


def test_timing_infeasible(capsys):
    _, out, _ = run(capsys, "timing", "--t-sw", "1e-4", "--preset", "short", "--format", "json")
    rep = json.loads(out)
    assert not rep["feasible"] and rep["clamped"] and rep["T_ss_us"] == 0


def test_timing_unknown_profile(capsys):
    assert run(capsys, "timing", "--profile", "nope")[0] == cli.EXIT_INPUT


def test_timing_unknown_preset():
    with pytest.raises(SystemExit):
        cli.main(["timing", "--t-sw", "1e-6", "--preset", "ultra"])


def test_settings_schema_round_trip(rng):
    s = program(rng.standard_normal(8) + 1j * rng.standard_normal(8))
    back = config.settings_from_dict(json.loads(json.dumps(config.settings_to_dict(s))))
    for a, b in zip(s.alphas, back.alphas):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(s.thetas, back.thetas)
    with pytest.raises(MalformedSettings):
        config.settings_from_dict({"N": 2, "alphas": [[1, 2, 0.0]], "thetas": [0, 0]})


def test_inline_parsing():
    np.testing.assert_array_equal(config.parse_target_inline("1,0; 0,1 ;2"), [1, 1j, 2])
    with pytest.raises(ParseError):
        config.parse_target_inline("a,b")
    with pytest.raises(ParseError):
        config.parse_target_inline(" ; ")


def test_atomic_write_leaves_no_temp(tmp_path):
    path = tmp_path / "f.txt"
    config.atomic_write(path, "a\n")
    config.atomic_write(path, "b\n")
    assert path.read_text() == "b\n"
    assert [p.name for p in tmp_path.iterdir()] == ["f.txt"]
