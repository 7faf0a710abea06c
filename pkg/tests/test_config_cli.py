import json

import pytest

from fluxlab.cli import main
from fluxlab.config import load_config, parse_yaml
from fluxlab.exceptions import ConfigError


def test_defaults_load():
    cfg = load_config()
    assert cfg.system.qubit_a.e_j == 2.89 and cfg.system.j_bare == 0.0035
    assert cfg.noise.f_high == 1e9 and isinstance(cfg.noise.f_high, float)
    assert cfg.fmt == "csv" and cfg.seed == 0
    assert len(cfg.sha256) == 64


def test_overlay_and_hash(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("system:\n  j_bare_ghz: 0.004\nnoise:\n  f_high_hz: 1e8\n")
    cfg = load_config(p)
    assert cfg.system.j_bare == 0.004
    assert cfg.system.qubit_b.e_c == 1.24
    assert cfg.noise.f_high == 1e8
    assert cfg.sha256 != load_config().sha256
    assert load_config(p).sha256 == cfg.sha256


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("system:\n  qubit_a:\n    e_x_ghz: 1.0\n", "system.qubit_a.e_x_ghz"),
        ("seed: 1\nseed: 2\n", "duplicate key"),
        ("numerics:\n  n_basis: 80.5\n", "numerics.n_basis"),
        ("noise:\n  f_low_hz: abc\n", "noise.f_low_hz"),
        ("noise:\n  f_low_hz: 10.0\n  f_high_hz: 5.0\n", "cutoffs"),
        ("output:\n  format: xml\n", "output.format"),
        ("numerics:\n  fit_window_phi0: 0.2\n", "fit_window"),
        ("system: [1, 2]\n", "system"),
        ("- a\n", "mapping"),
    ],
)
def test_config_rejections(tmp_path, text, fragment):
    p = tmp_path / "bad.yaml"
    p.write_text(text)
    with pytest.raises(ConfigError, match=fragment.replace(".", r"\.")):
        load_config(p)


def test_parse_yaml_empty():
    assert parse_yaml("", "x") == {}


def _run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_cli_spectrum_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(a, "spectrum", "--points", "41") == 0
    assert _run(b, "spectrum", "--points", "41") == 0
    for name in ("spectrum.csv", "spectrum.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    lines = (a / "spectrum.csv").read_text().splitlines()
    assert lines[0].startswith("#") and len(lines) == 43


def test_cli_json_format(tmp_path):
    assert _run(tmp_path, "filter-function", "--format", "json", "--points", "21") == 0
    data = json.loads((tmp_path / "filter_function.json").read_text())
    assert len(data["rows"]) == 21
    summary = json.loads((tmp_path / "filter_function_summary.json").read_text())
    assert summary["g_static"]["argmax_mhz"] == 0.0


def test_cli_couplings_summary(tmp_path):
    assert _run(tmp_path, "couplings", "--points", "21") == 0
    gaps = json.loads((tmp_path / "couplings_summary.json").read_text())["max_relative_gap_0.48_0.52"]
    assert set(gaps) == {"g_xx", "g_zz", "g_xz", "g_zx"}
    assert all(0 <= v < 0.15 for v in gaps.values())


def test_cli_error_budget(tmp_path):
    assert _run(tmp_path, "error-budget") == 0
    rep = json.loads((tmp_path / "error_budget.json").read_text())
    assert rep["clifford"]["per_layer_sum"] == pytest.approx(0.01629, abs=1e-5)
    assert rep["idle_scaled"] == pytest.approx(0.0018933, rel=1e-4)


def test_cli_error_budget_bad_inputs(tmp_path):
    bad = tmp_path / "in.yaml"
    bad.write_text("cz:\n  r_cz: 0.004\n  typo: 1\n")
    assert _run(tmp_path, "error-budget", "--inputs", str(bad)) == 2


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("nonsense: 1\n")
    assert _run(tmp_path, "spectrum", "--config", str(bad)) == 2
    assert "nonsense" in capsys.readouterr().err
    assert _run(tmp_path, "calibrate-cz", "--delta-phi-a", "0.001") == 4
    assert _run(tmp_path, "spectrum", "--flux-min", "nan") == 2


@pytest.mark.slow
def test_cli_dephasing_with_mc(tmp_path):
    args = ("dephasing", "--t-points", "2", "--mod-freqs-mhz", "50", "--mc", "200", "--seed", "5")
    assert _run(tmp_path / "a", *args) == 0
    assert _run(tmp_path / "b", *args) == 0
    assert (tmp_path / "a" / "dephasing.csv").read_bytes() == (tmp_path / "b" / "dephasing.csv").read_bytes()
    summary = json.loads((tmp_path / "a" / "dephasing_summary.json").read_text())
    assert summary["alpha_ghz_per_phi0"] == pytest.approx(9.8206, abs=1e-3)


def test_cli_vphi_map(tmp_path):
    assert _run(tmp_path, "vphi-map", "--points", "3", "--tau-ns", "50") == 0
    summary = json.loads((tmp_path / "vphi_map_summary.json").read_text())
    assert summary["max_v_phi_rad_per_us"] > 300
    assert (tmp_path / "vphi_map.svg").read_text().startswith("<svg")
    assert (tmp_path / "vphi_map_with_idle.csv").exists()


@pytest.mark.slow
def test_cli_calibrate_cz(tmp_path):
    assert _run(tmp_path, "calibrate-cz", "--delta-phi-a", "0.0673", "--n-max", "4") == 0
    res = json.loads((tmp_path / "cz_result.json").read_text())
    assert res["delta_phi_b"] == pytest.approx(0.070227, abs=1e-5)
    assert res["phi_fixed_step_check"] == pytest.approx(res["phi"], abs=1e-4)
    assert len(res["n_gate"]) == 4
