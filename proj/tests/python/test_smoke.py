import json
import os
from pathlib import Path

import numpy as np
import pytest

import pbg_spdc

ROOT = Path(os.environ.get("PBG_SOURCE_DIR", Path(__file__).resolve().parents[2]))
DATA = ROOT / "data"


@pytest.fixture(scope="module")
def stack():
    return pbg_spdc.load_stack(DATA / "gan_aln_stack.json", DATA / "materials.json")


def test_stack_summary(stack):
    assert stack.size == 49
    assert stack.total_thickness_nm == pytest.approx(7245.0)
    assert sum(1 for _, _, d in stack.layers if d > 0) == 25
    assert "49 layers" in repr(stack)


def test_transmission_and_resonance(stack):
    wl = pbg_spdc.band_edge_resonance(stack, 640.0, 700.0)
    assert wl == pytest.approx(677.567, abs=0.02)
    t, r = pbg_spdc.transmission(stack, wl, 0.0, "TE")
    assert t + r == pytest.approx(1.0, abs=1e-10)
    t, r = pbg_spdc.transmission(stack, 1300.0, 30.0, "TM")
    assert t + r == pytest.approx(1.0, abs=1e-10)


def test_cw_jsa_and_spectrum(stack):
    pump = pbg_spdc.cw_pump(677.567)
    out = pbg_spdc.jsa(stack, pump, 13.5, points=65)
    assert out["sheets"].shape == (4, 65)
    assert out["sheets"].dtype == np.complex128
    assert np.allclose(out["signal_omega"] + out["idler_omega"], pump.carrier_omega)
    spec = pbg_spdc.spectrum(stack, pump, 13.5, points=257)
    assert set(spec["signal"]) == set(pbg_spdc.CHANNELS)
    assert np.all(spec["signal"]["FF"] >= 0.0)
    assert 8.0 < spec["fwhm_nm"]["FF"] < 18.0


def test_pulsed_jsa_shape(stack):
    pump = pbg_spdc.gaussian_pump(677.567, 200.0)
    out = pbg_spdc.jsa(stack, pump, 13.8, points=32, workers=2)
    assert out["sheets"].shape == (4, 32, 32)
    peak = np.abs(out["sheets"][0]).max()
    assert peak > 0.0


def test_hom_and_efficiency(stack):
    pump = pbg_spdc.cw_pump(677.567)
    scan = pbg_spdc.hom(stack, pump, 13.5, np.linspace(-600, 600, 601), points=257)
    assert scan["rn"].min() < 0.1
    assert 120.0 < scan["width"] < 280.0
    eta = pbg_spdc.efficiency(stack, pump, 13.5)
    assert eta["total"] == pytest.approx(sum(eta[c] for c in pbg_spdc.CHANNELS))
    assert 8.75 < eta["total"] < 16.25


def test_flux_peaks_after_the_pump(stack):
    pump = pbg_spdc.gaussian_pump(677.567, 200.0)
    f = pbg_spdc.flux(stack, pump, 13.8, [-800.0, 800.0, 401], points=128)
    assert 50.0 < f["delay"]["FF"] < 220.0
    assert f["FF"].shape == (401,)


def test_errors_are_typed(stack):
    with pytest.raises(pbg_spdc.ConfigError):
        pbg_spdc.transmission(stack, 677.0, 0.0, "XY")
    with pytest.raises(pbg_spdc.Error):
        pbg_spdc.load_stack(DATA / "missing.json", DATA / "materials.json")
    with pytest.raises(pbg_spdc.IoError):
        pbg_spdc.read_jsa(DATA / "missing.bin")


def test_cli_roundtrip_through_binary_file(tmp_path):
    config = {
        "materials": str(DATA / "materials.json"),
        "stack": str(DATA / "gan_aln_stack.json"),
        "pump": {"kind": "gaussian", "wavelength_nm": 677.567, "tau_fs": 200},
        "geometry": {"theta_s_deg": 13.8},
        "grid": {"points": 24},
        "output_dir": str(tmp_path / "out"),
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config))
    code, out, err = pbg_spdc.run_cli(["jsa", str(path), "--no-timestamp"])
    assert code == 0, err
    data = pbg_spdc.read_jsa(tmp_path / "out" / "jsa_000.bin")
    assert data["kind"] == "pulsed"
    assert data["sheets"].shape == (4, 24, 24)
    direct = pbg_spdc.jsa(
        pbg_spdc.load_stack(DATA / "gan_aln_stack.json", DATA / "materials.json"),
        pbg_spdc.gaussian_pump(677.567, 200.0),
        13.8,
        points=24,
    )
    scale = np.abs(direct["sheets"]).max()
    assert np.allclose(data["sheets"], direct["sheets"], atol=1e-6 * scale)
    code, _, err = pbg_spdc.run_cli(["flux"])
    assert code == 2
    assert err.startswith("error kind=usage")
