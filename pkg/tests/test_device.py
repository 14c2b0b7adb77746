"""Device sheets: the two bundled TOML files and the validation rules."""

from pathlib import Path

import pytest

from snailkit import DeviceSheet, IoError, SchemaError, load_device_sheet
from snailkit.units import TWO_PI

_DEVICES = Path(__file__).resolve().parent.parent / "devices"
MAIN = str(_DEVICES / "main.toml")
WAVEGUIDE = str(_DEVICES / "waveguide.toml")


def test_main_sheet_loads():
    sheet = load_device_sheet(MAIN)
    assert sheet.name == "main"
    assert sheet.raw("beta") == 0.0993
    assert sheet.raw("l_j_ph") == 629.0
    assert sheet.raw("op_flux_phi0") == 0.386
    assert sheet.has("chi0_mhz")
    assert sheet.provenance  # the bundled sheets say where numbers came from


def test_waveguide_sheet_loads():
    sheet = load_device_sheet(WAVEGUIDE)
    assert sheet.name == "waveguide"
    assert sheet.raw("beta") == 0.095
    assert sheet.raw("l_j_ph") == 600.0
    assert sheet.raw("q_s_zero") == 2.23e5
    assert not sheet.has("omega_q0_ghz")  # no qubit on this device


def test_unit_conversions():
    sheet = load_device_sheet(MAIN)
    assert sheet.si("l_j_ph") == pytest.approx(629e-12, rel=1e-15)
    assert sheet.si("omega_r0_ghz") == pytest.approx(TWO_PI * 8.87e9, rel=1e-15)
    assert sheet.si("alpha_q_mhz") == pytest.approx(TWO_PI * 450e6, rel=1e-15)
    assert sheet.si("gamma_q_khz") == pytest.approx(TWO_PI * 280e3, rel=1e-15)
    assert sheet.si("t_res_mk") == pytest.approx(0.058, rel=1e-15)
    assert sheet.si("t1_qubit_us") == pytest.approx(20e-6, rel=1e-15)
    assert sheet.si("beta") == sheet.raw("beta")
    assert sheet.si("loss_gamma_c_hz") == 2070.0  # budget rates stay cyclic
    assert sheet.unit("l_j_ph") == "pH"
    assert sheet.unit("loss_gamma_c_hz") == "Hz"


def test_typed_accessors():
    sheet = load_device_sheet(MAIN)
    cfg = sheet.snail_config()
    assert cfg.beta == 0.0993
    assert cfg.phi_ext == pytest.approx(TWO_PI * 0.386, rel=1e-15)
    assert sheet.snail_config(0.0).phi_ext == 0.0
    geom = sheet.geometry()
    assert geom.z_c == 58.7
    qubit = sheet.qubit()
    assert qubit.g0 == pytest.approx(TWO_PI * 53e6, rel=1e-15)
    tls = sheet.tls_params()
    assert tls.n_c == 0.1
    assert tls.t_res == pytest.approx(0.058, rel=1e-15)


def test_missing_group_raises():
    sheet = load_device_sheet(WAVEGUIDE)
    with pytest.raises(SchemaError) as err:
        sheet.qubit()
    assert "omega_q0_ghz" in err.value.fields
    with pytest.raises(SchemaError):
        sheet.tls_params()


def test_missing_key_raises():
    sheet = load_device_sheet(WAVEGUIDE)
    with pytest.raises(SchemaError) as err:
        sheet.raw("chi0_mhz")
    assert err.value.fields == ("chi0_mhz",)


def _write(tmp_path, text):
    p = tmp_path / "sheet.toml"
    p.write_text(text, encoding="utf-8")
    return str(p)


MINIMAL = 'name = "x"\nbeta = 0.1\nl_j_ph = 600.0\nomega_r0_ghz = 8.9\nz_c_ohm = 50.0\n'


def test_minimal_sheet(tmp_path):
    sheet = load_device_sheet(_write(tmp_path, MINIMAL))
    assert sheet.name == "x"
    assert sheet.provenance == {}


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(SchemaError) as err:
        load_device_sheet(_write(tmp_path, MINIMAL + "l_j_nh = 0.6\n"))
    assert err.value.fields == ("l_j_nh",)


def test_missing_required_key(tmp_path):
    text = 'name = "x"\nbeta = 0.1\nl_j_ph = 600.0\nomega_r0_ghz = 8.9\n'
    with pytest.raises(SchemaError) as err:
        load_device_sheet(_write(tmp_path, text))
    assert "z_c_ohm" in err.value.fields


def test_non_numeric_value_rejected(tmp_path):
    with pytest.raises(SchemaError) as err:
        load_device_sheet(_write(tmp_path, MINIMAL.replace("beta = 0.1", 'beta = "small"')))
    assert "beta" in err.value.fields
    # booleans are not numbers either, even though bool subclasses int
    with pytest.raises(SchemaError):
        load_device_sheet(_write(tmp_path, MINIMAL + "op_flux_phi0 = true\n"))


def test_bad_provenance_rejected(tmp_path):
    with pytest.raises(SchemaError):
        load_device_sheet(_write(tmp_path, MINIMAL + "[provenance]\nmystery_key = \"note\"\n"))
    with pytest.raises(SchemaError):
        load_device_sheet(_write(tmp_path, MINIMAL + "[provenance]\nbeta = 3\n"))


def test_name_required(tmp_path):
    with pytest.raises(SchemaError):
        load_device_sheet(_write(tmp_path, MINIMAL.replace('name = "x"\n', "")))


def test_invalid_toml(tmp_path):
    with pytest.raises(SchemaError):
        load_device_sheet(_write(tmp_path, "name = [unclosed\n"))


def test_missing_file():
    with pytest.raises(IoError):
        load_device_sheet(str(_DEVICES / "absent.toml"))


def test_sheet_constructor_validation():
    with pytest.raises(SchemaError):
        DeviceSheet(name="x", values={"beta": 0.1, "bogus": 1.0})
    with pytest.raises(SchemaError):
        DeviceSheet(
            name="x",
            values={"beta": 0.1, "l_j_ph": 600.0, "omega_r0_ghz": 8.9, "z_c_ohm": 50.0},
            provenance={"bogus": "note"},
        )
