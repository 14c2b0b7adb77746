"""HTTP layer: route round trips, unit conversions, error mapping."""

import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from snailkit import (
    PopulationConvention,
    conditional_pi_population,
    load_device_sheet,
    tls_t1,
    TlsParams,
)
from snailkit.service import create_app
from snailkit.units import ghz_to_rad

from test_device import MAIN

CIRCUIT = {"beta": 0.0993, "l_j_ph": 629.0, "omega_r0_ghz": 8.87, "z_c_ohm": 58.7}
QUBIT = {"omega_q0_ghz": 5.222, "alpha_q_mhz": 450.0, "g0_mhz": 53.0, "gamma_q_khz": 280.0}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "tool": "snailkit"}


def test_potential_route(client):
    r = client.post(
        "/v1/potential",
        json={"beta": 0.0993, "phi_ext_phi0": 0.386, "l_j_ph": 629.0, "points": 101},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["phi_min_rad"] == pytest.approx(2.180880383030905, rel=1e-12)
    assert body["c2"] == pytest.approx(0.27533496511323663, rel=1e-12)
    assert len(body["phi_rad"]) == 101
    assert len(body["u_ej"]) == 101


def test_sweep_route(client):
    r = client.post(
        "/v1/sweep",
        json={"circuit": CIRCUIT, "flux_from_phi0": 0.0, "flux_to_phi0": 0.5, "points": 11},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["phi_ext_phi0"][0] == 0.0
    assert body["freq_ghz"][0] == pytest.approx(5.088118687150376, rel=1e-12)
    assert body["degenerate_indices"] == []
    assert body["g3_mhz"][0] == pytest.approx(0.0, abs=1e-12)


def test_kerr_free_route(client):
    r = client.post("/v1/kerr-free", json={"circuit": CIRCUIT})
    assert r.status_code == 200
    body = r.json()
    assert body["phi_star_phi0"] == pytest.approx(0.392431640625, abs=1e-3)
    assert abs(body["kerr_at_star_khz"]) < 1.0


def test_fit_flux_route(client):
    sweep = client.post(
        "/v1/sweep",
        json={"circuit": CIRCUIT, "flux_from_phi0": 0.0, "flux_to_phi0": 0.45, "points": 15},
    ).json()
    r = client.post(
        "/v1/fit-flux",
        json={
            "z_c_ohm": 58.7,
            "flux_phi0": sweep["phi_ext_phi0"],
            "freq_ghz": sweep["freq_ghz"],
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert body["converged"]
    assert body["params"]["beta"] == pytest.approx(0.0993, rel=1e-5)
    assert body["params"]["l_j_ph"] == pytest.approx(629.0, rel=1e-5)
    assert body["params"]["omega_r0_ghz"] == pytest.approx(8.87, rel=1e-5)
    assert set(body["stderr"]) == {"beta", "l_j_ph", "omega_r0_ghz"}


def test_synth_then_fit_splitting(client):
    synth = client.post(
        "/v1/synth-splitting",
        json={
            "qubit": QUBIT, "omega_s_ghz": 4.31, "chi_prime_khz": 35.0,
            "alpha": 2.4, "seed": 0,
        },
    )
    assert synth.status_code == 200
    sbody = synth.json()
    assert sbody["n_max"] == 31
    assert sbody["chi0_mhz"] == pytest.approx(3.000042720437454, rel=1e-9)
    fit = client.post(
        "/v1/fit-splitting",
        json={
            "freq_ghz": sbody["freq_ghz"],
            "amp": sbody["amp"],
            "spacing_hint_mhz": sbody["chi0_mhz"],
        },
    )
    assert fit.status_code == 200
    fbody = fit.json()
    assert len(fbody["peaks"]) >= 10
    assert fbody["peaks"][0]["n"] == 0
    assert fbody["fit"]["params"]["chi0_mhz"] == pytest.approx(sbody["chi0_mhz"], rel=1e-3)
    assert fbody["fit"]["params"]["chi_prime_khz"] == pytest.approx(35.0, rel=0.05)
    assert fbody["n_low_confidence"] == sum(p["low_confidence"] for p in fbody["peaks"])


def test_fit_t1_route(client):
    tau = np.linspace(0.0, 100e-6, 101)
    pop = conditional_pi_population(math.sqrt(5.8), tau, 19.2e-6)
    r = client.post(
        "/v1/fit-t1",
        json={"tau_us": (tau / 1e-6).tolist(), "pop": pop.tolist(), "alpha0": math.sqrt(5.8)},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["params"]["t1_us"] == pytest.approx(19.2, abs=1e-6)
    assert "convention=vacuum_excites" in body["convention_notes"]


def test_fit_tls_route(client):
    truth = TlsParams(f_delta_tls=4.5e-6, n_c=0.1, delta_other=1.3e-6, t_res=0.058)
    n_bar = np.geomspace(1e-3, 100.0, 20)
    t1 = tls_t1(n_bar, ghz_to_rad(4.296), truth)
    r = client.post(
        "/v1/fit-tls",
        json={
            "n_bar": n_bar.tolist(),
            "t1_us": (t1 / 1e-6).tolist(),
            "omega_c_ghz": 4.296,
            "t_res_mk": 58.0,
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert body["params"]["f_delta_tls"] == pytest.approx(4.5e-6, rel=1e-3)
    assert body["params"]["n_c"] == pytest.approx(0.1, rel=1e-3)


def test_fit_calibration_route(client):
    r = client.post(
        "/v1/fit-calibration",
        json={"drive_amp": [0.0, 0.1, 0.2, 0.3], "alpha_abs": [0.16, 0.8, 1.6, 2.4]},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["params"]["k_cal"] == pytest.approx(8.0, rel=1e-9)
    assert body["extra"]["residual_occupation"] == pytest.approx(0.0256, rel=1e-9)


def test_budget_route(client):
    r = client.post(
        "/v1/budget",
        json={
            "g0_mhz": 53.0, "delta0_mhz": 926.0, "t1_qubit_us": 20.0,
            "gamma_c_hz": 2070.0, "gamma_f_hz": 477.0, "omega_c_ghz": 4.296,
            "delta_other": 1.3e-6, "gamma_q_hz": 170.0,
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert body["gamma_total_hz"] == pytest.approx(2717.0, abs=1e-9)
    assert body["t_total_us"] == pytest.approx(58.577, abs=1e-3)
    assert body["t_other_us"] == pytest.approx(28.498, abs=1e-3)


def test_budget_route_infinite_t_other_is_null(client):
    r = client.post(
        "/v1/budget",
        json={
            "g0_mhz": 53.0, "delta0_mhz": 926.0, "t1_qubit_us": 20.0,
            "gamma_c_hz": 2070.0, "gamma_f_hz": 477.0, "omega_c_ghz": 4.296,
            "delta_other": 0.0,
        },
    )
    assert r.status_code == 200
    assert r.json()["t_other_us"] is None


def test_coherence_route_direct_and_via_q(client):
    direct = client.post("/v1/coherence", json={"t1_us": 8.0, "t_s_us": 6.92})
    assert direct.status_code == 200
    assert direct.json()["t_phi_us"] == pytest.approx(12.1938, abs=1e-3)
    via_q = client.post(
        "/v1/coherence", json={"t1_us": 8.0, "q_s": 2.23e5, "omega_s_ghz": 5.14}
    )
    assert via_q.status_code == 200
    assert via_q.json()["t_s_us"] == pytest.approx(
        2.23e5 / ghz_to_rad(5.14) / 1e-6, rel=1e-9
    )


def test_device_report_route(client):
    sheet = load_device_sheet(MAIN)
    r = client.post("/v1/report", json={"name": sheet.name, "values": sheet.values})
    assert r.status_code == 200
    body = r.json()
    assert body["name"] == "main"
    secs = body["sections"]
    assert secs["mode_zero_flux"]["freq_ghz"] == pytest.approx(5.088118687150376, rel=1e-9)
    assert secs["kerr_free"]["phi_star_phi0"] == pytest.approx(0.3924, abs=1e-3)
    assert secs["budget"]["gamma_total_hz"] == pytest.approx(2717.0, abs=1e-6)


# ------------------------------------------------------------ error mapping


def test_library_error_maps_to_422(client):
    # detuning pinned at the straddling pole
    bad_qubit = dict(QUBIT, omega_q0_ghz=4.76, alpha_q_mhz=450.0)
    r = client.post(
        "/v1/synth-splitting",
        json={"qubit": bad_qubit, "omega_s_ghz": 4.31, "alpha": 2.4, "seed": 0},
    )
    assert r.status_code == 422
    body = r.json()
    assert body["error"] == "StraddlePole"
    assert "detail" in body


def test_malformed_body_is_422(client):
    r = client.post("/v1/kerr-free", json={"circuit": {"beta": 0.0993}})
    assert r.status_code == 422
    r2 = client.post("/v1/budget", json={"g0_mhz": 53.0, "bogus": 1.0})
    assert r2.status_code == 422


def test_unknown_extra_field_rejected(client):
    r = client.post(
        "/v1/coherence", json={"t1_us": 8.0, "t_s_us": 6.92, "surprise": 1.0}
    )
    assert r.status_code == 422


def test_no_peaks_maps_to_422(client):
    r = client.post(
        "/v1/fit-splitting",
        json={
            "freq_ghz": np.linspace(5.0, 5.1, 50).tolist(),
            "amp": [0.0] * 50,
            "spacing_hint_mhz": 3.0,
        },
    )
    assert r.status_code == 422
    assert r.json()["error"] == "NoPeaksFound"


def test_unidentifiable_fit_maps_to_422(client):
    truth = TlsParams(f_delta_tls=4.5e-6, n_c=0.1, delta_other=1.3e-6, t_res=0.0)
    n_bar = np.geomspace(50.0, 5000.0, 10)
    t1 = tls_t1(n_bar, ghz_to_rad(4.296), truth)
    r = client.post(
        "/v1/fit-tls",
        json={
            "n_bar": n_bar.tolist(),
            "t1_us": (t1 / 1e-6).tolist(),
            "omega_c_ghz": 4.296,
            "t_res_mk": 0.0,
        },
    )
    assert r.status_code == 422
    assert r.json()["error"] == "Unidentifiable"
