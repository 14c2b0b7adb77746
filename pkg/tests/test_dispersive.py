"""Dispersive shift algebra, comb construction, and synthetic spectra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snailkit import (
    BadInput,
    DispersiveModel,
    QubitParams,
    Spectrum,
    StraddlePole,
    TruncationTooSmall,
    Unsolvable,
    build_dispersive_model,
    chi_of_n,
    dispersive_shift,
    dressed_frequencies,
    invert_for_g0,
    poisson_weights,
    qubit_induced_kerr,
    splitting_comb,
    synth_number_splitting,
)
from snailkit.units import TWO_PI, mhz_to_rad, rad_to_khz, rad_to_mhz

QUBIT = QubitParams(
    omega_q0=TWO_PI * 5.222e9,
    alpha_q=TWO_PI * 450e6,
    g0=TWO_PI * 53e6,
    gamma_q=TWO_PI * 280e3,
)

# Frozen anchor: model built at the operating-point mode frequency 4.31 GHz.
CHI0_AT_431_MHZ = 3.000042720437454


# ------------------------------------------------------------------ algebra


def test_dispersive_shift_closed_form():
    chi0 = dispersive_shift(mhz_to_rad(53.0), mhz_to_rad(926.0), mhz_to_rad(450.0))
    expected = 53.0**2 * 450.0 / (926.0 * (926.0 - 450.0))
    assert rad_to_mhz(chi0) == pytest.approx(expected, rel=1e-12)
    assert rad_to_mhz(chi0) == pytest.approx(2.8678, abs=1e-4)


def test_invert_round_trip_anchors():
    chi0 = mhz_to_rad(3.143)
    lo = invert_for_g0(chi0, mhz_to_rad(912.0), mhz_to_rad(450.0))
    hi = invert_for_g0(chi0, mhz_to_rad(926.0), mhz_to_rad(450.0))
    assert rad_to_mhz(lo) == pytest.approx(54.2481, abs=1e-4)
    assert rad_to_mhz(hi) == pytest.approx(55.4849, abs=1e-4)
    # and each is an exact inverse
    for g0, d in ((lo, 912.0), (hi, 926.0)):
        back = dispersive_shift(g0, mhz_to_rad(d), mhz_to_rad(450.0))
        assert back == pytest.approx(chi0, rel=1e-12)


@given(
    g0=st.floats(1e6, 200e6),
    delta0=st.floats(500e6, 3e9),
    alpha=st.floats(100e6, 450e6),
)
@settings(max_examples=60, deadline=None)
def test_invert_is_inverse(g0, delta0, alpha):
    chi0 = dispersive_shift(TWO_PI * g0, TWO_PI * delta0, TWO_PI * alpha)
    back = invert_for_g0(chi0, TWO_PI * delta0, TWO_PI * alpha)
    assert back == pytest.approx(TWO_PI * g0, rel=1e-9)


def test_invert_rejects_wrong_sign():
    # inside the straddling band chi0 flips sign; a positive target has no root
    with pytest.raises(Unsolvable):
        invert_for_g0(mhz_to_rad(3.0), mhz_to_rad(200.0), mhz_to_rad(450.0))


def test_pole_guards():
    with pytest.raises(StraddlePole):
        dispersive_shift(mhz_to_rad(53.0), TWO_PI * 500.0, mhz_to_rad(450.0))
    with pytest.raises(StraddlePole):
        dispersive_shift(mhz_to_rad(53.0), mhz_to_rad(450.0) + TWO_PI * 500.0, mhz_to_rad(450.0))
    with pytest.raises(StraddlePole):
        invert_for_g0(mhz_to_rad(3.0), TWO_PI * 100.0, mhz_to_rad(450.0))
    with pytest.raises(StraddlePole):
        qubit_induced_kerr(mhz_to_rad(0.1), mhz_to_rad(53.0), TWO_PI * 999.0)


def test_dressed_frequency_sum_rule():
    omega_s = TWO_PI * 4.31e9
    omega_c, omega_q, delta0 = dressed_frequencies(omega_s, QUBIT.omega_q0, QUBIT.g0)
    # level repulsion conserves the pair sum exactly
    assert omega_c + omega_q == pytest.approx(omega_s + QUBIT.omega_q0, rel=1e-15)
    assert delta0 == QUBIT.omega_q0 - omega_s
    # positive detuning: resonator pushed down, qubit pushed up
    assert omega_c < omega_s
    assert omega_q > QUBIT.omega_q0


def test_chi_of_n_spacing_law():
    chi0, chip = mhz_to_rad(3.143), TWO_PI * 35e3
    assert chi_of_n(1, chi0, chip) == chi0
    assert chi_of_n(3, chi0, chip) == pytest.approx(chi0 + chip, rel=1e-15)
    with pytest.raises(BadInput):
        chi_of_n(0, chi0, chip)


def test_qubit_induced_kerr_anchors():
    g4 = mhz_to_rad(0.128)
    lo = qubit_induced_kerr(g4, mhz_to_rad(53.0), mhz_to_rad(912.0))
    hi = qubit_induced_kerr(g4, mhz_to_rad(53.0), mhz_to_rad(926.0))
    assert rad_to_khz(abs(lo)) == pytest.approx(10.3749, abs=1e-3)
    assert rad_to_khz(abs(hi)) == pytest.approx(10.0635, abs=1e-3)
    assert lo < 0.0 and hi < 0.0  # positive g4 inherits as negative Kerr


def test_build_model_anchor():
    model = build_dispersive_model(TWO_PI * 4.31e9, QUBIT, chi_prime=TWO_PI * 35e3)
    assert rad_to_mhz(model.chi0) == pytest.approx(CHI0_AT_431_MHZ, rel=1e-12)
    assert model.dispersive  # g0/delta0 = 53/912 is comfortably small
    assert model.omega_c < TWO_PI * 4.31e9


def test_build_model_flags_strong_coupling():
    near = QubitParams(
        omega_q0=TWO_PI * 5.222e9, alpha_q=TWO_PI * 450e6,
        g0=TWO_PI * 250e6, gamma_q=TWO_PI * 280e3,
    )
    model = build_dispersive_model(TWO_PI * 4.31e9, near)
    assert not model.dispersive


# ----------------------------------------------------------- photon weights


@given(nbar=st.floats(0.01, 30.0))
@settings(max_examples=60, deadline=None)
def test_poisson_weights_normalize_and_average(nbar):
    alpha = math.sqrt(nbar)
    n_max = math.ceil(nbar + 10.0 * alpha) + 10
    w = poisson_weights(alpha, n_max)
    assert w.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.dot(np.arange(n_max + 1), w) == pytest.approx(nbar, rel=1e-6)
    assert np.all(w >= 0.0)


def test_poisson_weights_complex_amplitude():
    w1 = poisson_weights(1.3, 20)
    w2 = poisson_weights(1.3j, 20)
    np.testing.assert_allclose(w1, w2, rtol=0, atol=0)


# -------------------------------------------------------------------- combs


def _model(chi_prime=TWO_PI * 35e3):
    return build_dispersive_model(TWO_PI * 4.31e9, QUBIT, chi_prime=chi_prime)


def test_comb_spacing_matches_local_shift():
    model = _model()
    centers, _ = splitting_comb(2.4, model)
    spacings = -np.diff(centers)
    for n in range(1, centers.size):
        assert spacings[n - 1] == pytest.approx(
            chi_of_n(n, model.chi0, model.chi_prime), rel=1e-12
        )


def test_comb_auto_truncation():
    centers, w = splitting_comb(2.4, _model())
    assert centers.size - 1 == 31
    assert 1.0 - w.sum() < 1e-12


def test_comb_explicit_truncation_rules():
    model = _model()
    with pytest.raises(BadInput):
        splitting_comb(2.4, model, n_max=20)  # below the hard floor of 21
    with pytest.raises(TruncationTooSmall):
        splitting_comb(2.4, model, n_max=21)  # floor passes, tail ~2e-7 too big
    centers, w = splitting_comb(2.4, model, n_max=40)
    assert centers.size == 41


def test_comb_zero_drift_is_uniform():
    centers, _ = splitting_comb(1.8, _model(chi_prime=0.0))
    spacings = -np.diff(centers)
    np.testing.assert_allclose(spacings, spacings[0], rtol=1e-12)


# ----------------------------------------------------------------- spectra


def test_synth_spectrum_is_normalized():
    model = _model()
    centers, _ = splitting_comb(2.4, model)
    lo = centers.min() - TWO_PI * 20e6
    hi = centers.max() + TWO_PI * 20e6
    freq = np.linspace(lo, hi, 20001)
    spec = synth_number_splitting(2.4, model, QUBIT, freq)
    area = np.trapezoid(spec.amp, freq)
    assert area == pytest.approx(1.0, abs=1e-6)
    assert spec.meta["kind"] == "synthetic"
    assert spec.meta["n_max"] == 31
    assert spec.meta["alpha_abs"] == 2.4


def test_synth_rejects_short_grid():
    model = _model()
    freq = np.linspace(model.omega_q - TWO_PI * 5e6, model.omega_q + TWO_PI * 5e6, 501)
    with pytest.raises(BadInput):
        synth_number_splitting(2.4, model, QUBIT, freq)


def test_synth_peak_positions():
    """Grid maxima land on the comb centers to within one grid step."""
    model = _model()
    centers, w = splitting_comb(2.0, model)
    freq = np.linspace(centers.min() - TWO_PI * 15e6, centers.max() + TWO_PI * 15e6, 60001)
    spec = synth_number_splitting(2.0, model, QUBIT, freq)
    step = freq[1] - freq[0]
    for c, weight in zip(centers, w):
        if weight < 0.05:
            continue
        window = (freq > c - TWO_PI * 1e6) & (freq < c + TWO_PI * 1e6)
        peak = freq[window][np.argmax(spec.amp[window])]
        assert abs(peak - c) <= step


def test_spectrum_validation():
    with pytest.raises(BadInput):
        Spectrum(freq=np.array([1.0, 0.5]), amp=np.array([0.0, 0.0]), meta={})
    with pytest.raises(BadInput):
        Spectrum(freq=np.array([1.0, 2.0]), amp=np.array([0.0, np.inf]), meta={})
    with pytest.raises(BadInput):
        Spectrum(freq=np.array([1.0]), amp=np.array([0.0]), meta={})


def test_qubit_params_validation():
    with pytest.raises(BadInput):
        QubitParams(omega_q0=1.0, alpha_q=-1.0, g0=1.0, gamma_q=1.0)
    with pytest.raises(BadInput):
        QubitParams(omega_q0=1.0, alpha_q=1.0, g0=-1.0, gamma_q=1.0)
    with pytest.raises(BadInput):
        QubitParams(omega_q0=1.0, alpha_q=1.0, g0=1.0, gamma_q=0.0)
