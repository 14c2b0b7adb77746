"""Ten end-to-end acceptance checks, one verdict line each.

Run ``pytest tests/test_acceptance.py -v -s`` to see every verdict line
(``CRITERION n: PASS/FAIL -- detail``); without ``-s`` the lines of passing
checks stay captured and only a failing check shows its line.

Criterion 2 is a known miss, kept red on purpose: once the zero-point-phase
scale is calibrated so the three-wave coupling at 0.386 flux quanta lands
exactly on -11.6 MHz x 2pi, the self-Kerr there is fully determined and
computes to -0.3926 MHz x 2pi, 0.003 MHz (0.8% of |K|) outside the target
band -0.31 +/- 0.08.  The band is asserted as-is rather than widened; the
README discusses why no honest knob moves the value into the band.
"""

import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from snailkit import (
    DecayTrace,
    DispersiveModel,
    PopulationConvention,
    QubitParams,
    ResonatorGeometry,
    SnailConfig,
    TlsParams,
    coherence_decomposition,
    conditional_pi_population,
    extract_peaks,
    fit_chi_comb,
    fit_flux_curve,
    fit_t1_trace,
    fit_tls_curve,
    invert_for_g0,
    loss_budget,
    poisson_weights,
    qubit_induced_kerr,
    snail_potential,
    solve_mode,
    solve_mode_frequency,
    splitting_comb,
    synth_number_splitting,
    taylor_coeffs,
    thermal_temperature,
    tls_t1,
)
from snailkit.cli import run_command
from snailkit.units import TWO_PI, ghz_to_rad, rad_to_ghz, rad_to_khz, rad_to_mhz

BETA, L_J = 0.0993, 629e-12
GEOM = ResonatorGeometry(omega_r0=ghz_to_rad(8.87), z_c=58.7)
QUBIT = QubitParams(
    omega_q0=TWO_PI * 5.222e9,
    alpha_q=TWO_PI * 450e6,
    g0=TWO_PI * 53e6,
    gamma_q=TWO_PI * 280e3,
)
OMEGA_OP = ghz_to_rad(4.296)


def _solve(flux):
    return solve_mode(SnailConfig(beta=BETA, l_j=L_J, phi_ext=TWO_PI * flux), GEOM)


def _verdict(num: int, ok: bool, detail: str) -> bool:
    state = "PASS" if ok else "FAIL"
    print(f"CRITERION {num}: {state} -- {detail}", file=sys.stderr, flush=True)
    return ok


def test_criterion_01_kerr_free_flux_location(tmp_path):
    """CLI `kerr-free` lands at the measured zero-Kerr bias for both devices."""
    stars = []
    codes = []
    for name, beta, lj_ph in (("main", "0.0993", "629"), ("second", "0.095", "600")):
        out = tmp_path / f"{name}.json"
        codes.append(
            run_command(
                [
                    "kerr-free", "--beta", beta, "--l-j-ph", lj_ph,
                    "--omega-r0-ghz", "8.87", "--z-c-ohm", "58.7",
                    "--out", str(out),
                ]
            )
        )
        stars.append(json.loads(out.read_text())["results"]["phi_star_phi0"])
    ok = (
        codes == [0, 0]
        and abs(stars[0] - 0.392) <= 0.010
        and abs(stars[1] - 0.39) <= 0.01
    )
    detail = (
        f"kerr-free bias {stars[0]:.4f} (target 0.392+-0.010) and "
        f"{stars[1]:.4f} (target 0.39+-0.01) flux quanta"
    )
    assert _verdict(1, ok, detail)


def test_criterion_02_couplings_at_operating_flux():
    """Calibrated pipeline at 0.386 flux quanta: |g4| band and self-Kerr band."""
    sol = _solve(0.386)
    g4_mhz = rad_to_mhz(sol.g4)
    kerr_mhz = rad_to_mhz(sol.kerr)
    ok_g4 = 0.128 * 0.75 <= abs(g4_mhz) <= 0.128 * 1.25
    ok_k = abs(kerr_mhz - (-0.31)) <= 0.08
    detail = (
        f"|g4|/2pi {abs(g4_mhz):.4f} MHz (target 0.128 +-25%), "
        f"K/2pi {kerr_mhz:.4f} MHz (target -0.31+-0.08; the calibrated value "
        f"misses the band edge by {abs(kerr_mhz + 0.39):.4f} MHz -- known, "
        f"asserted as-is)"
    )
    assert _verdict(2, ok_g4 and ok_k, detail)


def test_criterion_03_mode_frequencies():
    """Solved mode frequency at zero and operating flux, 2% bands."""
    f0 = rad_to_ghz(_solve(0.0).omega_s)
    fop = rad_to_ghz(_solve(0.386).omega_s)
    ok = abs(f0 - 5.14) <= 0.02 * 5.14 and abs(fop - 4.31) <= 0.02 * 4.31
    detail = (
        f"mode at 5.1 GHz scale: {f0:.4f} (target 5.14 +-2%), "
        f"operating point {fop:.4f} (target 4.31 +-2%) GHz"
    )
    assert _verdict(3, ok, detail)


def test_criterion_04_flux_fit_coverage():
    """100-seed Monte Carlo: 3-stderr coverage of all three fitted knobs."""
    fluxes = np.linspace(0.0, 0.45, 21)
    truth = np.array([_solve(f).omega_s for f in fluxes])
    sigma = TWO_PI * 1e6
    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        noisy = truth + rng.normal(0.0, sigma, truth.shape)
        res = fit_flux_curve(fluxes, noisy, GEOM.z_c, sigma=np.full_like(truth, sigma))
        hits += (
            abs(res.params["beta"] - BETA) <= 3.0 * res.stderr["beta"]
            and abs(res.params["l_j"] - L_J) <= 3.0 * res.stderr["l_j"]
            and abs(res.params["omega_r0"] - GEOM.omega_r0)
            <= 3.0 * res.stderr["omega_r0"]
        )
    elapsed = time.perf_counter() - t0
    ok = hits >= 95
    detail = f"3-stderr coverage {hits}/100 seeds (need >=95), {elapsed:.1f}s"
    assert _verdict(4, ok, detail)


def test_criterion_05_coupling_inversion_and_inherited_kerr():
    """Invert the 3.143 MHz shift for g0; qubit-inherited Kerr stays tiny."""
    chi0 = TWO_PI * 3.143e6
    alpha_q = TWO_PI * 450e6
    g_lo = invert_for_g0(chi0, TWO_PI * 912e6, alpha_q)
    g_hi = invert_for_g0(chi0, TWO_PI * 926e6, alpha_q)
    ok_g = abs(rad_to_mhz(g_lo) - 53.0) <= 2.0
    g4 = TWO_PI * 0.128e6
    k_lo = qubit_induced_kerr(g4, TWO_PI * 53e6, TWO_PI * 912e6)
    k_hi = qubit_induced_kerr(g4, TWO_PI * 53e6, TWO_PI * 926e6)
    ok_k = all(
        9.0 <= abs(rad_to_khz(k)) <= 11.0 and abs(k) < chi0 / 300.0
        for k in (k_lo, k_hi)
    )
    detail = (
        f"g0/2pi {rad_to_mhz(g_lo):.2f} MHz at 912 MHz detuning (target 53+-2; "
        f"926 MHz endpoint gives {rad_to_mhz(g_hi):.2f}), |K_sq|/2pi "
        f"{abs(rad_to_khz(k_lo)):.2f}/{abs(rad_to_khz(k_hi)):.2f} kHz "
        f"(target 9-11 and < chi0/300 = {rad_to_khz(chi0 / 300.0):.2f} kHz)"
    )
    assert _verdict(5, ok_g and ok_k, detail)


def test_criterion_06_number_splitting_round_trip():
    """Synthetic comb shape plus peak-extraction round trip of both shifts."""
    model = DispersiveModel(
        omega_c=OMEGA_OP,
        omega_q=QUBIT.omega_q0,
        chi0=TWO_PI * 3.143e6,
        chi_prime=TWO_PI * 35e3,
        k_sq=0.0,
        delta0=TWO_PI * 912e6,
    )
    centers, weights = splitting_comb(2.4, model)
    n_visible = int(np.sum(weights > 0.005))
    spacing = abs(centers[1] - centers[0])
    ok_shape = (
        n_visible >= 9
        and abs(rad_to_mhz(spacing) - 3.14) <= 0.05
        and spacing >= 9.0 * QUBIT.gamma_q
    )

    pad = TWO_PI * 15e6
    freq = np.linspace(centers.min() - pad, centers.max() + pad, 12001)
    spec = synth_number_splitting(2.4, model, QUBIT, freq)
    clean = fit_chi_comb(extract_peaks(spec, spacing_hint=model.chi0))
    ok_clean = abs(clean.params["chi0"] - model.chi0) < TWO_PI * 1e3

    rng = np.random.default_rng(6)
    amp = np.abs(spec.amp + rng.normal(0.0, 1e-3 * spec.amp.max(), freq.size))
    noisy = type(spec)(freq=freq, amp=amp, meta=spec.meta)
    res = fit_chi_comb(extract_peaks(noisy, spacing_hint=model.chi0))
    ok_fit = all(
        abs(res.params[key] - truth) <= 3.0 * res.stderr[key]
        for key, truth in (("chi0", model.chi0), ("chi_prime", model.chi_prime))
    )
    detail = (
        f"{n_visible} peaks above 0.5% weight (need >=9), first spacing "
        f"{rad_to_mhz(spacing):.3f} MHz (target 3.14+-0.05, "
        f"{spacing / QUBIT.gamma_q:.1f}x linewidth, need >=9x), shifts "
        f"recovered within 3 stderr on seeded data"
    )
    assert _verdict(6, ok_shape and ok_clean and ok_fit, detail)


def test_criterion_07_t1_fit_and_quality_factor():
    """Ring-down fit on a seeded noisy trace, then the Q = omega*T1 identity."""
    t1_true, alpha0 = 19.2e-6, math.sqrt(5.8)
    tau = np.linspace(0.0, 100e-6, 101)
    pop = conditional_pi_population(
        alpha0, tau, t1_true, PopulationConvention.VACUUM_EXCITES
    )
    rng = np.random.default_rng(17)
    pop = np.clip(pop + rng.normal(0.0, 0.01, tau.size), 0.0, 1.0)
    res = fit_t1_trace(DecayTrace(tau=tau, pop=pop, alpha0=alpha0))
    t1 = res.params["t1"]
    q1 = OMEGA_OP * t1
    ok = abs(t1 - t1_true) <= 0.2e-6 and abs(q1 - 5.18e5) <= 0.01 * 5.18e5
    detail = (
        f"fitted T1 {t1 * 1e6:.3f} us (target 19.2+-0.2), "
        f"Q1 = omega*T1 = {q1:.4g} (target 5.18e5 +-1%)"
    )
    assert _verdict(7, ok, detail)


def test_criterion_08_tls_constants_and_round_trip():
    """Saturable-defect T1 anchors plus a 10%-noise three-constant refit."""
    tls = TlsParams(f_delta_tls=4.5e-6, n_c=0.1, delta_other=1.3e-6, t_res=0.058)
    t1_hot = tls_t1(5.8, OMEGA_OP, tls)
    t1_cold = tls_t1(0.0, OMEGA_OP, tls)
    ok_anchor = abs(t1_hot - 20e-6) <= 1e-6 and 6.5e-6 <= t1_cold <= 8.5e-6

    n_bar = np.geomspace(1e-3, 100.0, 25)
    rng = np.random.default_rng(23)
    noisy = tls_t1(n_bar, OMEGA_OP, tls) * (1.0 + rng.normal(0.0, 0.1, n_bar.size))
    res = fit_tls_curve(n_bar, noisy, OMEGA_OP, tls.t_res)
    ok_fit = res.converged and all(
        abs(res.params[key] - truth) <= 3.0 * res.stderr[key]
        for key, truth in (
            ("f_delta_tls", tls.f_delta_tls),
            ("n_c", tls.n_c),
            ("delta_other", tls.delta_other),
        )
    )
    detail = (
        f"T1 at 5.8 photons {t1_hot * 1e6:.2f} us (target 20+-1), at zero "
        f"photons {t1_cold * 1e6:.2f} us (target 6.5-8.5); all three "
        f"constants within 3 stderr on 10%-noise data"
    )
    assert _verdict(8, ok_anchor and ok_fit, detail)


def test_criterion_09_scalar_coherence_anchors():
    """Thermometry, dephasing split, and the additive loss budget."""
    t_mk = thermal_temperature(0.03, OMEGA_OP) * 1e3
    ok_temp = abs(t_mk - 58.0) <= 1.0

    t_phi_zero = coherence_decomposition(6.92e-6, 8e-6)
    t_phi_op = coherence_decomposition(1.42e-6, 8e-6)
    ok_phi = abs(t_phi_zero - 12.2e-6) <= 0.1e-6 and abs(t_phi_op - 1.6e-6) <= 0.1e-6

    budget = loss_budget(
        g0=TWO_PI * 53e6, delta0=TWO_PI * 926e6, t1_qubit=20e-6,
        gamma_c=2070.0, gamma_f=477.0, omega_c=OMEGA_OP,
        delta_other=1.3e-6, gamma_q=170.0,
    )
    ok_budget = (
        abs(budget.gamma_total - 2717.0) <= 1.0
        and abs(budget.t_total - 59e-6) <= 1e-6
        and abs(budget.t_other - 28e-6) <= 1e-6
    )
    computed = loss_budget(
        g0=TWO_PI * 53e6, delta0=TWO_PI * 912e6, t1_qubit=20e-6,
        gamma_c=2070.0, gamma_f=477.0, omega_c=OMEGA_OP,
        delta_other=1.3e-6,
    )
    ok_channel = abs(computed.gamma_q - 170.0) <= 2.0
    detail = (
        f"bath {t_mk:.2f} mK (target 58+-1), pure dephasing "
        f"{t_phi_zero * 1e6:.2f}/{t_phi_op * 1e6:.2f} us (targets 12.2/1.6 "
        f"+-0.1), budget {budget.gamma_total:.1f} Hz (target 2717+-1), "
        f"T {budget.t_total * 1e6:.2f} us (59+-1), leftover "
        f"{budget.t_other * 1e6:.2f} us (28+-1), computed qubit channel "
        f"{computed.gamma_q:.1f} Hz (170+-2)"
    )
    assert _verdict(9, ok_temp and ok_phi and ok_budget and ok_channel, detail)


def test_criterion_10_invariant_suites():
    """Spot-check each family of invariants; full suites run under pytest."""
    checks = []

    cfg = SnailConfig(beta=0.11, l_j=500e-12, phi_ext=1.3)
    checks.append(
        all(
            abs(snail_potential(cfg, p + 6.0 * math.pi) - snail_potential(cfg, p))
            < 1e-10
            for p in (-4.0, -0.7, 0.9, 3.3)
        )
    )
    even = SnailConfig(beta=0.11, l_j=500e-12, phi_ext=0.0)
    checks.append(
        all(
            abs(snail_potential(even, p) - snail_potential(even, -p)) < 1e-12
            for p in (0.3, 1.1, 2.5)
        )
    )

    c2 = taylor_coeffs(SnailConfig(beta=BETA, l_j=L_J, phi_ext=TWO_PI * 0.2)).c2
    w = solve_mode_frequency(c2, GEOM, L_J)
    a = math.pi / (2.0 * GEOM.omega_r0)
    rhs = GEOM.z_c * c2 / L_J
    checks.append(abs(w * math.tan(a * w) - rhs) / rhs < 1e-10)
    grid = np.linspace(1e-6, GEOM.omega_r0 * (1.0 - 1e-9), 2001)
    sign = np.sign(grid * np.sin(a * grid) - rhs * np.cos(a * grid))
    checks.append(int(np.sum(np.abs(np.diff(sign)) > 0)) == 1)

    w_pois = poisson_weights(1.7, 40)
    checks.append(
        abs(w_pois.sum() - 1.0) < 1e-9
        and abs(np.dot(np.arange(41), w_pois) - 1.7**2) < 1e-6
    )

    tls = TlsParams(f_delta_tls=4.5e-6, n_c=0.1, delta_other=1.3e-6, t_res=0.058)
    curve = tls_t1(np.geomspace(1e-3, 1e3, 40), OMEGA_OP, tls)
    checks.append(bool(np.all(np.diff(curve) >= -1e-18)))

    fluxes = np.linspace(0.0, 0.45, 21)
    truth = np.array([_solve(f).omega_s for f in fluxes])
    noisy = truth + np.random.default_rng(1).normal(0.0, TWO_PI * 1e6, truth.shape)
    first = fit_flux_curve(fluxes, noisy, GEOM.z_c)
    second = fit_flux_curve(fluxes, noisy, GEOM.z_c)
    checks.append(first.params == second.params and first.stderr == second.stderr)

    here = Path(__file__).resolve().parent
    suites = [
        "test_circuit.py", "test_modes.py", "test_dispersive.py",
        "test_dynamics.py", "test_leastsq.py", "test_estimation.py",
        "test_datasets.py", "test_device.py", "test_plots.py",
        "test_service.py", "test_cli.py",
    ]
    checks.append(all((here / name).is_file() for name in suites))

    ok = all(checks)
    detail = (
        f"{sum(checks)}/{len(checks)} spot checks pass (potential parity and "
        f"periodicity, unique mode root with small residual, Poisson envelope, "
        f"saturation monotonicity, fit determinism, {len(suites)} per-module "
        f"suites on disk); everything runs under the single command `pytest`"
    )
    assert _verdict(10, ok, detail)
