"""Typed operations behind the service routes.

Each function takes a request model, converts wire units (cyclic GHz / MHz /
kHz / Hz, microseconds, millikelvin, flux quanta) into the library's internal
angular/SI conventions, calls the core, and packs the answer back into a
response model.  Library exceptions propagate; the HTTP layer and the CLI
map them to status codes / exit codes.
"""

from __future__ import annotations

import math

import numpy as np

from ..circuit import SnailConfig, snail_potential, taylor_coeffs
from ..constants import physical_constants
from ..device import DeviceSheet
from ..dispersive import (
    QubitParams,
    Spectrum,
    build_dispersive_model,
    linewidth_sigma,
    splitting_comb,
    synth_number_splitting,
)
from ..dynamics import (
    DecayTrace,
    PopulationConvention,
    coherence_decomposition,
    intrinsic_decoherence_rate,
    loss_budget,
    thermal_temperature,
)
from ..errors import BadInput
from ..estimation import (
    extract_peaks,
    fit_amplitude_calibration,
    fit_chi_comb,
    fit_flux_curve,
    fit_t1_trace,
    fit_tls_curve,
)
from ..leastsq import FitResult
from ..modes import ResonatorGeometry, find_kerr_free_flux, flux_sweep, solve_mode
from ..units import (
    TWO_PI,
    ghz_to_rad,
    khz_to_rad,
    mhz_to_rad,
    rad_to_ghz,
    rad_to_khz,
    rad_to_mhz,
    s_to_us,
    us_to_s,
)
from . import models as m


def _circuit(spec: m.CircuitSpec, flux_phi0: float = 0.0) -> tuple[SnailConfig, ResonatorGeometry]:
    cfg = SnailConfig(beta=spec.beta, l_j=spec.l_j_ph * 1e-12, phi_ext=TWO_PI * flux_phi0)
    geom = ResonatorGeometry(omega_r0=ghz_to_rad(spec.omega_r0_ghz), z_c=spec.z_c_ohm)
    return cfg, geom


def _qubit(spec: m.QubitSpec) -> QubitParams:
    return QubitParams(
        omega_q0=ghz_to_rad(spec.omega_q0_ghz),
        alpha_q=mhz_to_rad(spec.alpha_q_mhz),
        g0=mhz_to_rad(spec.g0_mhz),
        gamma_q=khz_to_rad(spec.gamma_q_khz),
    )


def _fit_response(res: FitResult, params: dict, stderr: dict) -> m.FitResponse:
    return m.FitResponse(
        params={k: float(v) for k, v in params.items()},
        stderr={k: float(v) for k, v in stderr.items()},
        residual_norm=float(res.residual_norm),
        iterations=int(res.iterations),
        converged=bool(res.converged),
        convention_notes=res.convention_notes,
        extra={k: float(v) for k, v in res.extra.items()},
    )


# ------------------------------------------------------------------ circuit


def potential(req: m.PotentialRequest) -> m.PotentialResponse:
    """Inductive potential around its minimum, plus the Taylor data there."""
    cfg = SnailConfig(
        beta=req.beta, l_j=req.l_j_ph * 1e-12, phi_ext=TWO_PI * req.phi_ext_phi0
    )
    exp = taylor_coeffs(cfg)
    phi = np.linspace(
        exp.phi_min - 0.5 * req.span_rad, exp.phi_min + 0.5 * req.span_rad, req.points
    )
    u = snail_potential(cfg, phi)
    k = physical_constants()
    e_j_ghz = rad_to_ghz(cfg.josephson_energy() / k.hbar)
    return m.PotentialResponse(
        phi_rad=[float(v) for v in phi],
        u_ej=[float(v) for v in u],
        phi_min_rad=float(exp.phi_min),
        c2=float(exp.c2),
        c3=float(exp.c3),
        c4=float(exp.c4),
        e_j_ghz=float(e_j_ghz),
    )


def sweep(req: m.SweepRequest) -> m.SweepResponse:
    """Mode frequency and nonlinearity columns over a flux interval."""
    if not req.flux_to_phi0 > req.flux_from_phi0:
        raise BadInput("flux_to_phi0 must exceed flux_from_phi0")
    cfg, geom = _circuit(req.circuit)
    fluxes = np.linspace(req.flux_from_phi0, req.flux_to_phi0, req.points)
    table = flux_sweep(cfg, geom, fluxes)

    def col(x, conv=lambda v: v):
        return [None if not math.isfinite(v) else float(conv(v)) for v in x]

    return m.SweepResponse(
        phi_ext_phi0=[float(v) for v in table.phi_ext_phi0],
        freq_ghz=col(table.omega_s, rad_to_ghz),
        c2=col(table.c2),
        c3=col(table.c3),
        c4=col(table.c4),
        g3_mhz=col(table.g3, rad_to_mhz),
        g4_mhz=col(table.g4, rad_to_mhz),
        kerr_mhz=col(table.kerr, rad_to_mhz),
        degenerate_indices=[int(i) for i in np.flatnonzero(table.degenerate)],
    )


def kerr_free(req: m.KerrFreeRequest) -> m.KerrFreeResponse:
    """Locate the flux where the self-Kerr of the mode crosses zero."""
    cfg, geom = _circuit(req.circuit)
    phi_star = find_kerr_free_flux(
        cfg, geom, window=(req.window_from_phi0, req.window_to_phi0)
    )
    sol = solve_mode(cfg.at_flux(TWO_PI * phi_star), geom)
    return m.KerrFreeResponse(
        phi_star_phi0=float(phi_star),
        freq_ghz=float(rad_to_ghz(sol.omega_s)),
        kerr_at_star_khz=float(rad_to_khz(sol.kerr)),
        g3_at_star_mhz=float(rad_to_mhz(sol.g3)),
    )


# --------------------------------------------------------------------- fits


def fit_flux(req: m.FitFluxRequest) -> m.FitResponse:
    """Recover (beta, L_J, bare line frequency) from a tuning curve."""
    p0 = {}
    if req.beta0 is not None:
        p0["beta"] = req.beta0
    if req.l_j_ph0 is not None:
        p0["l_j"] = req.l_j_ph0 * 1e-12
    if req.omega_r0_ghz0 is not None:
        p0["omega_r0"] = ghz_to_rad(req.omega_r0_ghz0)
    res = fit_flux_curve(
        np.asarray(req.flux_phi0, dtype=float),
        ghz_to_rad(np.asarray(req.freq_ghz, dtype=float)),
        z_c=req.z_c_ohm,
        sigma=None if req.sigma_ghz is None else ghz_to_rad(np.asarray(req.sigma_ghz)),
        p0=p0 or None,
    )
    params = {
        "beta": res.params["beta"],
        "l_j_ph": res.params["l_j"] * 1e12,
        "omega_r0_ghz": rad_to_ghz(res.params["omega_r0"]),
    }
    stderr = {
        "beta": res.stderr["beta"],
        "l_j_ph": res.stderr["l_j"] * 1e12,
        "omega_r0_ghz": rad_to_ghz(res.stderr["omega_r0"]),
    }
    return _fit_response(res, params, stderr)


def synth_splitting(req: m.SynthSplittingRequest) -> m.SpectrumResponse:
    """Simulate a photon-number-splitting spectrum (optionally noisy)."""
    qubit = _qubit(req.qubit)
    model = build_dispersive_model(
        ghz_to_rad(req.omega_s_ghz), qubit, chi_prime=khz_to_rad(req.chi_prime_khz)
    )
    centers, weights = splitting_comb(req.alpha, model, n_max=req.n_max)
    sigma = linewidth_sigma(qubit.gamma_q)
    visible = centers[weights > 1e-6]
    lo = (
        ghz_to_rad(req.freq_from_ghz)
        if req.freq_from_ghz is not None
        else visible.min() - 12.0 * sigma
    )
    hi = (
        ghz_to_rad(req.freq_to_ghz)
        if req.freq_to_ghz is not None
        else visible.max() + 12.0 * sigma
    )
    if not hi > lo:
        raise BadInput("empty frequency window for the synthetic spectrum")
    freq = np.linspace(lo, hi, req.points)
    spec = synth_number_splitting(req.alpha, model, qubit, freq, n_max=req.n_max)
    amp = spec.amp
    if req.noise > 0.0:
        rng = np.random.default_rng(req.seed)
        amp = amp + rng.normal(0.0, req.noise * amp.max(), amp.shape)
    return m.SpectrumResponse(
        freq_ghz=[float(rad_to_ghz(v)) for v in freq],
        amp=[float(v) for v in amp],
        chi0_mhz=float(rad_to_mhz(model.chi0)),
        omega_q_ghz=float(rad_to_ghz(model.omega_q)),
        omega_c_ghz=float(rad_to_ghz(model.omega_c)),
        n_max=int(spec.meta["n_max"]),
        alpha_abs=float(abs(req.alpha)),
    )


def fit_splitting(req: m.FitSplittingRequest) -> m.FitSplittingResponse:
    """Extract comb peaks from a spectrum and regress the dispersive shifts."""
    spec = Spectrum(
        freq=ghz_to_rad(np.asarray(req.freq_ghz, dtype=float)),
        amp=np.asarray(req.amp, dtype=float),
        meta={"kind": "wire"},
    )
    peaks = extract_peaks(spec, spacing_hint=mhz_to_rad(req.spacing_hint_mhz))
    res = fit_chi_comb(peaks)
    fit = _fit_response(
        res,
        params={
            "chi0_mhz": rad_to_mhz(res.params["chi0"]),
            "chi_prime_khz": rad_to_khz(res.params["chi_prime"]),
        },
        stderr={
            "chi0_mhz": rad_to_mhz(res.stderr["chi0"]),
            "chi_prime_khz": rad_to_khz(res.stderr["chi_prime"]),
        },
    )
    peak_models = [
        m.PeakModel(
            n=int(p.n),
            center_ghz=float(rad_to_ghz(p.center)),
            width_mhz=float(rad_to_mhz(p.width)),
            weight=float(p.weight),
            low_confidence=bool(p.low_confidence),
        )
        for p in peaks
    ]
    return m.FitSplittingResponse(
        peaks=peak_models,
        n_low_confidence=sum(p.low_confidence for p in peaks),
        fit=fit,
    )


def fit_t1(req: m.FitT1Request) -> m.FitResponse:
    """Energy relaxation time from a conditional-pi ring-down trace."""
    trace = DecayTrace(
        tau=us_to_s(np.asarray(req.tau_us, dtype=float)),
        pop=np.asarray(req.pop, dtype=float),
        alpha0=req.alpha0,
    )
    conv = None if req.convention is None else PopulationConvention(req.convention)
    res = fit_t1_trace(trace, convention=conv)
    return _fit_response(
        res,
        params={"t1_us": s_to_us(res.params["t1"])},
        stderr={"t1_us": s_to_us(res.stderr["t1"])},
    )


def fit_tls(req: m.FitTlsRequest) -> m.FitResponse:
    """TLS loss-model parameters from T1 vs. circulating photon number."""
    res = fit_tls_curve(
        np.asarray(req.n_bar, dtype=float),
        us_to_s(np.asarray(req.t1_us, dtype=float)),
        omega_c=ghz_to_rad(req.omega_c_ghz),
        t_res=req.t_res_mk * 1e-3,
        sigma=None if req.sigma_us is None else us_to_s(np.asarray(req.sigma_us)),
    )
    return _fit_response(res, params=dict(res.params), stderr=dict(res.stderr))


def fit_calibration(req: m.FitCalibrationRequest) -> m.FitResponse:
    """Drive-amplitude to |alpha| proportionality constant."""
    res = fit_amplitude_calibration(
        np.asarray(req.drive_amp, dtype=float), np.asarray(req.alpha_abs, dtype=float)
    )
    return _fit_response(
        res, params={"k_cal": res.params["k"]}, stderr={"k_cal": res.stderr["k"]}
    )


# ------------------------------------------------------------------ budgets


def budget(req: m.BudgetRequest) -> m.BudgetResponse:
    """Combine inherited-qubit, TLS, and flux-noise losses into one T1 figure."""
    b = loss_budget(
        g0=mhz_to_rad(req.g0_mhz),
        delta0=mhz_to_rad(req.delta0_mhz),
        t1_qubit=us_to_s(req.t1_qubit_us),
        gamma_c=req.gamma_c_hz,
        gamma_f=req.gamma_f_hz,
        omega_c=ghz_to_rad(req.omega_c_ghz),
        delta_other=req.delta_other,
        gamma_q=req.gamma_q_hz,
    )
    return m.BudgetResponse(
        gamma_q_hz=float(b.gamma_q),
        gamma_c_hz=float(b.gamma_c),
        gamma_f_hz=float(b.gamma_f),
        gamma_total_hz=float(b.gamma_total),
        t_total_us=float(s_to_us(b.t_total)),
        t_other_us=None if not math.isfinite(b.t_other) else float(s_to_us(b.t_other)),
    )


def coherence(req: m.CoherenceRequest) -> m.CoherenceResponse:
    """Split a total coherence time into relaxation and pure dephasing."""
    if req.t_s_us is not None:
        t_s = us_to_s(req.t_s_us)
    elif req.q_s is not None and req.omega_s_ghz is not None:
        rate = intrinsic_decoherence_rate(ghz_to_rad(req.omega_s_ghz), req.q_s)
        t_s = 1.0 / rate
    else:
        raise BadInput("provide t_s_us, or q_s together with omega_s_ghz")
    t1 = us_to_s(req.t1_us)
    t_phi = coherence_decomposition(t_s, t1)
    return m.CoherenceResponse(
        t_s_us=float(s_to_us(t_s)),
        t1_us=float(req.t1_us),
        t_phi_us=float(s_to_us(t_phi)),
    )


# ------------------------------------------------------------- device report


def device_report(req: m.DeviceReportRequest) -> m.DeviceReportResponse:
    """Everything derivable from a device sheet, grouped into sections.

    Sections that need keys the sheet does not carry are skipped, with the
    missing keys listed under ``skipped`` so a report is honest about holes.
    """
    sheet = DeviceSheet(name=req.name, values=dict(req.values), provenance={})
    geom = sheet.geometry()
    sections: dict = {}
    skipped: dict[str, list[str]] = {}

    def mode_block(flux: float) -> dict:
        sol = solve_mode(sheet.snail_config(flux_phi0=flux), geom)
        return {
            "flux_phi0": flux,
            "freq_ghz": rad_to_ghz(sol.omega_s),
            "phi_zpf": sol.phi_zpf,
            "g3_mhz": rad_to_mhz(sol.g3),
            "g4_mhz": rad_to_mhz(sol.g4),
            "kerr_mhz": rad_to_mhz(sol.kerr),
        }

    op_flux = sheet.values.get("op_flux_phi0", 0.0)
    sections["mode_zero_flux"] = mode_block(0.0)
    if op_flux:
        sections["mode_op_flux"] = mode_block(op_flux)

    try:
        phi_star = find_kerr_free_flux(sheet.snail_config(), geom)
        sections["kerr_free"] = {
            "phi_star_phi0": phi_star,
            "freq_ghz": mode_block(phi_star)["freq_ghz"],
        }
    except Exception as exc:  # scan window may genuinely miss a crossing
        skipped["kerr_free"] = [type(exc).__name__]

    qubit_keys = ("omega_q0_ghz", "alpha_q_mhz", "g0_mhz", "gamma_q_khz")
    if all(sheet.has(k) for k in qubit_keys):
        qubit = sheet.qubit()
        omega_s = ghz_to_rad(sections.get("mode_op_flux", sections["mode_zero_flux"])["freq_ghz"])
        model = build_dispersive_model(
            omega_s,
            qubit,
            chi_prime=sheet.si("chi_prime_khz") if sheet.has("chi_prime_khz") else 0.0,
        )
        sections["dispersive"] = {
            "chi0_mhz": rad_to_mhz(model.chi0),
            "delta0_mhz": rad_to_mhz(model.delta0),
            "omega_q_ghz": rad_to_ghz(model.omega_q),
            "omega_c_ghz": rad_to_ghz(model.omega_c),
            "dispersive": bool(model.dispersive),
        }
    else:
        skipped["dispersive"] = [k for k in qubit_keys if not sheet.has(k)]

    budget_keys = ("g0_mhz", "omega_q0_ghz", "t1_qubit_us", "loss_gamma_c_hz", "loss_gamma_f_hz", "delta_other")
    if all(sheet.has(k) for k in budget_keys) and "dispersive" in sections:
        b = loss_budget(
            g0=sheet.si("g0_mhz"),
            delta0=mhz_to_rad(sections["dispersive"]["delta0_mhz"]),
            t1_qubit=sheet.si("t1_qubit_us"),
            gamma_c=sheet.raw("loss_gamma_c_hz"),
            gamma_f=sheet.raw("loss_gamma_f_hz"),
            omega_c=mhz_to_rad(1e3 * sections["dispersive"]["omega_c_ghz"]),
            delta_other=sheet.raw("delta_other"),
            gamma_q=sheet.raw("loss_gamma_q_hz") if sheet.has("loss_gamma_q_hz") else None,
        )
        sections["budget"] = {
            "gamma_q_hz": b.gamma_q,
            "gamma_c_hz": b.gamma_c,
            "gamma_f_hz": b.gamma_f,
            "gamma_total_hz": b.gamma_total,
            "t_total_us": s_to_us(b.t_total),
            "t_other_us": None if not math.isfinite(b.t_other) else s_to_us(b.t_other),
        }
    else:
        skipped["budget"] = [k for k in budget_keys if not sheet.has(k)]

    coh = {}
    for tag in ("zero", "op"):
        ts_key, t1_key = f"t_s_{tag}_us", f"t1_{tag}_us"
        if sheet.has(ts_key) and sheet.has(t1_key):
            try:
                t_phi = coherence_decomposition(sheet.si(ts_key), sheet.si(t1_key))
                coh[f"t_phi_{tag}_us"] = s_to_us(t_phi)
            except Exception as exc:
                coh[f"t_phi_{tag}_us"] = None
                coh[f"t_phi_{tag}_error"] = type(exc).__name__
    if coh:
        sections["coherence"] = coh

    if sheet.has("n_bar_residual"):
        freq_ghz = sections.get("mode_op_flux", sections["mode_zero_flux"])["freq_ghz"]
        t = thermal_temperature(sheet.raw("n_bar_residual"), ghz_to_rad(freq_ghz))
        sections["thermometry"] = {
            "n_bar_residual": sheet.raw("n_bar_residual"),
            "temperature_mk": 1e3 * t,
        }

    if skipped:
        sections["skipped"] = skipped
    return m.DeviceReportResponse(name=sheet.name, sections=sections)
