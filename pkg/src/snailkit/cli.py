"""Command-line client for the snailkit toolkit.

Every subcommand builds a typed request, runs it against the service layer
(in-process by default, or a remote server via ``--server URL``), and writes
a JSON report validated against the bundled schema.  Optional side-car
artifacts (CSV tables, SVG plots) land next to it.

Exit codes: 0 success; 2 bad input / validation failure; 3 a fit failed to
converge (the report, if any, is still written).

Human-readable messages go to stderr; ``--out -`` (the default) streams the
JSON report to stdout so commands compose in pipelines.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import httpx
import numpy as np
import pydantic

from . import __version__, errors
from .datasets import load_dataset
from .device import load_device_sheet
from .dynamics import PopulationConvention, TlsParams, conditional_pi_population, tls_t1
from .errors import BadInput, IoError, NoConvergence, SnailkitError
from .plots import emit_plot
from .reports import build_report, write_report
from .service import api
from .service import models as m
from .units import TWO_PI, ghz_to_rad, us_to_s

_ERROR_TYPES = {
    name: obj
    for name, obj in vars(errors).items()
    if isinstance(obj, type) and issubclass(obj, SnailkitError)
}

_OPS = {
    "potential": (api.potential, m.PotentialResponse),
    "sweep": (api.sweep, m.SweepResponse),
    "kerr-free": (api.kerr_free, m.KerrFreeResponse),
    "fit-flux": (api.fit_flux, m.FitResponse),
    "synth-splitting": (api.synth_splitting, m.SpectrumResponse),
    "fit-splitting": (api.fit_splitting, m.FitSplittingResponse),
    "fit-t1": (api.fit_t1, m.FitResponse),
    "fit-tls": (api.fit_tls, m.FitResponse),
    "fit-calibration": (api.fit_calibration, m.FitResponse),
    "budget": (api.budget, m.BudgetResponse),
    "coherence": (api.coherence, m.CoherenceResponse),
    "report": (api.device_report, m.DeviceReportResponse),
}


# ------------------------------------------------------------ service client


def _raise_wire_error(resp: httpx.Response) -> None:
    try:
        body = resp.json()
    except ValueError:
        body = {}
    name = body.get("error", "")
    detail = body.get("detail", f"HTTP {resp.status_code}")
    if not isinstance(detail, str):
        detail = json.dumps(detail)
    exc_type = _ERROR_TYPES.get(name, SnailkitError)
    raise exc_type(detail)


def _call(server, op, req, http_client=None):
    """Run one operation in-process, or POST it to a remote service.

    ``http_client`` (any sync httpx.Client, e.g. a FastAPI TestClient) lets
    tests route requests into an in-memory app; otherwise a real client is
    opened against ``server``.
    """
    fn, resp_type = _OPS[op]
    if not server:
        return fn(req)

    def post(client):
        r = client.post(f"/v1/{op}", json=req.model_dump(mode="json"))
        if r.status_code >= 400:
            _raise_wire_error(r)
        return resp_type.model_validate(r.json())

    if http_client is not None:
        return post(http_client)
    with httpx.Client(base_url=server, timeout=300.0) as client:
        return post(client)


# ------------------------------------------------------------------ helpers


def _write_csv(path: str, names: list[str], cols: list) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for row in zip(*cols):
                w.writerow([repr(float(v)) for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _circuit_spec(args) -> m.CircuitSpec:
    """Circuit parameters from a device sheet, CLI flags, or both (flags win)."""
    vals: dict[str, float] = {}
    if getattr(args, "device", None):
        sheet = load_device_sheet(args.device)
        for key in ("beta", "l_j_ph", "omega_r0_ghz", "z_c_ohm"):
            vals[key] = sheet.raw(key)
    for key in ("beta", "l_j_ph", "omega_r0_ghz", "z_c_ohm"):
        v = getattr(args, key)
        if v is not None:
            vals[key] = v
    missing = [k for k in ("beta", "l_j_ph", "omega_r0_ghz", "z_c_ohm") if k not in vals]
    if missing:
        raise BadInput(
            f"missing circuit parameters: {', '.join(missing)} "
            "(pass --device or the individual flags)"
        )
    return m.CircuitSpec(**vals)


def _fit_results(fit: m.FitResponse) -> dict:
    results = {
        "params": fit.params,
        "stderr": fit.stderr,
        "residual_norm": fit.residual_norm,
        "iterations": fit.iterations,
        "converged": fit.converged,
    }
    if fit.convention_notes:
        results["convention_notes"] = fit.convention_notes
    if fit.extra:
        results["extra"] = fit.extra
    return results


def _finish_fit(args, command, inputs, fit: m.FitResponse, extra=None, artifacts=None) -> int:
    results = _fit_results(fit)
    if extra:
        results.update(extra)
    write_report(args.out, build_report(command, inputs, results, artifacts))
    if not fit.converged:
        _say(f"snailkit {command}: fit did not converge; best parameters reported")
        return 3
    return 0


def _add_circuit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--device", help="TOML device sheet supplying circuit parameters")
    p.add_argument("--beta", type=float, help="junction asymmetry ratio")
    p.add_argument("--l-j-ph", type=float, dest="l_j_ph", help="series junction inductance, pH")
    p.add_argument(
        "--omega-r0-ghz", type=float, dest="omega_r0_ghz", help="bare line frequency, GHz"
    )
    p.add_argument("--z-c-ohm", type=float, dest="z_c_ohm", help="line impedance, Ohm")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="JSON report path ('-' = stdout)")
    p.add_argument("--server", default=None, help="base URL of a running snailkit service")


# --------------------------------------------------------------- subcommands


def _cmd_potential(args, http) -> int:
    req = m.PotentialRequest(
        beta=args.beta,
        phi_ext_phi0=args.flux,
        l_j_ph=args.l_j_ph,
        span_rad=args.span_rad,
        points=args.points,
    )
    resp = _call(args.server, "potential", req, http)
    artifacts = {}
    if args.csv:
        _write_csv(args.csv, ["phi_rad", "u_ej"], [resp.phi_rad, resp.u_ej])
        artifacts["csv"] = args.csv
    if args.plot:
        emit_plot(
            None,
            (resp.phi_rad, resp.u_ej),
            args.plot,
            title="inductive potential",
            xlabel="phase (rad)",
            ylabel="U / E_J",
        )
        artifacts["plot"] = args.plot
    inputs = {
        "beta": args.beta,
        "phi_ext_phi0": args.flux,
        "l_j_ph": args.l_j_ph,
        "span_rad": args.span_rad,
        "points": args.points,
    }
    results = {
        "phi_min_rad": resp.phi_min_rad,
        "c2": resp.c2,
        "c3": resp.c3,
        "c4": resp.c4,
        "e_j_ghz": resp.e_j_ghz,
        "n_points": len(resp.phi_rad),
    }
    write_report(args.out, build_report("potential", inputs, results, artifacts))
    return 0


_SWEEP_COLUMNS = ["phi_ext_phi0", "freq_ghz", "c2", "c3", "c4", "g3_mhz", "g4_mhz", "kerr_mhz"]


def _cmd_sweep(args, http) -> int:
    req = m.SweepRequest(
        circuit=_circuit_spec(args),
        flux_from_phi0=args.flux_from,
        flux_to_phi0=args.flux_to,
        points=args.points,
    )
    resp = _call(args.server, "sweep", req, http)
    nan = float("nan")
    cols = [
        resp.phi_ext_phi0,
        *(
            [nan if v is None else v for v in getattr(resp, name)]
            for name in _SWEEP_COLUMNS[1:]
        ),
    ]
    artifacts = {}
    if args.csv:
        _write_csv(args.csv, _SWEEP_COLUMNS, cols)
        artifacts["csv"] = args.csv
    if args.plot:
        flux = np.asarray(cols[0])
        freq = np.asarray(cols[1])
        ok = np.isfinite(freq)
        emit_plot(
            None,
            (flux[ok], freq[ok]),
            args.plot,
            title="flux tuning curve",
            xlabel="external flux (Phi0)",
            ylabel="frequency (GHz)",
        )
        artifacts["plot"] = args.plot
    finite = [v for v in resp.freq_ghz if v is not None]
    results = {
        "n_points": len(resp.phi_ext_phi0),
        "degenerate_indices": resp.degenerate_indices,
        "freq_ghz_min": min(finite) if finite else None,
        "freq_ghz_max": max(finite) if finite else None,
    }
    inputs = {
        "circuit": req.circuit.model_dump(),
        "flux_from_phi0": args.flux_from,
        "flux_to_phi0": args.flux_to,
        "points": args.points,
    }
    write_report(args.out, build_report("sweep", inputs, results, artifacts))
    return 0


def _cmd_kerr_free(args, http) -> int:
    req = m.KerrFreeRequest(
        circuit=_circuit_spec(args),
        window_from_phi0=args.window_from,
        window_to_phi0=args.window_to,
    )
    resp = _call(args.server, "kerr-free", req, http)
    inputs = {
        "circuit": req.circuit.model_dump(),
        "window_from_phi0": args.window_from,
        "window_to_phi0": args.window_to,
    }
    write_report(args.out, build_report("kerr-free", inputs, resp.model_dump()))
    return 0


def _cmd_fit_flux(args, http) -> int:
    data = load_dataset(args.data, "flux_sweep")
    z_c = args.z_c_ohm
    if z_c is None and args.device:
        z_c = load_device_sheet(args.device).raw("z_c_ohm")
    if z_c is None:
        raise BadInput("characteristic impedance required: pass --z-c-ohm or --device")
    sigma = data.sigma
    req = m.FitFluxRequest(
        z_c_ohm=z_c,
        flux_phi0=[float(v) for v in data.col("phi_ext_phi0")],
        freq_ghz=[float(v) for v in data.col("freq_ghz")],
        sigma_ghz=None if sigma is None else [float(v) for v in sigma],
        beta0=args.beta0,
        l_j_ph0=args.l_j_ph0,
        omega_r0_ghz0=args.omega_r0_ghz0,
    )
    fit = _call(args.server, "fit-flux", req, http)
    artifacts = {}
    if args.plot:
        model = None
        try:
            overlay = _call(args.server,
                "sweep",
                m.SweepRequest(
                    circuit=m.CircuitSpec(
                        beta=fit.params["beta"],
                        l_j_ph=fit.params["l_j_ph"],
                        omega_r0_ghz=fit.params["omega_r0_ghz"],
                        z_c_ohm=z_c,
                    ),
                    flux_from_phi0=float(min(req.flux_phi0)),
                    flux_to_phi0=float(max(req.flux_phi0)),
                    points=201,
                ),
                http,
            )
            xs = [x for x, y in zip(overlay.phi_ext_phi0, overlay.freq_ghz) if y is not None]
            ys = [y for y in overlay.freq_ghz if y is not None]
            model = (xs, ys)
        except (SnailkitError, pydantic.ValidationError):
            _say("snailkit fit-flux: skipping model overlay (fitted circuit not plottable)")
        emit_plot(
            (req.flux_phi0, req.freq_ghz),
            model,
            args.plot,
            title="flux tuning fit",
            xlabel="external flux (Phi0)",
            ylabel="frequency (GHz)",
        )
        artifacts["plot"] = args.plot
    inputs = {"data": args.data, "z_c_ohm": z_c, "n_points": len(data)}
    return _finish_fit(args, "fit-flux", inputs, fit, artifacts=artifacts or None)


def _cmd_synth_splitting(args, http) -> int:
    qubit_vals: dict[str, float] = {}
    omega_s = args.omega_s_ghz
    chi_prime = args.chi_prime_khz
    if args.device:
        sheet = load_device_sheet(args.device)
        for key in ("omega_q0_ghz", "alpha_q_mhz", "g0_mhz", "gamma_q_khz"):
            if sheet.has(key):
                qubit_vals[key] = sheet.raw(key)
        if omega_s is None and sheet.has("freq_op_ghz"):
            omega_s = sheet.raw("freq_op_ghz")
        if chi_prime is None and sheet.has("chi_prime_khz"):
            chi_prime = sheet.raw("chi_prime_khz")
    for key in ("omega_q0_ghz", "alpha_q_mhz", "g0_mhz", "gamma_q_khz"):
        v = getattr(args, key)
        if v is not None:
            qubit_vals[key] = v
    missing = [
        k for k in ("omega_q0_ghz", "alpha_q_mhz", "g0_mhz", "gamma_q_khz") if k not in qubit_vals
    ]
    if missing:
        raise BadInput(f"missing qubit parameters: {', '.join(missing)}")
    if omega_s is None:
        raise BadInput("resonator frequency required: --omega-s-ghz or a sheet with freq_op_ghz")
    req = m.SynthSplittingRequest(
        qubit=m.QubitSpec(**qubit_vals),
        omega_s_ghz=omega_s,
        chi_prime_khz=chi_prime if chi_prime is not None else 0.0,
        alpha=args.alpha,
        n_max=args.n_max,
        freq_from_ghz=args.freq_from,
        freq_to_ghz=args.freq_to,
        points=args.points,
        noise=args.noise,
        seed=args.seed,
    )
    resp = _call(args.server, "synth-splitting", req, http)
    artifacts = {}
    if args.csv:
        _write_csv(args.csv, ["freq_ghz", "amp"], [resp.freq_ghz, resp.amp])
        artifacts["csv"] = args.csv
    if args.plot:
        emit_plot(
            None,
            (resp.freq_ghz, resp.amp),
            args.plot,
            title="photon-number splitting (synthetic)",
            xlabel="frequency (GHz)",
            ylabel="response",
        )
        artifacts["plot"] = args.plot
    inputs = {
        "qubit": req.qubit.model_dump(),
        "omega_s_ghz": omega_s,
        "chi_prime_khz": req.chi_prime_khz,
        "alpha": args.alpha,
        "noise": args.noise,
        "seed": args.seed,
        "points": args.points,
    }
    results = {
        "chi0_mhz": resp.chi0_mhz,
        "omega_q_ghz": resp.omega_q_ghz,
        "omega_c_ghz": resp.omega_c_ghz,
        "n_max": resp.n_max,
        "alpha_abs": resp.alpha_abs,
        "n_points": len(resp.freq_ghz),
    }
    write_report(args.out, build_report("synth-splitting", inputs, results, artifacts))
    return 0


def _cmd_fit_splitting(args, http) -> int:
    data = load_dataset(args.data, "spectrum")
    req = m.FitSplittingRequest(
        freq_ghz=[float(v) for v in data.col("freq_ghz")],
        amp=[float(v) for v in data.col("amp")],
        spacing_hint_mhz=args.spacing_hint_mhz,
    )
    resp = _call(args.server, "fit-splitting", req, http)
    artifacts = {}
    if args.plot:
        freq = np.asarray(req.freq_ghz)
        amp = np.asarray(req.amp)
        marker_y = [float(amp[np.abs(freq - p.center_ghz).argmin()]) for p in resp.peaks]
        emit_plot(
            ([p.center_ghz for p in resp.peaks], marker_y),
            (req.freq_ghz, req.amp),
            args.plot,
            title="photon-number splitting fit",
            xlabel="frequency (GHz)",
            ylabel="response",
        )
        artifacts["plot"] = args.plot
    inputs = {
        "data": args.data,
        "spacing_hint_mhz": args.spacing_hint_mhz,
        "n_points": len(data),
    }
    extra = {
        "peaks": [p.model_dump() for p in resp.peaks],
        "n_peaks": len(resp.peaks),
        "n_low_confidence": resp.n_low_confidence,
    }
    return _finish_fit(args, "fit-splitting", inputs, resp.fit, extra, artifacts or None)


def _cmd_fit_t1(args, http) -> int:
    data = load_dataset(args.data, "decay_trace")
    req = m.FitT1Request(
        tau_us=[float(v) for v in data.col("tau_us")],
        pop=[float(v) for v in data.col("pop")],
        alpha0=args.alpha0,
        convention=args.convention,
    )
    fit = _call(args.server, "fit-t1", req, http)
    artifacts = {}
    if args.plot:
        conv = (
            PopulationConvention.COMPLEMENT
            if "convention=complement" in fit.convention_notes
            else PopulationConvention.VACUUM_EXCITES
        )
        tau = np.linspace(min(req.tau_us), max(req.tau_us), 256)
        curve = conditional_pi_population(
            args.alpha0, us_to_s(tau), us_to_s(fit.params["t1_us"]), conv
        )
        emit_plot(
            (req.tau_us, req.pop),
            (tau, curve),
            args.plot,
            title="ring-down fit",
            xlabel="delay (us)",
            ylabel="population",
        )
        artifacts["plot"] = args.plot
    inputs = {"data": args.data, "alpha0": args.alpha0, "n_points": len(data)}
    if args.convention:
        inputs["convention"] = args.convention
    return _finish_fit(args, "fit-t1", inputs, fit, artifacts=artifacts or None)


def _cmd_fit_tls(args, http) -> int:
    data = load_dataset(args.data, "tls_points")
    sigma = data.sigma
    req = m.FitTlsRequest(
        n_bar=[float(v) for v in data.col("n_bar")],
        t1_us=[float(v) for v in data.col("t1_us")],
        omega_c_ghz=args.omega_c_ghz,
        t_res_mk=args.t_res_mk,
        sigma_us=None if sigma is None else [float(v) for v in sigma],
    )
    fit = _call(args.server, "fit-tls", req, http)
    artifacts = {}
    if args.plot:
        nb = np.asarray(req.n_bar)
        grid = np.geomspace(max(nb[nb > 0].min(), 1e-6), nb.max(), 256) if np.any(nb > 0) else nb
        p = TlsParams(
            f_delta_tls=fit.params["f_delta_tls"],
            n_c=fit.params["n_c"],
            delta_other=fit.params["delta_other"],
            t_res=args.t_res_mk * 1e-3,
        )
        curve = tls_t1(grid, ghz_to_rad(args.omega_c_ghz), p) * 1e6
        emit_plot(
            (req.n_bar, req.t1_us),
            (grid, curve),
            args.plot,
            title="TLS saturation fit",
            xlabel="circulating photons",
            ylabel="T1 (us)",
        )
        artifacts["plot"] = args.plot
    inputs = {
        "data": args.data,
        "omega_c_ghz": args.omega_c_ghz,
        "t_res_mk": args.t_res_mk,
        "n_points": len(data),
    }
    return _finish_fit(args, "fit-tls", inputs, fit, artifacts=artifacts or None)


def _cmd_fit_calibration(args, http) -> int:
    data = load_dataset(args.data, "calibration")
    req = m.FitCalibrationRequest(
        drive_amp=[float(v) for v in data.col("drive_amp")],
        alpha_abs=[float(v) for v in data.col("alpha_abs")],
    )
    fit = _call(args.server, "fit-calibration", req, http)
    artifacts = {}
    if args.plot:
        k = fit.params["k_cal"]
        xs = [0.0, max(req.drive_amp)]
        emit_plot(
            (req.drive_amp, req.alpha_abs),
            (xs, [k * x for x in xs]),
            args.plot,
            title="drive calibration",
            xlabel="drive amplitude",
            ylabel="|alpha|",
        )
        artifacts["plot"] = args.plot
    inputs = {"data": args.data, "n_points": len(data)}
    return _finish_fit(args, "fit-calibration", inputs, fit, artifacts=artifacts or None)


def _cmd_budget(args, http) -> int:
    vals: dict[str, float | None] = {}
    if args.device:
        sheet = load_device_sheet(args.device)
        if sheet.has("g0_mhz"):
            vals["g0_mhz"] = sheet.raw("g0_mhz")
        if sheet.has("t1_qubit_us"):
            vals["t1_qubit_us"] = sheet.raw("t1_qubit_us")
        if sheet.has("loss_gamma_c_hz"):
            vals["gamma_c_hz"] = sheet.raw("loss_gamma_c_hz")
        if sheet.has("loss_gamma_f_hz"):
            vals["gamma_f_hz"] = sheet.raw("loss_gamma_f_hz")
        if sheet.has("delta_other"):
            vals["delta_other"] = sheet.raw("delta_other")
        if sheet.has("loss_gamma_q_hz"):
            vals["gamma_q_hz"] = sheet.raw("loss_gamma_q_hz")
        if sheet.has("freq_op_ghz"):
            vals["omega_c_ghz"] = sheet.raw("freq_op_ghz")
            if sheet.has("omega_q0_ghz"):
                vals["delta0_mhz"] = 1e3 * (
                    sheet.raw("omega_q0_ghz") - sheet.raw("freq_op_ghz")
                )
    for key in (
        "g0_mhz",
        "delta0_mhz",
        "t1_qubit_us",
        "gamma_c_hz",
        "gamma_f_hz",
        "omega_c_ghz",
        "delta_other",
        "gamma_q_hz",
    ):
        v = getattr(args, key)
        if v is not None:
            vals[key] = v
    required = (
        "g0_mhz",
        "delta0_mhz",
        "t1_qubit_us",
        "gamma_c_hz",
        "gamma_f_hz",
        "omega_c_ghz",
        "delta_other",
    )
    missing = [k for k in required if k not in vals]
    if missing:
        raise BadInput(f"missing budget inputs: {', '.join(missing)}")
    req = m.BudgetRequest(**vals)
    resp = _call(args.server, "budget", req, http)
    write_report(args.out, build_report("budget", req.model_dump(), resp.model_dump()))
    return 0


def _cmd_coherence(args, http) -> int:
    req = m.CoherenceRequest(
        t1_us=args.t1_us,
        t_s_us=args.t_s_us,
        q_s=args.q_s,
        omega_s_ghz=args.omega_s_ghz,
    )
    resp = _call(args.server, "coherence", req, http)
    inputs = {k: v for k, v in req.model_dump().items() if v is not None}
    write_report(args.out, build_report("coherence", inputs, resp.model_dump()))
    return 0


def _cmd_report(args, http) -> int:
    sheet = load_device_sheet(args.device)
    req = m.DeviceReportRequest(name=sheet.name, values=dict(sheet.values))
    resp = _call(args.server, "report", req, http)
    inputs = {"device": args.device, "name": sheet.name}
    results = dict(resp.sections)
    results["name"] = resp.name
    write_report(args.out, build_report("report", inputs, results))
    return 0


_HANDLERS = {
    "potential": _cmd_potential,
    "sweep": _cmd_sweep,
    "kerr-free": _cmd_kerr_free,
    "fit-flux": _cmd_fit_flux,
    "synth-splitting": _cmd_synth_splitting,
    "fit-splitting": _cmd_fit_splitting,
    "fit-t1": _cmd_fit_t1,
    "fit-tls": _cmd_fit_tls,
    "fit-calibration": _cmd_fit_calibration,
    "budget": _cmd_budget,
    "coherence": _cmd_coherence,
    "report": _cmd_report,
}


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snailkit",
        description="Model and fit flux-tunable SNAIL-terminated resonators.",
    )
    parser.add_argument("--version", action="version", version=f"snailkit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("potential", help="inductive potential and Taylor data at one flux")
    _add_common(p)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--flux", type=float, required=True, help="external flux, Phi0")
    p.add_argument("--l-j-ph", type=float, dest="l_j_ph", default=600.0)
    p.add_argument("--span-rad", type=float, dest="span_rad", default=TWO_PI)
    p.add_argument("--points", type=int, default=481)
    p.add_argument("--csv", help="write the sampled curve as CSV")
    p.add_argument("--plot", help="write an SVG plot")

    p = sub.add_parser("sweep", help="mode frequency and nonlinearities vs. flux")
    _add_common(p)
    _add_circuit_flags(p)
    p.add_argument("--flux-from", type=float, dest="flux_from", default=0.0)
    p.add_argument("--flux-to", type=float, dest="flux_to", default=0.5)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--csv", help="write the sweep table as CSV")
    p.add_argument("--plot", help="write an SVG tuning curve")

    p = sub.add_parser("kerr-free", help="locate the Kerr-free flux point")
    _add_common(p)
    _add_circuit_flags(p)
    p.add_argument("--window-from", type=float, dest="window_from", default=0.25)
    p.add_argument("--window-to", type=float, dest="window_to", default=0.5)

    p = sub.add_parser("fit-flux", help="fit circuit parameters to a tuning curve")
    _add_common(p)
    p.add_argument("--data", required=True, help="flux-sweep CSV (phi_ext_phi0, freq_ghz)")
    p.add_argument("--device", help="device sheet supplying the line impedance")
    p.add_argument("--z-c-ohm", type=float, dest="z_c_ohm")
    p.add_argument("--beta0", type=float, help="optional seed override")
    p.add_argument("--l-j-ph0", type=float, dest="l_j_ph0", help="optional seed override, pH")
    p.add_argument(
        "--omega-r0-ghz0", type=float, dest="omega_r0_ghz0", help="optional seed override, GHz"
    )
    p.add_argument("--plot", help="write an SVG of data and fitted curve")

    p = sub.add_parser("synth-splitting", help="synthesize a number-splitting spectrum")
    _add_common(p)
    p.add_argument("--device", help="device sheet supplying qubit parameters")
    p.add_argument("--omega-q0-ghz", type=float, dest="omega_q0_ghz")
    p.add_argument("--alpha-q-mhz", type=float, dest="alpha_q_mhz")
    p.add_argument("--g0-mhz", type=float, dest="g0_mhz")
    p.add_argument("--gamma-q-khz", type=float, dest="gamma_q_khz")
    p.add_argument("--omega-s-ghz", type=float, dest="omega_s_ghz", help="resonator frequency")
    p.add_argument("--chi-prime-khz", type=float, dest="chi_prime_khz", default=None)
    p.add_argument("--alpha", type=float, required=True, help="coherent amplitude |alpha|")
    p.add_argument("--n-max", type=int, dest="n_max", default=None)
    p.add_argument("--freq-from", type=float, dest="freq_from", help="grid start, GHz")
    p.add_argument("--freq-to", type=float, dest="freq_to", help="grid end, GHz")
    p.add_argument("--points", type=int, default=4001)
    p.add_argument("--noise", type=float, default=0.0, help="RMS noise / peak amplitude")
    p.add_argument("--seed", type=int, required=True, help="RNG seed (reproducibility)")
    p.add_argument("--csv", help="write the spectrum as CSV")
    p.add_argument("--plot", help="write an SVG spectrum")

    p = sub.add_parser("fit-splitting", help="fit dispersive shifts to a splitting spectrum")
    _add_common(p)
    p.add_argument("--data", required=True, help="spectrum CSV (freq_ghz, amp)")
    p.add_argument(
        "--spacing-hint-mhz",
        type=float,
        dest="spacing_hint_mhz",
        required=True,
        help="rough comb spacing",
    )
    p.add_argument("--plot", help="write an SVG with detected peaks")

    p = sub.add_parser("fit-t1", help="fit T1 to a conditional-pi ring-down trace")
    _add_common(p)
    p.add_argument("--data", required=True, help="decay-trace CSV (tau_us, pop)")
    p.add_argument("--alpha0", type=float, required=True, help="calibrated initial |alpha|")
    p.add_argument(
        "--convention",
        choices=("vacuum_excites", "complement"),
        default=None,
        help="readout convention (default: auto-select)",
    )
    p.add_argument("--plot", help="write an SVG of trace and fit")

    p = sub.add_parser("fit-tls", help="fit the TLS loss model to T1 vs. photon number")
    _add_common(p)
    p.add_argument("--data", required=True, help="TLS CSV (n_bar, t1_us)")
    p.add_argument("--omega-c-ghz", type=float, dest="omega_c_ghz", required=True)
    p.add_argument("--t-res-mk", type=float, dest="t_res_mk", required=True)
    p.add_argument("--plot", help="write an SVG of data and fitted saturation curve")

    p = sub.add_parser("fit-calibration", help="fit the drive-amplitude calibration line")
    _add_common(p)
    p.add_argument("--data", required=True, help="calibration CSV (drive_amp, alpha_abs)")
    p.add_argument("--plot", help="write an SVG of the calibration line")

    p = sub.add_parser("budget", help="combine loss channels into a T1 budget")
    _add_common(p)
    p.add_argument("--device", help="device sheet supplying budget inputs")
    p.add_argument("--g0-mhz", type=float, dest="g0_mhz")
    p.add_argument("--delta0-mhz", type=float, dest="delta0_mhz")
    p.add_argument("--t1-qubit-us", type=float, dest="t1_qubit_us")
    p.add_argument("--gamma-c-hz", type=float, dest="gamma_c_hz")
    p.add_argument("--gamma-f-hz", type=float, dest="gamma_f_hz")
    p.add_argument("--omega-c-ghz", type=float, dest="omega_c_ghz")
    p.add_argument("--delta-other", type=float, dest="delta_other")
    p.add_argument(
        "--gamma-q-hz",
        type=float,
        dest="gamma_q_hz",
        help="override the inherited-loss rate instead of computing it",
    )

    p = sub.add_parser("coherence", help="split T_s into relaxation and pure dephasing")
    _add_common(p)
    p.add_argument("--t1-us", type=float, dest="t1_us", required=True)
    p.add_argument("--t-s-us", type=float, dest="t_s_us")
    p.add_argument("--q-s", type=float, dest="q_s")
    p.add_argument("--omega-s-ghz", type=float, dest="omega_s_ghz")

    p = sub.add_parser("report", help="derive everything a device sheet supports")
    _add_common(p)
    p.add_argument("--device", required=True, help="TOML device sheet")

    return parser


def run_command(argv=None, http_client=None) -> int:
    """Parse and execute one CLI invocation; returns the process exit code.

    ``http_client`` is used for ``--server`` requests when given, so tests
    can route them into an in-memory app via a TestClient.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else (0 if code is None else 2)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    handler = _HANDLERS[args.command]
    try:
        return handler(args, http_client)
    except NoConvergence as exc:
        _say(f"snailkit {args.command}: no convergence: {exc}")
        return 3
    except SnailkitError as exc:
        _say(f"snailkit {args.command}: {type(exc).__name__}: {exc}")
        return 2
    except pydantic.ValidationError as exc:
        _say(f"snailkit {args.command}: invalid input: {exc}")
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
