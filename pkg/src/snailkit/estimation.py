"""Fit pipelines: from measured (or synthesized) curves back to parameters.

Five concrete pipelines sit on top of the generic engine in
:mod:`snailkit.leastsq`:

- flux curve  -> (beta, l_j, omega_r0) through the full mode-solver physics;
- spectrum    -> per-peak Gaussian estimates (photon-number comb);
- peak comb   -> (chi0, chi_prime) from adjacent spacings;
- decay trace -> t1, with automatic readout-convention selection;
- T1-vs-power -> the three TLS loss constants;
- drive calibration -> the amplitude-to-alpha slope.

Each pipeline scales its parameters and residuals to order one internally
(frequencies in cyclic GHz/MHz, times in microseconds, log10 for the loss
tangents) so the engine's fixed tolerances bite, then converts back to SI /
angular units for the returned FitResult.  x-axes are treated as exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersive import Spectrum
from .dynamics import DecayTrace, PopulationConvention, conditional_pi_population, tls_t1
from .errors import (
    BadInput,
    InsufficientPeaks,
    NoConvergence,
    NoPeaksFound,
    Unidentifiable,
)
from .leastsq import FitResult, least_squares
from .modes import ResonatorGeometry, mode_frequency_batch

TWO_PI = 2.0 * math.pi
_GHZ = TWO_PI * 1e9
_MHZ = TWO_PI * 1e6
_US = 1e-6


@dataclass(frozen=True)
class PeakEstimate:
    """One fitted spectral peak: photon index, center/width (rad/s), area weight.

    ``low_confidence`` marks peaks whose windowed Gaussian fit either left a
    large residual or came out wider than the expected spacing allows --
    typically unresolved overlapping lines.
    """

    n: int
    center: float
    width: float
    weight: float
    low_confidence: bool = False

    def __post_init__(self):
        if not self.width > 0.0:
            raise BadInput(f"peak width must be positive; got {self.width!r}")
        if self.weight < 0.0:
            raise BadInput(f"peak weight must be non-negative; got {self.weight!r}")


def _check_usable(result: FitResult, what: str) -> FitResult:
    vals = list(result.params.values()) + [result.residual_norm]
    if not all(map(math.isfinite, vals)):
        raise NoConvergence(f"{what} produced non-finite estimates", result=result)
    return result


def fit_flux_curve(
    flux_phi0,
    omega_s,
    z_c: float,
    sigma=None,
    p0: dict | None = None,
) -> FitResult:
    """Recover (beta, l_j, omega_r0) from a frequency-vs-flux curve.

    Runs the full potential-minimum -> curvature -> transcendental-root
    physics at every trial point (vectorized).  The line impedance ``z_c`` is
    held fixed; the three shape parameters are fitted.

    Parameters
    ----------
    flux_phi0 : external flux values in flux quanta.
    omega_s : measured mode frequencies (rad/s).
    z_c : characteristic impedance (ohm), not fitted.
    sigma : optional per-point frequency uncertainties (rad/s).
    p0 : optional seed overrides, keys among {"beta", "l_j", "omega_r0"}.

    Returns FitResult with params/stderr keyed "beta" (dimensionless),
    "l_j" (henries), "omega_r0" (rad/s).
    """
    flux = np.asarray(flux_phi0, dtype=float)
    w = np.asarray(omega_s, dtype=float)
    if flux.ndim != 1 or flux.shape != w.shape:
        raise BadInput("flux and frequency arrays must be matching 1-d")
    if flux.size < 3:
        raise BadInput("need at least 3 flux points")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise BadInput("frequencies must be positive and finite")
    span = float(flux.max() - flux.min())
    notes = []
    if flux.size < 5 or span < 0.3:
        notes.append(
            f"thin data ({flux.size} points over {span:.3g} flux quanta); "
            "stderr may be unreliable"
        )

    # Seeds: bare frequency a bit above the highest observed point; curvature
    # ratio between the stiffest and softest flux gives beta; the stiffest
    # point then sets the inductance.
    omega_r0_seed = 1.5 * float(w.max())
    a = math.pi / (2.0 * omega_r0_seed)
    s = w * np.tan(a * w) / z_c  # = c2/l_j under the seed omega_r0
    ratio = float(s.max() / s.min())
    beta_seed = min(max((ratio - 1.0) / (3.0 * (ratio + 1.0)), 1e-3), 0.3)
    lj_seed = (beta_seed + 1.0 / 3.0) / float(s.max())
    if p0:
        beta_seed = p0.get("beta", beta_seed)
        lj_seed = p0.get("l_j", lj_seed)
        omega_r0_seed = p0.get("omega_r0", omega_r0_seed)

    phi_ext = TWO_PI * flux
    y = w / _GHZ
    sig = None if sigma is None else np.asarray(sigma, dtype=float) / _GHZ

    def model(x, q):
        beta, s_lj, s_w = q
        if not 0.0 < beta < 0.5 or s_lj <= 0.0 or s_w <= 0.0:
            return np.full(x.size, 1e6)
        geom = ResonatorGeometry(omega_r0=s_w * omega_r0_seed, z_c=z_c)
        try:
            return mode_frequency_batch(beta, s_lj * lj_seed, geom, x) / _GHZ
        except BadInput:
            return np.full(x.size, 1e6)

    res = least_squares(
        model,
        [beta_seed, 1.0, 1.0],
        phi_ext,
        y,
        sigma=sig,
        names=("beta", "s_lj", "s_w"),
    )
    params = {
        "beta": res.params["beta"],
        "l_j": res.params["s_lj"] * lj_seed,
        "omega_r0": res.params["s_w"] * omega_r0_seed,
    }
    stderr = {
        "beta": res.stderr["beta"],
        "l_j": res.stderr["s_lj"] * lj_seed,
        "omega_r0": res.stderr["s_w"] * omega_r0_seed,
    }
    if res.convention_notes:
        notes.append(res.convention_notes)
    out = FitResult(
        params=params,
        stderr=stderr,
        residual_norm=res.residual_norm,
        iterations=res.iterations,
        converged=res.converged,
        convention_notes="; ".join(notes),
    )
    return _check_usable(out, "flux-curve fit")


def _gaussian(x, q):
    amp, center, width = q
    return amp * np.exp(-0.5 * ((x - center) / width) ** 2)


def _noise_estimate(amp: np.ndarray) -> float:
    """Robust noise scale from the median absolute first difference."""
    d = np.diff(amp)
    mad = np.median(np.abs(d - np.median(d)))
    return float(1.4826 * mad / math.sqrt(2.0))


def extract_peaks(spectrum: Spectrum, spacing_hint: float) -> list[PeakEstimate]:
    """Locate and fit the comb peaks of a number-splitting spectrum.

    Local maxima above 1% of the global maximum seed windowed per-peak
    Gaussian fits (window +-0.45 * spacing_hint, width seeded at hint/10).
    Peaks come back ordered by descending frequency and indexed n = 0, 1, ...
    (the highest-frequency line is the vacuum peak).  Peaks whose fit left a
    residual much larger than the noise, or whose width rivals the expected
    spacing (unresolved overlap), carry ``low_confidence=True``.

    Raises
    ------
    NoPeaksFound : if nothing rises above the detection threshold.
    """
    if not spacing_hint > 0.0:
        raise BadInput(f"spacing hint must be positive; got {spacing_hint!r}")
    freq, amp = spectrum.freq, spectrum.amp
    peak_amp = float(amp.max())
    if not peak_amp > 0.0:
        raise NoPeaksFound("spectrum has no positive signal")
    # Work in normalized coordinates: amplitudes scaled by the global maximum,
    # frequencies by the spacing hint, so the engine's fixed tolerances and
    # finite-difference steps see order-one numbers.
    amp_n = amp / peak_amp
    noise = _noise_estimate(amp_n)
    # Detection floor: 1% of the tallest line, lifted to 8x the noise level
    # when the baseline is too loud for the nominal floor to mean anything.
    # The 8x margin also covers rectified (magnitude) baselines, where the
    # first-difference estimator under-reads the true noise by ~40%.
    thresh = max(0.01, 8.0 * noise) * peak_amp
    interior = (amp[1:-1] > amp[:-2]) & (amp[1:-1] >= amp[2:]) & (amp[1:-1] >= thresh)
    idx = np.nonzero(interior)[0] + 1
    if idx.size == 0:
        raise NoPeaksFound("no local maxima above the detection floor")
    # One candidate per comb slot: strongest first, suppress rivals within
    # half a spacing of anything already accepted.
    idx = idx[np.argsort(-amp[idx])]
    kept: list[int] = []
    for i in idx:
        if all(abs(freq[i] - freq[j]) > 0.5 * spacing_hint for j in kept):
            kept.append(int(i))
    idx = np.array(sorted(kept))
    half_window = 0.45 * spacing_hint
    peaks: list[PeakEstimate] = []
    for i in idx:
        mask = np.abs(freq - freq[i]) <= half_window
        if mask.sum() < 5:
            mask = np.abs(freq - freq[i]) <= 2.0 * half_window
        if mask.sum() < 5:
            peaks.append(
                PeakEstimate(
                    n=0,
                    center=float(freq[i]),
                    width=spacing_hint / 10.0,
                    weight=float(amp[i] * spacing_hint / 10.0 * math.sqrt(TWO_PI)),
                    low_confidence=True,
                )
            )
            continue
        x = (freq[mask] - freq[i]) / spacing_hint
        yv = amp_n[mask]
        res = least_squares(
            _gaussian,
            [float(amp_n[i]), 0.0, 0.1],
            x,
            yv,
            names=("amp", "center", "width"),
        )
        a_fit = abs(res.params["amp"])
        c_fit = res.params["center"]
        w_fit = abs(res.params["width"])
        if not (math.isfinite(c_fit) and w_fit > 0.0):
            continue
        if abs(c_fit) > 0.9 or w_fit > 2.0:
            # The windowed fit ran away from its window: whatever triggered
            # this candidate, it is not a coherent line at this position.
            continue
        rms = math.sqrt(res.residual_norm / x.size)
        shaky = rms > 0.01 * a_fit + 3.0 * noise
        too_wide = 2.0 * math.sqrt(2.0 * math.log(2.0)) * w_fit > 0.6
        peaks.append(
            PeakEstimate(
                n=0,
                center=float(freq[i] + c_fit * spacing_hint),
                width=float(w_fit * spacing_hint),
                weight=float(a_fit * peak_amp * w_fit * spacing_hint * math.sqrt(TWO_PI)),
                low_confidence=bool(shaky or too_wide),
            )
        )
    if not peaks:
        raise NoPeaksFound("all candidate peaks failed their windowed fits")
    peaks.sort(key=lambda p: -p.center)
    return [
        PeakEstimate(
            n=k,
            center=p.center,
            width=p.width,
            weight=p.weight,
            low_confidence=p.low_confidence,
        )
        for k, p in enumerate(peaks)
    ]


def fit_chi_comb(peaks: list[PeakEstimate]) -> FitResult:
    """Dispersive shift and its photon-number drift from comb spacings.

    Adjacent spacings center(n-1) - center(n) are regressed against
    chi(n) = chi0 + chi_prime*(n-1)/2.  Input order does not matter; peaks
    are re-sorted by descending center.

    Raises
    ------
    InsufficientPeaks : with fewer than 3 peaks (2 spacings needed).
    """
    if len(peaks) < 3:
        raise InsufficientPeaks(f"need >= 3 peaks for a comb fit; got {len(peaks)}")
    ordered = sorted(peaks, key=lambda p: -p.center)
    centers = np.array([p.center for p in ordered])
    spacings = -np.diff(centers)  # spacing n: center(n-1) - center(n), n = 1..K-1
    ns = np.arange(1, centers.size)

    def model(x, q):
        chi0_mhz, chip_mhz = q
        return chi0_mhz + chip_mhz * (x - 1.0) / 2.0

    res = least_squares(
        model,
        [float(np.mean(spacings)) / _MHZ, 0.0],
        ns.astype(float),
        spacings / _MHZ,
        names=("chi0", "chi_prime"),
    )
    out = FitResult(
        params={k: v * _MHZ for k, v in res.params.items()},
        stderr={k: v * _MHZ for k, v in res.stderr.items()},
        residual_norm=res.residual_norm,
        iterations=res.iterations,
        converged=res.converged,
        convention_notes=res.convention_notes,
    )
    return _check_usable(out, "comb fit")


def fit_t1_trace(
    trace: DecayTrace,
    convention: PopulationConvention | None = None,
) -> FitResult:
    """Energy relaxation time from a conditional-pi-pulse ring-down trace.

    The initial amplitude |alpha0| is taken from the trace (calibrated
    separately, held fixed).  With ``convention=None`` both readout
    conventions are fitted and the one with the smaller residual wins; the
    choice and the residual ratio go into convention_notes.

    Returns FitResult with params/stderr key "t1" in seconds.
    """
    n = trace.tau.size
    span_ok = trace.tau.max() >= 100.0 * max(trace.tau.min(), (trace.tau[1] - trace.tau[0]))
    if n < 10 and not span_ok:
        raise BadInput(
            f"trace too thin ({n} points) and too short for a reliable T1 fit"
        )
    nbar0 = abs(trace.alpha0) ** 2
    if nbar0 <= 0.0:
        raise BadInput("trace has zero initial amplitude; nothing decays")

    # Seed from the half-way crossing of the vacuum probability.
    tau_us = trace.tau / _US
    if nbar0 > math.log(2.0):
        rising = trace.pop[-1] >= trace.pop[0]
        pop = trace.pop if rising else 1.0 - trace.pop
        k_half = int(np.argmin(np.abs(pop - 0.5)))
        t_half = max(tau_us[k_half], tau_us[1])
        t1_seed = t_half / math.log(nbar0 / math.log(2.0))
    else:
        t1_seed = float(tau_us[-1] - tau_us[0]) / 3.0
    t1_seed = max(t1_seed, float(tau_us[1]) if tau_us[0] == 0 else float(tau_us[0]))

    def make_model(conv):
        def model(x, q):
            (t1_us,) = q
            if t1_us <= 0.0:
                return np.full(x.size, 1e6)
            return conditional_pi_population(trace.alpha0, x * _US, t1_us * _US, conv)

        return model

    candidates = (
        [convention]
        if convention is not None
        else [PopulationConvention.VACUUM_EXCITES, PopulationConvention.COMPLEMENT]
    )
    fits = [
        (conv, least_squares(make_model(conv), [t1_seed], tau_us, trace.pop, names=("t1",)))
        for conv in candidates
    ]
    fits.sort(key=lambda cf: cf[1].residual_norm)
    best_conv, best = fits[0]
    notes = [f"convention={best_conv.value}"]
    if len(fits) == 2:
        worse = fits[1][1].residual_norm
        ratio = worse / best.residual_norm if best.residual_norm > 0 else math.inf
        notes.append(f"auto-selected (alternative residual x{ratio:.3g})")
    if best.convention_notes:
        notes.append(best.convention_notes)
    out = FitResult(
        params={"t1": best.params["t1"] * _US},
        stderr={"t1": best.stderr["t1"] * _US},
        residual_norm=best.residual_norm,
        iterations=best.iterations,
        converged=best.converged,
        convention_notes="; ".join(notes),
    )
    return _check_usable(out, "t1 fit")


def fit_tls_curve(
    n_bar,
    t1,
    omega_c: float,
    t_res: float,
    sigma=None,
) -> FitResult:
    """TLS loss constants (f_delta_tls, n_c, delta_other) from T1 vs power.

    The bath temperature is held fixed.  All three constants are positive by
    construction: the fit runs in log10 space and standard errors are mapped
    back with the delta method (noted in convention_notes).

    Raises
    ------
    Unidentifiable : when the data only samples the saturated plateau (the
        fitted knee lies a decade or more below the lowest measured n_bar).
    """
    from .dynamics import TlsParams  # local import to avoid cycle at module load

    nb = np.asarray(n_bar, dtype=float)
    t1v = np.asarray(t1, dtype=float)
    if nb.ndim != 1 or nb.shape != t1v.shape or nb.size < 4:
        raise BadInput("need >= 4 matching (n_bar, t1) points")
    if np.any(nb < 0.0) or np.any(t1v <= 0.0):
        raise BadInput("n_bar must be >= 0 and t1 > 0")
    if not omega_c > 0.0:
        raise BadInput("omega_c must be positive")

    inv_q = 1.0 / (t1v * omega_c)
    delta_seed = max(0.8 * float(inv_q.min()), 1e-12)
    nc_seed = math.sqrt(max(float(nb[nb > 0].min()), 1e-6) * float(nb.max()))
    knee = float(inv_q.max()) - delta_seed
    fdelta_seed = max(knee * math.sqrt(1.0 + float(nb.min()) / nc_seed), 1e-12)
    q0 = [math.log10(fdelta_seed), math.log10(nc_seed), math.log10(delta_seed)]

    def model(x, q):
        if np.any(np.abs(q) > 30.0):
            return np.full(x.size, 1e6)
        p = TlsParams(
            f_delta_tls=10.0 ** q[0],
            n_c=10.0 ** q[1],
            delta_other=10.0 ** q[2],
            t_res=t_res,
        )
        return tls_t1(x, omega_c, p) / _US

    sig = None if sigma is None else np.asarray(sigma, dtype=float) / _US
    res = least_squares(
        model, q0, nb, t1v / _US, sigma=sig, names=("f_delta_tls", "n_c", "delta_other")
    )
    params = {k: 10.0**v for k, v in res.params.items()}
    stderr = {k: params[k] * math.log(10.0) * res.stderr[k] for k in params}
    if float(nb[nb > 0].min()) > 10.0 * params["n_c"]:
        raise Unidentifiable(
            "data only samples the saturated plateau (lowest n_bar is more than "
            f"10x the fitted n_c={params['n_c']:.3g}); the knee is unconstrained"
        )
    notes = ["fitted in log10 space; stderr mapped back via delta method"]
    if res.convention_notes:
        notes.append(res.convention_notes)
    out = FitResult(
        params=params,
        stderr=stderr,
        residual_norm=res.residual_norm,
        iterations=res.iterations,
        converged=res.converged,
        convention_notes="; ".join(notes),
    )
    return _check_usable(out, "TLS fit")


def fit_amplitude_calibration(drive, alpha_abs) -> FitResult:
    """Drive-amplitude calibration |alpha| = k * A (line through the origin).

    Zero-drive rows carry no slope information and are excluded from the
    regression; their mean |alpha| is reported as the residual occupation
    (``extra["residual_alpha"]`` and ``extra["residual_occupation"]``).
    """
    a = np.asarray(drive, dtype=float)
    al = np.asarray(alpha_abs, dtype=float)
    if a.ndim != 1 or a.shape != al.shape or a.size < 2:
        raise BadInput("need >= 2 matching (drive, |alpha|) points")
    if np.any(a < 0.0) or np.any(al < 0.0):
        raise BadInput("drive and |alpha| must be non-negative")
    zero = a == 0.0
    if np.all(zero):
        raise BadInput("all rows have zero drive; slope is undefined")
    residual_alpha = float(al[zero].mean()) if np.any(zero) else 0.0

    x, yv = a[~zero], al[~zero]
    res = least_squares(lambda xx, q: q[0] * xx, [float(yv[-1] / x[-1])], x, yv, names=("k",))
    out = FitResult(
        params=res.params,
        stderr=res.stderr,
        residual_norm=res.residual_norm,
        iterations=res.iterations,
        converged=res.converged,
        convention_notes=res.convention_notes,
        extra={
            "residual_alpha": residual_alpha,
            "residual_occupation": residual_alpha**2,
            "n_zero_drive": int(zero.sum()),
        },
    )
    return _check_usable(out, "calibration fit")
