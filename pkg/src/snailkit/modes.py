"""Half-wave resonator terminated by a SNAIL: mode frequency and couplings.

The resonator is a transmission-line section (characteristic impedance
``z_c``, bare half-wave frequency ``omega_r0``) shorted at one end by the
SNAIL branch inductance.  Loading pulls the fundamental mode down from
``omega_r0`` according to the transcendental relation

    omega * tan((pi/2) * omega / omega_r0) = z_c * c2 / l_j

where ``c2`` is the curvature of the (normalized) SNAIL potential at its
minimum and ``l_j`` the array inductance, so the branch inductance seen by
the line is ``l_j / c2``.  The zero-point phase spread across the SNAIL then
follows from a lumped series-oscillator equivalent of the loaded line, and
the cubic/quartic phase terms of the junction potential turn into the
three- and four-wave coupling rates ``g3``/``g4`` and the self-Kerr.

Frequencies here are angular (rad/s).  External flux arguments named
``*_phi0`` are in units of the flux quantum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import PotentialExpansion, SnailConfig, minimum_phase_batch, taylor_coeffs
from .constants import physical_constants
from .errors import BadInput, DegeneratePotential, InvalidBracket, NoSignChange

TWO_PI = 2.0 * np.pi

# Dimensionless fudge on the zero-point phase, fixed once against the cubic
# coupling of the reference device at its operating flux and frozen.  That it
# lands within 0.3% of unity is the sanity check on the lumped-equivalent
# recipe in zero_point_phase.  Recompute via calibrate_zpf_scale().
ZPF_CALIBRATION = 1.0028994527173938


@dataclass(frozen=True)
class ResonatorGeometry:
    """Bare line parameters: half-wave frequency (rad/s) and impedance (ohm)."""

    omega_r0: float
    z_c: float

    def __post_init__(self):
        if not np.isfinite(self.omega_r0) or self.omega_r0 <= 0.0:
            raise BadInput(f"omega_r0 must be positive; got {self.omega_r0!r}")
        if not np.isfinite(self.z_c) or self.z_c <= 0.0:
            raise BadInput(f"z_c must be positive; got {self.z_c!r}")


@dataclass(frozen=True)
class ModeSolution:
    """Loaded-mode summary at one flux bias.

    Attributes
    ----------
    omega_s : float
        Mode angular frequency, 0 < omega_s < omega_r0.
    phi_zpf : float
        Zero-point phase spread across the SNAIL (dimensionless).
    g3, g4 : float
        Three- and four-wave coupling rates (rad/s), signs following the
        potential's cubic/quartic derivatives.
    kerr : float
        Self-Kerr 12*(g4 - 5*g3**2/omega_s) (rad/s), stored pre-computed but
        always recomputable bit-for-bit from the other fields.
    """

    omega_s: float
    phi_zpf: float
    g3: float
    g4: float
    kerr: float


def solve_mode_frequency(c2: float, geom: ResonatorGeometry, l_j: float) -> float:
    """Root of the loaded-line frequency relation on (0, omega_r0).

    Uses bisection on the pole-free form  w*sin(a*w) - R*cos(a*w)  (same root,
    no tangent divergence) down to 1e-3 relative, then Newton steps on the
    original relation, with the bracket capped just below omega_r0.

    Parameters
    ----------
    c2 : potential curvature at the minimum (dimensionless, > 0).
    geom : bare line parameters.
    l_j : SNAIL array inductance in henries.

    Raises
    ------
    InvalidBracket : if any input is non-positive (no root exists).
    """
    if not np.isfinite(c2) or c2 <= 0.0:
        raise InvalidBracket(f"c2 must be positive; got {c2!r}")
    if l_j <= 0.0:
        raise InvalidBracket(f"l_j must be positive; got {l_j!r}")
    rhs = geom.z_c * c2 / l_j
    a = np.pi / (2.0 * geom.omega_r0)

    def f(w):
        return w * np.sin(a * w) - rhs * np.cos(a * w)

    lo = 0.0
    hi = geom.omega_r0 * (1.0 - 1e-9)
    if f(hi) <= 0.0:  # pragma: no cover - unreachable for positive inputs
        raise InvalidBracket("frequency relation has no sign change below omega_r0")
    while (hi - lo) > 1e-3 * geom.omega_r0:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    w = 0.5 * (lo + hi)
    for _ in range(60):
        co = np.cos(a * w)
        si = np.sin(a * w)
        h = w * si / co - rhs
        if abs(h) <= 1e-13 * rhs:
            break
        dh = si / co + a * w / co**2
        w_new = w - h / dh
        if not lo <= w_new <= hi:
            w_new = 0.5 * (lo + hi)
        if f(w_new) > 0.0:
            hi = w_new
        else:
            lo = w_new
        w = w_new
    return float(w)


def _line_inductance_weight(x: float):
    """Series-equivalent weight of the line's inductive energy at w = x*omega_r0.

    Obtained by matching value and slope of the open line's input reactance
    with a series LC at the operating frequency; tends to 1 as x -> 1 (the
    unloaded half-wave limit) and diverges as x -> 0.
    """
    half = 0.5 * np.pi * x
    return 0.5 * (1.0 / np.sin(half) ** 2 - (2.0 / (np.pi * x)) / np.tan(half))


def zero_point_phase(
    omega_s: float,
    c2: float,
    geom: ResonatorGeometry,
    l_j: float,
    scale: float = ZPF_CALIBRATION,
) -> float:
    """Zero-point phase spread across the SNAIL at the solved mode frequency.

    The loaded line is reduced to a series lumped oscillator: branch
    inductance ``l_s = l_j/c2``, line equivalent inductance
    ``l_r = (pi*z_c/(2*omega_r0)) * u(omega_s/omega_r0)``; the SNAIL takes the
    inductive-participation share p = l_s/(l_s+l_r) of the half-quantum of
    mode energy, and the phase variance follows from the branch inductance:

        phi_zpf**2 = (2e/hbar)**2 * (hbar*omega_s/2) * l_s * p

    ``scale`` is the frozen overall calibration (see ZPF_CALIBRATION).
    """
    if omega_s <= 0.0 or omega_s >= geom.omega_r0:
        raise BadInput("omega_s must lie strictly between 0 and omega_r0")
    if c2 <= 0.0 or l_j <= 0.0:
        raise BadInput("c2 and l_j must be positive")
    k = physical_constants()
    l_s = l_j / c2
    x = omega_s / geom.omega_r0
    l_r = (np.pi * geom.z_c / (2.0 * geom.omega_r0)) * _line_inductance_weight(x)
    p = l_s / (l_s + l_r)
    val = np.sqrt((2.0 * k.e / k.hbar) ** 2 * (k.hbar * omega_s / 2.0) * l_s * p)
    return float(scale * val)


def nonlinear_couplings(
    expansion: PotentialExpansion,
    omega_s: float,
    phi_zpf: float,
    l_j: float,
) -> tuple[float, float]:
    """Three- and four-wave coupling rates (rad/s) from the expansion.

    g3 = (E_J/hbar) * (c3/3!) * phi_zpf**3 and g4 = (E_J/hbar) * (c4/4!) *
    phi_zpf**4; the factorials live here because the expansion stores bare
    derivatives.
    """
    if phi_zpf <= 0.0:
        raise BadInput(f"phi_zpf must be positive; got {phi_zpf!r}")
    k = physical_constants()
    ej_over_hbar = k.reduced_flux_quantum**2 / (l_j * k.hbar)
    g3 = ej_over_hbar * (expansion.c3 / 6.0) * phi_zpf**3
    g4 = ej_over_hbar * (expansion.c4 / 24.0) * phi_zpf**4
    return float(g3), float(g4)


def kerr_coefficient(g3: float, g4: float, omega_s: float) -> float:
    """Self-Kerr rate 12*(g4 - 5*g3**2/omega_s) in rad/s."""
    if omega_s <= 0.0:
        raise BadInput(f"omega_s must be positive; got {omega_s!r}")
    return 12.0 * (g4 - 5.0 * g3**2 / omega_s)


def solve_mode(
    config: SnailConfig,
    geom: ResonatorGeometry,
    scale: float = ZPF_CALIBRATION,
) -> ModeSolution:
    """Full pointwise pipeline at one flux: expansion -> frequency -> couplings."""
    exp = taylor_coeffs(config)
    omega_s = solve_mode_frequency(exp.c2, geom, config.l_j)
    phi_zpf = zero_point_phase(omega_s, exp.c2, geom, config.l_j, scale=scale)
    g3, g4 = nonlinear_couplings(exp, omega_s, phi_zpf, config.l_j)
    kerr = kerr_coefficient(g3, g4, omega_s)
    return ModeSolution(omega_s=omega_s, phi_zpf=phi_zpf, g3=g3, g4=g4, kerr=kerr)


def calibrate_zpf_scale(
    config: SnailConfig,
    geom: ResonatorGeometry,
    g3_target: float,
) -> float:
    """One-time calibration of the zero-point-phase prefactor.

    Runs the pipeline with unit scale and returns the factor that maps the
    computed cubic coupling onto ``g3_target`` (rad/s).  Used once to fix
    ZPF_CALIBRATION; kept public so the frozen value stays reproducible.
    """
    raw = solve_mode(config, geom, scale=1.0)
    if raw.g3 == 0.0 or g3_target == 0.0 or np.sign(raw.g3) != np.sign(g3_target):
        raise BadInput("calibration anchor must be a nonzero g3 of matching sign")
    return float((g3_target / raw.g3) ** (1.0 / 3.0))


def find_kerr_free_flux(
    config: SnailConfig,
    geom: ResonatorGeometry,
    window: tuple[float, float] = (0.25, 0.5),
) -> float:
    """Flux (in flux quanta) where the self-Kerr crosses zero.

    Scans the window with the full pointwise pipeline, brackets the first
    sign change of K, and bisects until |K| < 2*pi*1 kHz.  ``config.phi_ext``
    is ignored (the flux is the search variable).

    Raises
    ------
    NoSignChange : if K has one sign across the whole window.
    """
    lo_f, hi_f = window
    if not 0.0 <= lo_f < hi_f:
        raise BadInput(f"bad search window {window!r}")

    def kerr_at(frac: float) -> float:
        return solve_mode(config.at_flux(TWO_PI * frac), geom).kerr

    n_scan = 41
    grid = np.linspace(lo_f, hi_f, n_scan)
    kerrs = [kerr_at(f) for f in grid]
    bracket = None
    for i in range(n_scan - 1):
        if kerrs[i] == 0.0:
            return float(grid[i])
        if kerrs[i] * kerrs[i + 1] < 0.0:
            bracket = (grid[i], grid[i + 1], kerrs[i])
            break
    if bracket is None:
        raise NoSignChange(
            f"self-Kerr does not change sign on ({lo_f}, {hi_f}) flux quanta"
        )
    lo, hi, k_lo = bracket
    tol = TWO_PI * 1e3
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        k_mid = kerr_at(mid)
        if abs(k_mid) < tol:
            return float(mid)
        if k_lo * k_mid < 0.0:
            hi = mid
        else:
            lo, k_lo = mid, k_mid
    return float(0.5 * (lo + hi))  # pragma: no cover - tol is loose vs bisection


@dataclass(frozen=True)
class FluxSweepTable:
    """Columnar result of a flux sweep; flagged rows hold NaN values.

    ``degenerate`` marks rows whose potential had no unique well (those rows
    are kept, value columns NaN), so consumers can see exactly where the
    model broke down instead of silently losing grid points.
    """

    phi_ext_phi0: np.ndarray
    omega_s: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    c4: np.ndarray
    g3: np.ndarray
    g4: np.ndarray
    kerr: np.ndarray
    degenerate: np.ndarray


def flux_sweep(
    config: SnailConfig,
    geom: ResonatorGeometry,
    fluxes_phi0,
) -> FluxSweepTable:
    """Pointwise pipeline mapped over a flux-ordered grid (flux quanta).

    Deliberately a literal per-row map of :func:`solve_mode` -- batching must
    not change a single bit relative to pointwise calls.
    """
    fluxes = np.asarray(fluxes_phi0, dtype=float)
    if fluxes.ndim != 1 or fluxes.size == 0:
        raise BadInput("flux grid must be a non-empty 1-d array")
    if np.any(np.diff(fluxes) <= 0.0):
        raise BadInput("flux grid must be strictly increasing")
    n = fluxes.size
    cols = {name: np.full(n, np.nan) for name in ("omega_s", "c2", "c3", "c4", "g3", "g4", "kerr")}
    degenerate = np.zeros(n, dtype=bool)
    for i, frac in enumerate(fluxes):
        try:
            cfg = config.at_flux(TWO_PI * frac)
            exp = taylor_coeffs(cfg)
            sol = solve_mode(cfg, geom)
        except DegeneratePotential:
            degenerate[i] = True
            continue
        cols["omega_s"][i] = sol.omega_s
        cols["c2"][i] = exp.c2
        cols["c3"][i] = exp.c3
        cols["c4"][i] = exp.c4
        cols["g3"][i] = sol.g3
        cols["g4"][i] = sol.g4
        cols["kerr"][i] = sol.kerr
    return FluxSweepTable(phi_ext_phi0=fluxes, degenerate=degenerate, **cols)


def mode_frequency_batch(
    beta: float,
    l_j: float,
    geom: ResonatorGeometry,
    phi_ext: np.ndarray,
) -> np.ndarray:
    """Vectorized mode frequencies for many flux biases (radians).

    Fast path for fitting loops: vectorized minimum search, curvature, and
    root solve.  Pinned by tests to agree with the pointwise pipeline to
    better than 1e-10 relative; not used by flux_sweep, which stays a literal
    map.
    """
    phi_ext = np.asarray(phi_ext, dtype=float)
    if l_j <= 0.0:
        raise InvalidBracket(f"l_j must be positive; got {l_j!r}")
    phi_min = minimum_phase_batch(beta, phi_ext)
    c2 = beta * np.cos(phi_min) + np.cos((phi_ext - phi_min) / 3.0) / 3.0
    rhs = geom.z_c * c2 / l_j
    a = np.pi / (2.0 * geom.omega_r0)
    lo = np.zeros_like(rhs)
    hi = np.full_like(rhs, geom.omega_r0 * (1.0 - 1e-9))
    for _ in range(24):
        mid = 0.5 * (lo + hi)
        pos = mid * np.sin(a * mid) - rhs * np.cos(a * mid) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    w = 0.5 * (lo + hi)
    for _ in range(8):
        co = np.cos(a * w)
        si = np.sin(a * w)
        h = w * si / co - rhs
        dh = si / co + a * w / co**2
        w = np.clip(w - h / dh, lo, hi)
    return w
