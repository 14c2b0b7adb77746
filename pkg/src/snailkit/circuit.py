"""Inductive potential of the flux-biased SNAIL loop.

The element is a superconducting loop with three identical large junctions in
one arm and a single smaller junction (energy ratio ``beta``) in the other.
With the loop phase pinned by an external flux, the inductive energy in units
of the large-junction energy is

    u(phi) = -beta*cos(phi) - 3*cos((phi_ext - phi)/3)

where ``phi`` is the phase across the small junction and ``phi_ext`` the
reduced external flux.  Everything downstream (mode frequency, cubic/quartic
couplings) only needs the location of the potential minimum and the bare
second/third/fourth derivatives there, so this module keeps those in closed
form and treats minimization as a cheap, robust 1-d search.

All phases are in radians; derivative coefficients are dimensionless (the
potential is normalized by the large-junction energy and no factorial is
folded in -- consumers apply their own 1/n! where needed).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import physical_constants
from .errors import BadInput, DegeneratePotential

# Search-window parameters for find_minimum: the potential is periodic in phi
# with period 6*pi, so one full period centered on phi_ext is scanned.
_SCAN_POINTS = 4096
_STATIONARITY_TOL = 1e-12
_CURVATURE_TOL = 1e-8

_BETA_WARN_THRESHOLD = 0.2
_BETA_MAX = 0.5


@dataclass(frozen=True)
class SnailConfig:
    """Physical knob set of one SNAIL element.

    Attributes:
        beta: small-to-large junction energy ratio, 0 < beta < 0.5 (a warning
            is issued above 0.2, where the single-well assumption starts to
            erode).
        l_j: inductance of the three-junction array in henries (the quantity a
            resonance fit reports); the per-junction inductance is l_j/3.
        phi_ext: reduced external flux in radians, 2*pi*(Phi_ext/Phi0).
    """

    beta: float
    l_j: float
    phi_ext: float

    def __post_init__(self):
        if not np.isfinite(self.beta) or not 0.0 < self.beta < _BETA_MAX:
            raise BadInput(
                f"beta must lie in (0, {_BETA_MAX}); got {self.beta!r}"
            )
        if not np.isfinite(self.l_j) or self.l_j <= 0.0:
            raise BadInput(f"l_j must be a positive inductance; got {self.l_j!r}")
        if not np.isfinite(self.phi_ext):
            raise BadInput(f"phi_ext must be finite; got {self.phi_ext!r}")
        if self.beta > _BETA_WARN_THRESHOLD:
            warnings.warn(
                f"beta={self.beta:.4g} is above {_BETA_WARN_THRESHOLD}; the "
                "potential may be close to multi-well",
                stacklevel=2,
            )

    def josephson_energy(self) -> float:
        """Junction energy scale (hbar/2e)^2 / l_j in joules."""
        c = physical_constants()
        return c.reduced_flux_quantum**2 / self.l_j

    def at_flux(self, phi_ext: float) -> "SnailConfig":
        """Copy of this config biased at a different external flux (radians)."""
        return replace(self, phi_ext=phi_ext)


@dataclass(frozen=True)
class PotentialExpansion:
    """Taylor data of the potential about its minimum.

    ``c`` holds the bare 2nd, 3rd and 4th derivatives of u(phi) at ``phi_min``
    (dimensionless, no factorials folded in).
    """

    phi_min: float
    c: tuple[float, float, float]

    @property
    def c2(self) -> float:
        return self.c[0]

    @property
    def c3(self) -> float:
        return self.c[1]

    @property
    def c4(self) -> float:
        return self.c[2]


def snail_potential(config: SnailConfig, phi):
    """Inductive energy at phase ``phi``, in units of the junction energy.

    Accepts a scalar or ndarray ``phi`` and broadcasts.
    """
    phi = np.asarray(phi, dtype=float)
    u = (config.phi_ext - phi) / 3.0
    out = -config.beta * np.cos(phi) - 3.0 * np.cos(u)
    return out if out.ndim else float(out)


def potential_derivative(config: SnailConfig, phi, order: int = 1):
    """Closed-form d^n u / d phi^n for n = 1..4 (dimensionless).

    The large-arm term contributes with a 1/3 per derivative order and an
    alternating sign from the inner (phi_ext - phi)/3 argument.
    """
    phi = np.asarray(phi, dtype=float)
    beta = config.beta
    u = (config.phi_ext - phi) / 3.0
    if order == 1:
        out = beta * np.sin(phi) - np.sin(u)
    elif order == 2:
        out = beta * np.cos(phi) + np.cos(u) / 3.0
    elif order == 3:
        out = -beta * np.sin(phi) + np.sin(u) / 9.0
    elif order == 4:
        out = -beta * np.cos(phi) - np.cos(u) / 27.0
    else:
        raise BadInput(f"derivative order must be 1..4; got {order!r}")
    return out if out.ndim else float(out)


def _refine_minimum(config: SnailConfig, lo: float, hi: float) -> float:
    """Polish a bracketed minimum; bisect on u' when the bracket is clean."""
    dlo = potential_derivative(config, lo, 1)
    dhi = potential_derivative(config, hi, 1)
    if dlo < 0.0 < dhi:
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if potential_derivative(config, mid, 1) < 0.0:
                lo = mid
            else:
                hi = mid
        phi = 0.5 * (lo + hi)
    else:
        # Rare near-degenerate bracket: fall back to golden-section on u.
        inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - inv_phi * (b - a)
        d = a + inv_phi * (b - a)
        fc = snail_potential(config, c)
        fd = snail_potential(config, d)
        for _ in range(200):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - inv_phi * (b - a)
                fc = snail_potential(config, c)
            else:
                a, c, fc = c, d, fd
                d = a + inv_phi * (b - a)
                fd = snail_potential(config, d)
        phi = 0.5 * (a + b)
    # A couple of Newton steps squeeze out the last few ulps.
    for _ in range(3):
        d2 = potential_derivative(config, phi, 2)
        if d2 <= _CURVATURE_TOL:
            break
        step = potential_derivative(config, phi, 1) / d2
        phi -= step
        if abs(step) < 1e-16:
            break
    return float(phi)


def find_minimum(config: SnailConfig) -> float:
    """Locate the potential minimum within one period around the bias point.

    Scans a dense grid over [phi_ext - 3*pi, phi_ext + 3*pi) (one full period
    of the potential), refines every local minimum by bisection on u', and
    demands a unique well with positive curvature.

    Returns:
        phi_min in radians, with |u'(phi_min)| < 1e-12.

    Raises:
        DegeneratePotential: if more than one distinct minimum survives
            refinement, or the curvature at the minimum is below tolerance
            (flat-bottom / double-well onset).
    """
    grid = config.phi_ext + np.linspace(-3.0 * np.pi, 3.0 * np.pi, _SCAN_POINTS, endpoint=False)
    vals = snail_potential(config, grid)
    # Circular local-minimum mask: the window is exactly one period.
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    is_min = (vals < left) & (vals <= right)
    candidates = np.nonzero(is_min)[0]
    if candidates.size == 0:  # pragma: no cover - constant potential only
        raise DegeneratePotential("potential has no strict local minimum on the grid")

    step = 6.0 * np.pi / _SCAN_POINTS
    refined = []
    for i in candidates:
        phi = _refine_minimum(config, grid[i] - step, grid[i] + step)
        refined.append(phi)

    # Deduplicate refinements that converged to the same well (mod one period).
    period = 6.0 * np.pi
    distinct: list[float] = []
    for phi in refined:
        if not any(
            min(abs(phi - q) % period, period - abs(phi - q) % period) < 1e-6
            for q in distinct
        ):
            distinct.append(phi)
    if len(distinct) > 1:
        raise DegeneratePotential(
            f"potential has {len(distinct)} distinct minima at phi_ext="
            f"{config.phi_ext:.6g}; refusing to pick a well"
        )

    phi_min = min(distinct, key=lambda p: snail_potential(config, p))
    if potential_derivative(config, phi_min, 2) <= _CURVATURE_TOL:
        raise DegeneratePotential(
            f"flat potential bottom at phi_ext={config.phi_ext:.6g} "
            "(curvature below tolerance)"
        )
    if abs(potential_derivative(config, phi_min, 1)) >= _STATIONARITY_TOL:
        # One more polish pass; the Newton iteration above should have landed.
        phi_min = _refine_minimum(config, phi_min - 1e-3, phi_min + 1e-3)
    return float(phi_min)


def taylor_coeffs(config: SnailConfig) -> PotentialExpansion:
    """Expansion coefficients (c2, c3, c4) of the potential about its minimum.

    The coefficients are the bare derivatives of u(phi) at phi_min; consumers
    that need Taylor-series weights divide by n! themselves.
    """
    phi_min = find_minimum(config)
    c2 = potential_derivative(config, phi_min, 2)
    c3 = potential_derivative(config, phi_min, 3)
    c4 = potential_derivative(config, phi_min, 4)
    return PotentialExpansion(phi_min=phi_min, c=(float(c2), float(c3), float(c4)))


def minimum_phase_batch(beta: float, phi_ext: np.ndarray) -> np.ndarray:
    """Vectorized minimum location for many flux biases at once.

    Solves the stationarity condition beta*sin(phi) = sin((phi_ext - phi)/3)
    by a damped fixed-point iteration followed by Newton polishing.  Agrees
    with :func:`find_minimum` to better than 1e-10 for single-well beta; used
    by the sweep/fit fast paths where the pointwise minimizer would dominate
    runtime.
    """
    phi_ext = np.asarray(phi_ext, dtype=float)
    if not 0.0 < beta < _BETA_MAX:
        raise BadInput(f"beta must lie in (0, {_BETA_MAX}); got {beta!r}")
    lam = 1.0 / (1.0 + 3.0 * beta)
    phi = phi_ext.copy()
    # The linear fixed point only needs to land inside Newton's basin
    # (~1e-2); the quadratic polish below does the rest.
    for _ in range(25):
        target = phi_ext - 3.0 * np.arcsin(np.clip(beta * np.sin(phi), -1.0, 1.0))
        phi += lam * (target - phi)
    u = (phi_ext - phi) / 3.0
    for _ in range(4):
        d1 = beta * np.sin(phi) - np.sin(u)
        d2 = beta * np.cos(phi) + np.cos(u) / 3.0
        phi = np.where(d2 > 0.0, phi - d1 / d2, phi)
        u = (phi_ext - phi) / 3.0
    return phi
