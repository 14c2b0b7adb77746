"""Scalar dispersive model of the transmon coupled to the SNAIL mode.

In the dispersive regime (coupling much smaller than detuning) the qubit and
resonator exchange no energy and only shift each other: the resonator moves
to omega_c = omega_s - g0**2/delta0, the qubit to omega_q = omega_q0 +
g0**2/delta0, and each resonator photon pulls the qubit by the dispersive
shift chi.  A weakly anharmonic transmon gives

    chi0 = g0**2 * alpha_q / (delta0 * (delta0 - alpha_q))

with delta0 = omega_q0 - omega_s the bare detuning and alpha_q the (positive)
anharmonicity.  The per-photon pull is allowed to drift linearly with photon
number, chi(n) = chi0 + chi_prime*(n-1)/2, which is what a number-splitting
comb actually measures.  All shifts here follow the observed-spacing
convention: peak n sits chi(1)+...+chi(n) below the dressed qubit line.

Frequencies are angular (rad/s) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadInput, StraddlePole, TruncationTooSmall, Unsolvable

TWO_PI = 2.0 * math.pi

# Detuning guard: dispersive expressions blow up when the qubit crosses the
# resonator (or its alpha-shifted sibling); refuse within 1 kHz of a pole.
_POLE_GUARD = TWO_PI * 1e3

# |g0/delta0| above this and the dispersive expansion is not trustworthy.
_DISPERSIVE_RATIO_MAX = 0.2

# Gaussian sigma from a full-width-at-half-maximum linewidth.
_FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


@dataclass(frozen=True)
class QubitParams:
    """Bare transmon parameters: frequency, anharmonicity, coupling, linewidth.

    All rad/s; ``alpha_q`` is quoted positive; ``gamma_q`` is the spectroscopic
    linewidth read as a FWHM.
    """

    omega_q0: float
    alpha_q: float
    g0: float
    gamma_q: float

    def __post_init__(self):
        if not self.alpha_q > 0.0:
            raise BadInput(f"alpha_q must be positive; got {self.alpha_q!r}")
        if self.g0 < 0.0:
            raise BadInput(f"g0 must be non-negative; got {self.g0!r}")
        if not self.gamma_q > 0.0:
            raise BadInput(f"gamma_q must be positive; got {self.gamma_q!r}")


@dataclass(frozen=True)
class DispersiveModel:
    """Scalar summary of the dispersively coupled pair at one bias point.

    ``dispersive`` records whether |g0/delta0| < 0.2 held when the model was
    built; expressions are still evaluated outside that regime, but the flag
    travels with the numbers.
    """

    omega_c: float
    omega_q: float
    chi0: float
    chi_prime: float
    k_sq: float
    delta0: float
    dispersive: bool = True


@dataclass(frozen=True)
class Spectrum:
    """Sampled spectroscopy curve: ordered frequencies, finite amplitudes."""

    freq: np.ndarray
    amp: np.ndarray
    meta: dict

    def __post_init__(self):
        freq = np.asarray(self.freq, dtype=float)
        amp = np.asarray(self.amp, dtype=float)
        if freq.ndim != 1 or freq.size < 2 or freq.shape != amp.shape:
            raise BadInput("spectrum needs matching 1-d freq/amp arrays (>= 2 samples)")
        if np.any(np.diff(freq) <= 0.0):
            raise BadInput("spectrum frequencies must be strictly increasing")
        if not np.all(np.isfinite(amp)):
            raise BadInput("spectrum amplitudes must be finite")
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "amp", amp)


def _guard_detuning(delta0: float, alpha_q: float | None = None) -> None:
    if abs(delta0) < _POLE_GUARD:
        raise StraddlePole(
            f"detuning {delta0 / TWO_PI:.3g} Hz is within 1 kHz of the resonator pole"
        )
    if alpha_q is not None and abs(delta0 - alpha_q) < _POLE_GUARD:
        raise StraddlePole(
            "detuning is within 1 kHz of the straddling pole delta0 = alpha_q"
        )


def dispersive_shift(g0: float, delta0: float, alpha_q: float) -> float:
    """Per-photon qubit pull chi0 = g0^2*alpha_q/(delta0*(delta0-alpha_q))."""
    _guard_detuning(delta0, alpha_q)
    return g0**2 * alpha_q / (delta0 * (delta0 - alpha_q))


def invert_for_g0(chi0: float, delta0: float, alpha_q: float) -> float:
    """Coupling rate that produces a given dispersive shift.

    Exact algebraic inverse of :func:`dispersive_shift`; raises Unsolvable
    when the sign pattern makes the radicand negative.
    """
    _guard_detuning(delta0, alpha_q)
    radicand = chi0 * delta0 * (delta0 - alpha_q) / alpha_q
    if radicand < 0.0:
        raise Unsolvable(
            "no real coupling reproduces this shift at this detuning "
            f"(radicand {radicand:.3g})"
        )
    return math.sqrt(radicand)


def dressed_frequencies(omega_s: float, omega_q0: float, g0: float) -> tuple[float, float, float]:
    """Second-order dressed frequencies (omega_c, omega_q, delta0).

    The resonator is pushed away from the qubit and vice versa; for positive
    detuning the qubit moves up and the resonator down.
    """
    delta0 = omega_q0 - omega_s
    _guard_detuning(delta0)
    shift = g0**2 / delta0
    return omega_s - shift, omega_q0 + shift, delta0


def chi_of_n(n: int, chi0: float, chi_prime: float) -> float:
    """Observed comb spacing between peaks n-1 and n: chi0 + chi_prime*(n-1)/2."""
    if n < 1:
        raise BadInput(f"photon index must be >= 1; got {n!r}")
    return chi0 + chi_prime * (n - 1) / 2.0


def qubit_induced_kerr(g4: float, g0: float, delta0: float) -> float:
    """Resonator self-Kerr inherited through the qubit: -24*g4*(g0/delta0)**2."""
    _guard_detuning(delta0)
    return -24.0 * g4 * g0**2 / delta0**2


def build_dispersive_model(
    omega_s: float,
    qubit: QubitParams,
    chi_prime: float = 0.0,
    g4: float = 0.0,
) -> DispersiveModel:
    """Assemble the full scalar model from bare ingredients.

    Evaluates dressed frequencies, the dispersive shift, and the
    qubit-induced Kerr in one go, and stamps the dispersive-validity flag.
    """
    omega_c, omega_q, delta0 = dressed_frequencies(omega_s, qubit.omega_q0, qubit.g0)
    chi0 = dispersive_shift(qubit.g0, delta0, qubit.alpha_q)
    k_sq = qubit_induced_kerr(g4, qubit.g0, delta0)
    ok = abs(qubit.g0 / delta0) < _DISPERSIVE_RATIO_MAX
    return DispersiveModel(
        omega_c=omega_c,
        omega_q=omega_q,
        chi0=chi0,
        chi_prime=chi_prime,
        k_sq=k_sq,
        delta0=delta0,
        dispersive=ok,
    )


def linewidth_sigma(gamma_q: float) -> float:
    """Gaussian standard deviation for a FWHM linewidth."""
    return gamma_q * _FWHM_TO_SIGMA


def poisson_weights(alpha, n_max: int) -> np.ndarray:
    """Coherent-state photon statistics P(n) for n = 0..n_max (inclusive)."""
    nbar = abs(alpha) ** 2
    w = np.empty(n_max + 1)
    w[0] = math.exp(-nbar)
    for n in range(1, n_max + 1):
        w[n] = w[n - 1] * nbar / n
    return w


def splitting_comb(
    alpha,
    model: DispersiveModel,
    n_max: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Peak centers and Poisson weights of the number-splitting comb.

    Peak n sits at omega_q - sum_{m=1..n} chi(m): more photons pull the
    observed qubit line further down.  With ``n_max=None`` the cutoff is
    auto-sized until the dropped Poisson tail is below 1e-12; an explicit
    cutoff must be at least ceil(|alpha|^2 + 6|alpha|) and is rejected with
    TruncationTooSmall when its dropped tail exceeds 1e-9.
    """
    nbar = abs(alpha) ** 2
    floor_n = math.ceil(nbar + 6.0 * abs(alpha))
    if n_max is None:
        n_max = floor_n
        w = poisson_weights(alpha, n_max)
        while 1.0 - w.sum() > 1e-12 and n_max < 1000:
            n_max += 5
            w = poisson_weights(alpha, n_max)
    else:
        if n_max < floor_n:
            raise BadInput(
                f"n_max={n_max} below the minimum {floor_n} for |alpha|={abs(alpha):.3g}"
            )
        w = poisson_weights(alpha, n_max)
        tail = 1.0 - w.sum()
        if tail > 1e-9:
            raise TruncationTooSmall(
                f"n_max={n_max} drops Poisson weight {tail:.3g} (> 1e-9)"
            )
    spacings = model.chi0 + model.chi_prime * (np.arange(n_max + 1) - 1.0) / 2.0
    spacings[0] = 0.0  # peak 0 is the unshifted dressed line
    centers = model.omega_q - np.cumsum(spacings)
    return centers, w


def synth_number_splitting(
    alpha,
    model: DispersiveModel,
    qubit: QubitParams,
    freq,
    n_max: int | None = None,
    meta: dict | None = None,
) -> Spectrum:
    """Noise-free photon-number-splitting spectrum on a frequency grid.

    Each comb line is a unit-area Gaussian of width set by the qubit
    linewidth (FWHM reading), weighted by the coherent-state photon
    statistics; the total integrated weight deficit is below 1e-9 by the
    truncation policy of :func:`splitting_comb`.

    Parameters
    ----------
    alpha : coherent amplitude (real or complex; only |alpha| matters).
    model, qubit : dispersive summary and bare qubit parameters.
    freq : strictly increasing angular-frequency grid spanning the comb.
    n_max : optional explicit photon cutoff.
    meta : optional provenance merged into the spectrum metadata.
    """
    freq = np.asarray(freq, dtype=float)
    centers, weights = splitting_comb(alpha, model, n_max=n_max)
    sigma = linewidth_sigma(qubit.gamma_q)
    visible = weights > 1e-6
    if freq.size and (
        centers[visible].min() < freq[0] or centers[visible].max() > freq[-1]
    ):
        raise BadInput("frequency grid does not span all comb peaks with visible weight")
    amp = np.zeros_like(freq)
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    for c, w in zip(centers, weights):
        if w == 0.0:
            continue
        amp += w * norm * np.exp(-0.5 * ((freq - c) / sigma) ** 2)
    info = {"kind": "synthetic", "alpha_abs": float(abs(alpha)), "n_max": int(centers.size - 1)}
    if meta:
        info.update(meta)
    return Spectrum(freq=freq, amp=amp, meta=info)
