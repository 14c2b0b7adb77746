"""Decay laws, TLS loss, thermometry, and the loss/coherence budgets.

The resonator rings down as a coherent state whose amplitude decays with
2*T1 (energy with T1).  A conditional pi-pulse on the qubit converts "is the
resonator empty yet?" into qubit population: the vacuum probability of a
decayed coherent state is P0(tau) = exp(-|alpha0|^2 * exp(-tau/T1)).  Two
readout conventions of that same law are carried side by side (see
:class:`PopulationConvention`) because measured traces appear in both.

Internal losses follow the standard saturable two-level-system law

    1/Q1 = F*delta_tls * tanh(hbar*omega/(2*k_B*T)) / sqrt(1 + n/n_c) + delta_other

plus bookkeeping helpers: bath temperature from a thermal occupation, pure
dephasing from (T_s, T1), and the additive non-TLS loss budget.

Times in seconds, frequencies angular (rad/s), except where a field is
explicitly documented as cyclic Hz (the budget rates, which are reported the
way loss budgets are usually printed).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import physical_constants
from .errors import BadInput, NonPositiveOccupation, Unphysical


class PopulationConvention(enum.Enum):
    """How a conditional-pi-pulse trace maps vacuum probability to population.

    VACUUM_EXCITES: the pulse flips the qubit only when the resonator is in
    vacuum, so the trace *rises* toward 1 as the field leaks out (population
    equals P0).  COMPLEMENT: the trace is the mirror image 1 - P0 (starts
    high, falls to 0); some datasets are recorded this way.
    """

    VACUUM_EXCITES = "vacuum_excites"
    COMPLEMENT = "complement"


@dataclass(frozen=True)
class DecayTrace:
    """Sampled ring-down trace: delays (s), populations in [0, 1], provenance."""

    tau: np.ndarray
    pop: np.ndarray
    alpha0: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        pop = np.asarray(self.pop, dtype=float)
        if tau.ndim != 1 or tau.shape != pop.shape or tau.size < 2:
            raise BadInput("decay trace needs matching 1-d tau/pop arrays (>= 2 samples)")
        if np.any(np.diff(tau) <= 0.0):
            raise BadInput("decay trace delays must be strictly increasing")
        if np.any(pop < 0.0) or np.any(pop > 1.0):
            raise BadInput("populations must lie in [0, 1]")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "pop", pop)


@dataclass(frozen=True)
class TlsParams:
    """Constants of the saturable-TLS loss law.

    f_delta_tls: filling factor times intrinsic TLS loss tangent.
    n_c: critical photon number of the saturation.
    delta_other: residual power-independent loss tangent.
    t_res: resonator bath temperature in kelvin (0 means the tanh saturates).
    """

    f_delta_tls: float
    n_c: float
    delta_other: float
    t_res: float

    def __post_init__(self):
        if self.f_delta_tls < 0.0 or self.delta_other < 0.0 or self.t_res < 0.0:
            raise BadInput("TLS parameters must be non-negative")
        if not self.n_c > 0.0:
            raise BadInput(f"n_c must be positive; got {self.n_c!r}")


@dataclass(frozen=True)
class LossBudget:
    """Additive non-TLS loss channels, rates in cyclic Hz, times in seconds."""

    gamma_q: float
    gamma_c: float
    gamma_f: float
    gamma_total: float
    t_total: float
    t_other: float

    def __post_init__(self):
        expected = self.gamma_q + self.gamma_c + self.gamma_f
        if not math.isclose(self.gamma_total, expected, rel_tol=1e-12, abs_tol=1e-9):
            raise BadInput("gamma_total must equal gamma_q + gamma_c + gamma_f")


def coherent_decay(alpha0, tau, t1: float):
    """Coherent amplitude after delay tau: alpha0 * exp(-tau/(2*T1)).

    Amplitude halves every 2*T1*ln2; energy |alpha|^2 decays with T1.
    Vectorized over tau.
    """
    if not t1 > 0.0:
        raise BadInput(f"t1 must be positive; got {t1!r}")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0.0):
        raise BadInput("delays must be non-negative")
    out = alpha0 * np.exp(-tau / (2.0 * t1))
    if np.ndim(out):
        return out
    return complex(out) if np.iscomplexobj(alpha0) else float(out)


def vacuum_probability(alpha0, tau, t1: float):
    """P0(tau) = exp(-|alpha0|^2 * exp(-tau/T1)) for a decaying coherent state."""
    if not t1 > 0.0:
        raise BadInput(f"t1 must be positive; got {t1!r}")
    tau = np.asarray(tau, dtype=float)
    nbar = abs(alpha0) ** 2
    out = np.exp(-nbar * np.exp(-tau / t1))
    return out if out.ndim else float(out)


def conditional_pi_population(
    alpha0,
    tau,
    t1: float,
    convention: PopulationConvention = PopulationConvention.VACUUM_EXCITES,
):
    """Qubit population read out by a vacuum-conditioned pi pulse.

    Under VACUUM_EXCITES returns P0(tau) (rises to 1); under COMPLEMENT
    returns 1 - P0(tau).  The two conventions sum to 1 pointwise.
    """
    p0 = vacuum_probability(alpha0, tau, t1)
    if convention is PopulationConvention.VACUUM_EXCITES:
        return p0
    if convention is PopulationConvention.COMPLEMENT:
        return 1.0 - p0
    raise BadInput(f"unknown population convention {convention!r}")


def tls_inverse_q(n_bar, omega_c: float, p: TlsParams):
    """Inverse internal quality factor at mean photon number n_bar.

    Saturates to delta_other as the TLS bath is power-broadened away;
    at zero temperature the tanh factor is 1.  Vectorized over n_bar.
    """
    if not omega_c > 0.0:
        raise BadInput(f"omega_c must be positive; got {omega_c!r}")
    n_bar = np.asarray(n_bar, dtype=float)
    if np.any(n_bar < 0.0):
        raise BadInput("photon number must be non-negative")
    if p.t_res > 0.0:
        k = physical_constants()
        th = math.tanh(k.hbar * omega_c / (2.0 * k.k_b * p.t_res))
    else:
        th = 1.0
    out = p.f_delta_tls * th / np.sqrt(1.0 + n_bar / p.n_c) + p.delta_other
    return out if out.ndim else float(out)


def tls_t1(n_bar, omega_c: float, p: TlsParams):
    """Energy relaxation time T1 = Q1/omega_c under the TLS loss law (seconds)."""
    inv_q = tls_inverse_q(n_bar, omega_c, p)
    return 1.0 / (np.asarray(inv_q) * omega_c) if np.ndim(inv_q) else 1.0 / (inv_q * omega_c)


def thermal_temperature(n_bar: float, omega_c: float) -> float:
    """Bath temperature (K) whose Bose-Einstein occupation at omega_c is n_bar."""
    if not n_bar > 0.0:
        raise NonPositiveOccupation(f"occupation must be positive; got {n_bar!r}")
    if not omega_c > 0.0:
        raise BadInput(f"omega_c must be positive; got {omega_c!r}")
    k = physical_constants()
    return k.hbar * omega_c / (k.k_b * math.log1p(1.0 / n_bar))


def thermal_occupation(t_res: float, omega_c: float) -> float:
    """Bose-Einstein occupation at omega_c for bath temperature t_res (K)."""
    if not t_res > 0.0:
        raise BadInput(f"temperature must be positive; got {t_res!r}")
    k = physical_constants()
    return 1.0 / math.expm1(k.hbar * omega_c / (k.k_b * t_res))


def intrinsic_decoherence_rate(omega_s: float, q_s: float) -> float:
    """Total decoherence rate omega_s/Q_s (rad/s) from a linewidth quality factor."""
    if not omega_s > 0.0 or not q_s > 0.0:
        raise BadInput("omega_s and q_s must be positive")
    return omega_s / q_s


def coherence_decomposition(t_s: float, t1: float) -> float:
    """Pure dephasing time from total coherence time and energy relaxation.

    Splits 1/T_s = 1/(2*T1) + 1/T_phi; only defined while T_s < 2*T1.

    Raises:
        Unphysical: if T_s >= 2*T1 (no dephasing budget left).
    """
    if not t_s > 0.0 or not t1 > 0.0:
        raise BadInput("times must be positive")
    inv_phi = 1.0 / t_s - 1.0 / (2.0 * t1)
    if inv_phi <= 0.0:
        raise Unphysical(
            f"T_s={t_s:.4g} s is not shorter than 2*T1={2.0 * t1:.4g} s; "
            "no pure-dephasing decomposition exists"
        )
    return 1.0 / inv_phi


def recombine_coherence(t1: float, t_phi: float) -> float:
    """Inverse of :func:`coherence_decomposition`: T_s from (T1, T_phi)."""
    if not t1 > 0.0 or not t_phi > 0.0:
        raise BadInput("times must be positive")
    return 1.0 / (1.0 / (2.0 * t1) + 1.0 / t_phi)


def loss_budget(
    g0: float,
    delta0: float,
    t1_qubit: float,
    gamma_c: float,
    gamma_f: float,
    omega_c: float,
    delta_other: float,
    gamma_q: float | None = None,
) -> LossBudget:
    """Additive budget of the non-TLS loss channels.

    The qubit-inherited rate is gamma_q = (g0/delta0)^2 / T1_qubit with the
    inverse lifetime read in cyclic Hz, matching how such budgets are quoted;
    pass an explicit ``gamma_q`` (cyclic Hz) to override the computed value
    with an independently known one.  gamma_c and gamma_f are the coupling
    and flux-line rates in cyclic Hz.  T_total = 1/(2*pi*gamma_total) and
    T_other = 1/(delta_other*omega_c).

    Raises:
        BadInput: on negative rates or non-positive times/frequencies.
    """
    if gamma_c < 0.0 or gamma_f < 0.0 or delta_other < 0.0:
        raise BadInput("rates and loss tangents must be non-negative")
    if not omega_c > 0.0:
        raise BadInput(f"omega_c must be positive; got {omega_c!r}")
    if gamma_q is None:
        if not t1_qubit > 0.0:
            raise BadInput(f"t1_qubit must be positive; got {t1_qubit!r}")
        if delta0 == 0.0:
            raise BadInput("delta0 must be nonzero to inherit qubit loss")
        gamma_q = (g0 / delta0) ** 2 / t1_qubit
    elif gamma_q < 0.0:
        raise BadInput(f"gamma_q must be non-negative; got {gamma_q!r}")
    gamma_total = gamma_q + gamma_c + gamma_f
    if gamma_total <= 0.0:
        raise BadInput("total loss rate must be positive")
    return LossBudget(
        gamma_q=float(gamma_q),
        gamma_c=float(gamma_c),
        gamma_f=float(gamma_f),
        gamma_total=float(gamma_total),
        t_total=1.0 / (2.0 * math.pi * gamma_total),
        t_other=1.0 / (delta_other * omega_c) if delta_other > 0.0 else math.inf,
    )
