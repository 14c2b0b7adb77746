"""Request/response models for the snailkit service.

Everything here is wire-facing and therefore uses bench units (cyclic GHz,
MHz, kHz, Hz, microseconds, millikelvin, flux quanta) -- never angular
frequencies.  Field names carry their unit as a suffix so a JSON payload is
self-describing.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CircuitSpec(_Strict):
    """Linear + nonlinear circuit parameters of a terminated resonator."""

    beta: float = Field(gt=0.0, lt=0.5, description="junction asymmetry ratio")
    l_j_ph: float = Field(gt=0.0, description="total series junction inductance, pH")
    omega_r0_ghz: float = Field(gt=0.0, description="bare line half-wave frequency, GHz")
    z_c_ohm: float = Field(gt=0.0, description="line characteristic impedance, Ohm")


class QubitSpec(_Strict):
    """Bare transmon parameters as quoted on a device sheet."""

    omega_q0_ghz: float = Field(gt=0.0)
    alpha_q_mhz: float = Field(gt=0.0, description="positive anharmonicity magnitude, MHz")
    g0_mhz: float = Field(ge=0.0)
    gamma_q_khz: float = Field(gt=0.0, description="qubit linewidth (FWHM), kHz")


# ----------------------------------------------------------------- potential


class PotentialRequest(_Strict):
    beta: float = Field(gt=0.0, lt=0.5)
    phi_ext_phi0: float
    l_j_ph: float = Field(default=600.0, gt=0.0)
    span_rad: float = Field(default=6.283185307179586, gt=0.0)
    points: int = Field(default=481, ge=3, le=100_000)


class PotentialResponse(_Strict):
    phi_rad: list[float]
    u_ej: list[float]
    phi_min_rad: float
    c2: float
    c3: float
    c4: float
    e_j_ghz: float


# --------------------------------------------------------------------- sweep


class SweepRequest(_Strict):
    circuit: CircuitSpec
    flux_from_phi0: float = 0.0
    flux_to_phi0: float = 0.5
    points: int = Field(default=101, ge=2, le=100_000)


class SweepResponse(_Strict):
    """Columns of the flux sweep; degenerate rows carry null entries."""

    phi_ext_phi0: list[float]
    freq_ghz: list[Optional[float]]
    c2: list[Optional[float]]
    c3: list[Optional[float]]
    c4: list[Optional[float]]
    g3_mhz: list[Optional[float]]
    g4_mhz: list[Optional[float]]
    kerr_mhz: list[Optional[float]]
    degenerate_indices: list[int]


class KerrFreeRequest(_Strict):
    circuit: CircuitSpec
    window_from_phi0: float = 0.25
    window_to_phi0: float = 0.5


class KerrFreeResponse(_Strict):
    phi_star_phi0: float
    freq_ghz: float
    kerr_at_star_khz: float
    g3_at_star_mhz: float


# ---------------------------------------------------------------------- fits


class FitResponse(_Strict):
    """Shared shape for every parameter-estimation endpoint.

    ``converged=False`` is reported in-band (HTTP 200); clients decide how
    hard to fail.  Parameter names carry wire-unit suffixes.
    """

    params: dict[str, float]
    stderr: dict[str, float]
    residual_norm: float
    iterations: int
    converged: bool
    convention_notes: str = ""
    extra: dict[str, float] = Field(default_factory=dict)


class FitFluxRequest(_Strict):
    z_c_ohm: float = Field(gt=0.0)
    flux_phi0: list[float]
    freq_ghz: list[float]
    sigma_ghz: Optional[list[float]] = None
    beta0: Optional[float] = None
    l_j_ph0: Optional[float] = None
    omega_r0_ghz0: Optional[float] = None


class SynthSplittingRequest(_Strict):
    qubit: QubitSpec
    omega_s_ghz: float = Field(gt=0.0, description="resonator frequency, GHz")
    chi_prime_khz: float = 0.0
    alpha: float = Field(gt=0.0, description="coherent-state amplitude |alpha|")
    n_max: Optional[int] = Field(default=None, ge=0)
    freq_from_ghz: Optional[float] = None
    freq_to_ghz: Optional[float] = None
    points: int = Field(default=4001, ge=11, le=2_000_000)
    noise: float = Field(default=0.0, ge=0.0, description="RMS noise / peak amplitude")
    seed: int


class SpectrumResponse(_Strict):
    freq_ghz: list[float]
    amp: list[float]
    chi0_mhz: float
    omega_q_ghz: float
    omega_c_ghz: float
    n_max: int
    alpha_abs: float


class PeakModel(_Strict):
    n: int
    center_ghz: float
    width_mhz: float
    weight: float
    low_confidence: bool


class FitSplittingRequest(_Strict):
    freq_ghz: list[float]
    amp: list[float]
    spacing_hint_mhz: float = Field(gt=0.0)


class FitSplittingResponse(_Strict):
    peaks: list[PeakModel]
    n_low_confidence: int
    fit: FitResponse


class FitT1Request(_Strict):
    tau_us: list[float]
    pop: list[float]
    alpha0: float = Field(gt=0.0, description="calibrated initial |alpha|")
    convention: Optional[Literal["vacuum_excites", "complement"]] = None


class FitTlsRequest(_Strict):
    n_bar: list[float]
    t1_us: list[float]
    omega_c_ghz: float = Field(gt=0.0)
    t_res_mk: float = Field(ge=0.0)
    sigma_us: Optional[list[float]] = None


class FitCalibrationRequest(_Strict):
    drive_amp: list[float]
    alpha_abs: list[float]


# ------------------------------------------------------------------- budgets


class BudgetRequest(_Strict):
    g0_mhz: float = Field(ge=0.0)
    delta0_mhz: float
    t1_qubit_us: float = Field(gt=0.0)
    gamma_c_hz: float = Field(ge=0.0)
    gamma_f_hz: float = Field(ge=0.0)
    omega_c_ghz: float = Field(gt=0.0)
    delta_other: float = Field(ge=0.0)
    gamma_q_hz: Optional[float] = Field(
        default=None,
        gt=0.0,
        description="override for the inherited-qubit-loss rate; computed when omitted",
    )


class BudgetResponse(_Strict):
    gamma_q_hz: float
    gamma_c_hz: float
    gamma_f_hz: float
    gamma_total_hz: float
    t_total_us: float
    t_other_us: Optional[float]


class CoherenceRequest(_Strict):
    """Either pass ``t_s_us`` directly, or ``q_s`` with ``omega_s_ghz``."""

    t1_us: float = Field(gt=0.0)
    t_s_us: Optional[float] = Field(default=None, gt=0.0)
    q_s: Optional[float] = Field(default=None, gt=0.0)
    omega_s_ghz: Optional[float] = Field(default=None, gt=0.0)


class CoherenceResponse(_Strict):
    t_s_us: float
    t1_us: float
    t_phi_us: float


# -------------------------------------------------------------- device report


class DeviceReportRequest(_Strict):
    name: str = Field(min_length=1)
    values: dict[str, float]


class DeviceReportResponse(_Strict):
    name: str
    sections: dict[str, Any]


class ErrorBody(_Strict):
    """Uniform error payload produced by the service exception handlers."""

    error: str
    detail: str
