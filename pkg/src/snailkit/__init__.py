"""snailkit: modeling and estimation for SNAIL-terminated tunable resonators.

The package is organized in layers:

- :mod:`snailkit.circuit` -- inductive potential of the flux-biased loop and
  its Taylor data.
- :mod:`snailkit.modes` -- loaded-line mode frequency, zero-point phase, and
  the nonlinear coupling rates / self-Kerr, plus flux sweeps and the
  Kerr-free-point search.
- :mod:`snailkit.dispersive` -- scalar dispersive model of the coupled
  transmon (shifts, dressed frequencies, photon-number splitting synthesis).
- :mod:`snailkit.dynamics` -- decay laws, TLS loss model, thermometry, and
  the coherence/loss budgets.
- :mod:`snailkit.leastsq` -- self-contained Levenberg-Marquardt engine with a
  simplex fallback.
- :mod:`snailkit.estimation` -- the fitting pipelines that recover device
  parameters from (measured or synthesized) curves.
- :mod:`snailkit.datasets`, :mod:`snailkit.device` -- CSV datasets and TOML
  device sheets.
- :mod:`snailkit.service`, :mod:`snailkit.cli` -- FastAPI service exposing the
  toolkit, and the CLI thin client in front of it.
"""

from .circuit import (
    PotentialExpansion,
    SnailConfig,
    find_minimum,
    minimum_phase_batch,
    potential_derivative,
    snail_potential,
    taylor_coeffs,
)
from .constants import PhysicalConstants, physical_constants
from .datasets import Dataset, load_dataset, save_dataset
from .device import DeviceSheet, load_device_sheet
from .dispersive import (
    DispersiveModel,
    QubitParams,
    Spectrum,
    build_dispersive_model,
    chi_of_n,
    dispersive_shift,
    dressed_frequencies,
    invert_for_g0,
    linewidth_sigma,
    poisson_weights,
    qubit_induced_kerr,
    splitting_comb,
    synth_number_splitting,
)
from .dynamics import (
    DecayTrace,
    LossBudget,
    PopulationConvention,
    TlsParams,
    coherence_decomposition,
    coherent_decay,
    conditional_pi_population,
    intrinsic_decoherence_rate,
    loss_budget,
    recombine_coherence,
    thermal_occupation,
    thermal_temperature,
    tls_inverse_q,
    tls_t1,
    vacuum_probability,
)
from .errors import (
    BadInput,
    DegeneratePotential,
    InsufficientPeaks,
    InvalidBracket,
    IoError,
    NoConvergence,
    NonPositiveOccupation,
    NoPeaksFound,
    NoSignChange,
    ParseError,
    SchemaError,
    SnailkitError,
    StraddlePole,
    TruncationTooSmall,
    Unidentifiable,
    Unphysical,
    Unsolvable,
)
from .estimation import (
    PeakEstimate,
    extract_peaks,
    fit_amplitude_calibration,
    fit_chi_comb,
    fit_flux_curve,
    fit_t1_trace,
    fit_tls_curve,
)
from .leastsq import FitResult, least_squares
from .modes import (
    ZPF_CALIBRATION,
    FluxSweepTable,
    ModeSolution,
    ResonatorGeometry,
    calibrate_zpf_scale,
    find_kerr_free_flux,
    flux_sweep,
    kerr_coefficient,
    mode_frequency_batch,
    nonlinear_couplings,
    solve_mode,
    solve_mode_frequency,
    zero_point_phase,
)
from .plots import emit_plot, render_plot

__version__ = "0.1.0"

__all__ = [
    "BadInput",
    "Dataset",
    "DecayTrace",
    "DegeneratePotential",
    "DeviceSheet",
    "DispersiveModel",
    "FitResult",
    "FluxSweepTable",
    "InsufficientPeaks",
    "InvalidBracket",
    "IoError",
    "LossBudget",
    "ModeSolution",
    "NoConvergence",
    "NonPositiveOccupation",
    "NoPeaksFound",
    "NoSignChange",
    "ParseError",
    "PeakEstimate",
    "PhysicalConstants",
    "PopulationConvention",
    "PotentialExpansion",
    "QubitParams",
    "ResonatorGeometry",
    "SchemaError",
    "SnailConfig",
    "SnailkitError",
    "Spectrum",
    "StraddlePole",
    "TlsParams",
    "TruncationTooSmall",
    "Unidentifiable",
    "Unphysical",
    "Unsolvable",
    "ZPF_CALIBRATION",
    "build_dispersive_model",
    "calibrate_zpf_scale",
    "chi_of_n",
    "coherence_decomposition",
    "coherent_decay",
    "conditional_pi_population",
    "dispersive_shift",
    "dressed_frequencies",
    "emit_plot",
    "extract_peaks",
    "find_kerr_free_flux",
    "find_minimum",
    "fit_amplitude_calibration",
    "fit_chi_comb",
    "fit_flux_curve",
    "fit_t1_trace",
    "fit_tls_curve",
    "flux_sweep",
    "intrinsic_decoherence_rate",
    "invert_for_g0",
    "kerr_coefficient",
    "least_squares",
    "linewidth_sigma",
    "load_dataset",
    "load_device_sheet",
    "loss_budget",
    "minimum_phase_batch",
    "mode_frequency_batch",
    "nonlinear_couplings",
    "physical_constants",
    "poisson_weights",
    "potential_derivative",
    "qubit_induced_kerr",
    "recombine_coherence",
    "render_plot",
    "save_dataset",
    "snail_potential",
    "solve_mode",
    "solve_mode_frequency",
    "splitting_comb",
    "synth_number_splitting",
    "taylor_coeffs",
    "thermal_occupation",
    "thermal_temperature",
    "tls_inverse_q",
    "tls_t1",
    "vacuum_probability",
    "zero_point_phase",
    "__version__",
]
