"""HTTP-facing layer: pydantic request/response models, typed operations,
and the FastAPI application factory.

All wire quantities use bench conventions: cyclic GHz / MHz / kHz, Hz for
loss rates, microseconds, millikelvin, flux in units of the flux quantum.
Conversion to the library's internal angular/SI units happens exactly once,
inside :mod:`snailkit.service.api`.
"""

from .api import (
    budget,
    coherence,
    device_report,
    fit_calibration,
    fit_flux,
    fit_splitting,
    fit_t1,
    fit_tls,
    kerr_free,
    potential,
    sweep,
    synth_splitting,
)
from .app import create_app

__all__ = [
    "budget",
    "coherence",
    "create_app",
    "device_report",
    "fit_calibration",
    "fit_flux",
    "fit_splitting",
    "fit_t1",
    "fit_tls",
    "kerr_free",
    "potential",
    "sweep",
    "synth_splitting",
]
