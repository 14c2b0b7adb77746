"""FastAPI application exposing the snailkit operations.

One POST route per operation, plus ``GET /health``.  Library errors become
structured 4xx responses: a ``NoConvergence`` maps to 409 (the request was
well-formed but no usable fit exists), every other :class:`SnailkitError`
to 422.  Fits that finish with ``converged=False`` are *not* errors at this
layer; the flag travels in the response body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import NoConvergence, SnailkitError
from . import api
from . import models as m


def create_app() -> FastAPI:
    app = FastAPI(
        title="snailkit service",
        version="0.1.0",
        description="Modeling and parameter estimation for flux-tunable "
        "SNAIL-terminated resonators.",
    )

    @app.exception_handler(SnailkitError)
    async def _snailkit_error(request: Request, exc: SnailkitError) -> JSONResponse:
        status = 409 if isinstance(exc, NoConvergence) else 422
        return JSONResponse(
            status_code=status,
            content=m.ErrorBody(error=type(exc).__name__, detail=str(exc)).model_dump(),
        )

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "tool": "snailkit"}

    @app.post("/v1/potential", response_model=m.PotentialResponse)
    async def potential(req: m.PotentialRequest) -> m.PotentialResponse:
        return api.potential(req)

    @app.post("/v1/sweep", response_model=m.SweepResponse)
    async def sweep(req: m.SweepRequest) -> m.SweepResponse:
        return api.sweep(req)

    @app.post("/v1/kerr-free", response_model=m.KerrFreeResponse)
    async def kerr_free(req: m.KerrFreeRequest) -> m.KerrFreeResponse:
        return api.kerr_free(req)

    @app.post("/v1/fit-flux", response_model=m.FitResponse)
    async def fit_flux(req: m.FitFluxRequest) -> m.FitResponse:
        return api.fit_flux(req)

    @app.post("/v1/synth-splitting", response_model=m.SpectrumResponse)
    async def synth_splitting(req: m.SynthSplittingRequest) -> m.SpectrumResponse:
        return api.synth_splitting(req)

    @app.post("/v1/fit-splitting", response_model=m.FitSplittingResponse)
    async def fit_splitting(req: m.FitSplittingRequest) -> m.FitSplittingResponse:
        return api.fit_splitting(req)

    @app.post("/v1/fit-t1", response_model=m.FitResponse)
    async def fit_t1(req: m.FitT1Request) -> m.FitResponse:
        return api.fit_t1(req)

    @app.post("/v1/fit-tls", response_model=m.FitResponse)
    async def fit_tls(req: m.FitTlsRequest) -> m.FitResponse:
        return api.fit_tls(req)

    @app.post("/v1/fit-calibration", response_model=m.FitResponse)
    async def fit_calibration(req: m.FitCalibrationRequest) -> m.FitResponse:
        return api.fit_calibration(req)

    @app.post("/v1/budget", response_model=m.BudgetResponse)
    async def budget(req: m.BudgetRequest) -> m.BudgetResponse:
        return api.budget(req)

    @app.post("/v1/coherence", response_model=m.CoherenceResponse)
    async def coherence(req: m.CoherenceRequest) -> m.CoherenceResponse:
        return api.coherence(req)

    @app.post("/v1/report", response_model=m.DeviceReportResponse)
    async def device_report(req: m.DeviceReportRequest) -> m.DeviceReportResponse:
        return api.device_report(req)

    return app
