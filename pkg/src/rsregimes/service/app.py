"""HTTP front end exposing the planning and estimation handlers."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ConfigError, RsRegimesError
from . import handlers
from .schemas import (CheckRequest, CheckResponse, EstimateRequest,
                      EstimateResponse, PlanRequest, PlanResponse,
                      TableRequest, TableResponse)


def create_app() -> FastAPI:
    app = FastAPI(title="rsregimes", version="0.1.0")

    @app.exception_handler(ConfigError)
    @app.exception_handler(ValueError)
    async def _bad_request(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=400, content={
            "error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(RsRegimesError)
    async def _numeric_failure(request: Request, exc: Exception) -> JSONResponse:
        # Well-formed request whose numbers the solvers cannot handle.
        return JSONResponse(status_code=422, content={
            "error": type(exc).__name__, "detail": str(exc)})

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/plan", response_model=PlanResponse)
    def plan(request: PlanRequest) -> PlanResponse:
        return handlers.handle_plan(request)

    @app.post("/estimate", response_model=EstimateResponse)
    def estimate(request: EstimateRequest) -> EstimateResponse:
        return handlers.handle_estimate(request)

    @app.post("/table", response_model=TableResponse)
    def table(request: TableRequest) -> TableResponse:
        return handlers.handle_table(request)

    @app.post("/check", response_model=CheckResponse)
    def check(request: CheckRequest) -> CheckResponse:
        return handlers.handle_check(request)

    return app


app = create_app()
