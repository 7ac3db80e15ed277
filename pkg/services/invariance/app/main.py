"""HTTP surface running the verification pipelines."""

from contextlib import asynccontextmanager
from typing import Any, Optional

import structlog
from fastapi import FastAPI, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, ValidationError

from core.errors import InvarianceError, ProblemFileError, to_error_model
from core.logging_config import setup_logging
from core.settings import settings
from core.yaml_middleware import YAMLMiddleware
from noether import DRIFT_THRESHOLD
from pipeline import run_report, solve_entry, verify_entry
from registry import ExampleEntry, entry_from_document, export_problem_file, get, names
from schemas.models import ErrorModel, ExtremalModel
from solver import Extremal, ShootConfig
from symmetry import DEFAULT_S_SAMPLES, VerifyConfig

# Configure logging
setup_logging()
logger = structlog.get_logger(__name__)

STATUS = {
    "NOT_FOUND": 404,
    "VALIDATION_ERROR": 400,
    "SYNTAX_ERROR": 400,
    "UNKNOWN_IDENTIFIER": 400,
    "ARITY_MISMATCH": 400,
    "BAD_REQUEST": 400,
    "DOMAIN_ERROR": 422,
    "NO_CONVERGENCE": 422,
    "SINGULAR_JACOBIAN": 422,
}


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan context manager."""
    logger.info("Starting invariance service", examples=names())
    yield
    logger.info("Shutting down invariance service")


app = FastAPI(
    title="Noether Invariance Verifier",
    description="Invariance checks and conserved-charge certification for constrained optimal control",
    version="0.1.0",
    lifespan=lifespan,
)

app.add_middleware(YAMLMiddleware)


class Target(BaseModel):
    """Either a registry name (with parameter overrides) or an inline problem document."""

    example: Optional[str] = None
    params: dict[str, float] = Field(default_factory=dict)
    problem: Optional[dict[str, Any]] = None


class VerifyRequest(Target):
    families: Optional[list[str]] = None
    s_samples: list[float] = Field(default_factory=lambda: list(DEFAULT_S_SAMPLES))
    points: int = Field(default=100, ge=1, le=10_000)
    seed: Optional[int] = None
    arc: Optional[ExtremalModel] = None


class SolveRequest(Target):
    psi_a: Optional[list[float]] = None
    grid: int = Field(default=1000, ge=2, le=100_000)
    tol: float = Field(default=1e-8, gt=0)
    active: Optional[list[int]] = None


class ReportRequest(SolveRequest):
    s_samples: list[float] = Field(default_factory=lambda: list(DEFAULT_S_SAMPLES))
    points: int = Field(default=100, ge=1, le=10_000)
    seed: Optional[int] = None
    threshold: float = Field(default=DRIFT_THRESHOLD, gt=0)


def _entry(target: Target) -> ExampleEntry:
    if target.problem is not None:
        return entry_from_document(target.problem, source="request")
    if target.example is None:
        raise ProblemFileError(["either 'example' or 'problem' is required"], source="request")
    return get(target.example, **target.params)


async def _body(request: Request, model: type[BaseModel]) -> Any:
    data = getattr(request.state, "yaml_data", None)
    if data is None:
        try:
            data = await request.json()
        except ValueError as exc:
            raise ProblemFileError([f"body is not valid JSON: {exc}"], source="request") from exc
    return model.model_validate(data)


def _verify_config(req: VerifyRequest | ReportRequest) -> VerifyConfig:
    return VerifyConfig(
        s_samples=req.s_samples,
        points=req.points,
        seed=settings.default_seed if req.seed is None else req.seed,
    )


def _shoot_config(req: SolveRequest, entry: ExampleEntry) -> ShootConfig:
    return ShootConfig(grid=req.grid, tol=req.tol, active=list(entry.active if req.active is None else req.active))


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}


@app.get("/v1/examples")
async def list_examples():
    return {"examples": names()}


@app.get("/v1/examples/{name}")
async def describe_example(name: str):
    entry = get(name)
    return {"summary": entry.summary(), "document": export_problem_file(entry)}


@app.post("/v1/verify")
async def verify(request: Request):
    req = await _body(request, VerifyRequest)
    entry = _entry(req)
    arc = Extremal.from_model(req.arc) if req.arc is not None else None
    reports = await run_in_threadpool(verify_entry, entry, _verify_config(req), arc, req.families)
    return {"passed": all(r.passed for r in reports), "reports": [r.model_dump() for r in reports]}


@app.post("/v1/solve")
async def solve(request: Request):
    req = await _body(request, SolveRequest)
    entry = _entry(req)
    arc = await run_in_threadpool(solve_entry, entry, req.psi_a, _shoot_config(req, entry))
    logger.info("Solved extremal", problem=entry.name, grid=req.grid, iterations=arc.newton_iterations)
    return arc.to_model().model_dump(by_alias=True)


@app.post("/v1/report")
async def report(request: Request):
    req = await _body(request, ReportRequest)
    entry = _entry(req)
    result, _ = await run_in_threadpool(
        run_report, entry, _shoot_config(req, entry), _verify_config(req), req.threshold, req.psi_a
    )
    return result.model_dump()


@app.exception_handler(InvarianceError)
async def invariance_exception_handler(request: Request, exc: InvarianceError):
    logger.warning("Request failed", code=exc.code, error=exc.message, path=request.url.path)
    return JSONResponse(status_code=STATUS.get(exc.code, 400), content={"error": to_error_model(exc).model_dump()})


@app.exception_handler(ValidationError)
async def validation_exception_handler(request: Request, exc: ValidationError):
    error_response = ErrorModel(
        code="VALIDATION_ERROR",
        message="Invalid request body",
        details={"errors": [f"{'/'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors()]},
    )
    return JSONResponse(status_code=400, content={"error": error_response.model_dump()})


@app.exception_handler(Exception)
async def global_exception_handler(request, exc):
    """Global exception handler."""
    logger.error("Unhandled exception", error=str(exc), path=request.url.path)

    error_response = ErrorModel(
        code="INTERNAL_ERROR",
        message="An internal error occurred",
        details={"path": str(request.url.path)},
    )

    return JSONResponse(status_code=500, content={"error": error_response.model_dump()})
