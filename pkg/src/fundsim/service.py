"""Stateless HTTP JSON API over the sweep engine.

Synchronous request/response with a content-addressed result cache:
identical plans (seed included) hash to the same key and return the
cached payload byte-for-byte. A bounded semaphore caps concurrent
sweeps; excess requests get 503 with Retry-After rather than queueing.
"""

from __future__ import annotations

import json
import os
import threading
import time
from contextlib import asynccontextmanager

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .distributions import PowerLawParams, closed_form_stats
from .errors import FundsimError
from .experiments import (
    PRESETS,
    plan_from_dict,
    plan_hash,
    plan_to_dict,
    run_sweep,
)

DEFAULT_MAX_CELLS = 4096
DEFAULT_MAX_CONCURRENT = 2
DEFAULT_SEED = 0
RETRY_AFTER_SECONDS = 5


def _env_int(name: str, fallback: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else fallback


def create_app(
    max_cells: int | None = None,
    max_concurrent: int | None = None,
    default_seed: int | None = None,
    sweep_workers: int | None = None,
) -> FastAPI:
    """Build the service; limits fall back to FUNDSIM_* env variables."""
    max_cells = max_cells if max_cells is not None else _env_int("FUNDSIM_MAX_CELLS", DEFAULT_MAX_CELLS)
    max_concurrent = (
        max_concurrent
        if max_concurrent is not None
        else _env_int("FUNDSIM_MAX_CONCURRENT", DEFAULT_MAX_CONCURRENT)
    )
    default_seed = default_seed if default_seed is not None else DEFAULT_SEED

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.draining = False
        yield
        app.state.draining = True

    app = FastAPI(title="fundsim", version=__version__, lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.draining = False
    app.state.cache = {}
    app.state.cache_lock = threading.Lock()
    # Semaphore of size 0 means every simulation request is turned away.
    app.state.slots = threading.Semaphore(max_concurrent) if max_concurrent > 0 else None

    def _error(status: int, message: str, headers: dict | None = None) -> JSONResponse:
        return JSONResponse({"detail": message}, status_code=status, headers=headers)

    @app.post("/api/v1/simulate")
    def simulate(payload: dict = Body(...)):
        plan_dict = payload.get("plan")
        if not isinstance(plan_dict, dict):
            return _error(400, "request body must carry a 'plan' object")
        use_cache = bool(payload.get("cache", True))
        plan_dict = dict(plan_dict)
        plan_dict.setdefault("master_seed", default_seed)
        try:
            plan = plan_from_dict(plan_dict)
        except FundsimError as exc:
            return _error(400, str(exc))
        if plan.grid_size > max_cells:
            return _error(
                413,
                f"plan spans {plan.grid_size} grid cells; the budget is {max_cells}",
            )
        key = plan_hash(plan)
        if use_cache:
            with app.state.cache_lock:
                cached = app.state.cache.get(key)
            if cached is not None:
                return {
                    "result": cached,
                    "elapsed_ms": 0.0,
                    "cache_hit": True,
                    "engine_version": __version__,
                }
        if app.state.slots is None or not app.state.slots.acquire(blocking=False):
            return _error(
                503,
                "all simulation slots are busy; retry shortly",
                headers={"Retry-After": str(RETRY_AFTER_SECONDS)},
            )
        try:
            started = time.perf_counter()
            result = run_sweep(plan, max_workers=sweep_workers)
            elapsed_ms = (time.perf_counter() - started) * 1000.0
        finally:
            app.state.slots.release()
        result_dict = json.loads(result.to_json())
        if use_cache:
            with app.state.cache_lock:
                app.state.cache[key] = result_dict
        return {
            "result": result_dict,
            "elapsed_ms": elapsed_ms,
            "cache_hit": False,
            "engine_version": __version__,
        }

    @app.post("/api/v1/stats")
    def stats(payload: dict = Body(...)):
        try:
            params = PowerLawParams(
                float(payload["alpha"]), float(payload["x_min"])
            )
            report = closed_form_stats(params, int(payload.get("k", 1)))
        except FundsimError as exc:
            return _error(400, str(exc))
        except (KeyError, TypeError, ValueError) as exc:
            return _error(400, f"invalid stats request: {exc}")
        return report.to_dict()

    @app.get("/api/v1/presets")
    def presets():
        return {
            "presets": [
                {"name": name, "description": desc, "plan": plan_to_dict(plan)}
                for name, (desc, plan) in PRESETS.items()
            ]
        }

    @app.get("/api/v1/health")
    def health():
        if app.state.draining:
            return _error(503, "draining")
        return {"status": "ok", "engine_version": __version__}

    return app


app = create_app()
