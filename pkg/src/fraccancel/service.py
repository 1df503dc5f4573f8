"""Stateless HTTP service over the scenario runner.

Request and response bodies are JSON using the scenario field names from the
benchmark serialization (``plant``, ``zeros``, ``nu``, ``kp``, ``ki``,
``kd``, ``lambda``, ``mu``, ``horizon_s``, ``n_points``, ``band_lo``,
``band_hi``).  Validation failures return 400 with the offending field path;
an unstable loop returns 422 with the full RunResult (stable=false) so
clients can still render it.  Infinite or undefined margin fields serialize
as null.
"""
from __future__ import annotations

from typing import Any

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .analysis import margins as open_loop_margins
from .bench import ScenarioError, plants, scenario_from_dict
from .fotf import controller_tf, loop_maps, stability
from .run import margins_to_dict, metrics_to_dict, run_scenario

__all__ = ["create_app"]


def _scenario_or_400(payload: Any, where: str = ""):
    if not isinstance(payload, dict):
        raise ScenarioError(where or "$", "expected a JSON object")
    return scenario_from_dict(payload)


def create_app() -> FastAPI:
    app = FastAPI(title="fraccancel service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ScenarioError)
    async def scenario_error_handler(request: Request, exc: ScenarioError):
        return JSONResponse(
            status_code=400,
            content={"error": "validation", "field": exc.field,
                     "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request,
                                         exc: RequestValidationError):
        fields = [".".join(str(p) for p in err.get("loc", ())) or "$"
                  for err in exc.errors()]
        return JSONResponse(
            status_code=400,
            content={"error": "validation", "field": fields[0] if fields else "$",
                     "fields": fields, "message": "request body is invalid"},
        )

    @app.get("/api/plants")
    def list_plants():
        return {
            "plants": [
                {
                    "name": p.name,
                    "num_coeffs": list(p.num_coeffs),
                    "den_coeffs": list(p.den_coeffs),
                    "known_nmp_zeros": list(p.known_nmp_zeros),
                }
                for p in plants().values()
            ],
            "version": __version__,
        }

    @app.post("/api/simulate")
    def simulate(payload: dict = Body(...)):
        sc = _scenario_or_400(payload)
        res = run_scenario(sc)
        body = res.to_dict()
        if not res.stable:
            return JSONResponse(status_code=422, content=body)
        return body

    @app.post("/api/sweep")
    def sweep(payload: dict = Body(...)):
        if not isinstance(payload, dict):
            raise ScenarioError("$", "expected a JSON object")
        sc = _scenario_or_400(payload.get("scenario"), "scenario")
        nus = payload.get("nus")
        if not isinstance(nus, list) or not nus:
            raise ScenarioError("nus", "expected a nonempty list")
        rows = []
        for i, nu in enumerate(nus):
            ok_scalar = isinstance(nu, int) and not isinstance(nu, bool)
            ok_list = (isinstance(nu, list) and nu
                       and all(isinstance(v, int) and not isinstance(v, bool)
                               for v in nu))
            if not (ok_scalar or ok_list):
                raise ScenarioError(f"nus[{i}]",
                                    "expected an integer or a list of integers")
            try:
                res = run_scenario(sc.with_nu(nu))
            except ValueError as exc:
                raise ScenarioError(f"nus[{i}]", str(exc)) from None
            rows.append({
                "nu": list(nu) if isinstance(nu, list) else
                      [nu] * len(sc.canceller.entries),
                "stable": res.stable,
                "verdict": res.verdict,
                "metrics": metrics_to_dict(res.metrics),
                "margins": margins_to_dict(res.margins),
            })
        return {"rows": rows, "version": __version__}

    @app.post("/api/margins")
    def margin_report(payload: dict = Body(...)):
        if not isinstance(payload, dict):
            raise ScenarioError("$", "expected a JSON object")
        sc = _scenario_or_400(payload.get("scenario"), "scenario")
        compare = bool(payload.get("compare_baseline", False))
        maps = loop_maps(sc.loop_model())
        loops = [_loop_entry("compensated", maps.L, sc.band)]
        if compare:
            baseline = controller_tf(sc.controller) * sc.plant.tf()
            loops.append(_loop_entry("baseline", baseline, sc.band))
        return {"loops": loops, "version": __version__}

    return app


def _loop_entry(label: str, loop, band) -> dict:
    report = stability(loop.feedback())
    return {
        "label": label,
        "margins": margins_to_dict(open_loop_margins(loop, band)),
        "stable": report.is_stable,
        "verdict": report.verdict,
    }
