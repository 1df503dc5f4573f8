"""Shared scenario execution for the CLI and the HTTP service.

Both front ends call :func:`run_scenario`, so they report byte-identical
numbers for identical inputs.  Unstable loops are still simulated over the
requested horizon (clients decide how to display them); their metrics are
absent.  The ``FRACCANCEL_ILT_TERMS`` environment variable overrides the
inversion series length for every run.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np

from . import __version__
from .analysis import Margins, Metrics, MetricsError, margins, step_metrics
from .bench import Scenario, scenario_to_dict
from .fotf import loop_maps, stability
from .ilt import IltParams, step_response

__all__ = ["RunResult", "run_scenario", "default_ilt_params", "ENV_ILT_TERMS"]

ENV_ILT_TERMS = "FRACCANCEL_ILT_TERMS"


def default_ilt_params(method: str = "fourier_accel") -> IltParams:
    """Library defaults, honoring the series-length environment override."""
    params = IltParams(method=method)
    terms = os.environ.get(ENV_ILT_TERMS)
    if terms:
        try:
            n = int(terms)
        except ValueError:
            raise ValueError(f"{ENV_ILT_TERMS} must be an integer, got {terms!r}")
        params = replace(params, series_terms=n,
                         accel_terms=min(params.accel_terms, n))
    return params


@dataclass(frozen=True)
class RunResult:
    """Everything a front end reports about one closed-loop run."""

    scenario: dict
    times: np.ndarray
    y: np.ndarray
    u: np.ndarray
    metrics: Optional[Metrics]
    margins: Margins
    stable: bool
    verdict: str
    version: str

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form; infinities and undefined values map to null."""
        return {
            "scenario": self.scenario,
            "times": self.times.tolist(),
            "y": self.y.tolist(),
            "u": self.u.tolist(),
            "metrics": metrics_to_dict(self.metrics),
            "margins": margins_to_dict(self.margins),
            "stable": self.stable,
            "verdict": self.verdict,
            "version": self.version,
        }


def _finite_or_none(v: Optional[float]) -> Optional[float]:
    if v is None or not math.isfinite(v):
        return None
    return float(v)


def metrics_to_dict(m: Optional[Metrics]) -> Optional[dict]:
    if m is None:
        return None
    return {
        "undershoot_frac": m.undershoot_frac,
        "overshoot_frac": m.overshoot_frac,
        "rise_time_s": m.rise_time_s,
        "settling_time_s": m.settling_time_s,
        "ss_error": m.ss_error,
        "effort_peak": m.effort_peak,
    }


def margins_to_dict(m: Margins) -> dict:
    return {
        "gain_margin_db": _finite_or_none(m.gain_margin_db),
        "phase_margin_deg": _finite_or_none(m.phase_margin_deg),
        "omega_gain_crossover": _finite_or_none(m.omega_gain_crossover),
        "omega_phase_crossover": _finite_or_none(m.omega_phase_crossover),
    }


def run_scenario(sc: Scenario, params: Optional[IltParams] = None) -> RunResult:
    """Simulate a closed-loop scenario and collect metrics and margins."""
    if params is None:
        params = default_ilt_params()
    maps = loop_maps(sc.loop_model())
    report = stability(maps.T)
    mg = margins(maps.L, sc.band)
    y = step_response(maps.T, sc.horizon_s, sc.n_points, params)
    u = step_response(maps.Gur, sc.horizon_s, sc.n_points, params)

    metrics = None
    if report.is_stable:
        try:
            metrics = step_metrics(y).with_effort(float(np.abs(u.values).max()))
        except MetricsError:
            metrics = None

    return RunResult(
        scenario=scenario_to_dict(sc),
        times=y.times,
        y=y.values,
        u=u.values,
        metrics=metrics,
        margins=mg,
        stable=report.is_stable,
        verdict=report.verdict,
        version=__version__,
    )
