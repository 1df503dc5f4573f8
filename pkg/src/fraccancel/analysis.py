"""Frequency-domain and step-response analysis of fractional loops.

Margins come from a dense logarithmic sweep (2000 points per decade) with
bisection refinement of each crossover to 1e-6 relative frequency; phase is
unwrapped by continuity along the sweep.  Step metrics use the standard
conventions: steady state from the mean of the final 2% of samples, rise time
10%->90%, settling into a +/-2% band, and undershoot as any negative
excursion relative to a positive steady state (not only near t = 0).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from .fotf import (
    FOTF,
    CancellerSpec,
    ControllerSpec,
    LoopModel,
    StabilityReport,
    controller_tf,
    loop_maps,
    stability,
)
from .ilt import IltParams, TimeSeries, step_response

__all__ = [
    "FreqResponse",
    "Margins",
    "Metrics",
    "MetricsError",
    "SweepRow",
    "freq_response",
    "margins",
    "step_metrics",
    "nu_sweep",
    "control_effort",
    "DEFAULT_BAND",
]

SWEEP_PER_DECADE = 2000
CROSSOVER_RTOL = 1e-6
SETTLE_BAND = 0.02          # +/-2% settling band
SS_TAIL_FRAC = 0.02         # steady state from the final 2% of samples
SS_SPREAD_LIMIT = 0.05      # relative spread above this = not settled
DEFAULT_BAND = (1e-3, 1e3)


class MetricsError(ValueError):
    """Raised when a response is too degenerate to yield step metrics."""


@dataclass(frozen=True)
class FreqResponse:
    """Complex response sampled on an increasing positive frequency grid."""

    omegas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if omegas.ndim != 1 or omegas.shape != values.shape:
            raise ValueError("omegas and values must be 1-D arrays of equal length")
        if omegas.size and (omegas[0] <= 0 or np.any(np.diff(omegas) <= 0)):
            raise ValueError("omegas must be positive and strictly increasing")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.omegas.size


@dataclass(frozen=True)
class Margins:
    """Classical stability margins; crossover-dependent fields may be absent.

    ``phase_margin_deg`` and ``omega_gain_crossover`` are None when |L| never
    crosses 1 in the swept band; ``gain_margin_db`` is +infinity when the
    unwrapped phase never crosses -180 degrees.
    """

    gain_margin_db: float
    phase_margin_deg: Optional[float]
    omega_gain_crossover: Optional[float]
    omega_phase_crossover: Optional[float]


@dataclass(frozen=True)
class Metrics:
    """Step-response quality numbers; fractions are relative to |y_ss|."""

    undershoot_frac: float
    overshoot_frac: float
    rise_time_s: float
    settling_time_s: float
    ss_error: float
    effort_peak: Optional[float] = None

    def with_effort(self, peak: float) -> "Metrics":
        return replace(self, effort_peak=float(peak))


def freq_response(f: FOTF, omega_lo: float, omega_hi: float, n: int) -> FreqResponse:
    """Evaluate ``f`` at ``j*omega`` on an ``n``-point log grid."""
    if not (0 < omega_lo < omega_hi):
        raise ValueError("need 0 < omega_lo < omega_hi")
    if n < 2:
        raise ValueError("need n >= 2")
    omegas = np.geomspace(omega_lo, omega_hi, n)
    return FreqResponse(omegas=omegas, values=f.eval_many(1j * omegas))


def _log_mag(l: FOTF, omega: float) -> float:
    return math.log10(abs(l(1j * omega)))


def _phase_near(l: FOTF, omega: float, reference: float) -> float:
    # principal-value phase lifted to the unwrapped branch nearest `reference`
    raw = cmath.phase(l(1j * omega))
    k = round((reference - raw) / math.tau)
    return raw + math.tau * k


def _bisect_log(fn, w_lo: float, w_hi: float, f_lo: float) -> float:
    # bisection in log-frequency down to CROSSOVER_RTOL relative width
    for _ in range(80):
        if (w_hi - w_lo) <= CROSSOVER_RTOL * w_lo:
            break
        w_mid = math.sqrt(w_lo * w_hi)
        f_mid = fn(w_mid)
        if (f_mid < 0) == (f_lo < 0):
            w_lo, f_lo = w_mid, f_mid
        else:
            w_hi = w_mid
    return math.sqrt(w_lo * w_hi)


def margins(l: FOTF, band: Sequence[float] = DEFAULT_BAND) -> Margins:
    """Gain/phase margins of an open loop over a frequency band.

    The first (lowest-frequency) crossover of each kind is reported.  Missing
    crossovers are reported, not treated as failures.
    """
    w_lo, w_hi = float(band[0]), float(band[1])
    if not (0 < w_lo < w_hi) or not math.isfinite(w_hi):
        raise ValueError("band must be positive and finite")
    decades = math.log10(w_hi / w_lo)
    n = max(int(math.ceil(SWEEP_PER_DECADE * decades)) + 1, 16)
    omegas = np.geomspace(w_lo, w_hi, n)
    vals = l.eval_many(1j * omegas)
    mag = np.abs(vals)
    with np.errstate(divide="ignore"):
        log_mag = np.log10(mag)
    phase = np.unwrap(np.angle(vals))

    omega_gc = None
    pm_deg = None
    cross = np.nonzero(np.sign(log_mag[:-1]) * np.sign(log_mag[1:]) < 0)[0]
    hit = np.nonzero(log_mag == 0.0)[0]
    if hit.size and (not cross.size or hit[0] <= cross[0]):
        omega_gc = float(omegas[hit[0]])
        ref = phase[hit[0]]
    elif cross.size:
        i = int(cross[0])
        omega_gc = _bisect_log(lambda w: _log_mag(l, w),
                               float(omegas[i]), float(omegas[i + 1]),
                               float(log_mag[i]))
        ref = float(phase[i])
    if omega_gc is not None:
        pm_deg = 180.0 + math.degrees(_phase_near(l, omega_gc, ref))

    omega_pc = None
    gm_db = math.inf
    # crossings of the unwrapped phase through -180 deg (any odd multiple
    # of pi would flip the Nyquist sign too, but the classical first
    # crossing through -pi is what the margin quotes)
    shifted = phase + math.pi
    pcross = np.nonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) < 0)[0]
    phit = np.nonzero(shifted == 0.0)[0]
    if phit.size and (not pcross.size or phit[0] <= pcross[0]):
        omega_pc = float(omegas[phit[0]])
    elif pcross.size:
        i = int(pcross[0])
        ref_i = float(phase[i])
        omega_pc = _bisect_log(lambda w: _phase_near(l, w, ref_i) + math.pi,
                               float(omegas[i]), float(omegas[i + 1]),
                               float(shifted[i]))
    if omega_pc is not None:
        gm_db = -20.0 * math.log10(abs(l(1j * omega_pc)))

    return Margins(gain_margin_db=gm_db, phase_margin_deg=pm_deg,
                   omega_gain_crossover=omega_gc, omega_phase_crossover=omega_pc)


def _first_crossing(t: np.ndarray, y: np.ndarray, level: float) -> float:
    """Time of the first upward crossing of `level`, linearly interpolated."""
    above = y >= level
    if above[0]:
        return float(t[0])
    idx = np.nonzero(above)[0]
    if not idx.size:
        return float(t[-1])
    i = int(idx[0])
    frac = (level - y[i - 1]) / (y[i] - y[i - 1])
    return float(t[i - 1] + frac * (t[i] - t[i - 1]))


def step_metrics(r: TimeSeries) -> Metrics:
    """Step metrics of a sampled response; raises MetricsError if not settled.

    Steady state is the mean of the final 2% of samples and must be nonzero
    with relative spread <= 5%; all reported times lie within the horizon.
    """
    t, y = r.times, r.values
    n_tail = max(1, int(round(SS_TAIL_FRAC * y.size)))
    tail = y[-n_tail:]
    y_ss = float(tail.mean())
    if y_ss == 0.0 or not math.isfinite(y_ss):
        raise MetricsError("steady-state estimate is zero or non-finite")
    spread = float(tail.max() - tail.min()) / abs(y_ss)
    if spread > SS_SPREAD_LIMIT:
        raise MetricsError(
            f"response not settled: tail spread {spread:.3g} exceeds {SS_SPREAD_LIMIT}")

    sgn = 1.0 if y_ss > 0 else -1.0
    ys = sgn * y                      # normalized to a positive steady state
    mag = abs(y_ss)
    undershoot = max(0.0, -float(ys.min())) / mag
    overshoot = max(0.0, float(ys.max()) - mag) / mag

    t10 = _first_crossing(t, ys, 0.1 * mag)
    t90 = _first_crossing(t, ys, 0.9 * mag)
    rise = max(0.0, t90 - t10)

    outside = np.abs(y - y_ss) > SETTLE_BAND * mag
    if outside.any():
        i = int(np.nonzero(outside)[0][-1])
        if i + 1 >= y.size:
            settle = float(t[-1])
        else:
            d0 = abs(y[i] - y_ss) - SETTLE_BAND * mag
            d1 = abs(y[i + 1] - y_ss) - SETTLE_BAND * mag
            frac = d0 / (d0 - d1) if d0 != d1 else 1.0
            settle = float(t[i] + frac * (t[i + 1] - t[i]))
    else:
        settle = float(t[0])

    return Metrics(undershoot_frac=undershoot, overshoot_frac=overshoot,
                   rise_time_s=rise, settling_time_s=settle,
                   ss_error=abs(1.0 - y_ss))


NuConfig = Union[int, Sequence[int]]


@dataclass(frozen=True)
class SweepRow:
    """One canceller-order configuration of a sweep study."""

    nu: tuple
    metrics: Optional[Metrics]
    margins: Margins
    stable: bool


def nu_sweep(plant: FOTF, zeros: Sequence[float], nus: Sequence[NuConfig],
             c2: ControllerSpec, horizon: float, n: int,
             params: IltParams = IltParams(),
             band: Sequence[float] = DEFAULT_BAND) -> list:
    """Closed-loop metrics/margins for each canceller-order configuration.

    Each entry of ``nus`` is a scalar (same order for every zero) or a
    per-zero sequence.  Unstable rows carry ``metrics=None``; ordering
    follows ``nus``.
    """
    rows = []
    for nu in nus:
        orders = (nu,) * len(zeros) if isinstance(nu, int) else tuple(nu)
        if len(orders) != len(zeros):
            raise ValueError(f"nu configuration {nu!r} does not match {len(zeros)} zeros")
        spec = CancellerSpec(tuple(zip(zeros, orders)))
        model = LoopModel(plant=plant, canceller=spec, controller=c2)
        maps = loop_maps(model)
        report = stability(maps.T)
        mg = margins(maps.L, band)
        metrics = None
        if report.is_stable:
            metrics = step_metrics(step_response(maps.T, horizon, n, params))
        rows.append(SweepRow(nu=orders, metrics=metrics, margins=mg,
                             stable=report.is_stable))
    return rows


def control_effort(m: LoopModel, horizon: float, n: int,
                   params: IltParams = IltParams()) -> TimeSeries:
    """Plant-input signal u(t) for a unit step command (response of Gur)."""
    return step_response(loop_maps(m).Gur, horizon, n, params)
