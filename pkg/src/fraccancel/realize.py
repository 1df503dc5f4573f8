"""Integer-order rational approximation of fractional compensators.

A band-limited weighted complex least-squares fit (iteratively reweighted by
the previous denominator, until the residual stagnates) approximates a
fractional transfer function with a proper rational one of equal numerator
and denominator degree.  Weighting is 1/|target| so the fit is relative —
compensator magnitudes span decades.  Frequencies are scaled by the band's
geometric center before solving; results are reported in unscaled form with
a monic denominator.  Unstable fits are reported, not repaired.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .fotf import FOTF

__all__ = [
    "FitRequest",
    "FitResult",
    "FitError",
    "fit_rational",
    "export_filter",
    "parse_filter",
]

MAX_ROUNDS = 50
STAGNATION_TOL = 1e-8
VALIDATION_FACTOR = 4   # validation grid density vs fit grid
_TRIM_RTOL = 1e-9       # shared trailing ~zero coefficients are a common s factor


class FitError(RuntimeError):
    """Fit could not produce a usable result (conditioning or evaluation)."""


@dataclass(frozen=True)
class FitRequest:
    """Band-limited fit problem: match ``target(jw)`` with num/den of ``order``."""

    target: FOTF
    band: tuple
    order: int
    n_samples: int = 0  # 0 = auto (max(4*order, 200))

    def __post_init__(self):
        lo, hi = float(self.band[0]), float(self.band[1])
        if not (0 < lo < hi):
            raise ValueError("band must satisfy 0 < omega_lo < omega_hi")
        object.__setattr__(self, "band", (lo, hi))
        if self.order < 1:
            raise ValueError("order must be >= 1")
        n = self.n_samples if self.n_samples else max(4 * self.order, 200)
        if n < 4 * self.order:
            raise ValueError("n_samples must be >= 4*order")
        object.__setattr__(self, "n_samples", int(n))


@dataclass(frozen=True)
class FitResult:
    """Rational fit with band-error report.

    ``num``/``den`` are real coefficients in descending powers of s with the
    denominator normalized monic; errors are worst-case over a validation
    grid ``VALIDATION_FACTOR`` times denser than the fit grid.  ``converged``
    records whether the reweighting stagnated before the round cap.
    """

    num: np.ndarray
    den: np.ndarray
    max_mag_error_db: float
    max_phase_error_deg: float
    fit_stable: bool
    converged: bool = True

    def __post_init__(self):
        object.__setattr__(self, "num", np.asarray(self.num, dtype=float))
        object.__setattr__(self, "den", np.asarray(self.den, dtype=float))

    def eval_many(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        return np.polyval(self.num, s) / np.polyval(self.den, s)

    def __call__(self, s: complex) -> complex:
        return complex(self.eval_many(np.asarray([s]))[0])


def _trim_common_factor(num: np.ndarray, den: np.ndarray):
    # drop shared trailing near-zero coefficients (a common factor of s)
    scale = max(np.abs(num).max(), np.abs(den).max())
    tol = _TRIM_RTOL * scale
    while (num.size > 1 and den.size > 1
           and abs(num[-1]) <= tol and abs(den[-1]) <= tol):
        num, den = num[:-1], den[:-1]
    return num, den


def fit_rational(req: FitRequest) -> FitResult:
    """Fit a rational function to ``req.target`` over ``req.band``.

    Raises FitError (with a condition estimate in the message) if the
    least-squares stage yields non-finite coefficients.
    """
    lo, hi = req.band
    order = req.order
    omegas = np.geomspace(lo, hi, req.n_samples)
    target = req.target.eval_many(1j * omegas)
    if not np.all(np.isfinite(target)):
        raise FitError("target is not finite everywhere on the fit grid")

    w0 = math.sqrt(lo * hi)             # frequency scaling
    x = 1j * omegas / w0
    weights = 1.0 / np.maximum(np.abs(target), 1e-300)

    # columns: num c_0..c_order (ascending in x), den d_0..d_{order-1};
    # den coefficient of x^order pinned to 1 (monic in scaled variable)
    pow_num = x[:, None] ** np.arange(order + 1)[None, :]
    pow_den = pow_num[:, :order]
    rhs_base = target * x ** order

    den_prev = np.ones_like(x)
    residual_prev = math.inf
    converged = False
    cond = 0.0
    sol = None
    for _ in range(MAX_ROUNDS):
        r = weights / np.maximum(np.abs(den_prev), 1e-300)
        A = np.concatenate([pow_num * r[:, None],
                            -target[:, None] * pow_den * r[:, None]], axis=1)
        b = rhs_base * r
        A_ri = np.concatenate([A.real, A.imag])
        b_ri = np.concatenate([b.real, b.imag])
        sol, _, _, sv = np.linalg.lstsq(A_ri, b_ri, rcond=None)
        positive = sv[sv > 0]
        cond = float(sv[0] / positive[-1]) if positive.size else math.inf
        if not np.all(np.isfinite(sol)):
            raise FitError(f"least-squares stage produced non-finite "
                           f"coefficients (condition estimate {cond:.3e})")
        residual = float(np.linalg.norm(A_ri @ sol - b_ri))
        den_prev = pow_den @ sol[order + 1:] + x ** order
        if abs(residual_prev - residual) < STAGNATION_TOL:
            converged = True
            break
        residual_prev = residual

    num_x = sol[:order + 1][::-1]                       # descending in x
    den_x = np.concatenate([[1.0], sol[order + 1:][::-1]])
    # de-scale x = s/w0 and renormalize the denominator monic
    scale_pow = w0 ** -np.arange(order, -1, -1, dtype=float)
    num_s = num_x * scale_pow
    den_s = den_x * scale_pow
    num_s, den_s = num_s / den_s[0], den_s / den_s[0]
    num_s, den_s = _trim_common_factor(num_s, den_s)

    grid_v = np.geomspace(lo, hi, VALIDATION_FACTOR * req.n_samples)
    fit_v = np.polyval(num_s, 1j * grid_v) / np.polyval(den_s, 1j * grid_v)
    ref_v = req.target.eval_many(1j * grid_v)
    if not np.all(np.isfinite(fit_v)):
        raise FitError(f"fit is not finite on the validation grid "
                       f"(condition estimate {cond:.3e})")
    ratio = fit_v / ref_v
    mag_err = float(np.abs(20.0 * np.log10(np.abs(ratio))).max())
    phase_err = float(np.abs(np.angle(ratio, deg=True)).max())

    if den_s.size > 1:
        poles = np.roots(den_s)
        stable = bool(np.all(poles.real < 0))
    else:
        stable = True
    return FitResult(num=num_s, den=den_s, max_mag_error_db=mag_err,
                     max_phase_error_deg=phase_err, fit_stable=stable,
                     converged=converged)


def _fmt(v: float) -> str:
    return "%.17g" % v


def export_filter(res: FitResult, form: str = "tf_coeffs") -> str:
    """Render a fit as plain text, one coefficient per line.

    ``tf_coeffs`` lists numerator then denominator in descending powers of s;
    ``zpk`` lists zeros, poles (one complex root per line, "re im"), then
    gain.  Both forms carry full double precision.
    """
    if form == "tf_coeffs":
        lines = ["# rational filter export",
                 "# form: tf_coeffs",
                 "# ordering: descending powers of s",
                 f"# num ({res.num.size})"]
        lines += [_fmt(c) for c in res.num]
        lines.append(f"# den ({res.den.size})")
        lines += [_fmt(c) for c in res.den]
        return "\n".join(lines) + "\n"
    if form == "zpk":
        zeros = np.roots(res.num) if res.num.size > 1 else np.array([])
        poles = np.roots(res.den) if res.den.size > 1 else np.array([])
        gain = res.num[0] / res.den[0]
        lines = ["# rational filter export",
                 "# form: zpk",
                 "# ordering: zeros, poles (re im per line), then gain",
                 f"# zeros ({zeros.size})"]
        lines += [f"{_fmt(z.real)} {_fmt(z.imag)}" for z in zeros]
        lines.append(f"# poles ({poles.size})")
        lines += [f"{_fmt(p.real)} {_fmt(p.imag)}" for p in poles]
        lines.append("# gain (1)")
        lines.append(_fmt(gain))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export form {form!r}")


def parse_filter(text: str):
    """Parse an exported filter back into evaluatable form.

    Returns (num, den) descending-power arrays for tf_coeffs exports, or
    (zeros, poles, gain) for zpk exports.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    form = None
    for ln in lines:
        if ln.startswith("# form:"):
            form = ln.split(":", 1)[1].strip()
    if form == "tf_coeffs":
        sections: dict = {}
        current = None
        for ln in lines:
            if ln.startswith("# num"):
                current = sections.setdefault("num", [])
            elif ln.startswith("# den"):
                current = sections.setdefault("den", [])
            elif ln.startswith("#"):
                continue
            elif current is not None:
                current.append(float(ln))
        return np.asarray(sections["num"]), np.asarray(sections["den"])
    if form == "zpk":
        sections = {}
        current = None
        for ln in lines:
            if ln.startswith("# zeros"):
                current = sections.setdefault("zeros", [])
            elif ln.startswith("# poles"):
                current = sections.setdefault("poles", [])
            elif ln.startswith("# gain"):
                current = sections.setdefault("gain", [])
            elif ln.startswith("#"):
                continue
            elif current is not None:
                parts = ln.split()
                if len(parts) == 2:
                    current.append(complex(float(parts[0]), float(parts[1])))
                else:
                    current.append(float(parts[0]))
        return (np.asarray(sections.get("zeros", []), dtype=complex),
                np.asarray(sections.get("poles", []), dtype=complex),
                float(sections["gain"][0]))
    raise ValueError("unrecognized filter export")
