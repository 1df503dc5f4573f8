"""Fractional-order transfer functions and feedback-loop algebra.

Implements the ratio-of-``FracPoly`` transfer function type, the
fractional-order canceller ``1/Q`` that weakens a right-half-plane zero at
``z`` by replacing the factor ``1 - s/z`` with ``1 - (s/z)**(1/nu)``,
PID/FOPID controllers, unity-feedback loop maps, and commensurate-order
stability classification via the sector criterion.

No pole-zero cancellation is ever performed by the arithmetic: products and
sums combine numerators and denominators structurally.  Exact cancellation
of an unstable zero is precisely what feedback theory forbids, and keeping
the representation non-coprime makes that impossible to do by accident.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, pi
from numbers import Integral
from typing import Iterable, Sequence

import numpy as np

from .fracpoly import ExponentLike, FracPoly, as_exponent

__all__ = [
    "FOTF",
    "CancellerSpec",
    "ControllerSpec",
    "LoopModel",
    "LoopMaps",
    "CommensurateForm",
    "StabilityReport",
    "NotAZeroError",
    "RootFindingError",
    "canceller",
    "composite_canceller",
    "controller_tf",
    "fotf_mul",
    "fotf_add",
    "fotf_feedback",
    "factor_nmp_zero",
    "real_unstable_zeros",
    "relative_degree",
    "commensurate_form",
    "stability",
    "loop_maps",
    "poly_roots",
]


class NotAZeroError(ValueError):
    """The requested deflation point is not a numerator root."""


class RootFindingError(RuntimeError):
    """The polynomial eigen-solver failed to converge."""


# ---------------------------------------------------------------------------
# transfer function type


@dataclass(frozen=True)
class FOTF:
    """Ratio of two fractional-order polynomials.

    The representation is not required to be coprime and is never reduced.
    """

    num: FracPoly
    den: FracPoly

    def __post_init__(self):
        if self.den.is_zero:
            raise ValueError("denominator must not be the zero polynomial")

    # construction helpers

    @classmethod
    def one(cls) -> "FOTF":
        return cls(FracPoly.one(), FracPoly.one())

    @classmethod
    def constant(cls, c: float) -> "FOTF":
        return cls(FracPoly.constant(c), FracPoly.one())

    @classmethod
    def from_coeffs(cls, num: Iterable[float], den: Iterable[float]) -> "FOTF":
        """Integer-order rational function from descending coefficients."""
        return cls(FracPoly.from_coeffs(num), FracPoly.from_coeffs(den))

    # evaluation

    def eval_many(self, s) -> np.ndarray:
        return self.num.eval_many(s) / self.den.eval_many(s)

    def __call__(self, s: complex) -> complex:
        return complex(self.eval_many(np.asarray(s, dtype=complex).reshape(1))[0])

    # algebra

    def __mul__(self, other: "FOTF | float | int") -> "FOTF":
        if isinstance(other, (int, float)):
            other = FOTF.constant(float(other))
        if not isinstance(other, FOTF):
            return NotImplemented
        return FOTF(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other: "FOTF | float | int") -> "FOTF":
        if isinstance(other, (int, float)):
            other = FOTF.constant(float(other))
        if not isinstance(other, FOTF):
            return NotImplemented
        return FOTF(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def feedback(self) -> "FOTF":
        """Unity negative feedback ``l / (1 + l) = n / (n + d)``."""
        return FOTF(self.num, self.num + self.den)


def fotf_mul(a: FOTF, b: FOTF) -> FOTF:
    """Series connection: ``(na*nb) / (da*db)``, no cancellation."""
    return a * b


def fotf_add(a: FOTF, b: FOTF) -> FOTF:
    """Parallel connection over the common denominator product."""
    return a + b


def fotf_feedback(l: FOTF) -> FOTF:
    """Closed loop of ``l`` under unity negative feedback."""
    return l.feedback()


def relative_degree(f: FOTF) -> Fraction:
    """Denominator degree minus numerator degree, as an exact rational."""
    return f.den.degree() - f.num.degree()


# ---------------------------------------------------------------------------
# cancellers


def canceller(z: float, nu: int) -> FOTF:
    """Pre-compensator ``1 / Q(s)`` that partially cancels the zero at ``z``.

    ``Q(s)`` is the nu-term geometric sum ``sum_k (s/z)**(k/nu)`` for
    ``k = 0..nu-1``, so that ``(1 - (s/z)**(1/nu)) * Q(s) = 1 - s/z`` on the
    principal sheet.  ``nu = 1`` gives the identity compensator.

    Parameters
    ----------
    z : float
        Location of the positive real zero to weaken, ``z > 0``.
    nu : int
        Cancellation degree, ``nu >= 1``.  Larger values weaken the zero
        more at the cost of loop bandwidth and control effort.
    """
    z = float(z)
    if not z > 0:
        raise ValueError(f"canceller zero must be positive, got {z}")
    if not isinstance(nu, Integral) or nu < 1:
        raise ValueError(f"cancellation degree must be an integer >= 1, got {nu}")
    nu = int(nu)
    q = FracPoly((z ** (-k / nu), Fraction(k, nu)) for k in range(nu))
    return FOTF(FracPoly.one(), q)


@dataclass(frozen=True)
class CancellerSpec:
    """Zeros to cancel and the per-zero cancellation degree.

    ``entries`` is a sequence of ``(z, nu)`` pairs; zeros may be cancelled to
    dissimilar degrees.  An empty spec is the identity compensator.
    """

    entries: tuple[tuple[float, int], ...] = ()

    def __init__(self, entries: Iterable[tuple[float, int]] = ()):
        norm = []
        seen = set()
        for z, nu in entries:
            z = float(z)
            if not z > 0:
                raise ValueError(f"canceller zero must be positive, got {z}")
            if not isinstance(nu, Integral) or nu < 1:
                raise ValueError(
                    f"cancellation degree must be an integer >= 1, got {nu}"
                )
            if z in seen:
                raise ValueError(f"duplicate canceller zero {z}")
            seen.add(z)
            norm.append((z, int(nu)))
        object.__setattr__(self, "entries", tuple(norm))

    def with_nu(self, nu: "int | Sequence[int]") -> "CancellerSpec":
        """Same zeros with a new degree (scalar applies to every zero)."""
        if isinstance(nu, Integral):
            return CancellerSpec((z, int(nu)) for z, _ in self.entries)
        nus = list(nu)
        if len(nus) != len(self.entries):
            raise ValueError(
                f"expected {len(self.entries)} degrees, got {len(nus)}"
            )
        return CancellerSpec((z, int(n)) for (z, _), n in zip(self.entries, nus))


def composite_canceller(spec: CancellerSpec) -> FOTF:
    """Product canceller ``1 / prod_i Q_i(s)`` for several zeros."""
    den = FracPoly.one()
    for z, nu in spec.entries:
        den = den * canceller(z, nu).den
    return FOTF(FracPoly.one(), den)


# ---------------------------------------------------------------------------
# controllers

# Float controller orders are snapped to rationals with denominator <= 100 so
# exponent lattices stay small; 0.01 granularity is far below tuning noise.
_ORDER_DENOM_LIMIT = 100


def _order_fraction(x, name: str) -> Fraction:
    if isinstance(x, float):
        q = Fraction(x).limit_denominator(_ORDER_DENOM_LIMIT)
    else:
        q = Fraction(x)
    if not 0 < q <= 2:
        raise ValueError(f"{name} must lie in (0, 2], got {x}")
    return q


@dataclass(frozen=True)
class ControllerSpec:
    """Five-parameter PID / fractional-order PID controller.

    ``kp + ki/s**lam + kd*s**mu``; classical PID has ``lam = mu = 1`` and a
    PD controller has ``ki = 0``.
    """

    kp: float
    ki: float = 0.0
    kd: float = 0.0
    lam: Fraction = Fraction(1)
    mu: Fraction = Fraction(1)

    def __init__(self, kp: float, ki: float = 0.0, kd: float = 0.0,
                 lam=1, mu=1):
        object.__setattr__(self, "kp", float(kp))
        object.__setattr__(self, "ki", float(ki))
        object.__setattr__(self, "kd", float(kd))
        object.__setattr__(self, "lam", _order_fraction(lam, "lambda"))
        object.__setattr__(self, "mu", _order_fraction(mu, "mu"))


def controller_tf(c: ControllerSpec) -> FOTF:
    """Transfer function of a (FO)PID controller.

    For ``ki = 0`` the ``s**lam`` factor is cancelled structurally, so a PD
    controller comes out as the polynomial ``kd*s**mu + kp`` over 1.
    """
    if c.ki == 0.0:
        num = FracPoly([(c.kd, c.mu), (c.kp, Fraction(0))])
        return FOTF(num, FracPoly.one())
    num = FracPoly([(c.kd, c.lam + c.mu), (c.kp, c.lam), (c.ki, Fraction(0))])
    return FOTF(num, FracPoly.s(c.lam))


# ---------------------------------------------------------------------------
# numerator factorization and root finding


def poly_roots(coeffs: Sequence[float]) -> np.ndarray:
    """All roots of a real polynomial (descending coefficients).

    Companion-matrix eigenvalues polished by one Newton step per root;
    reliable for degrees up to ~120.
    """
    c = np.asarray(coeffs, dtype=float)
    c = np.trim_zeros(c, "f")
    if c.size < 2:
        return np.zeros(0, dtype=complex)
    try:
        roots = np.roots(c)
    except np.linalg.LinAlgError as exc:
        residuals = "eigenvalue iteration did not converge"
        raise RootFindingError(f"companion eigensolver failed: {residuals}") from exc
    dc = np.polyder(c)
    pv = np.polyval(c, roots)
    dv = np.polyval(dc, roots)
    safe = np.abs(dv) > 0
    step = np.zeros_like(roots)
    step[safe] = pv[safe] / dv[safe]
    # skip the Newton step where it would jump wildly (multiple roots)
    ok = np.abs(step) < 1e-3 * (1.0 + np.abs(roots))
    roots = roots - np.where(ok, step, 0.0)
    return roots


def real_unstable_zeros(p) -> list[float]:
    """Positive real roots of an integer-order polynomial, ascending.

    ``p`` may be a descending coefficient sequence or an integer-order
    :class:`FracPoly`.  Roots count as real when ``|Im| < 1e-6 * (1 + |Re|)``.
    """
    if isinstance(p, FracPoly):
        coeffs = p.to_coeffs()
    else:
        coeffs = np.asarray(list(p), dtype=float)
    if np.trim_zeros(coeffs, "f").size < 2:
        raise ValueError("polynomial degree must be >= 1")
    roots = poly_roots(coeffs)
    out = [
        float(r.real)
        for r in roots
        if r.real > 0 and abs(r.imag) < 1e-6 * (1.0 + abs(r.real))
    ]
    return sorted(out)


# Residual tolerance for accepting a deflation point, scaled by the magnitude
# sum of the numerator terms at z.  1e-4 admits inputs rounded to four or
# five digits (typical published values) while rejecting non-roots.
DEFLATION_RTOL = 1e-4


def factor_nmp_zero(g: FOTF, z: float, rtol: float = DEFLATION_RTOL) -> FOTF:
    """Divide out the factor ``1 - s/z`` from the numerator of ``g``.

    Returns ``g / (1 - s/z)`` computed by synthetic deflation; the numerator
    degree drops by exactly one.  ``z`` must be a root of the numerator up to
    ``rtol`` in scaled residual.
    """
    z = float(z)
    if not z > 0:
        raise ValueError(f"expected a positive real zero, got {z}")
    coeffs = g.num.to_coeffs()
    deg = coeffs.size - 1
    if deg < 1:
        raise NotAZeroError("numerator is constant; nothing to deflate")
    powers = z ** np.arange(deg, -1, -1, dtype=float)
    scale = float(np.abs(coeffs) @ powers)
    residual = abs(float(coeffs @ powers))
    if scale == 0.0 or residual > rtol * scale:
        raise NotAZeroError(
            f"z = {z} is not a numerator root: scaled residual "
            f"{residual / scale if scale else float('inf'):.3g} exceeds {rtol:g}"
        )
    # Horner quotient of num by (s - z); num = (1 - s/z) h  =>  h = -z * quotient
    quot = np.empty(deg)
    acc = 0.0
    for k in range(deg):
        acc = coeffs[k] + z * acc
        quot[k] = acc
    deflated = FracPoly.from_coeffs(-z * quot)
    return FOTF(deflated, g.den)


# ---------------------------------------------------------------------------
# commensurate form and stability


@dataclass(frozen=True)
class CommensurateForm:
    """Integer-order image of an FOTF under ``w = s**(1/base)``."""

    base: int
    num_w: np.ndarray
    den_w: np.ndarray


def commensurate_form(f: FOTF) -> CommensurateForm:
    """Rewrite ``f`` as a rational function of ``w = s**(1/N)``.

    ``N`` is the least common multiple of every exponent denominator, so all
    resulting powers are integers.  Evaluating the returned polynomials at
    ``w = s**(1/N)`` (principal branch) reproduces the fractional evaluation.
    """
    n_base = lcm(f.num.exponent_lcm(), f.den.exponent_lcm())
    return CommensurateForm(
        base=n_base,
        num_w=f.num.to_w_coeffs(n_base),
        den_w=f.den.to_w_coeffs(n_base),
    )


#: Angular distance from the sector boundary below which a root is marginal.
STABILITY_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class StabilityReport:
    """Sector-criterion classification with witness roots in the w plane."""

    verdict: str  # "stable" | "unstable" | "marginal"
    base: int
    witnesses: tuple[complex, ...]
    margin: float  # min over roots of |arg w| - pi/(2N); +inf if no roots

    @property
    def is_stable(self) -> bool:
        return self.verdict == "stable"


def stability(f: FOTF) -> StabilityReport:
    """Classify ``f`` by the commensurate-order sector criterion.

    Stable iff every denominator root in the ``w = s**(1/N)`` plane has
    ``|arg w| > pi/(2N)`` with margin above ``1e-9``; roots on (or within
    tolerance of) the sector boundary, including ``w = 0`` integrator roots,
    make the system marginal.  Witnesses are the offending roots, or the
    minimum-margin root for a stable verdict.
    """
    form = commensurate_form(f)
    den = np.trim_zeros(form.den_w, "f")
    if den.size < 2:
        return StabilityReport("stable", form.base, (), float("inf"))
    roots = poly_roots(den)
    sector = pi / (2 * form.base)
    scale = max(1.0, float(np.max(np.abs(roots))))
    zeroish = np.abs(roots) <= 1e-12 * scale
    margins = np.where(zeroish, 0.0, np.abs(np.angle(roots)) - sector)
    verdict = "stable"
    witnesses: list[complex] = []
    if np.any(margins < -STABILITY_BOUNDARY_TOL):
        verdict = "unstable"
        witnesses = [complex(r) for r, m in zip(roots, margins)
                     if m < -STABILITY_BOUNDARY_TOL]
    elif np.any(zeroish) or np.any(np.abs(margins) <= STABILITY_BOUNDARY_TOL):
        verdict = "marginal"
        witnesses = [complex(r) for r, m, zz in zip(roots, margins, zeroish)
                     if zz or abs(m) <= STABILITY_BOUNDARY_TOL]
    else:
        k = int(np.argmin(margins))
        witnesses = [complex(roots[k])]
    return StabilityReport(verdict, form.base, tuple(witnesses), float(np.min(margins)))


def origin_marginal_only(report: StabilityReport) -> bool:
    """True when a marginal verdict is due solely to integrator roots at w=0."""
    return report.verdict == "marginal" and all(abs(w) <= 1e-9 for w in report.witnesses)


# ---------------------------------------------------------------------------
# loop assembly


@dataclass(frozen=True)
class LoopModel:
    """Plant, pre-compensator and feedback controller of the loop."""

    plant: FOTF
    canceller: CancellerSpec = field(default_factory=CancellerSpec)
    controller: ControllerSpec = field(default_factory=lambda: ControllerSpec(1.0))


@dataclass(frozen=True)
class LoopMaps:
    """Unity-feedback loop transfer functions.

    ``L`` open loop, ``T`` command tracking, ``S`` sensitivity, ``Gyd``
    response to a disturbance entering at the plant input, ``Gur`` plant
    input produced by the command (control effort).
    """

    L: FOTF
    T: FOTF
    S: FOTF
    Gyd: FOTF
    Gur: FOTF


def loop_maps(m: LoopModel) -> LoopMaps:
    """Assemble the standard loop maps ``L = C2*C1*G`` under unity feedback."""
    c1 = composite_canceller(m.canceller)
    c2 = controller_tf(m.controller)
    l = c2 * c1 * m.plant
    closed_den = l.num + l.den
    t = FOTF(l.num, closed_den)
    s = FOTF(l.den, closed_den)
    gyd = m.plant * s
    gur = (c2 * c1) * s
    return LoopMaps(L=l, T=t, S=s, Gyd=gyd, Gur=gur)
