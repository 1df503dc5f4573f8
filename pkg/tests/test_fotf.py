"""Fractional transfer functions, cancellers, controllers, and stability.

Covers:
 - the telescoping factor identity behind partial cancellation
 - canceller/composite-canceller structure and validation
 - controller forms (P/PD/PID and fractional-order variants)
 - relative degree, including the almost-bi-proper composed compensator
 - polynomial roots, real unstable zero extraction, zero deflation
 - commensurate form and sector-criterion stability verdicts
 - loop map algebraic identities and the no-cancellation rule
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from fraccancel.fracpoly import FracPoly
from fraccancel.fotf import (
    FOTF,
    CancellerSpec,
    ControllerSpec,
    LoopModel,
    NotAZeroError,
    canceller,
    commensurate_form,
    composite_canceller,
    controller_tf,
    factor_nmp_zero,
    loop_maps,
    origin_marginal_only,
    poly_roots,
    real_unstable_zeros,
    relative_degree,
    stability,
)
from fraccancel.bench import plant_example1, plant_example2

S = FracPoly.s
ONE = FracPoly.one()


# -- telescoping identity ----------------------------------------------------

def _principal_pow(base: complex, p: float) -> complex:
    return cmath.exp(p * cmath.log(base))


def test_telescoping_identity_random_triples():
    # (1 - (s/z)^{1/nu}) * sum_{k=1}^{nu} (s/z)^{(k-1)/nu} == 1 - s/z
    rng = np.random.default_rng(42)
    for _ in range(200):
        z = 10.0 ** rng.uniform(-2, 3)
        nu = int(rng.integers(1, 31))
        mag = 10.0 ** rng.uniform(-3, 3)
        arg = rng.uniform(-math.pi, math.pi)
        s = mag * cmath.exp(1j * arg)
        q = canceller(z, nu).den(s)
        lhs = (1.0 - _principal_pow(s / z, 1.0 / nu)) * q
        rhs = 1.0 - s / z
        assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(s / z))


def test_canceller_structure():
    z, nu = 8.2057, 20
    c = canceller(z, nu)
    assert c.num == ONE
    assert len(c.den) == nu
    # term for exponent (k-1)/nu carries weight z^{-(k-1)/nu}
    for coeff, q in c.den.terms:
        assert coeff == pytest.approx(z ** -float(q))
    # every factor of (s/z)^{1/nu} equals 1 at s = z, so the sum is nu
    assert c.den(z) == pytest.approx(nu)


def test_canceller_validation():
    with pytest.raises(ValueError):
        canceller(-1.0, 4)
    with pytest.raises(ValueError):
        canceller(2.0, 0)
    with pytest.raises(ValueError):
        canceller(2.0, 1.5)  # type: ignore[arg-type]


def test_identity_canceller_is_unity():
    c = canceller(3.0, 1)
    assert c.num == ONE and c.den == ONE


def test_composite_canceller_multiplies_denominators():
    spec = CancellerSpec([(2.0, 3), (5.0, 4)])
    comp = composite_canceller(spec)
    assert comp.num == ONE
    assert comp.den == canceller(2.0, 3).den * canceller(5.0, 4).den
    with pytest.raises(ValueError):
        CancellerSpec([(2.0, 3), (2.0, 4)])   # duplicate zero


def test_canceller_spec_with_nu():
    spec = CancellerSpec([(2.0, 3), (5.0, 4)])
    assert spec.with_nu(7).entries == ((2.0, 7), (5.0, 7))
    assert spec.with_nu([1, 9]).entries == ((2.0, 1), (5.0, 9))
    with pytest.raises(ValueError):
        spec.with_nu([1])


# -- controllers -------------------------------------------------------------

def test_pd_controller():
    c = controller_tf(ControllerSpec(kp=0.1, kd=0.5))
    assert c.den == ONE
    assert c.num == FracPoly([(0.5, 1), (0.1, 0)])


def test_pid_controller():
    c = controller_tf(ControllerSpec(kp=2.0, ki=3.0, kd=0.5))
    # (0.5 s^2 + 2 s + 3) / s
    assert c.den == S(1)
    assert c.num == FracPoly.from_coeffs([0.5, 2.0, 3.0])


def test_fractional_order_controller():
    c = controller_tf(ControllerSpec(kp=1.0, ki=1.0, kd=1.0, lam=0.5, mu=0.5))
    # (s^{1} + s^{1/2} + 1) / s^{1/2}; float orders snap to exact rationals
    assert c.den == S(Fraction(1, 2))
    assert c.num == FracPoly([(1.0, 1), (1.0, Fraction(1, 2)), (1.0, 0)])


def test_controller_order_bounds():
    with pytest.raises(ValueError):
        ControllerSpec(kp=1.0, ki=1.0, lam=2.5)
    with pytest.raises(ValueError):
        ControllerSpec(kp=1.0, kd=1.0, mu=0.0)


# -- degrees -----------------------------------------------------------------

def test_relative_degree():
    g = plant_example1().tf()
    assert relative_degree(g) == Fraction(2)
    # composed compensator C2*C1 at nu = 20 is almost bi-proper: degrees 1
    # (numerator) and 19/20 (denominator), i.e. relative degree -1/20
    c2 = controller_tf(ControllerSpec(kp=0.1, kd=0.5))
    c1 = composite_canceller(CancellerSpec([(8.2057, 20)]))
    assert relative_degree(c2 * c1) == Fraction(-1, 20)


# -- roots and zeros ---------------------------------------------------------

def test_poly_roots_closed_forms():
    r = np.sort(poly_roots([1.0, -3.0, 2.0]).real)
    np.testing.assert_allclose(r, [1.0, 2.0], rtol=1e-12)
    r = poly_roots([1.0, 2.0, 5.0])
    np.testing.assert_allclose(np.sort_complex(r), [-1 - 2j, -1 + 2j], rtol=1e-12)


def test_real_unstable_zeros_benchmark_plants():
    z1 = real_unstable_zeros(plant_example1().tf().num)
    assert len(z1) == 1
    assert z1[0] == pytest.approx(8.2057, abs=1e-3)
    z2 = real_unstable_zeros(plant_example2().tf().num)
    assert len(z2) == 3
    for got, ref in zip(z2, (19.9982, 45.0015, 400.0282)):
        assert got == pytest.approx(ref, abs=1e-2)


def test_real_unstable_zeros_filters_lhp_and_complex():
    # zeros at +1, -2, and -1 +/- 3j; only +1 is a real unstable zero
    p = FracPoly.from_coeffs([1.0, -1.0]) * FracPoly.from_coeffs([1.0, 2.0]) \
        * FracPoly.from_coeffs([1.0, 2.0, 10.0])
    assert real_unstable_zeros(-p) == pytest.approx([1.0])


def test_factor_nmp_zero_round_trip():
    h = FracPoly.from_coeffs([2.0, 3.0, 1.0])
    z = 5.0
    num = (1.0 - S(1) * (1.0 / z)) * h
    g = FOTF(num, FracPoly.from_coeffs([1.0, 1.0, 1.0, 1.0]))
    deflated = factor_nmp_zero(g, z)
    assert deflated.den == g.den
    rebuilt = (1.0 - S(1) * (1.0 / z)) * deflated.num
    np.testing.assert_allclose(rebuilt.to_coeffs(), num.to_coeffs(), rtol=1e-12)


def test_factor_nmp_zero_rejects_non_zero():
    g = FOTF(FracPoly.from_coeffs([1.0, -2.0]), FracPoly.from_coeffs([1.0, 3.0]))
    with pytest.raises(NotAZeroError):
        factor_nmp_zero(g, 7.0)


def test_factor_nmp_zero_accepts_rounded_benchmark_value():
    g = plant_example1().tf()
    deflated = factor_nmp_zero(g, 8.2057)
    # quotient degree drops by one and the deflated numerator has no
    # remaining real unstable zero
    assert deflated.num.degree() == g.num.degree() - 1
    assert real_unstable_zeros(deflated.num) == []


# -- commensurate form and stability -----------------------------------------

def test_commensurate_form_base():
    f = FOTF(S(Fraction(1, 2)) + 1.0, S(Fraction(1, 3)) + 2.0)
    form = commensurate_form(f)
    assert form.base == 6
    assert form.num_w.tolist() == [1.0, 0.0, 0.0, 1.0]
    assert form.den_w.tolist() == [1.0, 0.0, 2.0]


def test_stability_integer_order_oracles():
    assert stability(FOTF(ONE, S(1) + 1.0)).verdict == "stable"
    assert stability(FOTF(ONE, S(1) - 1.0)).verdict == "unstable"
    assert stability(FOTF(ONE, FracPoly.from_coeffs([1.0, 0.0, 1.0]))).verdict == "marginal"


def test_stability_integrator_is_origin_marginal():
    report = stability(FOTF(ONE, S(1)))
    assert report.verdict == "marginal"
    assert origin_marginal_only(report)
    resonant = stability(FOTF(ONE, FracPoly.from_coeffs([1.0, 0.0, 1.0])))
    assert not origin_marginal_only(resonant)


def test_stability_half_order_sector():
    # den(w) = w^2 - 2 cos(phi) w + 1 has roots e^{+/- i phi}; with base
    # w = s^{1/2} the sector boundary is pi/4
    def half_order(phi):
        den = S(1) - S(Fraction(1, 2)) * (2.0 * math.cos(phi)) + 1.0
        return FOTF(ONE, den)

    assert stability(half_order(math.pi / 3)).verdict == "stable"
    assert stability(half_order(math.pi / 6)).verdict == "unstable"
    assert stability(half_order(math.pi / 4)).verdict == "marginal"


def test_stability_margin_and_witnesses():
    report = stability(FOTF(ONE, S(1) + 1.0))
    assert report.base == 1
    assert report.margin == pytest.approx(math.pi / 2)
    assert report.witnesses and report.witnesses[0] == pytest.approx(-1.0)


# -- loop maps ---------------------------------------------------------------

def _bench_loop():
    model = LoopModel(
        plant=plant_example1().tf(),
        canceller=CancellerSpec([(8.2057, 20)]),
        controller=ControllerSpec(kp=0.1, kd=0.5),
    )
    return model, loop_maps(model)


def test_loop_map_identities():
    model, maps = _bench_loop()
    pts = 1j * np.geomspace(1e-2, 1e2, 41)
    t, sens = maps.T.eval_many(pts), maps.S.eval_many(pts)
    np.testing.assert_allclose(t + sens, 1.0, atol=1e-10)
    gyd = maps.Gyd.eval_many(pts)
    np.testing.assert_allclose(gyd, model.plant.eval_many(pts) * sens, rtol=1e-10)
    # before the loop is closed, Gur*(1+L) is exactly the compensator chain
    c2c1 = controller_tf(model.controller) * composite_canceller(model.canceller)
    lhs = maps.Gur.eval_many(pts) * (1.0 + maps.L.eval_many(pts))
    np.testing.assert_allclose(lhs, c2c1.eval_many(pts), rtol=1e-10)


def test_multiplication_never_cancels():
    p = FracPoly.from_coeffs([1.0, -1.0])
    q = FracPoly.from_coeffs([1.0, 2.0])
    a, b = FOTF(p, q), FOTF(q, p)
    prod = a * b
    assert prod.num == p * q    # kept verbatim, not reduced to 1
    assert prod.den == q * p
    assert len(prod.num) > 1


def test_feedback_keeps_branch_structure():
    _, maps = _bench_loop()
    # closed-loop denominator is num+den of the open loop, verbatim
    assert maps.T.den == maps.L.num + maps.L.den
    assert maps.T.num == maps.L.num
