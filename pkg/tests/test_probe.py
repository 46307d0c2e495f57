import numpy as np
import pytest

from newton_critic.expr import germ_from_text
from newton_critic.probe import (
    DegenerateJacobian,
    GridFunction,
    ball,
    blowup_family,
    degenerate_blowup_probe,
    discrete_max_operator,
    fit_slope,
    knapp_probe,
    max_operator,
)
from newton_critic.puiseux import PuiseuxPoly

CONTROL = germ_from_text("v*(1 + theta^2)")


def test_constant_function():
    f = GridFunction(np.ones((128, 128)), 2 / 128)
    for eps in (0.125, 0.25):
        ratio = discrete_max_operator(CONTROL, f, eps, v_samples=32, theta_samples=64)
        assert ratio == pytest.approx(2 * eps, rel=1e-6)


def test_monotone_in_f():
    small = GridFunction.from_callable(ball(0.1), 128)
    large = GridFunction.from_callable(ball(0.2), 128)
    Ms, _ = max_operator(CONTROL, small, 0.25, 32, 64)
    Ml, _ = max_operator(CONTROL, large, 0.25, 32, 64)
    assert np.all(Ms <= Ml + 1e-12)


def test_quadrature_converges_in_theta():
    f = GridFunction.from_callable(ball(0.125), 256)
    coarse = discrete_max_operator(CONTROL, f, 0.25, v_samples=64, theta_samples=128, stride=2)
    fine = discrete_max_operator(CONTROL, f, 0.25, v_samples=64, theta_samples=256, stride=2)
    assert abs(coarse - fine) / fine < 0.02


def test_accepts_polynomials_and_callables():
    f = GridFunction.from_callable(ball(0.125), 128)
    a = discrete_max_operator(CONTROL, f, 0.25, 32, 64)
    b = discrete_max_operator(CONTROL.poly, f, 0.25, 32, 64)
    c = discrete_max_operator(lambda v, t: v * (1 + t * t), f, 0.25, 32, 64)
    assert a == pytest.approx(b) and b == pytest.approx(c)


def test_vanishing_jacobian_rejected():
    with pytest.raises(DegenerateJacobian):
        knapp_probe(PuiseuxPoly.theta() ** 2, 2.0, n=64)
    with pytest.raises(DegenerateJacobian):
        knapp_probe(lambda v, t: t ** 2, 2.0, n=64)


def test_deterministic():
    a = knapp_probe(CONTROL, 4.0, deltas=(0.125, 0.0625), n=128, v_samples=32, theta_samples=64)
    b = knapp_probe(CONTROL, 4.0, deltas=(0.125, 0.0625), n=128, v_samples=32, theta_samples=64)
    assert a.ratios == b.ratios


def test_fit_slope_uses_tail():
    xs = [1, 2, 4, 8]
    ys = [5.0, 1.0, 4.0, 64.0]  # slope 4 on the last two points
    slope, residual = fit_slope(xs, ys)
    assert slope == pytest.approx(4.0)
    assert residual == pytest.approx(0.0, abs=1e-12)


def test_blowup_family_choice():
    assert blowup_family(germ_from_text("v*theta")) == "kakeya"
    assert blowup_family(germ_from_text("v + v^3*theta")) == "strip"


def test_blowup_small_run_grows():
    rep = degenerate_blowup_probe(germ_from_text("v*theta"), refinements=2, nx=96, rows=128,
                                  v_samples=32, theta_samples=64)
    assert len(rep.ratios) == 2
    assert rep.ratios[1] > rep.ratios[0]
