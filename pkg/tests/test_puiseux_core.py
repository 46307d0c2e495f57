from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from newton_critic import upoly
from newton_critic.degeneracy import cinematic_curvature, is_identically_zero
from newton_critic.field import AlgebraicReal, FieldElement
from newton_critic.puiseux import NegativeBase, PuiseuxPoly
from newton_critic.roots import real_roots, root_value

v = PuiseuxPoly.v()
theta = PuiseuxPoly.theta()


def mono(c, p, q):
    return PuiseuxPoly.monomial(c, F(p), q)


def test_product_of_conjugates():
    assert (theta - v) * (theta + v) == theta ** 2 - v ** 2


def test_binomial_cube():
    expected = theta ** 3 + mono(3, 1, 2) + mono(3, 2, 1) + v ** 3
    assert (theta + v) ** 3 == expected


def test_mul_by_zero_is_empty():
    assert not (PuiseuxPoly.zero() * (theta + v))
    assert len(PuiseuxPoly.zero() * (theta + v)) == 0


def test_derivatives():
    assert mono(1, 1, 3).d_theta() == mono(3, 1, 2)
    assert mono(1, F(3, 2), 1).d_v() == mono(F(3, 2), F(1, 2), 1)
    assert not (v ** 3).d_theta()


def test_shift_example_one():
    g = (theta - v) ** 3 * v + v ** 3
    assert g.substitute_theta_shift(1, 1) == mono(1, 1, 3) + v ** 3


def test_shift_difference_of_squares():
    assert (theta ** 2 - v ** 2).substitute_theta_shift(1, 1) == theta ** 2 + mono(2, 1, 1)


def test_shift_by_zero_is_identity():
    g = (theta - v) ** 3 * v + v ** 3
    assert g.substitute_theta_shift(0, 1) == g


def test_rescale():
    assert mono(1, F(1, 2), 1).rescale_v(2) == mono(1, 1, 1)
    g = mono(1, 1, 3) + v ** 3
    assert g.rescale_v(1) == g
    assert (mono(1, F(3, 2), 0) + mono(1, F(1, 2), 2)).rescale_v(2) == v ** 3 + mono(1, 1, 2)


def test_common_denominator():
    assert (mono(1, F(3, 2), 1) + mono(1, F(1, 3), 0)).denom == 6


def test_real_roots_linear():
    assert real_roots([F(-6), F(6)]) == [(AlgebraicReal.from_rational(1), 1)]
    assert real_roots([F(6), F(6)]) == [(AlgebraicReal.from_rational(-1), 1)]


def test_real_roots_with_repeated_factor():
    f = upoly.mul([-2, 0, 1], [1, -2, 1])
    roots = real_roots(f)
    assert [m for _, m in roots] == [1, 2, 1]
    assert [float(r) for r, _ in roots] == pytest.approx([-2 ** 0.5, 1.0, 2 ** 0.5])
    assert roots[1][0].as_rational() == 1
    # irrational roots are exact elements of Q(sqrt 2)
    s = root_value(roots[2][0])
    assert isinstance(s, FieldElement)
    assert s * s == 2


def test_is_identically_zero():
    assert is_identically_zero(PuiseuxPoly.zero()) == ("Yes", "Exact")
    assert is_identically_zero(cinematic_curvature(v * theta)) == ("Yes", "Exact")
    cine = cinematic_curvature(v + v * theta ** 2)
    assert cine == mono(4, 1, 0)
    assert is_identically_zero(cine)[0] == "No"


def test_evaluate_numeric():
    assert (theta ** 2 - v ** 2).evaluate_numeric(1, 2) == 3
    assert (mono(1, 1, 3) + v ** 3).evaluate_numeric(0.5, 1) == pytest.approx(5 / 8)
    assert float((theta ** 2 - v ** 2).evaluate_numeric(1, 2, interval=True)) == pytest.approx(3)


def test_evaluate_negative_base():
    with pytest.raises(NegativeBase):
        mono(1, F(1, 2), 0).evaluate_numeric(-1, 0)


_exponents = st.tuples(st.fractions(0, 4, max_denominator=3), st.integers(0, 4))
_polys = st.lists(
    st.tuples(st.integers(-5, 5).filter(bool), _exponents), min_size=0, max_size=5
).map(lambda items: PuiseuxPoly.from_pairs([(c, p, q) for c, (p, q) in items]))


@settings(max_examples=80, deadline=None)
@given(_polys, _polys)
def test_leibniz_rule(a, b):
    assert (a * b).d_theta() == a.d_theta() * b + a * b.d_theta()
    # d_v stays inside the type only when no exponent lies strictly in (0, 1)
    a = a.filter(lambda p, q: p == 0 or p >= 1)
    b = b.filter(lambda p, q: p == 0 or p >= 1)
    assert (a * b).d_v() == a.d_v() * b + a * b.d_v()


@settings(max_examples=80, deadline=None)
@given(_polys, st.integers(-3, 3), st.fractions(F(1, 3), 3, max_denominator=3),
       st.floats(0.05, 0.95), st.floats(-1, 1))
def test_shift_agrees_with_evaluation(g, r, w, v0, t0):
    shifted = g.substitute_theta_shift(F(r), w)
    direct = g.evaluate_numeric(v0, t0 + r * v0 ** float(w))
    assert shifted.evaluate_numeric(v0, t0) == pytest.approx(direct, rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(_polys, _polys)
def test_ring_axioms(a, b):
    assert a + b == b + a
    assert a * b == b * a
    assert a - a == PuiseuxPoly.zero()
