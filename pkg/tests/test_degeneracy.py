from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from corpus import corpus
from newton_critic.degeneracy import (
    PreconditionError,
    cinematic_curvature,
    classify,
    geometric_sequence_test,
)
from newton_critic.expr import germ_from_text
from newton_critic.puiseux import PuiseuxPoly

CORPUS = corpus(60)


def poly(text):
    return germ_from_text(text).poly


@pytest.mark.parametrize("text, expected", [
    ("v*theta", PuiseuxPoly.zero()),
    ("v + v*theta^2", PuiseuxPoly.monomial(4, F(1), 0)),
    ("theta^2 + v*theta^3", PuiseuxPoly.from_pairs([(12, 0, 1), (18, 1, 2)])),
])
def test_cinematic_curvature(text, expected):
    assert cinematic_curvature(poly(text)) == expected


@pytest.mark.parametrize("text, label", [
    ("v*theta", "Degenerate(case 1)"),
    ("v*(exp(theta)-1)", "Degenerate(case 1)"),
    ("v*theta + v^2*theta^2", "Degenerate(case 2)"),
    ("v*(exp(theta)-1) + v^2*theta", "Degenerate(case 2)"),
    ("v + v^3*theta", "Degenerate(case 3)"),
    ("v*(1 + theta^2)", "NotStronglyDegenerate"),
    ("theta^2 + v*theta^3", "NotStronglyDegenerate"),
])
def test_classify(text, label):
    assert classify(germ_from_text(text)).label() == label


def test_certification_follows_truncation():
    assert classify(germ_from_text("v*theta + v^2*theta^2")).certification == "Exact"
    assert classify(germ_from_text("v*(exp(theta)-1)", 10)).certification == "UpToOrder(10)"


def test_geometric_sequence():
    assert geometric_sequence_test(germ_from_text("v*(exp(theta)-1)"))
    assert geometric_sequence_test(germ_from_text("v*theta"))
    assert not geometric_sequence_test(germ_from_text("v*theta + v*theta^3"))
    # exp(2 theta) has ratio 2 between consecutive k! c_k
    assert geometric_sequence_test(germ_from_text("v^2*(exp(2*theta)-1) + v^3"))


def test_geometric_sequence_needs_single_vertex():
    with pytest.raises(PreconditionError):
        geometric_sequence_test(germ_from_text("theta^2 + v*theta^3"))


def _fd_curvature(g, v, t, h=1e-3):
    def f(a, b):
        return g.evaluate_numeric(a, b)

    def d_tt(a, b):
        return (f(a, b + h) - 2 * f(a, b) + f(a, b - h)) / h ** 2

    def d_ttt(a, b):
        return (f(a, b + 2 * h) - 2 * f(a, b + h) + 2 * f(a, b - h) - f(a, b - 2 * h)) / (2 * h ** 3)

    def d_vt(a, b):
        return (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4 * h ** 2)

    def d_vtt(a, b):
        return (d_tt(a + h, b) - d_tt(a - h, b)) / (2 * h)

    return d_tt(v, t) * d_vtt(v, t) - d_ttt(v, t) * d_vt(v, t)


@pytest.mark.parametrize("index", range(0, 60, 6))
def test_curvature_against_finite_differences(index):
    g = CORPUS[index].poly
    cine = cinematic_curvature(g)
    for v, t in [(0.5, 0.3), (0.7, -0.4), (0.35, 0.6)]:
        exact = cine.evaluate_numeric(v, t)
        assert _fd_curvature(g, v, t) == pytest.approx(exact, rel=1e-3, abs=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 59), st.sampled_from([-3, -1, F(1, 2), 2, 7]))
def test_classification_invariant_under_scaling(index, c):
    g = CORPUS[index]
    scaled = g.replace(g.poly * PuiseuxPoly.const(F(c)))
    assert classify(scaled).label() == classify(g).label()
