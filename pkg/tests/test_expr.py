import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from newton_critic.expr import (
    DegenerateInput,
    Exp,
    ParseError,
    count_exp,
    evaluate_ast,
    expand,
    germ_from_text,
    normalize,
    parse,
)
from newton_critic.puiseux import PuiseuxPoly


def poly_of(pairs):
    return PuiseuxPoly.from_pairs([(c, p, q) for (p, q), c in pairs])


def test_parse_cubic_example():
    ast = parse("(theta - v)^3 * v + v^3")
    assert count_exp(ast) == 0
    assert evaluate_ast(ast, 0.5, 2.0) == pytest.approx((2.0 - 0.5) ** 3 * 0.5 + 0.125)


def test_parse_exp_node():
    ast = parse("v*(exp(theta)-1)")
    assert count_exp(ast) == 1


@pytest.mark.parametrize("text, offset", [("v^(1/2)", 2), ("v + * theta", 4)])
def test_parse_error_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_parse_rejects_unknown_symbol():
    with pytest.raises(ParseError):
        parse("v*x")


def test_expand_cube_is_exact():
    g = expand(parse("(theta - v)^3 * v + v^3"), 8)
    expected = poly_of([((1, 3), 1), ((2, 2), -3), ((3, 1), 3), ((4, 0), -1), ((3, 0), 1)])
    assert g.poly == expected
    assert g.exact
    assert g.certification() == "Exact"


def test_expand_exp_truncates():
    g = expand(parse("v*(exp(theta)-1)"), 4)
    expected = poly_of([((1, 1), 1), ((1, 2), Fraction(1, 2)), ((1, 3), Fraction(1, 6))])
    assert g.poly == expected
    assert not g.exact
    assert g.certification() == "UpToOrder(4)"


def test_zero_expression_rejected():
    with pytest.raises(DegenerateInput):
        germ_from_text("v - v")


def test_normalize_keeps_normalized_germ():
    g = normalize(expand(parse("v + v*theta^2")))
    assert g.poly == poly_of([((1, 0), 1), ((1, 2), 1)])


def test_normalize_drops_forced_terms():
    g = normalize(expand(parse("1 + theta + v*theta")))
    assert g.poly == poly_of([((1, 1), 1)])


@pytest.mark.parametrize("text", ["theta^2", "v^2 + v", "3"])
def test_degenerate_input(text):
    with pytest.raises(DegenerateInput):
        germ_from_text(text)


@pytest.mark.parametrize("text", ["(theta - v)^3 * v + v^3", "v*(exp(theta)-1) + v^2", "theta^2 + v*theta^3"])
def test_normalize_idempotent(text):
    g = germ_from_text(text)
    assert normalize(g).poly == g.poly


_atoms = st.sampled_from(["v", "theta", "1", "2", "(theta - v)", "(v + theta^2)"])


@st.composite
def polynomial_texts(draw):
    terms = []
    for _ in range(draw(st.integers(1, 4))):
        factors = draw(st.lists(_atoms, min_size=1, max_size=3))
        power = draw(st.integers(1, 3))
        terms.append("(" + "*".join(factors) + ")^%d" % power)
    return " + ".join(terms)


@settings(max_examples=60, deadline=None)
@given(polynomial_texts(), st.floats(0.05, 0.9), st.floats(-0.9, 0.9))
def test_expansion_matches_ast(text, v, theta):
    # with no exp node the expansion at a high enough order is exact
    ast = parse(text)
    g = expand(ast, 40)
    assert g.exact
    assert g.poly.evaluate_numeric(v, theta) == pytest.approx(evaluate_ast(ast, v, theta), rel=1e-9, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.2), st.floats(-0.2, 0.2))
def test_truncated_exp_close_to_ast(v, theta):
    ast = parse("v*(exp(theta)-1) + v^2*exp(v)")
    g = expand(ast, 12)
    assert g.poly.evaluate_numeric(v, theta) == pytest.approx(evaluate_ast(ast, v, theta), abs=1e-9)
