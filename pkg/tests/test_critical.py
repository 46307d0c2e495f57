import time
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from corpus import corpus
from newton_critic.critical import (
    Config,
    StronglyDegenerate,
    compute,
    edge_kappa,
    match_binomial_pattern,
)
from newton_critic.expr import germ_from_text
from newton_critic.newton import diagram, reduced_diagram
from newton_critic.puiseux import PuiseuxPoly

EXAMPLE_1 = "(theta - v)^3 * v + v^3"
EXAMPLE_2 = "(theta + exp(v) - 1)^3 * v + v^2"
CORPUS = corpus(60)

v = PuiseuxPoly.v()
theta = PuiseuxPoly.theta()


def kinds(report):
    return [e.kind for e in report.trace]


def test_example_one():
    start = time.perf_counter()
    rep = compute(germ_from_text(EXAMPLE_1))
    assert time.perf_counter() - start < 1.0
    assert rep.p_gamma == 3
    assert rep.certification == "Exact"
    init = rep.trace[0]
    assert init.kind == "InitD" and init.data["value"] == 1
    roots = [e.data["r"] for e in rep.trace if e.kind == "RootFound"]
    assert roots == [1]
    updates = [e.data["new"] for e in rep.trace if e.kind == "DUpdate"]
    assert updates == [3]


@pytest.mark.parametrize("order", [10, 12, 14])
def test_example_two(order):
    rep = compute(germ_from_text(EXAMPLE_2, order))
    assert rep.p_gamma == 3
    updates = [e.data["new"] for e in rep.trace if e.kind == "DUpdate"]
    assert F(5, 2) in updates
    assert "ScenarioTwoCollapse" in kinds(rep)
    assert rep.certification == f"UpToOrder({order})"


def test_example_two_collapse_shift():
    rep = compute(germ_from_text(EXAMPLE_2, 10))
    collapse = next(e for e in rep.trace if e.kind == "ScenarioTwoCollapse")
    assert collapse.data["W"] == 3
    # h(v) = -(e^v - 1) with the first shift -v already applied
    assert collapse.data["h"].startswith("(-1/2)*v^2 + (-1/6)*v^3")


@pytest.mark.parametrize("k", range(2, 7))
def test_single_vertex_exponent(k):
    assert compute(germ_from_text(f"v*(1 + theta^{k})")).p_gamma == k


@pytest.mark.parametrize("k", [3, 4, 5])
def test_pure_theta_leading_term(k):
    assert compute(germ_from_text(f"theta^2 + v*theta^{k}")).p_gamma == 2


def test_strongly_degenerate_rejected():
    with pytest.raises(StronglyDegenerate) as info:
        compute(germ_from_text("v*theta + v^2*theta^2"))
    assert info.value.classification.case == 2


def test_edge_kappa_examples():
    g1 = germ_from_text(EXAMPLE_1).poly
    assert edge_kappa(g1, reduced_diagram(g1).edges[0])[1] == [-6, 6]
    g2 = germ_from_text(EXAMPLE_2, 10).poly
    assert edge_kappa(g2, reduced_diagram(g2).edges[0])[1] == [6, 6]
    g3 = theta ** 2 - v ** 2
    assert edge_kappa(g3, diagram(g3.support(), reduced=False).edges[0])[1] == [2]


def test_binomial_pattern_matches():
    half = PuiseuxPoly.monomial(F(1, 2), 2, 0)
    g = v * (theta + half) ** 3 - v * half ** 3
    W, c, b, r, w = match_binomial_pattern(g, (1, 3), reduced_diagram(g).edges[0])
    assert (W, c, b, r, w) == (3, 1, 1, F(1, 2), 2)
    g = v * (theta + v) ** 3 - v * v ** 3
    assert match_binomial_pattern(g, (1, 3), reduced_diagram(g).edges[0]) == (3, 1, 1, 1, 1)


def test_binomial_pattern_fallback():
    g = v * theta ** 3 + v ** 2 * theta
    assert match_binomial_pattern(g, (1, 3), reduced_diagram(g).edges[0]) is None


def _runs():
    for g in CORPUS:
        try:
            yield g, compute(g, Config(check_invariants=True))
        except StronglyDegenerate:
            continue


def test_corpus_invariants_and_monotone_updates():
    count = 0
    for g, rep in _runs():
        count += 1
        assert rep.p_gamma >= 2
        for e in rep.trace:
            if e.kind in ("LemmaCheck", "Claim54Check"):
                assert e.data["ok"]
            if e.kind == "DUpdate":
                assert e.data["new"] >= e.data["old"]
    assert count >= 40


def test_determinism():
    for g in CORPUS[:20]:
        try:
            a, b = compute(g), compute(g)
        except StronglyDegenerate:
            continue
        assert [e.describe() for e in a.trace] == [e.describe() for e in b.trace]
        assert a.p_gamma == b.p_gamma


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 59), st.integers(2, 4))
def test_rescale_invariance(index, m):
    g = CORPUS[index]
    try:
        expected = compute(g).p_gamma
    except StronglyDegenerate:
        return
    assert compute(g.replace(g.poly.rescale_v(m))).p_gamma == expected
