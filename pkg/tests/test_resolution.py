from fractions import Fraction as F

import pytest

from newton_critic.expr import _expand, parse
from newton_critic.newton import diagram, taylor_support
from newton_critic.puiseux import PuiseuxPoly
from newton_critic.resolution import (
    QUADRANTS,
    ResolutionConfig,
    ResolutionError,
    build_tree,
    edge_polynomial,
    multiplicity_data,
    newton_puiseux_root,
    positive_roots,
    reflect,
    resolve,
    verify_resolution,
)
from newton_critic.roots import real_roots

SUITE = [
    "theta^2 - v^2",
    "(theta - v)^2 - v^3",
    "theta^3 - 3*v^2*theta + 2*v^3",
    "v*theta^3 - v^4",
    "(theta - v)^2*(theta + v) - v^5",
]


def poly(text, order=16):
    return _expand(parse(text), order)


def edges(text):
    P = poly(text)
    return P, diagram(taylor_support(P)).edges


def multiplicities(text):
    P, (edge,) = edges(text)
    return {float(r): m for r, m in real_roots(edge_polynomial(P, edge))}


def test_multiplicity_square():
    assert multiplicities("(theta - v)^2") == {1.0: 2}
    _, (edge,) = edges("(theta - v)^2")
    assert multiplicity_data(edge, 2) == 0


def test_multiplicity_difference_of_squares():
    assert multiplicities("theta^2 - v^2") == {-1.0: 1, 1.0: 1}


def test_multiplicity_cubic():
    assert multiplicities("theta^3 - 3*v^2*theta + 2*v^3") == {-2.0: 1, 1.0: 2}


def test_multiplicity_bound_rejected():
    _, (edge,) = edges("theta^2 - v^2")
    with pytest.raises(ResolutionError):
        multiplicity_data(edge, 3)


def test_positive_roots_only():
    P, (edge,) = edges("theta^3 - 3*v^2*theta + 2*v^3")
    assert positive_roots(edge_polynomial(P, edge)) == [(1, 2)]


def test_root_of_linear_factor():
    Q = poly("(theta - v)^2 - v^3").d_theta()
    assert newton_puiseux_root(Q, 10) == PuiseuxPoly.v()


def test_root_of_binomial():
    assert str(newton_puiseux_root(poly("theta^2 - v^3"), 12)) == "v^(3/2)"


def test_root_of_fixed_point_series():
    h = newton_puiseux_root(poly("theta - v - v^2*theta"), 9)
    expected = PuiseuxPoly.from_pairs([(1, k, 0) for k in (1, 3, 5, 7, 9)])
    assert h == expected


def test_reflect_quadrants():
    P = poly("v*theta^3 - v^4 + v^2*theta")
    assert reflect(P, "++") == P
    assert reflect(reflect(P, "--"), "--") == P
    assert reflect(P, "+-").coeff(1, 3) == -1
    assert reflect(P, "-+").coeff(1, 3) == -1
    assert reflect(P, "-+").coeff(4, 0) == -1


def test_monomial_is_single_region():
    tree = resolve(poly("v^2*theta^3"), ResolutionConfig(samples=2000, per_leaf=100))
    for q in QUADRANTS:
        (leaf,) = tree.leaves(q)
        assert leaf.kind == "VertexDominant"
        assert leaf.exponents == (2, 3)
        assert leaf.stats["C"] == pytest.approx(1.0)
    assert tree.verification.passed


def test_difference_of_squares_regions():
    tree = resolve(poly("theta^2 - v^2"))
    kinds = sorted((leaf.kind, leaf.exponents) for leaf in tree.leaves("++"))
    assert ("VertexDominant", (0, 2)) in kinds
    assert ("VertexDominant", (2, 0)) in kinds
    assert ("BadTranslated", (1, 1)) in kinds
    assert tree.verification.passed


def test_double_root_translates_by_v():
    tree = resolve(poly("(theta - v)^2 - v^3"))
    (internal,) = [n for n in tree.quadrants["++"] if n.children]
    assert internal.multiplicity == 2
    assert internal.translation == PuiseuxPoly.v()
    strips = sorted(str(leaf.center) for leaf in internal.leaves() if leaf.kind == "BadTranslated")
    assert strips == ["v + v^(3/2)", "v - v^(3/2)"]
    assert all(leaf.exponents == (F(3, 2), 1) for leaf in internal.leaves() if leaf.kind == "BadTranslated")


@pytest.mark.parametrize("text", SUITE)
def test_suite_verifies(text):
    tree = resolve(poly(text), ResolutionConfig(samples=2000, per_leaf=150))
    report = verify_resolution(tree, samples=3000, per_leaf=150, seed=1)
    assert report.passed, report.summary()
    assert report.uncovered == 0 and report.overlapping == 0
    assert max(leaf.depth() for roots in tree.quadrants.values() for leaf in roots) <= tree.max_multiplicity + 1


def test_resolution_is_deterministic():
    a = resolve(poly("theta^3 - 3*v^2*theta + 2*v^3"))
    b = resolve(poly("theta^3 - 3*v^2*theta + 2*v^3"))
    assert a.epsilon == b.epsilon
    assert [(l.kind, str(l.center)) for l in a.leaves()] == [(l.kind, str(l.center)) for l in b.leaves()]


def test_edge_piece_with_hidden_zero_is_rejected():
    # at eps = 2^-11 the piece (1/8, 63/64) v contains the zero theta = v - v^(3/2)
    P = poly("(theta - v)^2 - v^3")
    with pytest.raises(ResolutionError):
        build_tree(P, ResolutionConfig(), 4, 2.0 ** -11)
    assert build_tree(P, ResolutionConfig(), 4, 2.0 ** -13).leaves()
