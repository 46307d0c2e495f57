"""Random sparse integer germs shared by the property and acceptance tests."""

import random

from newton_critic.expr import DegenerateInput, normalize
from newton_critic.germ import ExpandedGerm
from newton_critic.puiseux import PuiseuxPoly


def random_germ(rng, max_degree=8, terms=(3, 6)):
    """A normalized exact germ with 3 to 6 integer monomials of total degree <= 8, or None."""
    n = rng.randint(*terms)
    pairs = set()
    while len(pairs) < n:
        p = rng.randint(0, max_degree)
        q = rng.randint(0, max_degree - p)
        pairs.add((p, q))
    items = [(rng.choice([-3, -2, -1, 1, 2, 3]), p, q) for p, q in sorted(pairs)]
    germ = ExpandedGerm(PuiseuxPoly.from_pairs(items), truncation_order=max_degree + 1, exact=True)
    try:
        return normalize(germ)
    except DegenerateInput:
        return None


def corpus(size=60, seed=20240611):
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        g = random_germ(rng)
        if g is not None:
            out.append(g)
    return out
