"""Newton-Puiseux iteration for a simple root branch theta = h(v)."""

from fractions import Fraction

from .germ import KnownRegion
from .puiseux import PuiseuxPoly


class BranchNotSimple(ArithmeticError):
    """The iteration left the simple-root regime."""


def simple_root(F, r, w, cap, known=None):
    """Root h(v) = r v^w + (higher order) of F(v, h(v)) = 0.

    Terms of F with v-exponent above ``cap`` are ignored, as are terms outside
    ``known``.  Returns ``(h, order_h, complete)``: ``h`` is exact for
    exponents <= ``order_h``; ``complete`` means F(v, h) vanishes identically.
    """
    known = known or KnownRegion()
    cap = Fraction(cap)
    h = PuiseuxPoly.monomial(r, w, 0)
    region = known.after_shift(w)
    G = _shift(F, r, w, region, cap)
    last = Fraction(w)
    while True:
        limit = _limit(region, cap)
        lin = G.leading_coefficient_in(1)
        if lin is None:
            raise BranchNotSimple("no linear term after the leading shift")
        p1, c1 = lin
        pure = [(p, c) for (p, q), c in G.terms.items() if q == 0]
        if not pure:
            if region.unbounded:
                return h, None, True
            return h, limit - p1, False
        pz, cz = min(pure, key=lambda t: t[0])
        if pz > limit:
            return h, limit - p1, False
        e = pz - p1
        if e <= last:
            raise BranchNotSimple(f"exponent {e} does not increase past {last}")
        if any(q >= 2 and p + q * e <= p1 + e for (p, q) in G.terms):
            raise BranchNotSimple("higher theta-powers interfere with the branch")
        term = -cz / c1
        h = h + PuiseuxPoly.monomial(term, e, 0)
        region = region.after_shift(e)
        G = _shift(G, term, e, region, cap)
        last = e


def _limit(region, cap):
    m = region.max_v()
    return cap if m is None else min(cap, m)


def _shift(G, r, w, region, cap):
    # exact substitution when everything is known, so completeness can be decided
    if region.unbounded:
        return G.substitute_theta_shift(r, w)
    return region.restrict(G.substitute_theta_shift(r, w, max_v=_limit(region, cap)))


def first_order_check(F, h):
    """Lowest v-exponent of F(v, h(v)) (inf if it vanishes)."""
    res = F.substitute_theta_series(h).filter(lambda p, q: q == 0)
    return min((p for p, _ in res.terms), default=float("inf"))
