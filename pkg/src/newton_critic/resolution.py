"""Resolution of singularities for a bivariate function P(v, theta).

The first quadrant (after one of four sign reflections) is split into
regions on which |P| is comparable to a monomial v^a |theta - center(v)|^b:

* vertex-dominant regions between consecutive edge slopes of the Newton
  diagram, where one vertex monomial dominates;
* good edge regions theta = r v^m with r away from the roots of the edge
  polynomial;
* bad edge regions around a root r of multiplicity s.  For s = 1 the
  comparability is linear in theta - h(v), h the root branch; for s > 1 the
  region is translated by the root h of d_theta^(s-1) P and decomposed again.

Each leaf keeps the full chain of interval constraints that defines it, so
coverage can be checked point by point.
"""

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import upoly
from .branches import BranchNotSimple, simple_root
from .newton import diagram, taylor_support
from .puiseux import PuiseuxPoly
from .roots import real_roots, root_value

C_START = 4
C_CAP = 2 ** 16
DOMINANCE_MARGIN = Fraction(1, 2)
QUADRANTS = ("++", "+-", "-+", "--")  # signs of (v, theta)


class ResolutionError(RuntimeError):
    pass


class MultiplicityNotDecreasing(ResolutionError):
    pass


class TruncationInsufficient(ResolutionError):
    pass


@dataclass
class ResolutionConfig:
    order: int = 24
    max_rounds: int = 8
    eps_hint: float = 0.25
    eps_min: float = 2.0 ** -16
    c_start: int = C_START
    c_cap: int = C_CAP
    samples: int = 2000
    per_leaf: int = 200
    seed: int = 0


@dataclass
class Constraint:
    """lo(v) < sign * (theta - center(v)) < hi(v); ``hi=None`` means no upper bound."""

    center: PuiseuxPoly
    sign: int
    lo: PuiseuxPoly
    hi: PuiseuxPoly | None

    def holds(self, v, theta):
        t = self.sign * (theta - _eval(self.center, v))
        ok = t > _eval(self.lo, v)
        if self.hi is not None:
            ok &= t < _eval(self.hi, v)
        return ok

    def describe(self):
        t = "theta" if not self.center else f"(theta - ({self.center}))"
        if self.sign < 0:
            t = "-" + t
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{self.lo} < {t} < {hi}"


@dataclass
class RegionNode:
    kind: str  # VertexDominant, EdgeGood, BadTranslated, Unresolved
    center: PuiseuxPoly
    sign: int
    chain: list
    C: int
    exponents: tuple | None = None
    local: PuiseuxPoly | None = None  # P(v, center + sign*u)
    slope: Fraction | None = None
    root: object = None
    multiplicity: int | None = None
    translation: PuiseuxPoly | None = None
    children: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            yield self
        for c in self.children:
            yield from c.leaves()

    def depth(self):
        return 0 if self.is_leaf else 1 + max(c.depth() for c in self.children)


@dataclass
class RegionTree:
    quadrants: dict
    epsilon: float
    M: int
    C_choices: list
    max_multiplicity: int
    polys: dict

    def leaves(self, quadrant=None):
        for q, roots in self.quadrants.items():
            if quadrant is None or q == quadrant:
                for node in roots:
                    yield from node.leaves()


# -- helpers -------------------------------------------------------------------


def _eval(poly, v):
    if poly is None:
        return np.inf
    return poly.evaluate_array(v, 0.0)


def _vmono(c, w):
    return PuiseuxPoly.monomial(c, w, 0)


def _positive(x):
    return upoly.sign_of(x) > 0 if not isinstance(x, float) else x > 0


def reflect(P, quadrant):
    sv, st = quadrant
    out = {}
    for (p, q), c in P.terms.items():
        sign = 1
        if sv == "-":
            if p.denominator != 1:
                raise ValueError("cannot reflect v with fractional exponents")
            sign *= (-1) ** int(p)
        if st == "-":
            sign *= (-1) ** q
        out[(p, q)] = c * sign
    return PuiseuxPoly(out)


def edge_polynomial(Q, edge):
    """P_E(r) = sum of c_{p,q} r^q over support points on the edge."""
    top = edge.left[1]
    coeffs = [Fraction(0)] * (top + 1)
    for (p, q), c in Q.terms.items():
        if edge.contains(p, q) and edge.left[0] <= p <= edge.right[0]:
            coeffs[q] = coeffs[q] + c
    return upoly.trim(coeffs)


def newton_puiseux_root(Q, order, r=None, m=None):
    """Root branch h(v) of Q(v, h(v)) = 0 with leading term r v^m, up to v-exponent ``order``.

    When ``r`` and ``m`` are omitted the branch is the unique positive simple
    root of an edge polynomial of Q.

    >>> from newton_critic.expr import parse, _expand
    >>> str(newton_puiseux_root(_expand(parse("theta^2 - v^3"), 8), 10))
    'v^(3/2)'
    """
    if r is None or m is None:
        diag = diagram(taylor_support(Q))
        found = [
            (root, edge.slope)
            for edge in diag.edges
            for root, s in positive_roots(edge_polynomial(Q, edge))
            if s == 1
        ]
        if len(found) != 1:
            raise ValueError(f"expected exactly one positive simple edge root, found {len(found)}")
        r, m = found[0]
    try:
        h, _, _ = simple_root(Q, r, m, Fraction(order))
    except BranchNotSimple as exc:
        raise ResolutionError(f"branch is not simple: {exc}")
    return h


def multiplicity_data(edge, s):
    """Check s <= q_l - q_r and s*m <= e; return the exponent e - s*m."""
    ql, qr = edge.left[1], edge.right[1]
    e = edge.left[0] + edge.slope * ql
    if s > ql - qr:
        raise ResolutionError(f"multiplicity {s} exceeds {ql - qr}")
    if s * edge.slope > e:
        raise ResolutionError(f"s*m = {s * edge.slope} exceeds e = {e}")
    return e - s * edge.slope


def positive_roots(PE):
    out = []
    for root, mult in real_roots(PE):
        val = root_value(root)
        if val and _positive(val):
            out.append((val, mult))
    return out


def _root_float(r):
    return float(r)


def choose_C(edges_roots, c0, cap):
    """Smallest C >= c0 (power of 2) keeping every root inside [1/C, C] with disjoint margins."""
    C = c0
    while C <= cap:
        d = 1.0 / C ** 2
        ok = True
        for roots in edges_roots:
            vals = sorted(_root_float(r) for r, _ in roots)
            if any(x - d <= 1.0 / C or x + d >= C for x in vals):
                ok = False
            if any(b - a <= 2 * d for a, b in zip(vals, vals[1:])):
                ok = False
        if ok:
            return C
        C *= 2
    raise ResolutionError(f"no dominance constant up to {cap} separates the edge roots")


def dominance_bound(Q, vertex):
    """Upper bound for |other terms| / |vertex term| on the vertex-dominant region.

    Terms off the vertex's theta-degree gain C^-|dq|; this returns the
    coefficient ratios and theta-degree gaps; callers weigh each term by
    C^-|dq| and eps^(weighted excess), the excess being >= 0 by convexity.
    """
    cv = abs(float(Q.coeff(*vertex)))
    out = []
    for (p, q), c in Q.terms.items():
        if (p, q) == tuple(vertex):
            continue
        out.append((abs(float(c)) / cv, abs(q - vertex[1]), p, q))
    return out


# -- construction ---------------------------------------------------------------


class _Builder:
    def __init__(self, cfg, c0, eps):
        self.cfg = cfg
        self.c0 = c0
        self.eps = eps
        self.C_choices = []
        self.max_s = 1
        self.denoms = {1}

    def note(self, poly):
        if poly is not None:
            self.denoms.add(poly.denom)

    def node(self, Q, H, sign, chain, depth, parent_slope=None, budget=None):
        if not Q:
            raise ResolutionError("P vanishes identically on a region")
        diag = diagram(taylor_support(Q))
        verts, edges = diag.vertices, diag.edges
        edges_roots = [positive_roots(edge_polynomial(Q, e)) for e in edges]
        C = choose_C(edges_roots, self.c0, self.cfg.c_cap)
        C = self._dominant_C(Q, diag, C)
        self.C_choices.append(C)
        delta = Fraction(1, C * C)
        out = []

        def leaf(kind, lo, hi, exps, **extra):
            con = Constraint(H, sign, lo, hi)
            self.note(lo)
            self.note(hi)
            return RegionNode(kind, H, sign, chain + [con], C, exps, Q, **extra)

        zero = PuiseuxPoly()
        # vertex-dominant regions, from large theta to small theta
        for k, vert in enumerate(verts):
            lo = _vmono(C, edges[k].slope) if k < len(edges) else zero
            hi = _vmono(Fraction(1, C), edges[k - 1].slope) if k > 0 else None
            out.append(leaf("VertexDominant", lo, hi, (vert[0], vert[1])))
        # edge regions theta = r v^m, r in [1/C, C]
        for edge, roots in zip(edges, edges_roots):
            m = edge.slope
            e = edge.left[0] + m * edge.left[1]
            cuts = [Fraction(1, C)]
            for r, s in roots:
                rl = r - delta
                rh = r + delta
                cuts.extend([rl, rh])
            cuts.append(Fraction(C))
            # good pieces between consecutive cuts (even positions)
            for a, b in zip(cuts[0::2], cuts[1::2]):
                self._check_edge_piece(Q, edge, e, a, b)
                out.append(leaf("EdgeGood", _vmono(a, m), _vmono(b, m), (edge.left[0], edge.left[1]), slope=m))
            relevant = parent_slope is None or m > parent_slope
            for r, s in roots:
                self.max_s = max(self.max_s, s)
                if relevant and budget is not None and s >= budget:
                    raise MultiplicityNotDecreasing(f"multiplicity {s} did not drop below {budget} at slope {m}")
                exp_after = multiplicity_data(edge, s)
                lo, hi = _vmono(r - delta, m), _vmono(r + delta, m)
                if s == 1:
                    h = self._root(Q, r, m, e)
                    center = H + h * sign
                    self.note(center)
                    con = Constraint(H, sign, lo, hi)
                    local = Q.substitute_theta_series(h)
                    out.append(
                        RegionNode(
                            "BadTranslated", center, sign, chain + [con], C, (exp_after, 1), local,
                            slope=m, root=r, multiplicity=1, translation=h,
                        )
                    )
                    continue
                con = Constraint(H, sign, lo, hi)
                if not relevant:
                    out.append(RegionNode("Unresolved", H, sign, chain + [con], C, None, Q, slope=m, root=r, multiplicity=s))
                    continue
                if depth + 1 > self.cfg.max_rounds:
                    raise ResolutionError("resolution rounds exceeded")
                F = Q.d_theta(s - 1)
                h = self._root(F, r, m, e)
                center = H + h * sign
                self.note(center)
                internal = RegionNode(
                    "BadTranslated", center, sign, chain + [con], C, None, None,
                    slope=m, root=r, multiplicity=s, translation=h,
                )
                Q1 = Q.substitute_theta_series(h)
                up = _vmono(r + delta, m) - h
                down = h - _vmono(r - delta, m)
                for side, bound in ((1, up), (-1, down)):
                    Qs = Q1 if side == 1 else reflect(Q1, "+-")
                    self.note(bound)
                    con_side = Constraint(center, sign * side, zero, bound)
                    internal.children.extend(
                        self.node(Qs, center, sign * side, internal.chain + [con_side], depth + 1, m, s)
                    )
                out.append(internal)
        return out

    def _dominant_C(self, Q, diag, C):
        """Raise C until every vertex monomial dominates the others by the margin."""
        eps = self.eps
        while C <= self.cfg.c_cap:
            ok = True
            for vert in diag.vertices:
                total = 0.0
                for ratio, dq, p, q in dominance_bound(Q, vert):
                    bounded, excess = self._excess(diag, vert, p, q)
                    gain = float(C) ** (-dq) if bounded else 1.0
                    total += ratio * gain * eps ** float(excess)
                if total > float(DOMINANCE_MARGIN):
                    ok = False
                    break
            if ok:
                return C
            C *= 2
        raise ResolutionError("vertex dominance fails for every C up to the cap")

    def _check_edge_piece(self, Q, edge, e, a, b):
        """Require the edge terms to dominate the rest on theta = r v^m, a <= r <= b."""
        PE = np.polynomial.Polynomial([float(c) for c in edge_polynomial(Q, edge)])
        a, b = float(a), float(b)
        crit = [x.real for x in PE.deriv().roots() if abs(x.imag) < 1e-12 and a < x.real < b]
        floor = min(abs(PE(x)) for x in [a, b] + crit)
        total = 0.0
        for (p, q), c in Q.terms.items():
            excess = p + edge.slope * q - e
            if excess > 0:
                total += abs(float(c)) * max(a, b) ** q * self.eps ** float(excess)
        if floor <= 0 or total > float(DOMINANCE_MARGIN) * floor:
            raise ResolutionError(f"edge terms do not dominate on [{a:.3g}, {b:.3g}] at slope {edge.slope}")

    @staticmethod
    def _excess(diag, vert, p, q):
        # weighted-degree gap of (p, q) above the vertex along the binding edge slope
        k = diag.vertices.index(vert)
        if q > vert[1]:
            m = diag.edges[k - 1].slope if k > 0 else None
        elif q < vert[1]:
            m = diag.edges[k].slope if k < len(diag.edges) else None
        else:
            return True, p - vert[0]
        if m is None:
            # no edge bounds theta from above: only |theta| < eps helps
            return False, (p - vert[0]) + (q - vert[1])
        return True, (p - vert[0]) + m * (q - vert[1])

    def _root(self, F, r, m, e):
        cap = Fraction(self.cfg.order) + e
        try:
            h, order_h, complete = simple_root(F, r, m, cap)
        except BranchNotSimple as exc:
            raise ResolutionError(f"root branch at r={r} is not simple: {exc}")
        lead = min(h.terms)
        if lead != (Fraction(m), 0) or h.terms[lead] != r:
            raise ResolutionError("root branch does not start with r v^m")
        return h


def build_tree(P, cfg, c0, eps, quadrants=QUADRANTS):
    b = _Builder(cfg, c0, eps)
    roots = {}
    polys = {}
    top = Constraint(PuiseuxPoly(), 1, PuiseuxPoly(), None)
    for quad in quadrants:
        Pq = reflect(P, quad)
        polys[quad] = Pq
        roots[quad] = b.node(Pq, PuiseuxPoly(), 1, [top], 0)
    depth = max((n.depth() for ns in roots.values() for n in ns), default=0)
    if depth > b.max_s + 1:
        raise ResolutionError(f"tree depth {depth} exceeds max multiplicity + 1 = {b.max_s + 1}")
    M = 1
    for d in b.denoms:
        M = lcm(M, d)
    return RegionTree(roots, eps, M, b.C_choices, b.max_s, polys)


def resolve(P, config=None, quadrants=QUADRANTS):
    """Build a region tree, adapting C and epsilon until the sampled checks pass."""
    cfg = config or ResolutionConfig()
    eps = cfg.eps_hint
    last = None
    while eps >= cfg.eps_min:
        c0 = cfg.c_start
        while c0 <= cfg.c_cap:
            try:
                tree = build_tree(P, cfg, c0, eps, quadrants)
            except MultiplicityNotDecreasing:
                raise
            except ResolutionError as exc:
                last = exc
                break
            rep = verify_resolution(tree, cfg.samples, cfg.per_leaf, cfg.seed)
            if rep.passed:
                tree.verification = rep
                return tree
            last = rep
            if not rep.comparability_failures:
                break
            c0 *= 2
        eps /= 2
    raise ResolutionError(f"no epsilon >= {cfg.eps_min} passed the checks: {last.summary() if isinstance(last, VerificationReport) else last}")


# -- verification ----------------------------------------------------------------


@dataclass
class VerificationReport:
    points: int
    uncovered: int
    overlapping: int
    leaves_checked: int
    comparability_failures: list
    sign_failures: list
    unresolved_hits: int
    worst_C: float
    seconds: float
    leaf_stats: list

    @property
    def passed(self):
        return not (self.uncovered or self.overlapping or self.comparability_failures or self.sign_failures or self.unresolved_hits)

    def summary(self):
        return (
            f"points={self.points} uncovered={self.uncovered} overlapping={self.overlapping} "
            f"leaves={self.leaves_checked} worst_C={self.worst_C:.3g} "
            f"comparability_failures={len(self.comparability_failures)} sign_failures={len(self.sign_failures)} "
            f"unresolved_hits={self.unresolved_hits}"
        )


def quarter_disc_points(n, eps, seed=0):
    from scipy.stats import qmc

    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    out = np.empty((0, 2))
    while len(out) < n:
        pts = sampler.random(max(2 * n, 64)) * eps
        pts = pts[(pts ** 2).sum(axis=1) < eps * eps]
        pts = pts[(pts > 0).all(axis=1)]
        out = np.vstack([out, pts])
    return out[:n, 0], out[:n, 1]


def leaf_membership(leaf, v, theta):
    ok = np.ones_like(v, dtype=bool)
    for con in leaf.chain:
        ok &= con.holds(v, theta)
    return ok


def _u_interval(leaf, v, eps):
    """Admissible u = sign*(theta - center) for each v, from every chain constraint."""
    lo = np.full_like(v, -np.inf)
    hi = np.full_like(v, np.inf)
    s0 = leaf.sign
    for con in leaf.chain:
        d = _eval(leaf.center - con.center, v)  # center_leaf - center_con, exact difference
        a = _eval(con.lo, v)
        b = _eval(con.hi, v) if con.hi is not None else np.full_like(v, np.inf)
        # con.sign * (s0*u + d) in (a, b)
        if con.sign > 0:
            wl, wh = a - d, b - d
        else:
            wl, wh = -b - d, -a - d
        # s0*u in (wl, wh)
        if s0 > 0:
            lo, hi = np.maximum(lo, wl), np.minimum(hi, wh)
        else:
            lo, hi = np.maximum(lo, -wh), np.minimum(hi, -wl)
    top = np.sqrt(np.maximum(eps * eps - v * v, 0)) - _eval(leaf.center, v)
    if s0 > 0:
        hi = np.minimum(hi, top)
    else:
        lo = np.maximum(lo, -top)
    return lo, hi


def sample_leaf(leaf, eps, n, rng):
    vs, us = [], []
    tries = 0
    while sum(len(x) for x in vs) < n and tries < 12:
        tries += 1
        v = eps * 2.0 ** (-10 * rng.random(4 * n))
        lo, hi = _u_interval(leaf, v, eps)
        keep = hi > lo
        v, lo, hi = v[keep], lo[keep], hi[keep]
        if not len(v):
            continue
        k = len(v)
        mode = rng.integers(0, 4, k)
        s = rng.random(k)
        near = 10.0 ** (-3 * rng.random(k))
        frac = np.where(mode == 0, s, np.where(mode == 1, near, 1 - near))
        u = lo + (hi - lo) * frac
        # probe the neighbourhood of u = 0 when the interval straddles it
        straddle = (lo < 0) & (hi > 0) & (mode == 3)
        width = np.minimum(-lo, hi)
        u = np.where(straddle, np.sign(s - 0.5) * width * near, u)
        vs.append(v)
        us.append(u)
    if not vs:
        return np.empty(0), np.empty(0)
    return np.concatenate(vs)[:n], np.concatenate(us)[:n]


def check_leaf(leaf, eps, n, rng, cap):
    v, u = sample_leaf(leaf, eps, n, rng)
    if not len(v):
        return {"samples": 0}
    a, b = leaf.exponents
    val = leaf.local.evaluate_array(v, u)
    denom = v ** float(a) * np.abs(u) ** float(b)
    good = (denom > 0) & np.isfinite(val)
    ratio = np.abs(val[good]) / denom[good]
    if not len(ratio) or ratio.min() <= 0:
        return {"samples": int(len(v)), "C": math.inf, "scale": 0.0, "sign_ok": False}
    lo, hi = float(ratio.min()), float(ratio.max())
    signs = np.sign(val[good]) * np.sign(u[good]) ** (int(b) % 2)
    return {
        "samples": int(len(ratio)),
        "scale": math.sqrt(lo * hi),
        "C": math.sqrt(hi / lo),
        "ratio_min": lo,
        "ratio_max": hi,
        "sign_ok": bool(np.all(signs == signs[0])),
    }


def verify_resolution(tree, samples=10_000, per_leaf=500, seed=0, cap=C_CAP):
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    total = uncovered = overlapping = unresolved_hits = 0
    comp_fail, sign_fail, stats = [], [], []
    worst = 1.0
    for qi, (quad, roots) in enumerate(tree.quadrants.items()):
        v, th = quarter_disc_points(samples, tree.epsilon, seed + qi)
        count = np.zeros(len(v), dtype=int)
        leaves = [leaf for node in roots for leaf in node.leaves()]
        for leaf in leaves:
            inside = leaf_membership(leaf, v, th)
            count += inside
            if leaf.kind == "Unresolved":
                unresolved_hits += int(inside.sum())
        total += len(v)
        uncovered += int((count == 0).sum())
        overlapping += int((count > 1).sum())
        for idx, leaf in enumerate(leaves):
            if leaf.kind == "Unresolved":
                continue
            st = check_leaf(leaf, tree.epsilon, per_leaf, rng, cap)
            st.update(quadrant=quad, kind=leaf.kind, exponents=leaf.exponents, index=idx)
            leaf.stats = st
            stats.append(st)
            if st["samples"] == 0:
                continue
            worst = max(worst, st["C"])
            if st["C"] > cap:
                comp_fail.append(st)
            if not st["sign_ok"]:
                sign_fail.append(st)
    return VerificationReport(
        total, uncovered, overlapping, len(stats), comp_fail, sign_fail, unresolved_hits, worst,
        time.perf_counter() - t0, stats,
    )
