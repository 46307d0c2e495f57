"""The edge-by-edge algorithm for the critical exponent p_gamma.

Starting from D = d(gamma), every compact edge of the reduced Newton
diagram is processed: the real nonzero roots r of its curvature polynomial
kappa(r) give substitutions theta -> theta + r v^m, after which D absorbs
d_>(anchor) of the new germ and the new edges to the right of the anchor are
processed in turn.  A binomial pattern on the edge next to the anchor
signals an infinite chain of such substitutions; it is collapsed into one
substitution by the Newton-Puiseux root of the (W-1)-st theta-derivative.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import upoly
from .branches import BranchNotSimple, simple_root
from .degeneracy import classify
from .field import Approx, FieldElement, poly_str
from .newton import INF, EmptyReducedSupport, d_gamma, d_gt, p0, reduced_diagram
from .puiseux import PuiseuxPoly
from .roots import is_exact_root, real_roots, root_value


class MaxDepthExceeded(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TruncationInsufficient(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InvariantViolation(AssertionError):
    pass


class StronglyDegenerate(ValueError):
    def __init__(self, classification):
        super().__init__(f"germ is strongly degenerate: {classification.label()}")
        self.classification = classification


@dataclass
class Config:
    max_depth: int = 32
    order: int = 12
    check_invariants: bool = True


@dataclass
class Event:
    kind: str
    depth: int
    data: dict

    def describe(self):
        body = ", ".join(f"{k}={_fmt(v)}" for k, v in self.data.items())
        return f"{'  ' * self.depth}{self.kind}({body})"


def _fmt(x):
    if isinstance(x, FieldElement):
        return f"{x!r} ~ {float(x):.10g} (a: root of {poly_str(x.alpha.minpoly, 'x')} ~ {float(x.alpha):.10g})"
    if isinstance(x, Approx):
        return repr(x)
    if x == INF:
        return "inf"
    if isinstance(x, tuple):
        return "(" + ", ".join(_fmt(y) for y in x) + ")"
    return str(x)


@dataclass
class CriticalReport:
    p_gamma: Fraction
    D_gamma: Fraction
    trace: list
    certification: str
    germ: str = ""
    classification: object = None

    def events(self, kind):
        return [e for e in self.trace if e.kind == kind]


# -- kappa ---------------------------------------------------------------------


def edge_points(poly, edge):
    return [(p, q) for (p, q) in poly.terms if edge.contains(p, q) and edge.left[0] <= p <= edge.right[0]]


def edge_kappa(poly, edge):
    """(kappa(v, theta), kappa(r)) for an edge; kappa(r) is None without q >= 2 points."""
    pts = [(p, q) for p, q in edge_points(poly, edge) if q >= 2]
    if not pts:
        return PuiseuxPoly(), None
    kv = PuiseuxPoly({(p, q - 2): poly.coeff(p, q) * q * (q - 1) for p, q in pts})
    top = max(q for _, q in pts) - 2
    kr = [Fraction(0)] * (top + 1)
    for p, q in pts:
        kr[q - 2] = kr[q - 2] + poly.coeff(p, q) * q * (q - 1)
    return kv, upoly.trim(kr)


def nonzero_roots(kr):
    out = []
    for root, mult in real_roots(kr):
        value = root_value(root)
        if value:
            out.append((value, mult, is_exact_root(root)))
    return out


def nonzero_root_degree(kr):
    """Number of nonzero complex roots of kappa(r), with multiplicity."""
    low = next(i for i, c in enumerate(kr) if c)
    return upoly.degree(kr) - low


# -- germ substitutions ----------------------------------------------------------


def shift_germ(germ, r, w):
    """gamma(v, theta + r v^w), keeping only coefficients that remain known."""
    known = germ.known.after_shift(w)
    poly = germ.poly.substitute_theta_shift(r, w, max_v=known.max_v())
    return germ.replace(known.restrict(poly), known=known)


def match_binomial_pattern(poly, anchor, edge):
    """Match c v^b (theta + r v^w)^W - c v^b (r v^w)^W on the edge terms with q >= 1.

    Returns (W, c, b, r, w) or None.
    """
    b, W = anchor
    if W < 3:
        return None
    pts = sorted((q, p) for p, q in edge_points(poly, edge) if q >= 1)
    c = poly.coeff(b, W)
    sub = [(p, q) for q, p in pts if q == W - 1]
    if not c or not sub:
        return None
    p1 = sub[0][0]
    w = p1 - b
    if w <= 0:
        return None
    r = poly.coeff(p1, W - 1) / (c * W)
    expected = {}
    for q in range(1, W + 1):
        expected[(b + w * (W - q), q)] = c * comb(W, q) * r ** (W - q)
    found = {(p, q): poly.coeff(p, q) for q, p in pts}
    if set(found) != set(expected):
        return None
    if any(found[k] - expected[k] for k in expected):
        return None
    return W, c, b, r, w


def collapse_germ(germ, anchor, W, r, w, cap):
    """Substitute the full root h of d_theta^(W-1) gamma = 0 at once."""
    F = germ.poly.d_theta(W - 1)
    fknown = type(germ.known)(tuple((a, b, c - b * (W - 1)) for a, b, c in germ.known.halfplanes))
    pmin = min(p for p, q in germ.poly.terms if q >= 1)
    try:
        h, order_h, complete = simple_root(F, -r, w, cap, fknown)
    except BranchNotSimple:
        return None
    known = germ.known.after_shift(w)
    if not complete:
        known = known.with_v_cap(order_h + pmin)
    vmax = known.max_v()
    poly = germ.poly.substitute_theta_series(h, max_v=vmax)
    exact = germ.exact and complete
    return germ.replace(known.restrict(poly), known=known, exact=exact), h, order_h, complete


# -- the recursion ---------------------------------------------------------------


class _Run:
    def __init__(self, germ, config):
        self.germ = germ
        self.config = config
        self.trace = []
        self.D = None
        self.approximate = not germ.poly.is_exact()
        self.inexact = not germ.exact
        self.claims = []

    def emit(self, kind, depth, **data):
        self.trace.append(Event(kind, depth, data))

    def report(self):
        D = self.D
        cert = (
            "ApproximateCoefficients"
            if self.approximate
            else ("Exact" if not self.inexact else f"UpToOrder({self.germ.truncation_order})")
        )
        return CriticalReport(max(Fraction(2), D), D, self.trace, cert, str(self.germ.poly))

    def update(self, value, vertex, depth, source):
        old = self.D
        self.D = max(self.D, value)
        self.emit("DUpdate", depth, old=old, new=self.D, value=value, vertex=vertex, source=source)

    def track(self, g):
        if not g.poly.is_exact():
            self.approximate = True
        if not g.exact:
            self.inexact = True

    def run(self):
        poly = self.germ.poly
        diag = reduced_diagram(poly)
        self.D = d_gamma(poly, diag)
        self.emit("InitD", 0, value=self.D, vertices=tuple(diag.vertices), p0=p0(poly))
        for edge in diag.edges:
            self.process_edge(self.germ, edge, 0, None)
        for claim in self.claims:
            ok = claim["sup"] <= self.D
            self.emit("Claim54Check", claim["depth"], anchor=claim["anchor"], sup=claim["sup"], D=self.D, ok=ok)
            if not ok and self.config.check_invariants:
                raise InvariantViolation(f"tangent-line bound {claim['sup']} exceeds D = {self.D}")
        return self.report()

    def process_edge(self, germ, edge, depth, budget):
        anchor = edge.left
        self.emit("EdgeVisited", depth, left=edge.left, right=edge.right, slope=edge.slope)
        _, kr = edge_kappa(germ.poly, edge)
        if kr is None:
            self.emit("NoSecondDerivativeOnEdge", depth, left=edge.left, right=edge.right)
            return
        deg = nonzero_root_degree(kr)
        if budget is not None and germ.exact and deg > budget and self.config.check_invariants:
            raise InvariantViolation(
                f"multiplicity measure increased from {budget} to {deg} on edge {edge.left}-{edge.right}"
            )
        for r, mult, exact in nonzero_roots(kr):
            if not exact:
                self.approximate = True
            self.emit("RootFound", depth, r=r, multiplicity=mult, kappa=tuple(kr))
            if depth + 1 > self.config.max_depth:
                raise MaxDepthExceeded(f"recursion depth exceeded {self.config.max_depth}", self.report())
            g_star = shift_germ(germ, r, edge.slope)
            self.track(g_star)
            self.emit("Substitution", depth, r=r, w=edge.slope, result=str(g_star.poly))
            self.after_substitution(germ, g_star, anchor, edge, depth + 1, mult)

    def _checked_diagram(self, g, anchor, edge):
        try:
            diag = reduced_diagram(g.poly)
        except EmptyReducedSupport:
            raise TruncationInsufficient(
                "reduced support vanished after substitution; rerun with a larger order", self.report()
            )
        if not diag.is_vertex(anchor):
            if not g.exact:
                raise TruncationInsufficient(
                    f"anchor {anchor} left the known region; rerun with a larger order", self.report()
                )
            raise InvariantViolation(f"anchor {anchor} is no longer a reduced vertex")
        if self.config.check_invariants:
            line = edge.line
            bad = [v for v in diag.vertices if line.value(*v) < 0]
            if bad:
                raise InvariantViolation(f"vertices {bad} lie below the line of edge {edge.left}-{edge.right}")
        return diag

    def after_substitution(self, before, g_star, anchor, edge, depth, budget, source="substitution"):
        if not g_star.exact and p0(g_star.poly) == INF and p0(before.poly) != INF:
            raise TruncationInsufficient(
                "pure-v terms moved beyond the truncation order; rerun with a larger order", self.report()
            )
        diag = self._checked_diagram(g_star, anchor, edge)
        self.emit("LemmaCheck", depth, anchor=anchor, ok=True)
        self.update(d_gt(g_star.poly, anchor, diag), anchor, depth, source)
        self.children(g_star, diag, anchor, edge, depth, budget)

    def children(self, g_star, diag, anchor, edge, depth, budget):
        newv = [v for v in diag.vertices if v[0] > anchor[0]]
        p0s = p0(g_star.poly)
        sigma_e = 1 / edge.slope
        sigma_s = Fraction(0)
        if newv:
            first = newv[0]
            sigma_s = Fraction(anchor[1] - first[1]) / (first[0] - anchor[0])
        if sigma_s < sigma_e:
            delta = anchor[0] - p0s if p0s != INF else None
            if delta is None:
                sup = Fraction(0)
            else:
                sup = max(Fraction(0), anchor[1] + sigma_s * delta, anchor[1] + sigma_e * delta)
            self.claims.append({"anchor": anchor, "sup": sup, "depth": depth})
        if not newv:
            return
        edges = [e for e in diag.edges if e.left[0] >= anchor[0]]
        first_edge = edges[0]
        on_line = edge.line.value(*newv[0]) == 0
        if not on_line:
            self.process_zero_edge(g_star, first_edge, depth, budget)
        for e in edges[1:]:
            self.process_edge(g_star, e, depth, budget)

    def process_zero_edge(self, g_star, e0, depth, budget):
        anchor = e0.left
        pattern = match_binomial_pattern(g_star.poly, anchor, e0)
        if pattern is None:
            self.process_edge(g_star, e0, depth, budget)
            return
        W, c, b, r, w = pattern
        cap = g_star.known.max_v()
        if cap is None:
            cap = Fraction(max(g_star.truncation_order, self.config.order))
        collapsed = collapse_germ(g_star, anchor, W, r, w, cap)
        if collapsed is None:
            self.emit("PatternFallback", depth, anchor=anchor, W=W)
            self.process_edge(g_star, e0, depth, budget)
            return
        g_c, h, order_h, complete = collapsed
        self.track(g_c)
        self.emit(
            "ScenarioTwoCollapse", depth, W=W, c=c, b=b, r=r, w=w, h=str(h),
            h_order="exact" if complete else order_h, result=str(g_c.poly),
        )
        if depth + 1 > self.config.max_depth:
            raise MaxDepthExceeded(f"recursion depth exceeded {self.config.max_depth}", self.report())
        self.after_substitution(g_star, g_c, anchor, e0, depth + 1, budget, "collapse")


def compute(germ, config=None, check_degenerate=True):
    """Run the algorithm on a normalized germ and return a CriticalReport."""
    config = config or Config()
    cls = classify(germ)
    if check_degenerate and cls.degenerate:
        raise StronglyDegenerate(cls)
    report = _Run(germ, config).run()
    report.classification = cls
    return report
