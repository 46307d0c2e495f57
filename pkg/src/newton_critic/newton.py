"""Taylor supports, Newton diagrams and vertical Newton distances.

Distances are exact: values are ``Fraction`` or ``math.inf``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf


class EmptyReducedSupport(ValueError):
    """No support point with theta-degree at least one."""


class UnboundedDistance(ArithmeticError):
    """The supremum over tangent lines is infinite."""


@dataclass(frozen=True)
class Line:
    """The line a*x + b*y = c."""

    a: Fraction
    b: Fraction
    c: Fraction

    def value(self, p, q):
        return self.a * p + self.b * q - self.c


@dataclass(frozen=True)
class Edge:
    left: tuple
    right: tuple
    line: Line
    slope: Fraction  # (p_right - p_left) / (q_left - q_right)

    def contains(self, p, q):
        return self.line.value(p, q) == 0


@dataclass(frozen=True)
class NewtonDiagram:
    vertices: tuple
    edges: tuple
    reduced: bool

    def index(self, vertex):
        return self.vertices.index(_pair(vertex))

    def is_vertex(self, vertex):
        return _pair(vertex) in self.vertices

    def neighbours(self, vertex):
        i = self.index(vertex)
        left = self.vertices[i - 1] if i > 0 else None
        right = self.vertices[i + 1] if i + 1 < len(self.vertices) else None
        return left, right


def _pair(x):
    return Fraction(x[0]), int(x[1])


def taylor_support(poly):
    return frozenset(poly.terms)


def _line_through(left, right):
    (p1, q1), (p2, q2) = left, right
    a = Fraction(q1 - q2)
    b = Fraction(p2 - p1)
    return Line(a, b, a * p1 + b * q1)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def diagram(support, reduced=False):
    """Lower-left boundary of the hull of the support plus the positive quadrant.

    Vertices come back ordered by increasing p (so decreasing q).
    """
    pts = sorted(_pair(s) for s in support if not reduced or s[1] >= 1)
    if not pts:
        raise EmptyReducedSupport("no support point with q >= 1" if reduced else "empty support")
    # staircase: points not dominated by an earlier (smaller p) point
    stair = []
    for p, q in pts:
        if not stair or q < stair[-1][1]:
            if stair and stair[-1][0] == p:
                continue
            stair.append((p, q))
    hull = []
    for pt in stair:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    edges = []
    for left, right in zip(hull, hull[1:]):
        slope = Fraction(right[0] - left[0]) / (left[1] - right[1])
        edges.append(Edge(left, right, _line_through(left, right), slope))
    return NewtonDiagram(tuple(hull), tuple(edges), reduced)


def reduced_diagram(poly):
    return diagram(taylor_support(poly), reduced=True)


def p0(poly):
    """Smallest v-exponent of a pure-v term, or ``inf``."""
    return min((p for p, q in poly.terms if q == 0), default=INF)


def vertical_distance(line, p):
    if p == INF or line.a * p >= line.c:
        return Fraction(0)
    return (line.c - line.a * p) / line.b


def sigma_range(diag, vertex):
    """Open interval of admissible a/b for lines touching the diagram only at ``vertex``."""
    left, right = diag.neighbours(vertex)
    pv, qv = _pair(vertex)
    lo = Fraction(0) if right is None else Fraction(qv - right[1]) / (right[0] - pv)
    hi = INF if left is None else Fraction(left[1] - qv) / (pv - left[0])
    return lo, hi


def vertex_sup_distance(diag, vertex, p0_value):
    """Sup of the vertical distance to (p0, 0) over lines tangent at ``vertex``."""
    if p0_value == INF:
        return Fraction(0)
    pv, qv = _pair(vertex)
    lo, hi = sigma_range(diag, vertex)
    delta = pv - p0_value
    if delta > 0:
        if hi == INF:
            raise UnboundedDistance(f"vertex ({pv}, {qv}) has unbounded tangent slopes and p > p0 = {p0_value}")
        best = qv + hi * delta
    else:
        best = qv + lo * delta
    return max(Fraction(0), Fraction(best))


def d_gamma(poly, diag=None):
    diag = diag or reduced_diagram(poly)
    p0v = p0(poly)
    return max(vertex_sup_distance(diag, v, p0v) for v in diag.vertices)


def d_gt(poly, vertex, diag=None):
    """Sup restricted to reduced vertices strictly to the right of ``vertex``."""
    diag = diag or reduced_diagram(poly)
    p0v = p0(poly)
    pv, qv = _pair(vertex)
    vals = [vertex_sup_distance(diag, w, p0v) for w in diag.vertices if w[0] > pv]
    if vals:
        return max(vals)
    return Fraction(qv) if p0v != INF else Fraction(0)


def entry_height(diag, p0_value):
    """Height at which the vertical line x = p0 enters the polyhedron (None if it misses)."""
    if p0_value == INF:
        return Fraction(0)
    verts = diag.vertices
    if p0_value < verts[0][0]:
        return None
    if p0_value >= verts[-1][0]:
        return Fraction(verts[-1][1])
    for e in diag.edges:
        if e.left[0] <= p0_value <= e.right[0]:
            return (e.line.c - e.line.a * p0_value) / e.line.b
    raise AssertionError("unreachable")


def separation_violations(diag, support):
    """Support points strictly below some edge line (should be empty)."""
    pts = [_pair(s) for s in support if not diag.reduced or s[1] >= 1]
    return [(pt, e) for e in diag.edges for pt in pts if e.line.value(*pt) < 0]


def describe_value(x):
    return "inf" if x == INF else str(x)
