"""Cinematic curvature and the strongly-degenerate classification."""

from dataclasses import dataclass, field
from math import factorial

from .newton import INF, p0, reduced_diagram, taylor_support


class PreconditionError(ValueError):
    pass


def cinematic_curvature(g):
    """det [[g_tt, g_ttt], [g_vt, g_vtt]] as a Puiseux polynomial."""
    g_tt = g.d_theta(2)
    g_ttt = g_tt.d_theta()
    g_vt = g.d_theta().d_v()
    g_vtt = g_tt.d_v()
    return g_tt * g_vtt - g_ttt * g_vt


def _certification(germ):
    return "Exact" if germ.exact else f"UpToOrder({germ.truncation_order})"


def is_identically_zero(poly, exact=True, order=None):
    """("Yes" | "No", certainty) for the stored coefficients of ``poly``."""
    verdict = "No" if poly else "Yes"
    return verdict, "Exact" if exact else f"UpToOrder({order})"


def _trusted_cine(germ):
    """Curvature terms that only involve known Taylor coefficients of the germ.

    A curvature term of total degree n pairs germ terms of total degree at
    most n + 3, so truncation at T leaves degrees n <= T - 3 reliable.
    """
    cine = cinematic_curvature(germ.poly)
    if germ.exact:
        return cine
    top = germ.truncation_order - 3
    return cine.filter(lambda p, q: p + q <= top)


def column(poly, pstar):
    """gamma-tilde: the terms v^pstar theta^q with q >= 1."""
    return poly.filter(lambda p, q: p == pstar and q >= 1)


def _trusted_column_cine(germ, pstar, tilde):
    cine = cinematic_curvature(tilde)
    if germ.exact:
        return cine
    # theta-degree m of the curvature needs column coefficients up to m + 3
    known = germ.truncation_order - pstar
    return cine.filter(lambda p, q: q + 3 <= known)


def geometric_sequence_test(germ, pstar=None):
    """True iff k! c_{p*,k} (k >= 1) is a geometric sequence with a_1 != 0."""
    poly = germ.poly
    diag = reduced_diagram(poly)
    if pstar is None:
        if len(diag.vertices) != 1 or diag.vertices[0][1] != 1:
            raise PreconditionError("reduced diagram is not a single vertex with q = 1")
        pstar = diag.vertices[0][0]
    col = column(poly, pstar)
    top = col.theta_degree()
    if germ.exact:
        last = top + 1  # coefficients vanish beyond the stored degree
    else:
        last = min(germ.truncation_order - int(pstar), top + 1) if pstar.denominator == 1 else top
    a = [None] + [factorial(k) * col.coeff(pstar, k) for k in range(1, last + 1)]
    if len(a) < 2 or not a[1]:
        return False
    return all(a[k] * a[k + 2] == a[k + 1] ** 2 for k in range(1, last - 1))


@dataclass
class Classification:
    verdict: str  # "NotStronglyDegenerate" or "Degenerate"
    case: int | None
    certification: str
    cases: list = field(default_factory=list)
    witness: dict = field(default_factory=dict)

    @property
    def degenerate(self):
        return self.verdict == "Degenerate"

    def label(self):
        return self.verdict if self.case is None else f"Degenerate(case {self.case})"


def classify(germ):
    """Check the three strongly-degenerate conditions.

    When several conditions hold, the reported case is the first of 3, 1, 2
    (the explicit pure-v form is the most specific witness); all holding
    cases are listed in ``cases``.
    """
    poly = germ.poly
    support = taylor_support(poly)
    diag = reduced_diagram(poly)
    witness = {}
    cases = []

    pz = p0(poly)
    reduced_min_p = min(p for p, q in support if q >= 1)
    if pz != INF and pz >= 1 and pz < reduced_min_p:
        others = [p for p, q in support if q == 0 and p != pz]
        if all(p >= pz + 1 for p in others) and reduced_min_p >= pz + 1:
            cases.append(3)
            witness["case3_p"] = pz

    cine = _trusted_cine(germ)
    witness["cine"] = cinematic_curvature(poly)
    if not cine:
        cases.append(1)

    if len(diag.vertices) == 1 and diag.vertices[0][1] == 1 and diag.vertices[0][0] >= 1:
        pstar = diag.vertices[0][0]
        tilde = column(poly, pstar)
        witness["vertex"] = diag.vertices[0]
        witness["gamma_tilde"] = tilde
        witness["geometric"] = geometric_sequence_test(germ, pstar)
        if not _trusted_column_cine(germ, pstar, tilde):
            cases.append(2)

    ordered = [c for c in (3, 1, 2) if c in cases]
    case = ordered[0] if ordered else None
    verdict = "Degenerate" if case else "NotStronglyDegenerate"
    return Classification(verdict, case, _certification(germ), ordered, witness)
