"""JSON reports.

Every number is emitted as ``{"exact": "5/2", "decimal": 2.5}``; irrational
algebraic values carry their minimal polynomial and isolating interval, and
interval values their endpoints.  Reports are plain JSON trees, so
``json.loads(json.dumps(r)) == r``.
"""

import json
import math
from fractions import Fraction
from importlib import resources

from .field import AlgebraicReal, Approx, FieldElement, poly_str
from .puiseux import PuiseuxPoly

SCHEMA_ID = "newton-critic/1"


def number(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return {"exact": str(x), "decimal": float(x)}
    if isinstance(x, float):
        if math.isinf(x):
            return {"exact": "inf" if x > 0 else "-inf", "decimal": None}
        return {"exact": repr(x), "decimal": x}
    if isinstance(x, FieldElement):
        r = x.as_rational()
        if r is not None:
            return number(r)
        lo, hi = x.alpha.interval
        return {
            "exact": f"{x!r} where a is the root of {poly_str(x.alpha.minpoly, 'x')} in ({lo}, {hi})",
            "decimal": float(x),
            "minpoly": [str(c) for c in x.alpha.minpoly],
            "interval": [str(lo), str(hi)],
            "coefficients": [str(c) for c in x.coeffs],
        }
    if isinstance(x, AlgebraicReal):
        return number(FieldElement.generator(x))
    if isinstance(x, Approx):
        iv = x.approx()
        return {"exact": repr(x), "decimal": float(x), "interval": [str(iv.a), str(iv.b)]}
    raise TypeError(f"not a number: {x!r}")


def poly(p):
    return {
        "text": str(p),
        "terms": [{"p": number(e), "q": q, "c": number(c)} for (e, q), c in sorted(p.terms.items(), key=lambda t: (t[0][1], t[0][0]))],
    }


def point(pq):
    return [number(pq[0]), int(pq[1])]


def plain(x):
    """Best-effort conversion of trace data to JSON values."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, Fraction, float, FieldElement, AlgebraicReal, Approx)):
        return number(x)
    if isinstance(x, PuiseuxPoly):
        return poly(x)
    if isinstance(x, (tuple, list)):
        return [plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    return str(x)


def diagram_payload(diag):
    return {
        "reduced": diag.reduced,
        "vertices": [point(v) for v in diag.vertices],
        "edges": [
            {"left": point(e.left), "right": point(e.right), "slope": number(e.slope)}
            for e in diag.edges
        ],
    }


def classification_payload(c):
    witness = {}
    for k, v in c.witness.items():
        witness[k] = plain(v)
    return {
        "verdict": c.verdict,
        "case": c.case,
        "label": c.label(),
        "cases": list(c.cases),
        "witness": witness,
    }


def event_payload(e):
    return {"kind": e.kind, "depth": e.depth, "data": plain(e.data), "text": e.describe()}


def critical_payload(rep, with_trace=True):
    out = {
        "p_gamma": number(rep.p_gamma),
        "D_gamma": number(rep.D_gamma),
        "germ": rep.germ,
    }
    if with_trace:
        out["trace"] = [event_payload(e) for e in rep.trace]
    return out


def node_payload(node):
    out = {
        "kind": node.kind,
        "center": poly(node.center),
        "sign": node.sign,
        "C": node.C,
        "constraint": {
            "lower": poly(node.chain[-1].lo),
            "upper": None if node.chain[-1].hi is None else poly(node.chain[-1].hi),
            "text": node.chain[-1].describe(),
        },
        "exponents": None if node.exponents is None else [number(node.exponents[0]), number(node.exponents[1])],
    }
    if node.slope is not None:
        out["slope"] = number(node.slope)
    if node.root is not None:
        out["root"] = number(node.root)
    if node.multiplicity is not None:
        out["multiplicity"] = node.multiplicity
    if node.translation is not None:
        out["translation"] = poly(node.translation)
    if node.stats:
        out["stats"] = {k: plain(v) for k, v in node.stats.items() if k not in ("exponents",)}
    if node.children:
        out["children"] = [node_payload(c) for c in node.children]
    return out


def tree_payload(tree):
    return {
        "epsilon": number(tree.epsilon),
        "M": tree.M,
        "C_choices": sorted(set(tree.C_choices)),
        "max_multiplicity": tree.max_multiplicity,
        "quadrants": {q: [node_payload(n) for n in nodes] for q, nodes in tree.quadrants.items()},
        "leaf_count": sum(1 for _ in tree.leaves()),
    }


def verification_payload(rep):
    return {
        "passed": rep.passed,
        "points": rep.points,
        "uncovered": rep.uncovered,
        "overlapping": rep.overlapping,
        "leaves_checked": rep.leaves_checked,
        "comparability_failures": len(rep.comparability_failures),
        "sign_failures": len(rep.sign_failures),
        "unresolved_hits": rep.unresolved_hits,
        "worst_C": number(float(rep.worst_C)),
        "seconds": rep.seconds,
    }


def probe_payload(rep):
    return {
        "kind": rep.kind,
        "p": number(float(rep.p)),
        "parameters": [number(float(x)) for x in rep.parameters],
        "ratios": [number(float(x)) for x in rep.ratios],
        "growth_factors": [number(float(x)) for x in rep.growth_factors()],
        "slope": None if rep.slope is None else number(float(rep.slope)),
        "residual": None if rep.residual is None else number(float(rep.residual)),
        "predicted": None if rep.predicted is None else number(float(rep.predicted)),
        "provenance": rep.provenance,
        "seconds": rep.seconds,
        "settings": plain(rep.extra),
    }


def envelope(command, inputs, result, certification=None, seconds=0.0, status="ok", error=None):
    out = {
        "schema": SCHEMA_ID,
        "command": command,
        "input": inputs,
        "status": status,
        "certification": certification,
        "result": result,
        "timing": {"seconds": seconds},
    }
    if error is not None:
        out["error"] = error
    return out


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=False)


def load_schema():
    return json.loads(resources.files(__package__).joinpath("schema.json").read_text())
