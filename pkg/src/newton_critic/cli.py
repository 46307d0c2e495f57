"""Command-line interface: ``newton-critic <command> EXPR [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 input error,
3 truncation insufficient or recursion depth exceeded (a partial report is
still printed).
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from . import report as R
from .critical import Config, MaxDepthExceeded, StronglyDegenerate, TruncationInsufficient, compute
from .degeneracy import classify
from .expr import DegenerateInput, ParseError, expand, germ_from_text, parse
from .newton import INF, d_gamma, diagram, entry_height, p0, reduced_diagram, taylor_support

COMMANDS = ("classify", "critical", "diagram", "resolve", "verify-resolution", "probe-knapp", "probe-blowup")


class InputError(ValueError):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("expr", nargs="?", help="germ expression in v and theta")
    common.add_argument("--file", help="read the expression from a file")
    common.add_argument("--order", type=int, default=12, help="Taylor truncation order T (default 12)")
    common.add_argument("--max-depth", type=int, default=32, help="recursion depth limit (default 32)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for sampling (u64)")
    common.add_argument("--samples", type=int, default=None, help="number of sample points")

    parser = argparse.ArgumentParser(prog="newton-critic", description="Critical L^p exponents of curve-family maximal operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="strong-degeneracy classification")
    c = sub.add_parser("critical", parents=[common], help="critical exponent p_gamma")
    c.add_argument("--trace", action="store_true", help="include the event trace")
    c.add_argument("--replay", metavar="REPORT", help="replay a JSON report written with --json --trace")
    sub.add_parser("diagram", parents=[common], help="Newton diagrams and distances")
    sub.add_parser("resolve", parents=[common], help="resolution of singularities region tree")
    sub.add_parser("verify-resolution", parents=[common], help="resolve and run the sampling checks")
    k = sub.add_parser("probe-knapp", parents=[common], help="Knapp lower-bound probe")
    k.add_argument("--p", type=float, nargs="+", default=[2.0, 4.0])
    k.add_argument("--deltas", type=int, nargs="+", default=[3, 4, 5, 6], help="delta = 2^-k for each k")
    k.add_argument("--grid", type=int, default=1024)
    b = sub.add_parser("probe-blowup", parents=[common], help="blow-up probe for degenerate germs")
    b.add_argument("--p", type=float, default=None)
    b.add_argument("--refinements", type=int, default=3)
    return parser


def _text(args):
    if args.file:
        with open(args.file) as fh:
            return fh.read().strip()
    if args.expr is None:
        raise InputError("no expression given")
    return args.expr


def _germ(args):
    return germ_from_text(_text(args), args.order)


def _poly(args):
    return expand(parse(_text(args)), args.order)


# -- commands -----------------------------------------------------------------


def cmd_classify(args):
    germ = _germ(args)
    cls = classify(germ)
    human = f"{cls.label()}  [{germ.certification()}]"
    if cls.cases:
        human += f"\nholding cases: {', '.join(map(str, cls.cases))}"
    return R.classification_payload(cls), germ.certification(), human


def cmd_critical(args):
    if args.replay:
        return replay(args.replay)
    germ = _germ(args)
    cfg = Config(max_depth=args.max_depth, order=args.order)
    try:
        rep = compute(germ, cfg)
    except StronglyDegenerate as exc:
        cls = exc.classification
        payload = {"p_gamma": R.number(INF), "D_gamma": R.number(INF), "germ": str(germ.poly),
                   "classification": R.classification_payload(cls)}
        return payload, germ.certification(), f"p_gamma = inf ({cls.label()}: unbounded for every p < inf)"
    rep.germ = str(germ.poly)
    payload = R.critical_payload(rep, with_trace=args.trace)
    payload["classification"] = R.classification_payload(rep.classification)
    human = f"p_gamma = {rep.p_gamma}  (D_gamma = {rep.D_gamma})  [{rep.certification}]"
    if args.trace:
        human = "\n".join(e.describe() for e in rep.trace) + "\n" + human
    return payload, rep.certification, human


def replay(path):
    """Recompute p_gamma from a stored trace and by rerunning the stored input."""
    with open(path) as fh:
        stored = json.load(fh)
    trace = stored["result"].get("trace")
    if trace is None:
        raise InputError("report has no trace (write it with --trace)")
    D = None
    for ev in trace:
        if ev["kind"] == "InitD":
            D = _exact(ev["data"]["value"])
        elif ev["kind"] == "DUpdate":
            D = _exact(ev["data"]["new"])
    from_trace = max(Fraction(2), D) if D is not None else None
    inp = stored["input"]
    germ = germ_from_text(inp["expr"], inp["order"])
    rerun = compute(germ, Config(max_depth=inp["max_depth"], order=inp["order"])).p_gamma
    recorded = _exact(stored["result"]["p_gamma"])
    same = recorded == from_trace == rerun
    payload = {
        "p_gamma": R.number(rerun),
        "D_gamma": R.number(D),
        "recorded": R.number(recorded),
        "from_trace": R.number(from_trace),
        "identical": same,
    }
    human = f"recorded {recorded}, from trace {from_trace}, rerun {rerun}: {'identical' if same else 'MISMATCH'}"
    return payload, stored.get("certification"), human, (0 if same else 1)


def _exact(num):
    text = num["exact"]
    return INF if text == "inf" else Fraction(text)


def cmd_diagram(args):
    germ = _germ(args)
    poly = germ.poly
    full = diagram(taylor_support(poly))
    red = reduced_diagram(poly)
    pz = p0(poly)
    d = d_gamma(poly, red)
    payload = {
        "full": R.diagram_payload(full),
        "reduced": R.diagram_payload(red),
        "p0": R.number(pz),
        "d_gamma": R.number(d),
        "entry_height": None if entry_height(red, pz) is None else R.number(entry_height(red, pz)),
    }
    lines = [
        "reduced vertices: " + ", ".join(f"({p}, {q})" for p, q in red.vertices),
        "reduced edges:    " + ", ".join(f"({e.left[0]},{e.left[1]})-({e.right[0]},{e.right[1]}) slope {e.slope}" for e in red.edges),
        f"p0 = {pz}   d(gamma) = {d}",
    ]
    return payload, germ.certification(), "\n".join(lines)


def _resolution_config(args):
    from .resolution import ResolutionConfig

    return ResolutionConfig(order=max(args.order, 24), seed=args.seed)


def cmd_resolve(args):
    from .resolution import resolve

    g = _poly(args)
    tree = resolve(g.poly, _resolution_config(args))
    payload = R.tree_payload(tree)
    payload["verification"] = R.verification_payload(tree.verification)
    human = _tree_text(tree)
    return payload, g.certification(), human


def _tree_text(tree):
    lines = [f"epsilon = {tree.epsilon}, M = {tree.M}, C used = {sorted(set(tree.C_choices))}"]

    def walk(node, indent):
        exps = "" if node.exponents is None else f"  |P| ~ v^({node.exponents[0]}) |u|^{node.exponents[1]}"
        lines.append(f"{'  ' * indent}{node.kind}: {node.chain[-1].describe()}{exps}")
        for c in node.children:
            walk(c, indent + 1)

    for quad, nodes in tree.quadrants.items():
        lines.append(f"quadrant (v, theta) signs {quad}:")
        for n in nodes:
            walk(n, 1)
    return "\n".join(lines)


def cmd_verify(args):
    from .resolution import resolve, verify_resolution

    g = _poly(args)
    tree = resolve(g.poly, _resolution_config(args))
    rep = verify_resolution(tree, args.samples or 10_000, 500, args.seed)
    payload = {"tree": {k: v for k, v in R.tree_payload(tree).items() if k != "quadrants"}, "verification": R.verification_payload(rep)}
    human = ("PASS " if rep.passed else "FAIL ") + rep.summary() + f"  epsilon={tree.epsilon}"
    return payload, g.certification(), human, (0 if rep.passed else 1)


def cmd_knapp(args):
    from .probe import knapp_probe

    germ = _germ(args)
    deltas = [2.0 ** -k for k in args.deltas]
    reps = knapp_probe(germ, list(args.p), deltas, n=args.grid)
    payload = {"probes": [R.probe_payload(r) for r in reps]}
    human = "\n".join(f"p = {r.p:g}: slope {r.slope:.4f} (predicted {r.predicted:.4f}), ratios {[round(x, 5) for x in r.ratios]}" for r in reps)
    return payload, germ.certification(), human


def cmd_blowup(args):
    from .probe import degenerate_blowup_probe

    germ = _germ(args)
    cls = classify(germ)
    kwargs = {"refinements": args.refinements}
    if args.p is not None:
        kwargs["p"] = args.p
    rep = degenerate_blowup_probe(germ, **kwargs)
    payload = R.probe_payload(rep)
    payload["classification"] = R.classification_payload(cls)
    human = f"{cls.label()}: ratios {[round(x, 5) for x in rep.ratios]}, growth {[round(x, 4) for x in rep.growth_factors()]}"
    return payload, germ.certification(), human


HANDLERS = {
    "classify": cmd_classify,
    "critical": cmd_critical,
    "diagram": cmd_diagram,
    "resolve": cmd_resolve,
    "verify-resolution": cmd_verify,
    "probe-knapp": cmd_knapp,
    "probe-blowup": cmd_blowup,
}


def run(argv=None, out=None):
    """Run one command; returns (exit code, report dict)."""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs = {"expr": None, "order": args.order, "max_depth": args.max_depth, "seed": args.seed}
    t0 = time.perf_counter()
    code, status, error, result, cert, human = 0, "ok", None, None, None, ""
    try:
        inputs["expr"] = _text(args) if not getattr(args, "replay", None) else None
        res = HANDLERS[args.command](args)
        result, cert, human = res[:3]
        if len(res) > 3:
            code = res[3]
    except (ParseError, DegenerateInput, InputError, OSError, ValueError) as exc:
        code, status = 2, "error"
        error = {"type": type(exc).__name__, "message": str(exc)}
        human = f"error: {type(exc).__name__}: {exc}"
    except (TruncationInsufficient, MaxDepthExceeded) as exc:
        code, status = 3, "partial"
        error = {"type": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "report", None) is not None:
            result = R.critical_payload(exc.report, with_trace=True)
            cert = exc.report.certification
        human = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # surfaced as a failed check, not a crash
        from .resolution import ResolutionError

        if not isinstance(exc, ResolutionError):
            raise
        code, status = 1, "error"
        error = {"type": type(exc).__name__, "message": str(exc)}
        human = f"{type(exc).__name__}: {exc}"
    report = R.envelope(args.command, inputs, result, cert, time.perf_counter() - t0, status, error)
    if args.json:
        out.write(R.dumps(report) + "\n")
    else:
        out.write(human + "\n")
    return code, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
