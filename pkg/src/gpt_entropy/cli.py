"""Command-line front end: ``gpt-entropy <command> ...``.

Exit codes: 0 success, 1 invalid input or a failed reference check, 2 an
enumeration guard was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import boxworld as bw
from . import coding, games
from . import entropy as E
from .config import Limits, default_limits
from .core import distance
from .errors import GuardExceeded, SignallingError, ValidationError
from .jsonio import load_state

DECIMALS = 10


# -- formatting ------------------------------------------------------------

def _plain(x):
    """JSON-ready copy: Fractions become "num/den", floats are rounded."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return x if 0 < abs(x) < 1e-4 else round(x, DECIMALS) + 0.0
    if isinstance(x, int):
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


def _scalar_text(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if isinstance(x, bool) else "null"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return f"{x:.{DECIMALS}e}" if 0 < abs(x) < 1e-4 else f"{x:.{DECIMALS}f}"
    if isinstance(x, (dict, list, tuple)):
        return json.dumps(_plain(x), sort_keys=False)
    return str(x)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_plain(report), indent=2) + "\n"
    rows = report.get("rows")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows:
            cols = list(rows[0])
            writer.writerow(cols)
            for r in rows:
                writer.writerow([_scalar_text(r.get(c)) for c in cols])
        else:
            writer.writerow(["key", "value"])
            for k, v in report.items():
                writer.writerow([k, _scalar_text(v)])
        return buf.getvalue()
    lines = []
    for k, v in report.items():
        if k == "rows":
            continue
        lines.append(f"{k}: {_scalar_text(v)}")
    for r in rows or []:
        lines.append("  ".join(f"{c}={_scalar_text(v)}" for c, v in r.items()))
    return "\n".join(lines) + "\n"


# -- commands --------------------------------------------------------------

def _limits(args) -> Limits:
    base = default_limits()
    return Limits(
        max_subsystems=args.max_subsystems or base.max_subsystems,
        max_outcomes=args.max_outcomes or base.max_outcomes,
        max_strategies=args.max_strategies or base.max_strategies,
    )


def _entropy_report(rep: E.EntropyReport, names) -> dict:
    return rep.to_dict(names)


def cmd_entropy(args):
    s = load_state(args.state)
    if args.subsystems:
        s = E.marginal(s, E._idx(s, args.subsystems))
    limits = _limits(args)
    if args.alpha is not None and float(args.alpha) != 1:
        rep = E.hhat_alpha(s, float(args.alpha), limits=limits, method=args.method)
    else:
        rep = E.hhat(s, limits=limits, method=args.method)
    return _entropy_report(rep, list(s.names)), 0


def cmd_conditional(args):
    s = load_state(args.state)
    limits = _limits(args)
    if args.plus:
        rep = E.cond_plus_report(s, args.a, args.b, limits=limits)
        return rep.to_dict(), 0
    value = E.cond_standard(s, args.a, args.b, limits=limits)
    return {"quantity": "H(A|B)", "value_bits": value, "witness": None, "exact": True}, 0


def cmd_mutual(args):
    s = load_state(args.state)
    limits = _limits(args)
    if args.plus:
        return {"quantity": "I+(A;B)", "value_bits": E.mutual_plus(s, args.a, args.b, limits=limits),
                "witness": None, "exact": True}, 0
    return {"quantity": "I(A;B)", "value_bits": E.mutual(s, args.a, args.b, limits=limits),
            "witness": None, "exact": True}, 0


def cmd_accinfo(args):
    s = load_state(args.state)
    return E.accessible_info_report(s, args.a, args.b, limits=_limits(args)).to_dict(), 0


def cmd_decomp(args):
    s = load_state(args.state)
    rep = E.decomposition_entropy(s, limits=_limits(args))
    out = rep.to_dict()
    if isinstance(rep.witness, E.Decomposition):
        out["witness"]["states"] = [
            [str(x) for x in v.table.ravel()] for v in rep.witness.states()
        ]
    return out, 0


def cmd_distance(args):
    s0, s1 = load_state(args.state0), load_state(args.state1)
    if isinstance(s0, bw.BoxState) and isinstance(s1, bw.BoxState):
        d = bw.box_distance(s0, s1)
        return {"distance": d, "distance_float": float(d)}, 0
    return {"distance": distance(s0, s1)}, 0


def cmd_vertices(args):
    sig = json.loads(args.signature)
    vs = bw.enumerate_pure_states(sig, _limits(args))
    rows = [{"index": i, "product": p, "table": " ".join(str(x) for x in v.table.ravel())}
            for i, (v, p) in enumerate(zip(vs.vertices, vs.product))]
    return {"signature": [list(x) for x in vs.signature], "vertices": len(vs),
            "product": vs.n_product, "entangled": vs.n_entangled, "rows": rows}, 0


def cmd_chsh(args):
    s = load_state(args.state)
    if not isinstance(s, bw.BoxState):
        raise ValidationError("chsh needs a box-world state")
    return {"chsh": bw.chsh_value(s)}, 0


def _game_values(kind: str, p) -> dict:
    if kind == "rac":
        s = games.build_rac_state_noisy(p)
        rows = [("H(X0)", lambda: E.entropy_of(s, "X0")), ("H(X1)", lambda: E.entropy_of(s, "X1")),
                ("H(Z)", lambda: E.entropy_of(s, "Z")), ("H(X0X1)", lambda: E.entropy_of(s, "X0,X1")),
                ("H(X0X1Z)", lambda: E.entropy_of(s)), ("H(X0Z)", lambda: E.entropy_of(s, "X0,Z")),
                ("H(X1Z)", lambda: E.entropy_of(s, "X1,Z")),
                ("H(X0|Z)", lambda: E.cond_standard(s, "X0", "Z")),
                ("H(X1|Z)", lambda: E.cond_standard(s, "X1", "Z")),
                ("H(X0X1|Z)", lambda: E.cond_standard(s, "X0,X1", "Z")),
                ("H(X0|X1Z)", lambda: E.cond_standard(s, "X0", "X1,Z")),
                ("H+(X0|Z)", lambda: E.cond_plus(s, "X0", "Z")),
                ("H+(X1|Z)", lambda: E.cond_plus(s, "X1", "Z")),
                ("H+(X0X1|Z)", lambda: E.cond_plus(s, "X0,X1", "Z")),
                ("H+(X0|ZX1)", lambda: E.cond_plus(s, "X0", "Z,X1")),
                ("I(X0;Z)", lambda: E.mutual(s, "X0", "Z")), ("I(X1;Z)", lambda: E.mutual(s, "X1", "Z")),
                ("I(X0X1;Z)", lambda: E.mutual(s, "X0,X1", "Z")),
                ("Hdec(X0Z)", lambda: E.decomposition_entropy(bw.marginal_box(s, "X0,Z")).value)]
    else:
        s = games.build_ic_state_noisy(p)
        rows = [("H(A0A1MZ)", lambda: E.entropy_of(s)),
                ("I(A0;A1MZ)", lambda: E.mutual(s, "A0", "A1,M,Z")),
                ("I(A0;MZ)", lambda: E.mutual(s, "A0", "M,Z")),
                ("I(A0A1;MZ)", lambda: E.mutual(s, "A0,A1", "M,Z")),
                ("I+(A0A1;MZ)", lambda: E.mutual_plus(s, "A0,A1", "M,Z")),
                ("IC value", lambda: games.ic_inequality_value(s))]
    return {key: fn() for key, fn in rows}


def cmd_game(args):
    p = Fraction(args.p)
    values = _game_values(args.kind, p)
    return {"game": args.kind, "p": p, "values": values}, 0


def cmd_ssa_sweep(args):
    rep = games.ssa_sweep(args.p_min, args.p_max, args.step, tol=args.tol)
    return rep, 0


def cmd_code_sim(args):
    probs = [Fraction(x) for x in args.source.split(",")]
    rep = coding.simulate_compression(coding.Source.from_distribution(probs), args.n, args.rate, args.eps,
                                      args.trials, args.seed)
    typ = coding.typical_mass_and_count(probs, args.n, args.eps)
    out = rep.to_dict()
    out["typical"] = typ.to_dict()
    return out, 0


def cmd_hyptest(args):
    p = [Fraction(x) for x in args.p.split(",")]
    q = [Fraction(x) for x in args.q.split(",")]
    if args.n_list:
        ns = [int(x) for x in args.n_list.split(",")]
    else:
        ns = list(range(args.step, args.nmax + 1, args.step))
    rows = coding.relative_entropy_estimate(p, q, ns, Fraction(args.eps))
    from .info import kl_divergence

    return {"kl_bits": kl_divergence(p, q), "eps": Fraction(args.eps),
            "rows": [{"N": r["N"], "p_N": float(r["p_N"]), "rate": r["rate"]} for r in rows]}, 0


def cmd_paper_check(args):
    from .reference import run_goldens

    rows = run_goldens()
    ok = all(r["pass"] for r in rows)
    return {"passed": sum(r["pass"] for r in rows), "total": len(rows), "all_pass": ok, "rows": rows}, 0 if ok else 1


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--max-subsystems", type=_positive, default=None)
    common.add_argument("--max-outcomes", type=_positive, default=None)
    common.add_argument("--max-strategies", type=_positive, default=None,
                        help="strategy enumeration guard (env GPT_ENTROPY_MAX_STRATEGIES)")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="gpt-entropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="measurement entropy of a state")
    p.add_argument("state")
    p.add_argument("--subsystems", help="comma-separated names or indices (default: all)")
    p.add_argument("--alpha", help="Renyi order (default 1; 'inf' for min-entropy)")
    p.add_argument("--method", choices=["recursive", "enumerate"], default="recursive")
    p.set_defaults(func=cmd_entropy)

    for name, func, helptext in [("conditional", cmd_conditional, "H(A|B) or H+(A|B)"),
                                 ("mutual", cmd_mutual, "I(A;B) or I+(A;B)")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("state")
        p.add_argument("-a", required=True, help="subsystems of A")
        p.add_argument("-b", required=True, help="subsystems of B")
        p.add_argument("--plus", action="store_true", help="use the measurement-conditioned variant")
        p.set_defaults(func=func)

    p = sub.add_parser("accinfo", parents=[common], help="accessible information between A and B")
    p.add_argument("state")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)
    p.set_defaults(func=cmd_accinfo)

    p = sub.add_parser("decomp", parents=[common], help="decomposition entropy")
    p.add_argument("state")
    p.set_defaults(func=cmd_decomp)

    p = sub.add_parser("distance", parents=[common], help="operational distance of two states")
    p.add_argument("state0")
    p.add_argument("state1")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("vertices", parents=[common], help="pure states of a box-world signature")
    p.add_argument("signature", help='JSON, e.g. "[[2,2],[2,2]]"')
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("chsh", parents=[common], help="CHSH value of a bipartite binary box")
    p.add_argument("state")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("game", parents=[common], help="entropies of the random-access or IC state")
    p.add_argument("kind", choices=["rac", "ic"])
    p.add_argument("--p", default="1", help="PR-box correctness probability in [1/2, 1]")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("ssa-sweep", parents=[common], help="noisy-PR subadditivity threshold")
    p.add_argument("--p-min", default="1/2")
    p.add_argument("--p-max", default="1")
    p.add_argument("--step", default="1/20")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_ssa_sweep)

    p = sub.add_parser("code-sim", parents=[common], help="typical-subspace compression")
    p.add_argument("--source", required=True, help="letter probabilities p0,p1,...")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=0)
    p.set_defaults(func=cmd_code_sim)

    p = sub.add_parser("hyptest", parents=[common], help="finite-N hypothesis-testing exponent")
    p.add_argument("--p", required=True, help="first distribution, comma-separated")
    p.add_argument("--q", required=True, help="second distribution, comma-separated")
    p.add_argument("--nmax", type=int, default=1000)
    p.add_argument("--step", type=int, default=100)
    p.add_argument("--n-list", help="explicit comma-separated N values")
    p.add_argument("--eps", default="1/2", help="allowed error on the first hypothesis")
    p.set_defaults(func=cmd_hyptest)

    p = sub.add_parser("paper-check", parents=[common], help="evaluate every reference value")
    p.set_defaults(func=cmd_paper_check)
    return parser


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def run(argv=None, out=None) -> int:
    """Parse ``argv``, run the command and write the report to ``out``; returns the exit code."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except SignallingError as exc:
        report, code = {"error": "signalling", "message": str(exc), "violations": exc.violations}, 1
    except GuardExceeded as exc:
        report, code = {"error": "guard exceeded", "message": str(exc)}, 2
    except (ValidationError, ValueError) as exc:
        report, code = {"error": "invalid input", "message": str(exc)}, 1
    except OSError as exc:
        report, code = {"error": "io", "message": str(exc)}, 1
    out.write(render(report, args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
