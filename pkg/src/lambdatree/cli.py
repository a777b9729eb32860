"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails (or,
with --strict, when a verdict is Unknown), 2 for unreadable input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .classify import ClassInput, classify, gamma1_report
from .combine import (
    SCALE_Q,
    SHEAR_Z2,
    BetaRelationError,
    EndAssignmentError,
    GraphError,
    GraphOfGroups,
    InfeasibleError,
    assign_ends,
    build_beta,
    check_equivariance,
    freeness_check,
    solve_c5_prime,
    solve_theta_ge,
    validate_hypotheses,
)
from .freegrp import Alphabet, WordParseError
from .ogroup import LexVector, Signature
from .suites import SUITES, default_seed, run_suite
from .treecalc import (
    CayleyTreeAction,
    axis_geometry,
    brute_force_length,
    translation_length,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class Outcome:
    report: dict
    text: list = field(default_factory=list)
    failed: int = 0
    unknown: int = 0


# -- weights ------------------------------------------------------------------------

_WEIGHT_ITEM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\([^)]*\)|[^,]+)\s*(,|$)")


def parse_weights(text: str, sig: Optional[str] = None) -> CayleyTreeAction:
    """'x=1,y=(0,2)' -> weighted Cayley tree; the signature is inferred unless given."""
    items = []
    pos = 0
    while pos < len(text):
        m = _WEIGHT_ITEM.match(text, pos)
        if not m:
            raise InputError(f"cannot read weights at position {pos}: {text[pos:]!r}")
        raw = m.group(2).strip()
        if raw.startswith("("):
            coords = [c.strip() for c in raw[1:-1].split(",") if c.strip()]
        else:
            coords = [raw]
        try:
            items.append((m.group(1), [Fraction(c) for c in coords]))
        except ValueError:
            raise InputError(f"bad weight {raw!r} for {m.group(1)}") from None
        pos = m.end()
    if not items:
        raise InputError("no weights given")
    rank = max(len(c) for _, c in items)
    if sig is None:
        kinds = []
        for i in range(rank):
            frac = any(i < len(c) and c[i].denominator != 1 for _, c in items)
            kinds.append("Q" if frac else "Z")
        signature = Signature(tuple(kinds))
    else:
        signature = Signature.parse(sig)
    weights = []
    for name, coords in items:
        if len(coords) == 1 and signature.rank > 1:
            coords = coords + [0] * (signature.rank - 1)
        try:
            weights.append(LexVector(signature, tuple(coords)))
        except ValueError as exc:
            raise InputError(f"weight for {name}: {exc}") from None
    try:
        return CayleyTreeAction(Alphabet(tuple(n for n, _ in items)), tuple(weights))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _vec(v: LexVector) -> list:
    return v.to_json()["coords"]


# -- commands ----------------------------------------------------------------------


def cmd_classify(args) -> Outcome:
    try:
        c = ClassInput(args.m, args.n, args.r, args.s)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    v = classify(c, witness=args.witness, full=args.witness)
    report = v.to_dict()
    text = [f"Gamma{c}: {v.kind}"]
    failed = 0
    if args.witness:
        w = v.witness
        text.append(f"witness {w.variant} {json.dumps(w.data, sort_keys=True)}")
        for step in w.transcript:
            extra = {k: val for k, val in step.items() if k not in ("check", "ok")}
            text.append(f"  [{'ok' if step['ok'] else 'FAIL'}] {step['check']} {json.dumps(extra) if extra else ''}".rstrip())
        failed = 0 if w.verified else 1
    return Outcome(report, text, failed)


def cmd_gamma1(args) -> Outcome:
    rep = gamma1_report(args.k)
    text = [
        "ITF witness on F(u,v) with unit weights:",
        "  " + ", ".join(f"{k} = {v}" for k, v in rep.lengths.items()),
    ]
    for c in rep.graph_checks:
        text.append(f"  [{'ok' if c['ok'] else 'FAIL'}] {c['check']}")
    text.append("Britton checks of v_k = t^k x t^-k:")
    for row in rep.identities:
        text.append(f"  k={row['k']}: |v_k| = {row['length']}, difference reduces to {row['reduced']}")
    text.append(rep.conclusion)
    return Outcome(rep.to_dict(), text, 0 if rep.ok else 1)


def cmd_lengths(args) -> Outcome:
    A = parse_weights(args.weights, args.sig)
    rows, text, failed = [], [], 0
    for src in args.word:
        w = A.alphabet.parse(src)
        ell = translation_length(A, w)
        row = {"word": src, "length": _vec(ell)}
        line = f"l({src}) = {ell}"
        if args.brute:
            if A.sig.rank != 1 or A.sig.kinds[0] != "Z":
                raise InputError("--brute needs integer weights")
            b = brute_force_length(A, w).length
            row["brute"] = _vec(b)
            row["agree"] = b == ell
            line += f"   brute force {b} ({'agree' if b == ell else 'DISAGREE'})"
            failed += b != ell
        rows.append(row)
        text.append(line)
    report = rows[0] if len(rows) == 1 else {"words": rows}
    return Outcome(report, text, failed)


def cmd_axis(args) -> Outcome:
    A = parse_weights(args.weights, args.sig)
    x, y = A.alphabet.parse(args.x), A.alphabet.parse(args.y)
    try:
        geo = axis_geometry(A, x, y)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = geo.to_json(A.alphabet)
    for key in ("bridge", "xi"):
        if key in report:
            report[key] = report[key]["coords"]
    report["lx"] = _vec(translation_length(A, x))
    report["ly"] = _vec(translation_length(A, y))
    text = [f"axes of {args.x} and {args.y}: {geo.kind}"]
    if geo.xi is not None:
        text.append(f"overlap xi = {geo.xi}")
    if geo.bridge is not None:
        text.append(f"bridge = {geo.bridge}")
    return Outcome(report, text)


def _load_graph(path: str) -> GraphOfGroups:
    try:
        with open(path) as fh:
            return GraphOfGroups.loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: missing or malformed field {exc}") from None
    except WordParseError:
        raise
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_combine(args) -> Outcome:
    G = _load_graph(args.spec)
    report = {"graph": G.to_json(), "strategy": args.strategy}
    text = []
    failed = unknown = 0

    hyp = validate_hypotheses(G, bound=args.bound)
    report["hypotheses"] = hyp.to_json()["verdicts"]
    for v in hyp.verdicts:
        where = v.edge or v.vertex or ""
        extra = f" witness {v.witness}" if v.witness else ""
        text.append(f"[{v.status}] {v.condition} {where}{extra}".rstrip())
    failed += len(hyp.failed)
    unknown += len(hyp.unknown)
    if hyp.failed:
        return Outcome(report, text, failed, unknown)

    try:
        ends = assign_ends(G)
    except EndAssignmentError as exc:
        report["error"] = {"stage": "ends", "message": str(exc), "witness": exc.witness}
        text.append(f"end assignment failed: {exc}")
        return Outcome(report, text, failed + 1, unknown)
    report["ends"] = {eid: end.to_json(G.vertex(G.edge(eid).origin).action.alphabet) for eid, end in ends.items()}

    try:
        if args.strategy == "c5prime":
            sol = solve_c5_prime(G, ends)
            report["c5prime"] = sol.to_json()
            if not sol.feasible:
                text.append(f"translation parts infeasible: {sol.certificate}")
                return Outcome(report, text, failed + 1, unknown)
            text.append("translation parts: " + ", ".join(f"{v}.{g}={r}" for (v, g), r in sol.rhos.items()))
            H, beta = G, build_beta(G, {}, sol.rhos, ends)
        else:
            sol = solve_theta_ge(G, ends, args.strategy)
            report["thetas"] = {k: v.to_json() for k, v in sol.thetas.items()}
            for k, v in sol.thetas.items():
                if not v.is_identity():
                    text.append(f"theta({k}) = {v.matrix}")
            H, beta = sol.graph, build_beta(sol.graph, sol, None, ends)
    except InfeasibleError as exc:
        report["error"] = {"stage": "solve", "message": str(exc), "edge": exc.edge,
                           "tau_e": exc.tau_e and exc.tau_e.to_json(), "tau_ebar": exc.tau_ebar and exc.tau_ebar.to_json()}
        text.append(f"solver infeasible: {exc}")
        return Outcome(report, text, failed + 1, unknown)
    except (BetaRelationError, ValueError) as exc:
        report["error"] = {"stage": "beta", "message": str(exc)}
        text.append(f"beta assembly failed: {exc}")
        return Outcome(report, text, failed + 1, unknown)
    report["beta"] = beta.to_json()
    text.append("beta: relation, C4 and C5 identities hold")

    if args.verify_equivariance:
        eq = check_equivariance(H, beta, ends, args.verify_equivariance)
        report["equivariance"] = eq.to_json()
        text.append(f"equivariance ({eq.checks} checks): {'pass' if eq.passed else 'FAIL'}")
        if not eq.passed:
            text.append(f"  first violation: {json.dumps(eq.violation)}")
            failed += 1
    if args.check_freeness:
        if not H.single_vertex:
            report["freeness"] = {"skipped": "needs a single-vertex graph"}
            text.append("freeness: skipped (needs a single-vertex graph)")
            unknown += 1
        else:
            fr = freeness_check(H, beta, args.check_freeness)
            report["freeness"] = fr.to_json()
            text.append(
                f"freeness up to length {args.check_freeness}: {fr.checked} elements, "
                f"{fr.stable_hyperbolic} hyperbolic on the Bass-Serre tree, "
                f"{fr.vertex_conjugate} vertex-conjugate; free={fr.all_free} tame={fr.all_tame}"
            )
            failed += (not fr.all_free) + (not fr.all_tame)
    return Outcome(report, text, failed, unknown)


def cmd_verify(args) -> Outcome:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    seed = args.seed if args.seed is not None else default_seed()
    results = [run_suite(n, args.cases, seed) for n in names]
    report = {"seed": seed, "suites": [r.to_json() for r in results]}
    text = [r.line() for r in results]
    return Outcome(report, text, sum(not r.passed for r in results))


# -- entry point -------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambdatree", description="Exact computations with affine actions on Lambda-trees.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--strict", action="store_true", help="treat Unknown verdicts as failures")
    # the same flags after the subcommand; SUPPRESS keeps them from resetting the top-level values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="treat Unknown verdicts as failures")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify Gamma(m,n;r,s)")
    for name in "mnrs":
        c.add_argument(name, type=int)
    c.add_argument("--witness", action="store_true", help="build and verify a witness")
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("gamma1", parents=[common], help="the group <x,y,t | t x t^-1 = [x,y]>")
    g.add_argument("--k", type=_positive, default=6, help="number of Britton identities (default 6)")
    g.set_defaults(func=cmd_gamma1)

    ln = sub.add_parser("lengths", parents=[common], help="translation lengths on a weighted Cayley tree")
    ln.add_argument("--weights", required=True, help="e.g. x=1,y=(0,2)")
    ln.add_argument("--sig", help="value group, e.g. Z, Q or ZZ (inferred by default)")
    ln.add_argument("--word", required=True, action="append", help="word, e.g. '[x^2,y^2]' (repeatable)")
    ln.add_argument("--brute", action="store_true", help="cross-check with the brute-force oracle")
    ln.set_defaults(func=cmd_lengths)

    ax = sub.add_parser("axis", parents=[common], help="how the axes of two elements meet")
    ax.add_argument("--weights", required=True)
    ax.add_argument("--sig")
    ax.add_argument("x")
    ax.add_argument("y")
    ax.set_defaults(func=cmd_axis)

    cb = sub.add_parser("combine", parents=[common], help="build an affine action from a graph of groups")
    cb.add_argument("spec", help="graph-of-groups JSON file")
    cb.add_argument("--strategy", choices=[SCALE_Q, SHEAR_Z2, "c5prime"], default=SCALE_Q)
    cb.add_argument("--check-freeness", type=_positive, metavar="L")
    cb.add_argument("--verify-equivariance", type=_positive, metavar="N")
    cb.add_argument("--bound", type=_positive, default=4, help="conjugator search bound")
    cb.set_defaults(func=cmd_combine)

    vf = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    vf.add_argument("--suite", choices=["all", *SUITES], default="all")
    vf.add_argument("--cases", type=_positive)
    vf.add_argument("--seed", type=int, help="defaults to $LAMBDATREE_SEED or a fixed seed")
    vf.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except WordParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"  {exc.text}\n  {' ' * exc.position}^", file=sys.stderr)
        return BAD_INPUT
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if args.json:
        out.report.setdefault("summary", {"failed": out.failed, "unknown": out.unknown})
        print(json.dumps(out.report, indent=2, sort_keys=True))
    else:
        print("\n".join(out.text))
        if out.unknown:
            print(f"warning: {out.unknown} verdict(s) Unknown")
    if out.failed or (args.strict and out.unknown):
        return FAILED
    return OK


if __name__ == "__main__":
    sys.exit(main())
