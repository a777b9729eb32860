"""Seeded verification suites run by `lambdatree verify`.

Each suite returns a SuiteResult.  Cases are generated from random.Random(seed)
so reruns with the same seed print the same report.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .classify import XY, ClassInput, classify, is_excluded
from .combine import (
    SCALE_Q,
    SHEAR_Z2,
    BetaRelationError,
    EndAssignmentError,
    InfeasibleError,
    Vertex,
    assign_ends,
    build_beta,
    check_equivariance,
    freeness_check,
    hnn_graph,
    solve_c5_prime,
    solve_theta_ge,
    validate_hypotheses,
)
from .freegrp import Alphabet, commutator, commutator_power, random_reduced_word, word_product
from .ogroup import Q, Z, LexVector, OAutomorphism
from .treecalc import CayleyTreeAction, brute_force_length, commutator_length

DEFAULT_SEED = 20240611


def default_seed() -> int:
    raw = os.environ.get("LAMBDATREE_SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, **info):
        self.failures.append(info)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures[:20],
            "notes": self.notes,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases - len(self.failures)}/{self.cases}"


def _names(rank: int) -> Alphabet:
    return Alphabet(tuple("xyz"[:rank]))


def random_commutator_case(rng: random.Random, max_rank: int = 3, max_weight: int = 4, max_exp: int = 3,
                           max_len: int = 3):
    """A non-commuting pair (x, y) with weights and exponents."""
    rank = rng.randint(2, max_rank)
    alph = _names(rank)
    weights = tuple(LexVector(Z, (rng.randint(1, max_weight),)) for _ in range(rank))
    A = CayleyTreeAction(alph, weights)
    while True:
        x = random_reduced_word(rng, rank, rng.randint(1, max_len))
        y = random_reduced_word(rng, rank, rng.randint(1, max_len))
        if word_product(x, y) != word_product(y, x):
            break
    m = rng.choice([k for k in range(-max_exp, max_exp + 1) if k])
    n = rng.choice([k for k in range(-max_exp, max_exp + 1) if k])
    return A, x, y, m, n


def suite_commutator(cases: int = 200, seed: int = DEFAULT_SEED) -> SuiteResult:
    res = SuiteResult("commutator")
    rng = random.Random(seed)
    for i in range(cases):
        A, x, y, m, n = random_commutator_case(rng)
        closed = commutator_length(A, x, y, m, n)
        brute = brute_force_length(A, commutator_power(x, y, m, n))
        res.cases += 1
        if closed != brute.length or not brute.stable:
            fmt = A.alphabet.format
            res.fail(case=i, x=fmt(x), y=fmt(y), m=m, n=n, weights=[int(w.coords[0]) for w in A.weights],
                     closed=str(closed), brute=str(brute.length))
    return res


def suite_classify(bound: int = 4) -> SuiteResult:
    res = SuiteResult("classify")
    vals = [k for k in range(-bound, bound + 1) if k]
    counts = {}
    for m, n, r, s in itertools.product(vals, repeat=4):
        v = classify(ClassInput(m, n, r, s))
        counts[v.kind] = counts.get(v.kind, 0) + 1
        res.cases += 1
        if not v.witness.verified:
            res.fail(input=[m, n, r, s], kind=v.kind, transcript=v.witness.transcript)
    res.notes["kinds"] = counts
    return res


def random_legal_instance(rng: random.Random, max_len: int = 2, max_tries: int = 200):
    """A one-vertex, one-edge graph over F(x, y) with commutator-type edge words.

    Rejection-samples until the hypothesis checks report no failure and ends
    can be assigned.  Weights are random positive rationals.
    """
    for _ in range(max_tries):
        words = []
        for _ in range(2):
            while True:
                a = random_reduced_word(rng, 2, rng.randint(1, max_len))
                b = random_reduced_word(rng, 2, rng.randint(1, max_len))
                if word_product(a, b) != word_product(b, a):
                    break
            words.append(commutator(a, b))
        weights = tuple(LexVector(Q, (Fraction(rng.randint(1, 6), rng.randint(1, 3)),)) for _ in range(2))
        G = hnn_graph(Vertex("v", XY, CayleyTreeAction(XY, weights)), [tuple(words)])
        if not validate_hypotheses(G, bound=2).ok:
            continue
        try:
            ends = assign_ends(G)
        except EndAssignmentError:
            continue
        return G, ends
    raise RuntimeError("no legal instance found")


def beta_instance_check(G, ends, strategy: str) -> dict:
    sol = solve_theta_ge(G, ends, strategy)
    out = {"thetas": {k: v.to_json() for k, v in sol.thetas.items() if not v.is_identity()}}
    ok = True
    for e in sol.graph.positive_edges():
        if e.alpha is None:
            continue
        r = sol.graph.reverse(e.id)
        lhs = sol.thetas[e.id](sol.taus[e.id]) + sol.taus[r.id]
        ok &= lhs.is_zero()
    beta = build_beta(sol.graph, sol, None, ends)
    out["postcondition"] = ok
    out["beta"] = beta
    out["solution"] = sol
    return out


def suite_beta(cases: int = 50, seed: int = DEFAULT_SEED) -> SuiteResult:
    res = SuiteResult("beta")
    rng = random.Random(seed)
    for i in range(cases):
        G, ends = random_legal_instance(rng)
        res.cases += 1
        try:
            out = beta_instance_check(G, ends, SCALE_Q)
        except (BetaRelationError, InfeasibleError, ArithmeticError) as exc:
            res.fail(case=i, graph=G.to_json(), error=str(exc))
            continue
        if not out["postcondition"]:
            res.fail(case=i, graph=G.to_json(), error="solver postcondition")
    return res


def corrupted_beta(G, ends, sol, factor=Fraction(3, 2)):
    """build_beta with the stable-letter dilation multiplied by factor; should raise."""
    bad = dict(sol.thetas)
    e = next(iter(sol.graph.positive_edges()))
    bad[e.id] = bad[e.id] @ OAutomorphism.scale(factor, sol.graph.sig)
    return build_beta(sol.graph, bad, None, ends)


def suite_c5prime(cases: int = 20, seed: int = DEFAULT_SEED) -> SuiteResult:
    res = SuiteResult("c5prime")
    rng = random.Random(seed)
    feasible = 0
    done = 0
    while done < cases:
        rank = rng.randint(2, 3)
        alph = _names(rank)
        A = CayleyTreeAction(alph, tuple(LexVector(Z, (rng.randint(1, 3),)) for _ in range(rank)))
        u = random_reduced_word(rng, rank, rng.randint(1, 4))
        v = random_reduced_word(rng, rank, rng.randint(1, 4))
        G = hnn_graph(Vertex("v", alph, A), [(u, v)])
        if not validate_hypotheses(G, bound=2).ok:
            continue
        try:
            ends = assign_ends(G)
        except EndAssignmentError:
            continue
        done += 1
        res.cases += 1
        sol = solve_c5_prime(G, ends)
        if sol.feasible:
            feasible += 1
            for label, coeffs, rhs in sol.equations:
                if sum(c * sol.rhos[x] for x, c in coeffs.items()) != rhs:
                    res.fail(case=done, equation=label)
            try:
                build_beta(G, {}, sol.rhos, ends)
            except BetaRelationError as exc:
                res.fail(case=done, error=str(exc))
        elif not sol.certificate:
            res.fail(case=done, error="infeasible without certificate")
    res.notes["feasible"] = feasible
    return res


def gamma_instance(m, n, r, s, strategy: str):
    """Gamma(m, n; r, s) set up for the given dilation strategy."""
    from .classify import one_relator_graph, shear_vertex

    if strategy == SHEAR_Z2:
        G = one_relator_graph((m, n, r, s), shear_vertex())
    else:
        G = one_relator_graph((m, n, r, s), Vertex("v", XY, CayleyTreeAction.uniform(XY, 1, Q)))
    ends = assign_ends(G)
    sol = solve_theta_ge(G, ends, strategy)
    beta = build_beta(sol.graph, sol, None, ends)
    return sol.graph, beta, ends


def suite_equivariance(samples: int = 2, bound: int = 1) -> SuiteResult:
    """Equivariance on every legal Gamma(m,n;r,s) with exponents in [-bound, bound]."""
    res = SuiteResult("equivariance")
    vals = [k for k in range(-bound, bound + 1) if k]
    for params in itertools.product(vals, repeat=4):
        if is_excluded(ClassInput(*params)):
            continue
        for strategy in (SCALE_Q, SHEAR_Z2):
            G, beta, ends = gamma_instance(*params, strategy)
            rep = check_equivariance(G, beta, ends, samples)
            res.cases += 1
            if not rep.passed:
                res.fail(input=list(params), strategy=strategy, violation=rep.violation)
    return res


def suite_freeness(L: int = 4, params=(1, 1, 2, 2)) -> SuiteResult:
    res = SuiteResult("freeness")
    G, beta, ends = gamma_instance(*params, SCALE_Q)
    rep = freeness_check(G, beta, L)
    res.cases = rep.checked
    for w in rep.not_free:
        res.fail(word=w, reason="not free")
    for w in rep.not_tame:
        res.fail(word=w, reason="not tame")
    res.notes.update(rep.to_json())
    return res


def suite_gamma1(K: int = 6) -> SuiteResult:
    from .classify import gamma1_report

    res = SuiteResult("gamma1")
    rep = gamma1_report(K)
    for c in rep.graph_checks:
        res.cases += 1
        if not c["ok"]:
            res.fail(**c)
    for row in rep.identities:
        res.cases += 1
        if not row["trivial"]:
            res.fail(**row)
    res.notes["lengths"] = rep.lengths
    return res


SUITES = {
    "commutator": lambda cases, seed: suite_commutator(cases or 200, seed),
    "classify": lambda cases, seed: suite_classify(),
    "beta": lambda cases, seed: suite_beta(cases or 50, seed),
    "c5prime": lambda cases, seed: suite_c5prime(cases or 20, seed),
    "equivariance": lambda cases, seed: suite_equivariance(),
    "freeness": lambda cases, seed: suite_freeness(),
    "gamma1": lambda cases, seed: suite_gamma1(),
}


def run_suite(name: str, cases=None, seed=None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cases, default_seed() if seed is None else seed)
