"""The nine acceptance criteria, each timed against its budget.

Every test prints one PASS/FAIL line; the terminal summary repeats them.
"""

import itertools
import random
import time

import pytest

import oracles
from lambdatree.classify import XY, XZ, ClassInput, classify, gamma1_report, shear_setup
from lambdatree.combine import (
    SCALE_Q,
    SHEAR_Z2,
    BetaRelationError,
    EndAssignmentError,
    Vertex,
    assign_ends,
    build_beta,
    check_equivariance,
    freeness_check,
    hnn_graph,
    solve_c5_prime,
    solve_dilation,
    validate_hypotheses,
)
from lambdatree.freegrp import Alphabet, abelianization, commutator, random_reduced_word
from lambdatree.ogroup import Z, Z2, LexVector, OAutomorphism
from lambdatree.suites import (
    DEFAULT_SEED,
    beta_instance_check,
    corrupted_beta,
    gamma_instance,
    random_commutator_case,
    random_legal_instance,
)
from lambdatree.treecalc import (
    CayleyTreeAction,
    axis_geometry,
    brute_force_length,
    commutator_length,
    translation_length,
)
from lambdatree.freegrp import commutator_power

EXPS3 = [k for k in range(-3, 4) if k]
EXPS4 = [k for k in range(-4, 5) if k]


def finish(record_criterion, number, title, passed, start, budget, detail=""):
    seconds = time.perf_counter() - start
    ok = passed and seconds < budget
    record_criterion(number, title, ok, seconds, budget, detail)
    assert passed, detail
    assert seconds < budget, f"took {seconds:.1f}s, budget {budget}s"


def test_criterion_1_constants(record_criterion):
    start = time.perf_counter()
    uv = Alphabet.of("uv")
    A = CayleyTreeAction.uniform(uv, 1)
    x1, y1 = uv("u^3 v"), uv("u")
    geo = axis_geometry(A, x1, y1)
    got = (
        translation_length(A, x1).coords,
        translation_length(A, y1).coords,
        geo.kind,
        geo.xi.coords,
        commutator_length(A, x1, y1, 1, 1).coords,
    )
    ok = got == ((4,), (1,), "segment", (3,), (4,))

    S = shear_setup()
    x, y = XZ("x"), XZ("z^-1 x z")
    lengths = {}
    for m, n in itertools.product(EXPS3, repeat=2):
        lengths[m, n] = commutator_length(S, x, y, m, n)
        ok &= lengths[m, n] == LexVector(Z2, (4, 4 * abs(m) + 4 * abs(n)))
    solves = 0
    for m, n, r, s in itertools.product(EXPS3, repeat=4):
        theta = solve_dilation(SHEAR_Z2, lengths[m, n], lengths[r, s])
        ok &= theta == OAutomorphism.shear(abs(r) - abs(m) + abs(s) - abs(n), Z2)
        ok &= theta(lengths[m, n]) == lengths[r, s]
        solves += 1
    finish(record_criterion, 1, "constants, 36 commutator lengths, shear solves", ok, start, 5,
           f"{len(lengths)} lengths, {solves} shear solves")


def test_criterion_2_commutator_oracle(record_criterion):
    start = time.perf_counter()
    rng = random.Random(DEFAULT_SEED)
    matches, bad = 0, []
    for i in range(200):
        A, x, y, m, n = random_commutator_case(rng)
        closed = commutator_length(A, x, y, m, n)
        brute = brute_force_length(A, commutator_power(x, y, m, n))
        if brute.stable and brute.length == closed:
            matches += 1
        else:
            bad.append(i)
    finish(record_criterion, 2, "closed-form commutator length vs brute force", not bad, start, 60,
           f"{matches}/200 exact matches")


def test_criterion_3_classifier_sweep(record_criterion):
    start = time.perf_counter()
    agree = verified = 0
    kinds = {}
    for m, n, r, s in itertools.product(EXPS4, repeat=4):
        v = classify(ClassInput(m, n, r, s))
        agree += v.kind == oracles.literal_verdict(m, n, r, s)
        verified += v.witness.verified
        kinds[v.kind] = kinds.get(v.kind, 0) + 1
    ok = agree == verified == 4096
    finish(record_criterion, 3, "classifier sweep over 4096 inputs", ok, start, 60,
           f"{agree} verdicts agree, {verified} witnesses verified, {kinds}")


def test_criterion_4_beta_relations(record_criterion):
    start = time.perf_counter()
    ok = True
    for strategy in (SCALE_Q, SHEAR_Z2):
        gamma_instance(1, 1, 2, 2, strategy)  # raises on any relation failure
    rng = random.Random(DEFAULT_SEED)
    held = 0
    for _ in range(50):
        G, ends = random_legal_instance(rng)
        out = beta_instance_check(G, ends, SCALE_Q)
        held += out["postcondition"]
    ok &= held == 50
    G, ends = random_legal_instance(random.Random(1))
    sol = beta_instance_check(G, ends, SCALE_Q)["solution"]
    try:
        corrupted_beta(G, ends, sol)
        control = False
    except BetaRelationError:
        control = True
    ok &= control
    finish(record_criterion, 4, "beta relation identities and solver postconditions", ok, start, 30,
           f"Gamma(1,1;2,2) both strategies, {held}/50 random instances, corrupted control rejected={control}")


def test_criterion_5_equivariance(record_criterion):
    start = time.perf_counter()
    reports = {}
    for strategy in (SCALE_Q, SHEAR_Z2):
        G, beta, ends = gamma_instance(1, 1, 2, 2, strategy)
        reports[strategy] = check_equivariance(G, beta, ends, samples=4)
    ok = all(r.passed for r in reports.values())
    detail = ", ".join(f"{k}: {r.checks} checks {'pass' if r.passed else r.violation}" for k, r in reports.items())
    finish(record_criterion, 5, "equivariance on Gamma(1,1;2,2)", ok, start, 60, detail)


def test_criterion_6_freeness(record_criterion):
    start = time.perf_counter()
    G, beta, ends = gamma_instance(1, 1, 2, 2, SCALE_Q)
    assert all(m.mu.is_zero() for m in beta.vertex_maps.values())
    rep = freeness_check(G, beta, 6)
    ok = rep.all_free and rep.all_tame and rep.checked > 0
    finish(record_criterion, 6, "freeness of all elements up to length 6", ok, start, 120,
           f"{rep.checked} elements: {rep.stable_hyperbolic} hyperbolic, {rep.vertex_conjugate} vertex-conjugate")


def test_criterion_7_gamma1(record_criterion):
    start = time.perf_counter()
    rep = gamma1_report(6)
    ok = rep.ok and len(rep.identities) == 6 and all(row["trivial"] for row in rep.identities)
    finish(record_criterion, 7, "Britton identities v_k = t^k x t^-k, k = 1..6", ok, start, 60,
           "lengths " + ",".join(str(row["length"]) for row in rep.identities))


def _c5_instance(rng):
    alph = Alphabet(("x", "y", "z")[: rng.randint(2, 3)])
    A = CayleyTreeAction(alph, tuple(LexVector(Z, (rng.randint(1, 3),)) for _ in alph.names))
    while True:
        u = random_reduced_word(rng, alph.rank, rng.randint(1, 4))
        v = random_reduced_word(rng, alph.rank, rng.randint(1, 4))
        # mixed: at least one side outside the commutator subgroup
        if any(abelianization(u, alph.rank)) or any(abelianization(v, alph.rank)):
            break
    return alph, A, u, v


def test_criterion_8_c5_prime(record_criterion):
    start = time.perf_counter()
    unit = CayleyTreeAction.uniform(XY, 1)
    same = hnn_graph(Vertex("v", XY, unit), [("[x,y]", "[y,x^-1]")])
    s1 = solve_c5_prime(same, assign_ends(same))
    ok = s1.feasible and set(s1.rhos.values()) == {0}
    diff = hnn_graph(Vertex("v", XY, unit), [("[x,y]", "[x^2,y^2]")])
    s2 = solve_c5_prime(diff, assign_ends(diff))
    ok &= (not s2.feasible) and bool(s2.certificate)

    rng = random.Random(DEFAULT_SEED)
    done = feasible = agree = 0
    while done < 20:
        alph, A, u, v = _c5_instance(rng)
        G = hnn_graph(Vertex("v", alph, A), [(u, v)])
        if not validate_hypotheses(G, bound=2).ok:
            continue
        try:
            ends = assign_ends(G)
        except EndAssignmentError:
            continue
        done += 1
        sol = solve_c5_prime(G, ends)
        rows = [list(abelianization(u, alph.rank)), list(abelianization(v, alph.rank))]
        mu = sol.equations[0][2]
        agree += sol.feasible == oracles.integer_solvable(rows, [mu, mu])
        if sol.feasible:
            feasible += 1
            ok &= all(sum(c * sol.rhos[k] for k, c in co.items()) == rhs for _, co, rhs in sol.equations)
            build_beta(G, {}, sol.rhos, ends)
    ok &= agree == 20
    finish(record_criterion, 8, "translation-part solver", ok, start, 10,
           f"commutator cases feasible/infeasible as expected; {feasible}/20 random instances feasible, "
           f"{agree}/20 agree with the integer oracle")


def test_criterion_9_property_suites(record_criterion):
    import test_freegrp
    import test_ogroup
    import test_treecalc

    props = [
        test_ogroup.test_order_is_total_and_translation_invariant,
        test_ogroup.test_oautomorphisms_preserve_order,
        test_ogroup.test_much_less_matches_definition,
        test_ogroup.test_tameness_matches_sampling,
        test_ogroup.test_affine_composition_law,
        test_ogroup.test_embedding_lift_commutes,
        test_freegrp.test_reduce_matches_naive,
        test_freegrp.test_product_is_associative_with_inverses,
        test_freegrp.test_conjugacy_against_rotations,
        test_freegrp.test_conjugates_are_detected,
        test_freegrp.test_conjugacy_against_exhaustive_search,
        test_freegrp.test_proper_power_against_naive,
        test_freegrp.test_format_parse_round_trip,
        test_treecalc.test_translation_length_matches_oracles,
        test_treecalc.test_vertex_oracle_agrees,
        test_treecalc.test_length_is_conjugation_and_power_invariant,
        test_treecalc.test_end_homomorphism_is_additive,
        test_treecalc.test_base_change_commutes_with_length,
        test_treecalc.test_axis_geometry_symmetric_and_conjugation_invariant,
        test_treecalc.test_commutator_formula_matches_brute_force,
    ]
    start = time.perf_counter()
    failures = []
    for prop in props:
        try:
            prop()
        except Exception as exc:  # record and keep going so the line lists every failure
            failures.append(f"{prop.__name__}: {type(exc).__name__}")
    finish(record_criterion, 9, "ogroup/freegrp/treecalc property suites", not failures, start, 60,
           f"{len(props) - len(failures)}/{len(props)} properties hold" + (f"; {failures}" if failures else ""))
