import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from lambdatree.freegrp import Alphabet, Word, commutator, commutator_power, random_reduced_word, word_product
from lambdatree.ogroup import Q, Z, Z2, LexVector, OAutomorphism, Signature, coordinate_embedding
from lambdatree.treecalc import (
    CayleyTreeAction,
    EndSpec,
    FixedPoint,
    TranslationData,
    axis_geometry,
    base_change,
    brute_force_length,
    busemann_limit,
    commutator_length,
    dilation_line_action,
    end_homomorphism,
    end_map,
    stabilizer_of_end,
    translation_length,
)

UV = Alphabet.of("uv")
u, v = UV.gens()
UNIT = CayleyTreeAction.uniform(UV, 1)

XZ = Alphabet.of("xz")
SHEARED = CayleyTreeAction(XZ, (LexVector(Z2, (0, 2)), LexVector(Z2, (1, 0))))
x, z = XZ.gens()
y = XZ("z^-1 x z")


def zv(n):
    return LexVector(Z, (n,))


# -- constants from the worked examples ---------------------------------------------


def test_lengths_in_the_unit_tree():
    assert translation_length(UNIT, UV("u^3 v")) == zv(4)
    assert translation_length(UNIT, u) == zv(1)
    assert translation_length(UNIT, Word()) == zv(0)


def test_overlap_of_u3v_and_u():
    geo = axis_geometry(UNIT, UV("u^3 v"), u)
    assert geo.kind == "segment"
    assert geo.xi == zv(3)
    assert commutator_length(UNIT, UV("u^3 v"), u, 1, 1) == zv(4)


def test_sheared_tree_constants():
    assert translation_length(SHEARED, x) == LexVector(Z2, (0, 2))
    assert translation_length(SHEARED, y) == LexVector(Z2, (0, 2))
    geo = axis_geometry(SHEARED, x, y)
    assert geo.kind == "disjoint"
    assert geo.bridge == LexVector(Z2, (1, 0))


@pytest.mark.parametrize("m", [-3, -2, -1, 1, 2, 3])
@pytest.mark.parametrize("n", [-3, -2, -1, 1, 2, 3])
def test_sheared_commutator_lengths(m, n):
    assert commutator_length(SHEARED, x, y, m, n) == LexVector(Z2, (4, 4 * abs(m) + 4 * abs(n)))


def test_generators_meet_in_a_point():
    A = CayleyTreeAction(Alphabet.of("xy"), (zv(2), zv(5)))
    a, b = A.alphabet.gens()
    assert axis_geometry(A, a, b).kind == "point"
    for m, n in [(1, 1), (2, -1), (-3, 2)]:
        closed = commutator_length(A, a, b, m, n)
        assert closed == zv(2 * abs(m) * 2 + 2 * abs(n) * 5)
        assert brute_force_length(A, commutator_power(a, b, m, n)).length == closed


def test_commutator_length_rejects_commuting_pair():
    with pytest.raises(ValueError):
        commutator_length(UNIT, u, u ** 2, 1, 1)
    with pytest.raises(ValueError):
        axis_geometry(UNIT, Word(), u)


def test_brute_force_examples():
    XY = Alphabet.of("xy")
    A = CayleyTreeAction.uniform(XY, 1)
    assert brute_force_length(A, XY("x")).length == zv(1)
    assert brute_force_length(UNIT, commutator(UV("u^3 v"), u)).length == zv(4)
    assert brute_force_length(A, XY("[x^2, y^2]")).length == zv(8)
    with pytest.raises(ValueError):
        brute_force_length(CayleyTreeAction.uniform(XY, 1, Q), XY("x"))


def test_brute_force_flags_small_radius():
    A = CayleyTreeAction.uniform(UV, 1)
    w = UV("v u^3 v^-1")
    assert not brute_force_length(A, w, radius=0).stable
    assert brute_force_length(A, w).stable


def test_ball_and_hull_modes_agree():
    A = CayleyTreeAction(UV, (zv(1), zv(2)))
    for text in ["u v u^-1", "[u, v]", "v^2 u v^-2"]:
        w = UV(text)
        assert brute_force_length(A, w, radius=5, mode="ball").length == brute_force_length(A, w).length


# -- ends ---------------------------------------------------------------------------


def test_end_map_examples():
    eps = EndSpec(attractor=u)
    assert end_map(UNIT, eps, Word()) == zv(0)
    assert end_map(UNIT, eps, u ** 2) == zv(2)
    assert end_map(UNIT, eps, u ** -1) == zv(-1)
    assert end_map(UNIT, eps, u) - end_map(UNIT, eps, u ** -1) == UNIT.distance(u ** -1, u)


def test_end_homomorphism_examples():
    eps = EndSpec(attractor=u)
    assert end_homomorphism(UNIT, eps, u) == zv(1)
    assert end_homomorphism(UNIT, eps, u ** -1) == zv(-1)
    assert end_homomorphism(UNIT, eps, u ** 2) == zv(2)
    with pytest.raises(ValueError):
        end_homomorphism(UNIT, eps, v)
    rep = EndSpec(attractor=u, direction=-1)
    assert end_homomorphism(UNIT, rep, u) == zv(-1)


def test_stabilizer_examples():
    XYZ = Alphabet.of("xyz")
    A = CayleyTreeAction.uniform(XYZ, 1)
    assert stabilizer_of_end(UNIT, EndSpec(attractor=u)) == u
    assert stabilizer_of_end(UNIT, EndSpec(attractor=u ** 4)) == u
    got = stabilizer_of_end(A, EndSpec(attractor=XYZ("(x y)^2"), conjugator=XYZ("z")))
    assert got == XYZ("z x y z^-1")
    assert stabilizer_of_end(UNIT, EndSpec(pattern=1)) is None


def test_bad_ends():
    with pytest.raises(ValueError):
        EndSpec(attractor=Word())
    with pytest.raises(ValueError):
        EndSpec(pattern=0)


def test_base_change_examples():
    h = coordinate_embedding(Z, Z2, 1)
    B = base_change(UNIT, h)
    assert B.weights == (LexVector(Z2, (0, 1)), LexVector(Z2, (0, 1)))
    assert translation_length(B, commutator(UV("u^3 v"), u)) == LexVector(Z2, (0, 4))
    same = base_change(UNIT, coordinate_embedding(Z, Z, 0))
    assert same.weights == UNIT.weights
    with pytest.raises(ValueError):
        base_change(UNIT, coordinate_embedding(Q, Signature(("Q", "Q")), 0))


def test_dilation_line_examples():
    t = dilation_line_action(1, 3)
    assert isinstance(t, TranslationData)
    assert t.nu == LexVector(Q, (3,)) and t.tame
    f = dilation_line_action(2, 0)
    assert isinstance(f, FixedPoint) and f.x0 == 0
    g = dilation_line_action(Fraction(1, 4), 1)
    assert g.x0 == Fraction(4, 3)
    assert not g.essentially_hyperbolic
    assert dilation_line_action(1, 0).x0 == 0
    with pytest.raises(ValueError):
        dilation_line_action(0, 1)


# -- properties ---------------------------------------------------------------------


@st.composite
def z_instances(draw, max_len=8):
    rank = draw(st.integers(2, 3))
    weights = [draw(st.integers(1, 4)) for _ in range(rank)]
    letters = st.sampled_from([a for i in range(1, rank + 1) for a in (i, -i)])
    w = oracles.naive_reduce(draw(st.lists(letters, max_size=max_len)))
    A = CayleyTreeAction(Alphabet(tuple("xyz"[:rank])), tuple(zv(k) for k in weights))
    return A, weights, Word(w)


@given(z_instances())
def test_translation_length_matches_oracles(inst):
    A, weights, w = inst
    ell = translation_length(A, w)
    assert brute_force_length(A, w).length == ell
    assert (ell == zv(0)) == (not w)


@given(z_instances(max_len=5))
def test_vertex_oracle_agrees(inst):
    # on a Z-tree the minimum over vertices equals the translation length for hyperbolic elements
    A, weights, w = inst
    if w:
        assert oracles.vertex_translation_length(weights, w.letters, len(w)) == translation_length(A, w).coords[0]


@given(z_instances(), st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5), st.integers(-4, 4))
def test_length_is_conjugation_and_power_invariant(inst, g, n):
    A, _, w = inst
    g = Word(oracles.naive_reduce(g))
    ell = translation_length(A, w)
    assert translation_length(A, word_product(g, w, g.inverse())) == ell
    assert translation_length(A, w ** n) == ell * abs(n)


@given(st.integers(0, 10_000))
def test_end_homomorphism_is_additive(seed):
    rng = random.Random(seed)
    A = CayleyTreeAction(UV, (zv(rng.randint(1, 4)), zv(rng.randint(1, 4))))
    while True:
        att = random_reduced_word(rng, 2, rng.randint(1, 4))
        if att:
            break
    conj = random_reduced_word(rng, 2, rng.randint(0, 3))
    eps = EndSpec(attractor=att, conjugator=conj, direction=rng.choice((1, -1)))
    root = stabilizer_of_end(A, eps)
    a, b = rng.randint(-3, 3), rng.randint(-3, 3)
    ta = end_homomorphism(A, eps, root ** a)
    tb = end_homomorphism(A, eps, root ** b)
    assert end_homomorphism(A, eps, root ** (a + b)) == ta + tb
    assert abs(ta) == translation_length(A, root ** a)
    # the closed form agrees with the literal Busemann difference far along the ray
    p = random_reduced_word(rng, 2, rng.randint(0, 4))
    if eps.periodic:
        far = len(p) + len(conj) + 3
        assert end_map(A, eps, p) == busemann_limit(A, eps, p, far)


def test_aperiodic_end_busemann():
    A = CayleyTreeAction(UV, (zv(2), zv(3)))
    eps = EndSpec(pattern=2)
    for text in ["u", "u^2 v", "v", "u^-1", "u^2 v u"]:
        w = UV(text)
        assert end_map(A, eps, w) == busemann_limit(A, eps, w, 40)


@given(z_instances(max_len=6), st.integers(0, 2), st.sampled_from(["Z", "Q"]))
def test_base_change_commutes_with_length(inst, pos, last):
    A, _, w = inst
    target = Signature(("Z", "Z", last))
    h = coordinate_embedding(Z, target, pos)
    B = base_change(A, h)
    assert translation_length(B, w) == h(translation_length(A, w))


@st.composite
def noncommuting_pairs(draw):
    rng = random.Random(draw(st.integers(0, 2**32)))
    rank = rng.randint(2, 3)
    while True:
        a = random_reduced_word(rng, rank, rng.randint(1, 4))
        b = random_reduced_word(rng, rank, rng.randint(1, 4))
        if word_product(a, b) != word_product(b, a):
            break
    weights = tuple(zv(rng.randint(1, 3)) for _ in range(rank))
    g = random_reduced_word(rng, rank, rng.randint(0, 3))
    return CayleyTreeAction(Alphabet(tuple("xyz"[:rank])), weights), a, b, g


def _magnitudes(geo):
    return geo.kind, geo.bridge, geo.xi


@given(noncommuting_pairs())
def test_axis_geometry_symmetric_and_conjugation_invariant(inst):
    A, a, b, g = inst
    geo = axis_geometry(A, a, b)
    assert _magnitudes(axis_geometry(A, b, a)) == _magnitudes(geo)
    conj = axis_geometry(A, word_product(g, a, g.inverse()), word_product(g, b, g.inverse()))
    assert _magnitudes(conj) == _magnitudes(geo)


@given(noncommuting_pairs(), st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool))
def test_commutator_formula_matches_brute_force(inst, m, n):
    A, a, b, _ = inst
    closed = commutator_length(A, a, b, m, n)
    assert brute_force_length(A, commutator_power(a, b, m, n)).length == closed


def test_scaled_weights_keep_formula():
    A = CayleyTreeAction(UV, (LexVector(Q, (Fraction(1, 2),)), LexVector(Q, (3,))))
    eta = OAutomorphism.scale(4, Q)
    from lambdatree.treecalc import scale_action

    B = scale_action(A, eta)
    w = UV("u^3 v")
    assert translation_length(B, w) == eta(translation_length(A, w))
