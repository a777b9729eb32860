"""A concrete model of the Z x L0-tree near the base ball, and the checks run on it.

For a single-vertex graph, a point is (c, q): c is the canonical coset word
f_1 t^e1 ... f_k t^ek (a vertex of the Bass-Serre tree, stored as a tuple of
(f_i, (j, e_i)) pairs) and q a vertex of the base Cayley tree.  The group acts
through Britton normal forms.  Distances are defined inside one ball by
transporting with theta, and between adjacent balls by the bi-end pairing on
a canonically chosen translate of a base edge.  Equivariance of this model
is exactly what the affine action needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from ..freegrp import Word, all_reduced_words, word_product
from ..ogroup import LexVector, Z, is_tame
from ..treecalc import end_map, translation_length
from .beta import BetaAssignment, adjacent_metric, lambda_vector
from .britton import BrittonWord, HNNPresentation, canonicalize, britton_reduce, cyclic_britton
from .graph import GraphOfGroups


class NotAdjacent(ValueError):
    pass


class HNNTreeModel:
    def __init__(self, G: GraphOfGroups, beta: BetaAssignment, ends: dict):
        self.G = G
        self.beta = beta
        self.ends = ends
        self.P = HNNPresentation.from_graph(G)
        self.vertex = G.vertices[0]
        self.A = self.vertex.action
        # per stable letter j: (positive edge id, reverse edge id)
        self.pairs = [(eid, G.edge(eid).rev) for eid in self.P.graph_edges]
        self._delta_cache = {}

    # -- coset words ------------------------------------------------------------------

    def coset_word(self, c: tuple) -> Word:
        letters = []
        for f, (j, s) in c:
            letters.extend(f.letters)
            letters.extend(self.P.stable(j, s).letters)
        return Word(letters)

    def split(self, g: Word):
        """g = c * f with c canonical; returns (c, f)."""
        nf = canonicalize(self.P, britton_reduce(self.P, g))
        c = tuple(zip(nf.syllables[:-1], nf.stables))
        return c, nf.syllables[-1]

    def point(self, g: Word, q: Word = Word()):
        """The point g . q for a presentation word g and base-tree vertex q."""
        c, f = self.split(g)
        return c, word_product(self.vertex.embed(f), q)

    def act(self, g: Word, p):
        c, q = p
        c2, f = self.split(word_product(g, self.coset_word(c)))
        return c2, word_product(self.vertex.embed(f), q)

    # -- distances --------------------------------------------------------------------

    def _delta(self, eid: str, q: Word) -> LexVector:
        key = (eid, q.letters)
        hit = self._delta_cache.get(key)
        if hit is None:
            hit = end_map(self.A, self.ends[eid], q)
            self._delta_cache[key] = hit
        return hit

    def distance(self, p1, p2) -> LexVector:
        (c1, q1), (c2, q2) = p1, p2
        if c1 == c2:
            theta = self.beta.of_presentation_word(self.P, self.coset_word(c1)).theta
            return lambda_vector(self.beta.sig0, 0, theta(self.A.distance(q1, q2)))
        if len(c2) == len(c1) + 1 and c2[:-1] == c1:
            return self._across(c1, q1, c2, q2)
        if len(c1) == len(c2) + 1 and c1[:-1] == c2:
            return self._across(c2, q2, c1, q1)
        raise NotAdjacent("points are not in the same or adjacent balls")

    def _across(self, c1, q1, c2, q2) -> LexVector:
        # c2 = c1 f t_j^s
        f, (j, s) = c2[-1]
        e, ebar = self.pairs[j]
        F = self.vertex.embed(f)
        if s > 0:
            # s_word = c1 f; edge s_word.e runs from ball c2 (t side) to ball c1
            shift = word_product(self.coset_word(c1), f)
            x_in, y_in = q2, word_product(F.inverse(), q1)
        else:
            # s_word = c1 f t^-1; edge runs from ball c1 to ball c2
            shift = word_product(self.coset_word(c1), f, self.P.stable(j, -1))
            x_in, y_in = word_product(F.inverse(), q1), q2
        b = self.beta.of_presentation_word(self.P, shift)
        theta_t = self.beta.theta_of_edge(e)
        delta = theta_t(self._delta(e, x_in)) + self._delta(ebar, y_in)
        delta = b.theta(delta) - b.mu
        return lambda_vector(self.beta.sig0, 1, -delta)


@dataclass
class EquivarianceReport:
    passed: bool
    checks: int = 0
    same_ball: int = 0
    adjacent: int = 0
    stabilizer_checks: int = 0
    violation: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "passed": self.passed,
            "checks": self.checks,
            "same_ball": self.same_ball,
            "adjacent": self.adjacent,
            "stabilizer_checks": self.stabilizer_checks,
        }
        if self.violation:
            out["violation"] = self.violation
        return out


def _pairs_within(points_a, points_b, bound):
    for (pa, la), (pb, lb) in product(points_a, points_b):
        if la + lb <= bound:
            yield pa, pb


def check_equivariance(G: GraphOfGroups, beta: BetaAssignment, ends: dict, samples: int = 4,
                       point_bound: Optional[int] = None) -> EquivarianceReport:
    """d(s x, s y) == beta_s d(x, y) on sampled elements and point pairs.

    s ranges over every reduced vertex-group word of length <= samples.  Point
    pairs (x, y) range over vertices of the base ball and of the balls t_j^+-1
    with |x| + |y| <= point_bound (word lengths in the base tree), in the same
    ball and across one edge.  For every graph the edge-stabilizer identity
    is also checked directly with adjacent_metric.
    """
    if point_bound is None:
        point_bound = samples
    rep = EquivarianceReport(True)
    # edge-stabilizer checks: s = alpha_ebar(s)^k fixes the base edge
    for e in G.positive_edges():
        if e.alpha is None:
            continue
        r = G.reverse(e.id)
        vx, vy = G.vertex(e.origin), G.vertex(r.origin)
        pts_x = [w for w in all_reduced_words(vx.action.alphabet.rank, 2)]
        pts_y = [w for w in all_reduced_words(vy.action.alphabet.rank, 2)]
        for k in (-2, -1, 1, 2):
            su, sv = vx.embed(e.alpha ** k), vy.embed(r.alpha ** k)
            plain = r if G.stable_letter(e.id) else e
            b = beta.of_vertex_word(plain.origin, plain.alpha ** k)
            for x in pts_x:
                for y in pts_y:
                    d0 = adjacent_metric(G, beta, ends, e.id, x, y)
                    d1 = adjacent_metric(G, beta, ends, e.id, word_product(su, x), word_product(sv, y))
                    rep.checks += 1
                    rep.stabilizer_checks += 1
                    if d1 != b.apply_lambda(d0):
                        rep.passed = False
                        rep.violation = {
                            "kind": "edge-stabilizer", "edge": e.id, "power": k,
                            "x": x.letters, "y": y.letters,
                            "lhs": str(d1), "rhs": str(b.apply_lambda(d0)),
                        }
                        return rep
    if not G.single_vertex:
        return rep
    M = HNNTreeModel(G, beta, ends)
    amb = M.A.alphabet.rank
    base_pts = [(w, len(w)) for w in all_reduced_words(amb, point_bound)]
    balls = [()]
    for j in range(len(M.pairs)):
        for s in (1, -1):
            balls.append(((Word(), (j, s)),))
    pts = {c: [((c, q), l) for q, l in base_pts] for c in balls}
    pair_list = []
    for c in balls:
        for a, b in _pairs_within(pts[c], pts[c], point_bound):
            pair_list.append(("same", a, b))
    for c in balls[1:]:
        for a, b in _pairs_within(pts[()], pts[c], point_bound):
            pair_list.append(("adjacent", a, b))
    base_d = [M.distance(a, b) for _, a, b in pair_list]
    vertex_words = list(all_reduced_words(M.vertex.alphabet.rank, samples))
    for s in vertex_words:
        bs = beta.of_vertex_word(M.vertex.id, s)
        moved = {}
        for (kind, a, b), d0 in zip(pair_list, base_d):
            for p in (a, b):
                if p not in moved:
                    moved[p] = M.act(s, p)
            d1 = M.distance(moved[a], moved[b])
            rep.checks += 1
            if kind == "same":
                rep.same_ball += 1
            else:
                rep.adjacent += 1
            expect = bs.apply_lambda(d0)
            if d1 != expect:
                rep.passed = False
                rep.violation = {
                    "kind": kind, "s": M.vertex.alphabet.format(s),
                    "x": str(a), "y": str(b), "lhs": str(d1), "rhs": str(expect),
                }
                return rep
    return rep


@dataclass
class FreenessReport:
    checked: int = 0
    trivial: int = 0
    stable_hyperbolic: int = 0
    vertex_conjugate: int = 0
    not_free: list = field(default_factory=list)
    not_tame: list = field(default_factory=list)

    @property
    def all_free(self) -> bool:
        return not self.not_free

    @property
    def all_tame(self) -> bool:
        return not self.not_tame

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "trivial_excluded": self.trivial,
            "stable_hyperbolic": self.stable_hyperbolic,
            "vertex_conjugate": self.vertex_conjugate,
            "all_free": self.all_free,
            "all_tame": self.all_tame,
            "not_free": self.not_free[:20],
            "not_tame": self.not_tame[:20],
        }


def freeness_check(G: GraphOfGroups, beta: BetaAssignment, L: int) -> FreenessReport:
    """Classify every nontrivial element given by a word of length <= L."""
    P = HNNPresentation.from_graph(G)
    vertex = G.vertices[0]
    sig0 = beta.sig0
    rep = FreenessReport()
    seen = set()
    for w in all_reduced_words(P.alphabet.rank, L):
        bw = canonicalize(P, britton_reduce(P, w))
        key = (tuple(f.letters for f in bw.syllables), bw.stables)
        if key in seen:
            continue
        seen.add(key)
        if bw.is_trivial():
            rep.trivial += 1
            continue
        rep.checked += 1
        b = beta.of_presentation_word(P, w)
        cyc = cyclic_britton(P, w)
        if cyc.stable_count:
            rep.stable_hyperbolic += 1
            nu = LexVector(Z + sig0, (cyc.stable_count,) + (0,) * sig0.rank)
        else:
            rep.vertex_conjugate += 1
            ell = translation_length(vertex.action, vertex.embed(cyc.syllables[0]))
            if not ell.is_positive():
                rep.not_free.append(P.format(w))
                continue
            nu = lambda_vector(sig0, 0, ell)
        if not is_tame(b.as_oautomorphism(), nu):
            rep.not_tame.append(P.format(w))
    return rep
