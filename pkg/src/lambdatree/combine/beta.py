"""The homomorphism beta into affine maps of Z x L0, and adjacent-ball distances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..freegrp import Word
from ..ogroup import AffineMap, LexVector, OAutomorphism, Z
from ..treecalc import end_map
from .graph import GraphOfGroups
from .hypotheses import assign_ends
from .solvers import ThetaSolution, edge_tau


class BetaRelationError(ArithmeticError):
    def __init__(self, edge: str, condition: str, lhs, rhs):
        super().__init__(f"{condition} fails on edge {edge}: {lhs} != {rhs}")
        self.edge = edge
        self.condition = condition
        self.lhs = lhs
        self.rhs = rhs


class BetaAssignment:
    def __init__(self, G: GraphOfGroups, thetas: dict, rhos: dict):
        self.graph = G
        self.sig0 = G.sig
        self.thetas = dict(thetas)  # edge id -> theta_{g_e}; identity when g_e = 1
        self.rhos = dict(rhos)  # (vertex, generator) -> LexVector
        ident = OAutomorphism.identity(self.sig0)
        self.vertex_maps = {
            key: AffineMap(ident, mu) for key, mu in self.rhos.items()
        }
        self.stable_maps = {}
        for e in G.positive_edges():
            if G.stable_letter(e.id):
                self.stable_maps[e.stable] = AffineMap(self.thetas[e.id], LexVector.zero(self.sig0))
        self._cache = {}

    def identity(self) -> AffineMap:
        return AffineMap.identity(self.sig0)

    def _letter_map(self, key, a: int, m: AffineMap) -> AffineMap:
        if a > 0:
            return m
        hit = self._cache.get(("inv",) + key)
        if hit is None:
            hit = self._cache[("inv",) + key] = m.inverse()
        return hit

    def of_vertex_word(self, vid: str, w: Word) -> AffineMap:
        key = ("v", vid, w.letters)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        names = self.graph.vertex(vid).alphabet.names
        out = self.identity()
        for a in w.letters:
            k = (vid, names[abs(a) - 1])
            out = out @ self._letter_map(k, a, self.vertex_maps[k])
        self._cache[key] = out
        return out

    def of_edge_element(self, eid: str) -> AffineMap:
        e = self.graph.edge(eid)
        return self.of_vertex_word(e.origin, e.alpha)

    def g_map(self, eid: str) -> AffineMap:
        """beta of g_e (identity when g_e = 1)."""
        name = self.graph.stable_letter(eid)
        return self.stable_maps[name] if name else self.identity()

    def theta_of_edge(self, eid: str) -> OAutomorphism:
        return self.g_map(eid).theta

    def of_presentation_word(self, P, w: Word) -> AffineMap:
        """beta of a word over the single-vertex presentation alphabet."""
        key = ("p", w.letters)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        vid = self.graph.vertices[0].id
        names = self.graph.vertices[0].alphabet.names
        out = self.identity()
        for a in w.letters:
            i = abs(a) - 1
            if i < P.nv:
                k = (vid, names[i])
                m = self.vertex_maps[k]
            else:
                k = ("stable", P.stable_names[i - P.nv])
                m = self.stable_maps[k[1]]
            out = out @ self._letter_map(k, a, m)
        self._cache[key] = out
        return out

    def to_json(self) -> dict:
        return {
            "stable": {k: v.to_json() for k, v in self.stable_maps.items()},
            "generators": {f"{v}.{g}": m.to_json() for (v, g), m in self.vertex_maps.items()},
        }


def build_beta(G, thetas, rhos=None, ends: Optional[dict] = None) -> BetaAssignment:
    """Assemble beta and check the edge relations exactly.

    Checks per positive edge e with u = alpha_e(s), v = alpha_ebar(s):
      relation  beta(g_e) beta(u) beta(g_e)^-1 == beta(g_ebar) beta(v) beta(g_ebar)^-1
      C4        theta(g_e) mu(u) == mu(alpha_|e|(s)) == theta(g_ebar) mu(v)
      C5        theta(g_e) tau_e(u) + theta(g_ebar) tau_ebar(v) == -mu(alpha_|e|(s))
    where |e| is the member of the pair whose g is trivial.
    """
    if isinstance(thetas, ThetaSolution):
        G = thetas.graph
        thetas = thetas.thetas
    sig = G.sig
    ident = OAutomorphism.identity(sig)
    thetas = {e.id: thetas.get(e.id, ident) for e in G.edges}
    for e in G.edges:
        if not G.stable_letter(e.id) and not thetas[e.id].is_identity():
            raise BetaRelationError(e.id, "g_e = 1 needs theta = identity", thetas[e.id], ident)
    full_rhos = {}
    for v in G.vertices:
        for n in v.alphabet.names:
            val = (rhos or {}).get((v.id, n), 0)
            if not isinstance(val, LexVector):
                val = LexVector(sig, (val,) + (0,) * (sig.rank - 1))
            full_rhos[(v.id, n)] = val
    beta = BetaAssignment(G, thetas, full_rhos)
    if ends is None:
        ends = assign_ends(G)
    for e in G.positive_edges():
        if e.alpha is None:
            continue
        r = G.reverse(e.id)
        ge, gr = beta.g_map(e.id), beta.g_map(r.id)
        bu, bv = beta.of_edge_element(e.id), beta.of_edge_element(r.id)
        lhs = ge @ bu @ ge.inverse()
        rhs = gr @ bv @ gr.inverse()
        if lhs != rhs:
            raise BetaRelationError(e.id, "relation", lhs, rhs)
        plain = r if G.stable_letter(e.id) else e
        mu_abs = beta.of_edge_element(plain.id).mu
        for side, g in ((e, ge), (r, gr)):
            lhs4 = g.theta(beta.of_edge_element(side.id).mu)
            if lhs4 != mu_abs:
                raise BetaRelationError(side.id, "C4", lhs4, mu_abs)
        lhs5 = ge.theta(edge_tau(G, ends, e.id)) + gr.theta(edge_tau(G, ends, r.id))
        if lhs5 != -mu_abs:
            raise BetaRelationError(e.id, "C5", lhs5, -mu_abs)
    return beta


def lambda_vector(sig0, m: int, lam: LexVector) -> LexVector:
    return LexVector(Z + sig0, (m,) + lam.coords)


def adjacent_metric(G: GraphOfGroups, beta: BetaAssignment, ends: dict, eid: str, x: Word, y: Word) -> LexVector:
    """d(g_e x, g_ebar y) for x, y vertices of the origin and terminus trees of e."""
    e = G.edge(eid)
    r = G.reverse(eid)
    vx, vy = G.vertex(e.origin), G.vertex(r.origin)
    for pt, v in ((x, vx), (y, vy)):
        if any(abs(a) > v.action.alphabet.rank for a in pt.letters):
            raise ValueError(f"point {pt!r} is not a vertex of the tree at {v.id}")
    dx = end_map(vx.action, ends[e.id], x)
    dy = end_map(vy.action, ends[r.id], y)
    delta = beta.theta_of_edge(e.id)(dx) + beta.theta_of_edge(r.id)(dy)
    return lambda_vector(G.sig, 1, -delta)
