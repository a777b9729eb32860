"""Hypothesis checks and end assignment for cyclic-edge graphs of groups."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from ..freegrp import (
    Word,
    cyclic_reduce,
    is_conjugate,
    is_proper_power,
    conjugate_to_inverse,
    word_product,
)
from ..treecalc import EndSpec, stabilizer_of_end
from .graph import GraphOfGroups

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"


@dataclass(frozen=True)
class Verdict:
    condition: str
    status: str
    edge: Optional[str] = None
    vertex: Optional[str] = None
    witness: Optional[str] = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"condition": self.condition, "status": self.status}
        for k in ("edge", "vertex", "witness"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        if self.detail:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, d) -> "Verdict":
        return cls(d["condition"], d["status"], d.get("edge"), d.get("vertex"), d.get("witness"), d.get("detail", ""))


@dataclass
class HypothesisReport:
    verdicts: list = field(default_factory=list)

    def add(self, *args, **kw):
        self.verdicts.append(Verdict(*args, **kw))

    def by_status(self, status: str) -> list:
        return [v for v in self.verdicts if v.status == status]

    @property
    def failed(self) -> list:
        return self.by_status(FAIL)

    @property
    def unknown(self) -> list:
        return self.by_status(UNKNOWN)

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {"verdicts": [v.to_json() for v in self.verdicts]}


class EndAssignmentError(ValueError):
    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message)
        self.witness = witness


def _fmt(G: GraphOfGroups, vid: str, w: Word) -> str:
    return G.vertex(vid).alphabet.format(w)


def end_translator(G: GraphOfGroups, eid: str) -> Optional[Word]:
    """Vertex word translating toward the end assigned to the edge."""
    e = G.edge(eid)
    if e.alpha is None:
        return None
    return e.alpha if e.oriented else e.alpha.inverse()


def _orbit_collisions(G: GraphOfGroups):
    """Same-origin edge pairs whose ends lie in one vertex-group orbit."""
    out = []
    for v in G.vertices:
        here = [e for e in G.edges if e.origin == v.id and e.alpha is not None]
        for e, f in combinations(here, 2):
            c = is_conjugate(end_translator(G, f.id), end_translator(G, e.id))
            if c is not None:
                out.append((e.id, f.id, _fmt(G, v.id, c)))
    return out


def assign_ends(G: GraphOfGroups) -> dict:
    """Ends in the ambient trees: attracting for alpha_e, repelling for alpha_ebar (e positive)."""
    ends = {}
    patterns = {}
    for e in G.edges:
        v = G.vertex(e.origin)
        if e.alpha is None:
            if v.action.alphabet.rank < 2:
                raise EndAssignmentError(
                    f"edge {e.id}: a trivial edge group needs an end with trivial stabilizer, "
                    "which a rank-one tree does not have"
                )
            patterns[v.id] = patterns.get(v.id, 0) + 1
            ends[e.id] = EndSpec(pattern=patterns[v.id])
        else:
            ends[e.id] = EndSpec(v.embed(e.alpha), Word(), 1 if e.oriented else -1)
    clashes = _orbit_collisions(G)
    if clashes:
        e, f, c = clashes[0]
        raise EndAssignmentError(f"ends of {e} and {f} lie in one orbit", witness=c)
    return ends


def _collins_closure(G: GraphOfGroups, vid: str, w: Word):
    """Vertex-group conjugacy classes met by w's conjugacy class in the fundamental group.

    Two elliptic elements are conjugate in the fundamental group exactly when a
    chain of vertex-group conjugations and passages through edge groups joins
    them.  Classes are keyed by (vertex, canonical cyclic core); each entry
    keeps the representative reached and the path (edge id, exponent, vertex
    conjugator) that led to it.
    """
    def key(v, x):
        return v, cyclic_reduce(x)[1].canonical()

    seen = {key(vid, w): (vid, w, ())}
    queue = deque([(vid, w, ())])
    while queue:
        v, x, path = queue.popleft()
        for e in G.edges:
            if e.origin != v or e.alpha is None:
                continue
            k = _conj_power(x, e.alpha)
            if k is None:
                continue
            c = is_conjugate(x, e.alpha ** k)
            other = G.reverse(e.id)
            y = other.alpha ** k
            kk = key(other.origin, y)
            if kk not in seen:
                step = path + ((e.id, k, c),)
                seen[kk] = (other.origin, y, step)
                queue.append((other.origin, y, step))
    return seen


def _conj_power(x: Word, a: Word) -> Optional[int]:
    """k != 0 with x conjugate to a^k, or None."""
    cx = cyclic_reduce(x)[1]
    ca = cyclic_reduce(a)[1]
    if not len(cx) or len(cx) % len(ca):
        return None
    k = len(cx) // len(ca)
    for s in (k, -k):
        if is_conjugate(x, a ** s) is not None:
            return s
    return None


def validate_hypotheses(G: GraphOfGroups, bound: int = 4) -> HypothesisReport:
    rep = HypothesisReport()
    rep.add("CIE", PASS, detail="vertex actions are isometric Cayley-tree actions")
    for e in G.edges:
        if e.alpha is None:
            rep.add("not-proper-power", PASS, edge=e.id, detail="trivial edge group")
            continue
        pp = is_proper_power(e.alpha)
        if pp:
            rep.add("not-proper-power", FAIL, edge=e.id, witness=_fmt(G, e.origin, e.alpha),
                    detail=f"root {_fmt(G, e.origin, pp[0])} with exponent {pp[1]}")
        else:
            rep.add("not-proper-power", PASS, edge=e.id)
        v = G.vertex(e.origin)
        img = v.embed(e.alpha)
        stab = stabilizer_of_end(v.action, EndSpec(img))
        if stab == img:
            rep.add("end-stabilizer-match", PASS, edge=e.id)
        elif pp:
            rep.add("end-stabilizer-match", FAIL, edge=e.id, witness=_fmt(G, e.origin, e.alpha),
                    detail="the end stabilizer is strictly larger than the edge image")
        else:
            rep.add("end-stabilizer-match", UNKNOWN, edge=e.id,
                    detail="image is a proper power in the tree's group; membership of its root not decided")
        if conjugate_to_inverse(e.alpha):
            rep.add("no-element-conjugate-to-own-inverse", FAIL, edge=e.id, witness=_fmt(G, e.origin, e.alpha))
        else:
            rep.add("no-element-conjugate-to-own-inverse", PASS, edge=e.id)

    for e in G.positive_edges():
        r = G.reverse(e.id)
        if e.alpha is None:
            continue
        if e.origin == r.origin:
            c = is_conjugate(r.alpha, e.alpha.inverse())
            if c is not None:
                rep.add("not-conjugate-to-partner-inverse", FAIL, edge=e.id, witness=_fmt(G, e.origin, c),
                        detail=f"{_fmt(G, e.origin, r.alpha)} is conjugate to the inverse of {_fmt(G, e.origin, e.alpha)}")
            else:
                rep.add("not-conjugate-to-partner-inverse", PASS, edge=e.id)
        else:
            rep.add("not-conjugate-to-partner-inverse", PASS, edge=e.id, detail="images lie in different vertex groups")
        _pi1_inverse_check(G, e.id, bound, rep)

    for v in G.vertices:
        here = [e for e in G.edges if e.origin == v.id and e.alpha is not None]
        bad = None
        for a, b, c in combinations(here, 3):
            if all(_same_cyclic_subgroup_class(p.alpha, q.alpha) for p, q in ((a, b), (b, c))):
                bad = (a.id, b.id, c.id)
                break
        if bad:
            rep.add("C2-prime", FAIL, vertex=v.id, witness=",".join(bad),
                    detail="three edge images generate conjugate subgroups")
        else:
            rep.add("C2-prime", PASS, vertex=v.id)

    clashes = _orbit_collisions(G)
    if clashes:
        for e, f, c in clashes:
            rep.add("distinct-orbit-ends", FAIL, edge=f"{e},{f}", witness=c)
    else:
        rep.add("distinct-orbit-ends", PASS)
    return rep


def _same_cyclic_subgroup_class(a: Word, b: Word) -> bool:
    return is_conjugate(a, b) is not None or is_conjugate(a, b.inverse()) is not None


def _pi1_inverse_check(G: GraphOfGroups, eid: str, bound: int, rep: HypothesisReport):
    e = G.edge(eid)
    if any(x.alpha is not None and is_proper_power(x.alpha) for x in G.edges):
        found = _bounded_search(G, e, bound)
        if found is not None:
            rep.add("pi1-not-conjugate-to-inverse", FAIL, edge=eid, witness=found)
        else:
            rep.add("pi1-not-conjugate-to-inverse", UNKNOWN, edge=eid,
                    detail=f"no conjugator up to length {bound}; proper-power edge images block the chain argument")
        return
    closure = _collins_closure(G, e.origin, e.alpha)
    target = (e.origin, cyclic_reduce(e.alpha.inverse())[1].canonical())
    if target not in closure:
        rep.add("pi1-not-conjugate-to-inverse", PASS, edge=eid,
                detail=f"edge-group chains reach {len(closure)} vertex classes, none containing the inverse")
        return
    _, x, path = closure[target]
    chain = " -> ".join(f"{p[0]}^{p[1]}" for p in path) or "vertex group"
    witness = _chain_conjugator(G, e.alpha, x, path) if G.single_vertex else None
    rep.add("pi1-not-conjugate-to-inverse", FAIL, edge=eid, witness=witness or chain,
            detail=f"conjugate to its inverse through edge groups ({chain})")


def _chain_conjugator(G: GraphOfGroups, a: Word, x: Word, path) -> Optional[str]:
    """Assemble g with g a g^-1 = a^-1 from a chain and check it by Britton reduction."""
    from .britton import HNNPresentation, is_trivial

    P = HNNPresentation.from_graph(G)
    index = {eid: j for j, eid in enumerate(P.graph_edges)}
    g = Word()
    for eid, _, c in path:
        edge = G.edge(eid)
        if edge.oriented:
            # t u^k t^-1 = v^k
            t = P.stable(index[eid], 1)
        else:
            # t^-1 v^k t = u^k
            t = P.stable(index[edge.rev], -1)
        g = word_product(t, c, g)
    last = is_conjugate(x, a.inverse())
    if last is None:
        return None
    g = word_product(last, g)
    if not is_trivial(P, word_product(g, a, g.inverse(), a)):
        return None
    return P.format(g)


def _bounded_search(G: GraphOfGroups, e, bound: int) -> Optional[str]:
    """Search conjugators g of length <= bound with g a g^-1 = a^-1 (single vertex only)."""
    if not G.single_vertex:
        return None
    from .britton import HNNPresentation, is_trivial
    from ..freegrp import all_reduced_words

    P = HNNPresentation.from_graph(G)
    a = e.alpha
    for g in all_reduced_words(P.alphabet.rank, bound):
        if is_trivial(P, word_product(g, a, g.inverse(), a)):
            return P.format(g)
    return None
