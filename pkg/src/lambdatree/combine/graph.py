"""Graphs of groups with free vertex groups and cyclic edge groups."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

from ..freegrp import Alphabet, Word, reduce, word_product
from ..ogroup import LexVector, Signature
from ..treecalc import CayleyTreeAction


class GraphError(ValueError):
    pass


class Vertex:
    """A free vertex group acting on a weighted Cayley tree.

    The vertex group is free on `alphabet`.  It acts on the Cayley tree of
    `action` (the ambient free group) through `images`, one ambient word per
    generator; by default the two alphabets coincide.
    """

    def __init__(self, id: str, alphabet: Alphabet, action: CayleyTreeAction, images=None):
        self.id = id
        self.alphabet = alphabet
        self.action = action
        if images is None:
            if action.alphabet != alphabet:
                raise GraphError(f"vertex {id}: images required when the tree alphabet differs")
            self.images = None
        else:
            images = tuple(reduce(w) for w in images)
            if len(images) != alphabet.rank:
                raise GraphError(f"vertex {id}: one image per generator")
            for w in images:
                if not w:
                    raise GraphError(f"vertex {id}: generator images must be nontrivial")
                if any(abs(a) > action.alphabet.rank for a in w.letters):
                    raise GraphError(f"vertex {id}: image uses letters outside the tree alphabet")
            self.images = images

    def embed(self, w: Word) -> Word:
        if self.images is None:
            return reduce(w)
        parts = []
        for a in w.letters:
            img = self.images[abs(a) - 1]
            parts.append(img if a > 0 else img.inverse())
        return word_product(*parts)

    def with_action(self, action: CayleyTreeAction) -> "Vertex":
        return Vertex(self.id, self.alphabet, action, self.images)

    @property
    def sig(self) -> Signature:
        return self.action.sig

    def to_json(self) -> dict:
        out = {"id": self.id, "generators": list(self.alphabet.names)}
        if self.images is None:
            out["weights"] = {n: w.to_json() for n, w in zip(self.alphabet.names, self.action.weights)}
        else:
            amb = self.action.alphabet
            out["ambient"] = {
                "generators": list(amb.names),
                "weights": {n: w.to_json() for n, w in zip(amb.names, self.action.weights)},
                "images": {n: amb.format(w) for n, w in zip(self.alphabet.names, self.images)},
            }
        return out


@dataclass(frozen=True)
class EdgeData:
    id: str
    rev: str
    origin: str
    alpha: Optional[Word]
    in_tree: bool = False
    oriented: bool = False
    stable: Optional[str] = None


class GraphOfGroups:
    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self._v = {}
        for v in self.vertices:
            if v.id in self._v:
                raise GraphError(f"duplicate vertex id {v.id}")
            self._v[v.id] = v
        self._e = {}
        for e in self.edges:
            if e.id in self._e:
                raise GraphError(f"duplicate edge id {e.id}")
            self._e[e.id] = e
        self._validate()

    def _validate(self):
        if not self.vertices:
            raise GraphError("graph needs a vertex")
        sig = self.vertices[0].sig
        for v in self.vertices:
            if v.sig != sig:
                raise GraphError("all vertex trees must share the weight signature")
        for e in self.edges:
            if e.rev not in self._e:
                raise GraphError(f"edge {e.id}: reverse {e.rev} missing")
            r = self._e[e.rev]
            if r.id == e.id:
                raise GraphError(f"edge {e.id} is its own reverse")
            if r.rev != e.id:
                raise GraphError(f"edge {e.id}: reverse of reverse is not itself")
            if e.origin not in self._v:
                raise GraphError(f"edge {e.id}: unknown origin {e.origin}")
            if e.in_tree != r.in_tree:
                raise GraphError(f"edge {e.id}: tree membership differs from its reverse")
            if e.oriented == r.oriented:
                raise GraphError(f"edge {e.id}: exactly one of an edge pair is positively oriented")
            if (e.alpha is None) != (r.alpha is None):
                raise GraphError(f"edge {e.id}: edge group trivial on one side only")
            if e.alpha is not None:
                if not reduce(e.alpha):
                    raise GraphError(f"edge {e.id}: alpha is trivial")
                rank = self._v[e.origin].alphabet.rank
                if any(abs(a) > rank for a in e.alpha.letters):
                    raise GraphError(f"edge {e.id}: alpha uses letters outside its vertex group")
            if e.in_tree and e.stable:
                raise GraphError(f"edge {e.id}: tree edges carry no stable letter")
            if not e.oriented and e.stable:
                raise GraphError(f"edge {e.id}: the stable letter sits on the positive edge")
        # maximal subtree
        parent = {v.id: v.id for v in self.vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.positive_edges():
            if e.in_tree:
                a, b = find(e.origin), find(self.terminus(e.id))
                if a == b:
                    raise GraphError(f"tree edges contain a cycle at {e.id}")
                parent[a] = b
        roots = {find(v.id) for v in self.vertices}
        if len(roots) != 1:
            raise GraphError("tree edges do not span a connected graph")

    def vertex(self, vid: str) -> Vertex:
        return self._v[vid]

    def edge(self, eid: str) -> EdgeData:
        return self._e[eid]

    def reverse(self, eid: str) -> EdgeData:
        return self._e[self._e[eid].rev]

    def terminus(self, eid: str) -> str:
        return self.reverse(eid).origin

    def positive_edges(self):
        return [e for e in self.edges if e.oriented]

    def stable_letter(self, eid: str) -> Optional[str]:
        """Name of g_e, or None when g_e = 1."""
        e = self._e[eid]
        if e.in_tree or not e.oriented:
            return None
        return e.stable

    @property
    def sig(self) -> Signature:
        return self.vertices[0].sig

    @property
    def single_vertex(self) -> bool:
        return len(self.vertices) == 1

    def with_vertices(self, vertices) -> "GraphOfGroups":
        return GraphOfGroups(vertices, self.edges)

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            alph = self._v[e.origin].alphabet
            d = {
                "id": e.id,
                "rev": e.rev,
                "origin": e.origin,
                "alpha": None if e.alpha is None else alph.format(e.alpha),
                "in_tree": e.in_tree,
                "oriented": e.oriented,
            }
            if e.stable:
                d["stable"] = e.stable
            edges.append(d)
        return {"vertices": [v.to_json() for v in self.vertices], "edges": edges}

    @classmethod
    def from_json(cls, data) -> "GraphOfGroups":
        default_sig = Signature.parse(data.get("sig", ["Z"]))
        vertices = []
        for vd in data["vertices"]:
            alph = Alphabet(tuple(vd["generators"]))
            sig = Signature.parse(vd.get("sig", default_sig))
            if "ambient" in vd:
                amb = vd["ambient"]
                amb_alph = Alphabet(tuple(amb["generators"]))
                weights = _parse_weights(amb_alph, amb["weights"], Signature.parse(amb.get("sig", sig)))
                images = tuple(amb_alph.parse(amb["images"][n]) for n in alph.names)
                vertices.append(Vertex(vd["id"], alph, CayleyTreeAction(amb_alph, weights), images))
            else:
                weights = _parse_weights(alph, vd["weights"], sig)
                vertices.append(Vertex(vd["id"], alph, CayleyTreeAction(alph, weights)))
        vmap = {v.id: v for v in vertices}
        edges = []
        for ed in data["edges"]:
            if ed["origin"] not in vmap:
                raise GraphError(f"edge {ed['id']}: unknown origin {ed['origin']}")
            alph = vmap[ed["origin"]].alphabet
            alpha = ed.get("alpha")
            edges.append(
                EdgeData(
                    id=str(ed["id"]),
                    rev=str(ed["rev"]),
                    origin=str(ed["origin"]),
                    alpha=None if alpha in (None, "", "1") else alph.parse(alpha),
                    in_tree=bool(ed.get("in_tree", False)),
                    oriented=bool(ed.get("oriented", False)),
                    stable=ed.get("stable"),
                )
            )
        edges = _default_stable_names(edges)
        return cls(vertices, edges)

    @classmethod
    def loads(cls, text: str) -> "GraphOfGroups":
        return cls.from_json(json.loads(text))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _parse_weights(alph: Alphabet, raw, sig: Signature):
    if isinstance(raw, list):
        raw = dict(zip(alph.names, raw))
    out = []
    for n in alph.names:
        if n not in raw:
            raise GraphError(f"missing weight for generator {n}")
        out.append(parse_weight(raw[n], sig))
    return tuple(out)


def parse_weight(value, sig: Signature) -> LexVector:
    if isinstance(value, dict):
        return LexVector.from_json(value)
    if isinstance(value, (list, tuple)):
        return LexVector(sig, tuple(value))
    return LexVector(sig, (value,) + (0,) * (sig.rank - 1))


def _default_stable_names(edges):
    loose = [e for e in edges if e.oriented and not e.in_tree and not e.stable]
    if not loose:
        return edges
    taken = {e.stable for e in edges if e.stable}
    names = {}
    if len(loose) == 1 and "t" not in taken:
        names[loose[0].id] = "t"
    else:
        for i, e in enumerate(loose, 1):
            names[e.id] = f"t{i}"
    return [replace(e, stable=names[e.id]) if e.id in names else e for e in edges]


def hnn_graph(vertex: Vertex, pairs, prefix: str = "e") -> GraphOfGroups:
    """Single-vertex graph; each pair (u, v, name) gives the relation t u t^-1 = v.

    u and v are vertex words (or strings in the vertex alphabet); None marks
    a trivial edge group.
    """
    edges = []
    for i, pair in enumerate(pairs, 1):
        u, v = pair[0], pair[1]
        name = pair[2] if len(pair) > 2 else ("t" if len(pairs) == 1 else f"t{i}")
        if isinstance(u, str):
            u = vertex.alphabet.parse(u)
        if isinstance(v, str):
            v = vertex.alphabet.parse(v)
        eid, rid = f"{prefix}{i}", f"{prefix}{i}bar"
        edges.append(EdgeData(eid, rid, vertex.id, u, False, True, name))
        edges.append(EdgeData(rid, eid, vertex.id, v, False, False, None))
    return GraphOfGroups([vertex], edges)
