"""Britton normal forms for iterated HNN extensions of a free group.

The group is <F, t_1, ..., t_k | t_j u_j t_j^-1 = v_j> with cyclic
associated subgroups <u_j> and <v_j> (either may be trivial).  Words are
over the combined alphabet: vertex generators first, then stable letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..freegrp import Alphabet, Word, power_of, reduce
from .graph import GraphError, GraphOfGroups


class HNNPresentation:
    def __init__(self, vertex_alphabet: Alphabet, relations, stable_names=None):
        """relations: list of (u, v) vertex words, None for a trivial edge group."""
        self.vertex_alphabet = vertex_alphabet
        self.relations = tuple((None if u is None else reduce(u), None if v is None else reduce(v)) for u, v in relations)
        k = len(self.relations)
        if stable_names is None:
            stable_names = ["t"] if k == 1 else [f"t{i}" for i in range(1, k + 1)]
        stable_names = tuple(stable_names)
        clash = set(stable_names) & set(vertex_alphabet.names)
        if clash:
            raise GraphError(f"stable letters clash with vertex generators: {sorted(clash)}")
        self.stable_names = stable_names
        self.alphabet = Alphabet(vertex_alphabet.names + stable_names)
        self.nv = vertex_alphabet.rank
        self.edge_ids = tuple(range(k))
        self._coset_cache = {}

    @classmethod
    def from_graph(cls, G: GraphOfGroups) -> "HNNPresentation":
        if not G.single_vertex:
            raise GraphError("normal forms are implemented for single-vertex graphs only")
        rels, names, eids = [], [], []
        for e in G.positive_edges():
            rels.append((e.alpha, G.reverse(e.id).alpha))
            names.append(e.stable)
            eids.append(e.id)
        P = cls(G.vertices[0].alphabet, rels, names)
        P.graph_edges = tuple(eids)
        return P

    def stable(self, j: int, sign: int = 1) -> Word:
        return Word(((self.nv + j + 1) * sign,))

    def is_stable_letter(self, a: int) -> bool:
        return abs(a) > self.nv

    def parse(self, text: str) -> Word:
        return self.alphabet.parse(text)

    def format(self, w: Word) -> str:
        return self.alphabet.format(w)

    def subgroup(self, j: int, sign: int) -> Optional[Word]:
        """Generator of the subgroup that t_j^sign may absorb from its left."""
        # t u^k t^-1 = v^k, so t^+1 followed by t^-1 pinches around <u>;
        # t^-1 followed by t^+1 pinches around <v>.
        u, v = self.relations[j]
        return u if sign > 0 else v

    def membership(self, f: Word, gen: Optional[Word]) -> Optional[int]:
        if gen is None:
            return 0 if not f else None
        return power_of(f, gen)

    def coset_rep(self, f: Word, j: int, sign: int):
        """Canonical representative of f<z> where z lets f pass t_j^sign.

        Returns (rep, k) with f = rep z^k; z = v_j for sign +1 (v t = t u)
        and z = u_j for sign -1 (u t^-1 = t^-1 v).
        """
        key = (f.letters, j, sign)
        hit = self._coset_cache.get(key)
        if hit is not None:
            return hit
        u, v = self.relations[j]
        z = v if sign > 0 else u
        if z is None:
            out = (f, 0)
        else:
            reach = 2 * len(f) + 2 * len(z) + 1
            best = None
            zi = z.inverse()
            cur = f
            # f z^k for k >= 0, then k < 0
            for k in range(reach + 1):
                cand = (len(cur), cur.letters, k, cur)
                if best is None or cand[:2] < best[:2]:
                    best = cand
                cur = cur * z
            cur = f * zi
            for k in range(1, reach + 1):
                cand = (len(cur), cur.letters, -k, cur)
                if cand[:2] < best[:2]:
                    best = cand
                cur = cur * zi
            # f = rep z^-k  where rep = f z^k
            out = (best[3], -best[2])
        if len(self._coset_cache) > 200000:
            self._coset_cache.clear()
        self._coset_cache[key] = out
        return out


@dataclass(frozen=True)
class BrittonWord:
    """v_0 t^e1 v_1 ... t^ek v_k, pinch-free."""

    syllables: tuple  # vertex words, length k + 1
    stables: tuple  # (j, sign) pairs, length k

    @property
    def stable_count(self) -> int:
        return len(self.stables)

    def is_trivial(self) -> bool:
        return not self.stables and not self.syllables[0]

    def is_vertex_element(self) -> bool:
        return not self.stables

    def to_word(self, P: HNNPresentation) -> Word:
        parts = [self.syllables[0]]
        for (j, s), f in zip(self.stables, self.syllables[1:]):
            parts.append(P.stable(j, s))
            parts.append(f)
        return Word(tuple(a for p in parts for a in p.letters))

    def __len__(self):
        return sum(len(f) for f in self.syllables) + len(self.stables)

    def format(self, P: HNNPresentation) -> str:
        return P.format(self.to_word(P))


def _append(stack: list, a: int):
    if stack and stack[-1] == -a:
        stack.pop()
    else:
        stack.append(a)


def britton_reduce(P: HNNPresentation, w: Word) -> BrittonWord:
    sylls: list = [[]]
    stables: list = []
    for a in w.letters:
        if not P.is_stable_letter(a):
            _append(sylls[-1], a)
            continue
        j = abs(a) - P.nv - 1
        sign = 1 if a > 0 else -1
        if stables and stables[-1] == (j, -sign):
            prev_sign = -sign
            gen = P.subgroup(j, prev_sign)
            f = Word(sylls[-1])
            k = P.membership(f, gen)
            if k is not None:
                u, v = P.relations[j]
                # t u^k t^-1 -> v^k ; t^-1 v^k t -> u^k
                other = v if prev_sign > 0 else u
                rep = other ** k if other is not None else Word()
                sylls.pop()
                stables.pop()
                for b in rep.letters:
                    _append(sylls[-1], b)
                continue
        stables.append((j, sign))
        sylls.append([])
    return BrittonWord(tuple(Word(s) for s in sylls), tuple(stables))


def normal_form(P: HNNPresentation, w: Word) -> BrittonWord:
    """Unique normal form: every syllable before t_j^e is a canonical coset representative."""
    bw = britton_reduce(P, w)
    return canonicalize(P, bw)


def canonicalize(P: HNNPresentation, bw: BrittonWord) -> BrittonWord:
    sylls = list(bw.syllables)
    for i, (j, sign) in enumerate(bw.stables):
        rep, k = P.coset_rep(sylls[i], j, sign)
        sylls[i] = rep
        if k:
            u, v = P.relations[j]
            carried = u if sign > 0 else v
            sylls[i + 1] = (carried ** k) * sylls[i + 1]
    return BrittonWord(tuple(sylls), bw.stables)


def is_trivial(P: HNNPresentation, w: Word) -> bool:
    return britton_reduce(P, w).is_trivial()


def cyclic_britton(P: HNNPresentation, w: Word) -> BrittonWord:
    """A cyclically pinch-free conjugate of w."""
    bw = britton_reduce(P, w)
    while bw.stable_count >= 2:
        sylls, st = bw.syllables, bw.stables
        # conjugate to t_k (f_k f_0) t_1 f_1 ... t_{k-1} f_{k-1}
        letters = list(P.stable(*st[-1]).letters) + list((sylls[-1] * sylls[0]).letters)
        for idx in range(len(st) - 1):
            letters += list(P.stable(*st[idx]).letters)
            letters += list(sylls[idx + 1].letters)
        nb = britton_reduce(P, Word(letters))
        if nb.stable_count == bw.stable_count:
            return bw
        bw = nb
    if bw.stable_count == 1:
        return BrittonWord((Word(), bw.syllables[1] * bw.syllables[0]), bw.stables)
    return bw


def gamma_word_to_vertex(P: HNNPresentation, w: Word) -> Optional[Word]:
    bw = britton_reduce(P, w)
    return bw.syllables[0] if bw.is_vertex_element() else None
