"""Free isometric actions of free groups on weighted Cayley trees.

Vertices of the tree are reduced words; the group acts by left
multiplication and the edge from g to g*a has the weight of the letter a.
All lengths are exact LexVectors in the weight group L0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .freegrp import (
    Alphabet,
    Word,
    cyclic_reduce,
    power_of,
    reduce,
    root_of,
    word_product,
)
from .ogroup import (
    CoordinateEmbedding,
    LexVector,
    OAutomorphism,
    Q,
    Signature,
    is_tame,
)


class CayleyTreeAction:
    def __init__(self, alphabet: Alphabet, weights):
        if isinstance(weights, dict):
            weights = tuple(weights[n] for n in alphabet.names)
        weights = tuple(weights)
        if len(weights) != alphabet.rank:
            raise ValueError("one weight per generator is required")
        sig = weights[0].sig
        for w in weights:
            if w.sig != sig:
                raise ValueError("weights must share a signature")
            if not w.is_positive():
                raise ValueError(f"weight {w} is not positive")
        self.alphabet = alphabet
        self.weights = weights
        self.sig: Signature = sig
        self._zero = LexVector.zero(sig)
        self._by_counts = {}

    @classmethod
    def uniform(cls, alphabet: Alphabet, value=1, sig: Signature = None) -> "CayleyTreeAction":
        from .ogroup import Z

        sig = sig or Z
        return cls(alphabet, tuple(LexVector(sig, (value,) + (0,) * (sig.rank - 1)) for _ in alphabet.names))

    def zero(self) -> LexVector:
        return self._zero

    def weight(self, w: Word) -> LexVector:
        """Sum of letter weights (the distance from base to w when w is reduced)."""
        counts = [0] * self.alphabet.rank
        for a in w.letters:
            counts[abs(a) - 1] += 1
        key = tuple(counts)
        hit = self._by_counts.get(key)
        if hit is None:
            total = self._zero.coords
            for c, wt in zip(counts, self.weights):
                if c:
                    total = tuple(t + c * x for t, x in zip(total, wt.coords))
            hit = LexVector._raw(self.sig, total)
            if len(self._by_counts) > 4096:
                self._by_counts.clear()
            self._by_counts[key] = hit
        return hit

    def distance(self, g: Word, h: Word) -> LexVector:
        """d(g, h) between vertices given as reduced words."""
        gl, hl = g.letters, h.letters
        k = 0
        n = min(len(gl), len(hl))
        while k < n and gl[k] == hl[k]:
            k += 1
        return self.weight(Word(gl[k:])) + self.weight(Word(hl[k:]))

    def __repr__(self):
        pairs = ", ".join(f"{n}={w}" for n, w in zip(self.alphabet.names, self.weights))
        return f"CayleyTreeAction({pairs})"


def translation_length(A: CayleyTreeAction, w: Word) -> LexVector:
    _, core = cyclic_reduce(w)
    return A.weight(core.as_word())


def displacement(A: CayleyTreeAction, g: Word, v: Word) -> LexVector:
    """d(v, g v)."""
    return A.distance(v, word_product(g, v))


def axis_vertices(w: Word, radius: int) -> set:
    """Vertices of the axis of w whose word length is at most radius."""
    conj, core = cyclic_reduce(w)
    C = core.letters
    if not C:
        raise ValueError("trivial element has no axis")
    out = set()
    reach = (radius + 2 * len(conj)) // len(C) + 2
    for k in range(-reach, reach + 1):
        base = word_product(conj, Word(C) ** k)
        for p in range(len(C)):
            v = word_product(base, Word(C[:p]))
            if len(v) <= radius:
                out.add(v)
    return out


@dataclass(frozen=True)
class AxisGeometry:
    kind: str  # "disjoint", "point" or "segment"
    bridge: Optional[LexVector] = None
    xi: Optional[LexVector] = None
    witnesses: tuple = ()

    def to_json(self, alphabet: Optional[Alphabet] = None) -> dict:
        out = {"meet": self.kind}
        if self.bridge is not None:
            out["bridge"] = self.bridge.to_json()
        if self.xi is not None:
            out["xi"] = self.xi.to_json()
        if alphabet is not None:
            out["witnesses"] = [alphabet.format(v) for v in self.witnesses]
        return out


def axis_geometry(A: CayleyTreeAction, x: Word, y: Word) -> AxisGeometry:
    """How the axes of x and y meet, by enumerating axis vertices near the base."""
    x, y = reduce(x), reduce(y)
    if not x or not y:
        raise ValueError("axis_geometry needs two nontrivial elements")
    cx = len(cyclic_reduce(x)[1])
    cy = len(cyclic_reduce(y)[1])
    radius = len(x) + len(y) + cx + cy + 1
    vx = axis_vertices(x, radius)
    vy = axis_vertices(y, radius)
    common = vx & vy
    if not common:
        best = None
        for p in vx:
            for q in vy:
                d = A.distance(p, q)
                if best is None or d < best[0]:
                    best = (d, p, q)
        return AxisGeometry("disjoint", bridge=best[0], witnesses=(best[1], best[2]))
    if any(len(v) >= radius for v in common):
        raise ValueError("axes share an unbounded piece; x and y commute")
    if len(common) == 1:
        (p,) = common
        return AxisGeometry("point", witnesses=(p,))
    pts = sorted(common, key=lambda v: (len(v), v.letters))
    best = None
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            d = A.distance(p, q)
            if best is None or d > best[0]:
                best = (d, p, q)
    return AxisGeometry("segment", xi=best[0], witnesses=(best[1], best[2]))


def commutator_length(A: CayleyTreeAction, x: Word, y: Word, m: int, n: int) -> LexVector:
    """Translation length of [x^m, y^n] from the axis configuration of x and y."""
    if m == 0 or n == 0:
        raise ValueError("exponents must be nonzero")
    x, y = reduce(x), reduce(y)
    if word_product(x, y) == word_product(y, x):
        raise ValueError("x and y commute")
    lx = translation_length(A, x) * abs(m)
    ly = translation_length(A, y) * abs(n)
    geo = axis_geometry(A, x, y)
    if geo.kind == "segment":
        if not geo.xi < lx + ly:
            raise ArithmeticError("overlap exceeds the combined translation lengths")
        return lx * 2 + ly * 2 - geo.xi * 2
    d = geo.bridge if geo.kind == "disjoint" else A.zero()
    return lx * 2 + ly * 2 + d * 4


# -- brute-force oracle on the subdivided tree --------------------------------------
#
# A point is (g, a, t): distance t along the edge from vertex g to g*a, where g*a
# is one letter longer than g; t == 0 means the vertex g itself (then a is 0).


def _int_weights(A: CayleyTreeAction) -> list:
    if A.sig.kinds != ("Z",):
        raise ValueError("the brute-force oracle needs integer weights (signature Z)")
    return [w.coords[0] for w in A.weights]


def _vertex_dist(wts, g: tuple, h: tuple) -> int:
    k = 0
    n = min(len(g), len(h))
    while k < n and g[k] == h[k]:
        k += 1
    return sum(wts[abs(a) - 1] for a in g[k:]) + sum(wts[abs(a) - 1] for a in h[k:])


def _point_dist(wts, p, q) -> int:
    g, a, t = p
    h, b, s = q
    if t and s and g == h and a == b:
        return abs(t - s)
    ends_p = [(g, t)] if not t else [(g, t), (g + (a,), wts[abs(a) - 1] - t)]
    ends_q = [(h, s)] if not s else [(h, s), (h + (b,), wts[abs(b) - 1] - s)]
    return min(dp + _vertex_dist(wts, u, v) + dq for u, dp in ends_p for v, dq in ends_q)


def _act(wts, w: tuple, p):
    g, a, t = p
    h = word_product(Word(w), Word(g)).letters
    if not t:
        return (h, 0, 0)
    if h and h[-1] == -a:
        return (h[:-1], -a, wts[abs(a) - 1] - t)
    return (h, a, t)


def _segment_points(wts, target: tuple):
    """Every subdivision point on the geodesic from the base to a vertex."""
    pts = [((), 0, 0)]
    for i, a in enumerate(target):
        g = target[:i]
        for t in range(1, wts[abs(a) - 1]):
            pts.append((g, a, t))
        pts.append((target[: i + 1], 0, 0))
    return pts


def _ball_points(wts, rank: int, radius: int):
    """Breadth-first walk over the unit-subdivided tree."""
    start = ((), 0, 0)
    seen = {start: 0}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        dist = seen[p]
        if dist == radius:
            continue
        g, a, t = p
        nbrs = []
        if t:
            wt = wts[abs(a) - 1]
            nbrs.append((g, a, t - 1) if t > 1 else (g, 0, 0))
            nbrs.append((g, a, t + 1) if t + 1 < wt else (g + (a,), 0, 0))
        else:
            for b in [i for j in range(1, rank + 1) for i in (j, -j)]:
                if g and g[-1] == -b:
                    wt = wts[abs(b) - 1]
                    parent = g[:-1]
                    nbrs.append((parent, -b, wt - 1) if wt > 1 else (parent, 0, 0))
                else:
                    wt = wts[abs(b) - 1]
                    nbrs.append((g, b, 1) if wt > 1 else (g + (b,), 0, 0))
        for q in nbrs:
            if q not in seen:
                seen[q] = dist + 1
                queue.append(q)
    return seen


@dataclass(frozen=True)
class BruteForceResult:
    length: LexVector
    stable: bool
    point: tuple = field(default=())
    examined: int = 0


def brute_force_length(
    A: CayleyTreeAction, w: Word, radius: Optional[int] = None, mode: str = "hull"
) -> BruteForceResult:
    """min d(p, w p) over points of the subdivided tree.

    mode "ball" scans every point within radius of the base (exponential, for
    small cases).  mode "hull" scans the points within radius on the
    geodesics from the base to w.base and w^-1.base; the projection of the
    base onto the axis lies on the first of these, so the minimum is exact
    once radius covers it.
    """
    wts = _int_weights(A)
    w = reduce(w)
    full = sum(wts[abs(a) - 1] for a in w.letters)
    if radius is None:
        radius = full + 1
    if mode == "ball":
        dists = _ball_points(wts, A.alphabet.rank, radius)
    elif mode == "hull":
        dists = {}
        for target in (w.letters, w.inverse().letters):
            for p in _segment_points(wts, target):
                d = _point_dist(wts, ((), 0, 0), p)
                if d <= radius:
                    dists[p] = d
    else:
        raise ValueError(f"unknown mode {mode!r}")
    best = None
    for p, d0 in dists.items():
        d = _point_dist(wts, p, _act(wts, w.letters, p))
        if best is None or d < best[0] or (d == best[0] and d0 < best[2]):
            best = (d, p, d0)
    if not w:
        best = (0, ((), 0, 0), 0)
    length = LexVector(A.sig, (best[0],))
    return BruteForceResult(length, stable=best[2] < radius, point=best[1], examined=len(dists))


# -- ends and Busemann functions -----------------------------------------------------


@dataclass(frozen=True)
class EndSpec:
    """An end of the Cayley tree.

    Periodic ends are limits of conjugator * attractor^(+-n); aperiodic ends
    (trivial stabilizer) are given by a ray pattern: the infinite word
    a^e b a^e b^2 a^e b^3 ... in the first two generators, with e = pattern.
    """

    attractor: Optional[Word] = None
    conjugator: Word = Word()
    direction: int = 1  # +1 attracting, -1 repelling
    pattern: Optional[int] = None

    def __post_init__(self):
        if self.pattern is None:
            if self.attractor is None or not reduce(self.attractor):
                raise ValueError("end needs a nontrivial attractor")
            if self.direction not in (1, -1):
                raise ValueError("direction is +1 or -1")
        elif self.pattern < 1:
            raise ValueError("pattern exponent must be positive")

    @property
    def periodic(self) -> bool:
        return self.pattern is None

    def translator(self) -> Word:
        """Element whose positive powers move the base toward this end."""
        g = word_product(self.conjugator, self.attractor, self.conjugator.inverse())
        return g if self.direction > 0 else g.inverse()

    def ray_prefix(self, length: int) -> tuple:
        """First `length` letters of the reduced infinite word naming the end."""
        if self.pattern is not None:
            out: list = []
            k = 1
            while len(out) < length:
                out.extend([1] * self.pattern)
                out.extend([2] * k)
                k += 1
            return tuple(out[:length])
        g = self.translator()
        conj, core = cyclic_reduce(g)
        C = core.letters
        reps = (length + len(conj)) // len(C) + 2
        ray = word_product(conj, Word(C * reps)).letters
        return ray[:length]

    def to_json(self, alphabet: Alphabet) -> dict:
        if self.pattern is not None:
            return {"pattern": self.pattern}
        return {
            "attractor": alphabet.format(self.attractor),
            "conjugator": alphabet.format(self.conjugator),
            "direction": "attracting" if self.direction > 0 else "repelling",
        }


def end_map(A: CayleyTreeAction, end: EndSpec, x: Word) -> LexVector:
    """Busemann function toward `end`, normalised to vanish at the base.

    On a tree d(base, p) - d(x, p) = 2 (x | p) - |x| once p is far along the
    ray, where (x | p) is the weight of the common prefix.
    """
    x = reduce(x)
    ray = end.ray_prefix(len(x) + 1)
    k = 0
    while k < len(x) and x.letters[k] == ray[k]:
        k += 1
    return A.weight(Word(x.letters[:k])) * 2 - A.weight(x)


def busemann_limit(A: CayleyTreeAction, end: EndSpec, x: Word, n: int) -> LexVector:
    """The literal difference d(base, p_n) - d(x, p_n) with p_n far along the ray."""
    if end.periodic:
        p = word_product(end.conjugator, end.attractor ** (end.direction * n))
    else:
        p = Word(end.ray_prefix(n))
    return A.distance(Word(), p) - A.distance(reduce(x), p)


def stabilizer_of_end(A: CayleyTreeAction, end: EndSpec) -> Optional[Word]:
    """Generator of the stabilizer of the end, oriented like the attractor; None if trivial."""
    if not end.periodic:
        return None
    root, _ = root_of(end.attractor)
    return word_product(end.conjugator, root, end.conjugator.inverse())


def end_homomorphism(A: CayleyTreeAction, end: EndSpec, s: Word) -> LexVector:
    s = reduce(s)
    stab = stabilizer_of_end(A, end)
    if s and (stab is None or power_of(s, stab) is None):
        raise ValueError("element does not fix the end")
    return end_map(A, end, s) - end_map(A, end, Word())


def base_change(A: CayleyTreeAction, h: CoordinateEmbedding) -> CayleyTreeAction:
    if h.source != A.sig:
        raise ValueError("embedding source does not match the weight signature")
    return CayleyTreeAction(A.alphabet, tuple(h(w) for w in A.weights))


def scale_action(A: CayleyTreeAction, eta: OAutomorphism) -> CayleyTreeAction:
    """Compose the metric with an o-automorphism (every weight mapped by eta)."""
    return CayleyTreeAction(A.alphabet, tuple(eta(w) for w in A.weights))


# -- dilations of the rational line --------------------------------------------------


@dataclass(frozen=True)
class TranslationData:
    length: LexVector
    nu: LexVector
    theta: OAutomorphism
    tame: bool = True


@dataclass(frozen=True)
class FixedPoint:
    x0: Fraction
    essentially_hyperbolic: bool = False
    note: str = ""


def dilation_line_action(q, c):
    """Classify x -> q x + c on the rational line."""
    q, c = Fraction(q), Fraction(c)
    if q <= 0:
        raise ValueError("dilation factor must be positive")
    theta = OAutomorphism.scale(q, Q)
    nu = LexVector(Q, (c,))
    if q == 1:
        if c == 0:
            return FixedPoint(Fraction(0), False, "identity: every point is fixed")
        return TranslationData(abs(nu), nu, theta, tame=is_tame(theta, nu))
    x0 = c / (1 - q)
    side = "expands away from" if q > 1 else "contracts toward"
    return FixedPoint(x0, is_tame(theta, nu), f"{side} the fixed point on both half-lines")
