"""Independent reference implementations used only by the tests.

Nothing here imports the algorithms under test; they are deliberately
naive so that agreement means something.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd


# -- free groups on letter tuples -------------------------------------------------------


def naive_reduce(letters) -> tuple:
    """Delete cancelling pairs until none is left (quadratic, no stack)."""
    ls = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(ls) - 1):
            if ls[i] == -ls[i + 1]:
                del ls[i : i + 2]
                changed = True
                break
    return tuple(ls)


def inv(letters) -> tuple:
    return tuple(-a for a in reversed(letters))


def mul(*parts) -> tuple:
    out = ()
    for p in parts:
        out = naive_reduce(out + tuple(p))
    return out


def naive_cyclic_core(letters) -> tuple:
    w = naive_reduce(letters)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def rotations(w) -> set:
    return {w[i:] + w[:i] for i in range(len(w))} if w else {()}


def naive_conjugate(u, v) -> bool:
    return naive_cyclic_core(v) in rotations(naive_cyclic_core(u))


def all_words(rank: int, max_len: int):
    letters = [a for i in range(1, rank + 1) for a in (i, -i)]
    yield ()
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for a in letters:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        yield from nxt
        frontier = nxt


def search_conjugator(u, v, rank: int, max_len: int):
    """A word c with c u c^-1 = v, by exhaustive search, or None."""
    target = naive_reduce(v)
    for c in all_words(rank, max_len):
        if mul(c, u, inv(c)) == target:
            return c
    return None


def naive_power_root(u):
    """Largest k with core(u) = p^k for a word p; returns k (1 when not a proper power)."""
    core = naive_cyclic_core(u)
    n = len(core)
    best = 1
    for k in range(2, n + 1):
        if n % k == 0 and core == core[: n // k] * k:
            best = k
    return best


def vertex_translation_length(weights, letters, radius: int) -> int:
    """min over vertices v with |v| <= radius of d(v, w v) for integer weights."""
    w = naive_reduce(letters)

    def wt(x):
        return sum(weights[abs(a) - 1] for a in x)

    def dist(g, h):
        return wt(mul(inv(g), h))

    best = None
    for v in all_words(len(weights), radius):
        d = dist(v, mul(w, v))
        if best is None or d < best:
            best = d
    return best


# -- one-relator classification, restated --------------------------------------------


def literal_verdict(m, n, r, s) -> str:
    excluded = (m == -r and n == s) or (m == r and n == -s)
    if excluded:
        return "NotEssentiallyATF"
    a, b = abs(m) - abs(r), abs(s) - abs(n)
    same = (a > 0 and b > 0) or (a < 0 and b < 0) or (a == 0 and b == 0)
    return "ITF_Z2" if same else "ATFe_NotITF"


# -- permutation representations (one-sided word-problem oracle) -----------------------


def perm_mul(p, q):
    """(p q)(i) = p(q(i)): apply q first."""
    return tuple(p[i] for i in q)


def perm_inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_eval(images, letters, n):
    """Image of a word under generator i -> images[i-1] (left-to-right product)."""
    out = tuple(range(n))
    for a in letters:
        g = images[abs(a) - 1]
        out = perm_mul(out, g if a > 0 else perm_inv(g))
    return out


def cycles(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        c = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = p[j]
        out.append(c)
    return out


def conjugating_perm(a, b):
    """t with t a t^-1 = b when a and b share a cycle type, else None."""
    ca = sorted(cycles(a), key=len)
    cb = sorted(cycles(b), key=len)
    if [len(c) for c in ca] != [len(c) for c in cb]:
        return None
    t = [0] * len(a)
    for x, y in zip(ca, cb):
        for i, j in zip(x, y):
            t[i] = j
    return tuple(t)


def hnn_reps(u, v, n: int, count: int, seed: int, tries: int = 4000):
    """Homomorphisms of <x, y, t | t u t^-1 = v> into S_n, found by random search.

    u, v are letter tuples over x=1, y=2.  Returns a list of (X, Y, T).
    """
    rng = random.Random(seed)
    out = []
    for _ in range(tries):
        X = tuple(rng.sample(range(n), n))
        Y = tuple(rng.sample(range(n), n))
        U = perm_eval((X, Y), u, n)
        V = perm_eval((X, Y), v, n)
        T = conjugating_perm(U, V)
        if T is None:
            continue
        assert perm_mul(perm_mul(T, U), perm_inv(T)) == V
        out.append((X, Y, T))
        if len(out) >= count:
            break
    return out


# -- integer linear systems ---------------------------------------------------------


def _minors_gcd(M, k):
    g = 0
    rows = range(len(M))
    cols = range(len(M[0]))
    for rs in itertools.combinations(rows, k):
        for cs in itertools.combinations(cols, k):
            g = gcd(g, int(_det([[M[i][j] for j in cs] for i in rs])))
    return g


def _det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            for k in range(c, n):
                A[r][k] -= f * A[c][k]
    return det


def _rank(M):
    A = [[Fraction(x) for x in row] for row in M]
    r = 0
    for c in range(len(A[0]) if A else 0):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def integer_solvable(A, b) -> bool:
    """A x = b has an integer solution iff ranks agree and the top determinantal divisors agree."""
    if not A or not A[0]:
        return all(x == 0 for x in b)
    Ab = [row + [bi] for row, bi in zip(A, b)]
    r = _rank(A)
    if r != _rank(Ab):
        return False
    if r == 0:
        return True
    return _minors_gcd(A, r) == _minors_gcd(Ab, r)
