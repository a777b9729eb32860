"""Word calculus in free groups of finite rank.

A word is stored as a tuple of nonzero integers: ``i + 1`` is the i-th
generator and ``-(i + 1)`` its inverse.  ``Word.letter_pairs`` gives the
(generator index, sign) view.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class Word:
    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        letters = tuple(letters)
        for a in letters:
            if not isinstance(a, int) or a == 0:
                raise ValueError(f"bad letter {a!r}")
        self.letters = letters

    @classmethod
    def gen(cls, i: int, power: int = 1) -> "Word":
        a = i + 1 if power > 0 else -(i + 1)
        return cls((a,) * abs(power))

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "Word":
        return cls((g + 1) * s for g, s in pairs)

    @property
    def letter_pairs(self) -> tuple:
        return tuple((abs(a) - 1, 1 if a > 0 else -1) for a in self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Word({self.letters!r})"

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce_pair(self.letters, other.letters))

    def inverse(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, k: int) -> "Word":
        w = reduce(self)
        if k < 0:
            w, k = w.inverse(), -k
        if k == 0 or not w:
            return Word()
        conj, core = cyclic_reduce(w)
        return Word(conj.letters + core.letters * k + conj.inverse().letters)

    def is_reduced(self) -> bool:
        ls = self.letters
        return all(ls[i] != -ls[i + 1] for i in range(len(ls) - 1))

    def exponent_sum(self, i: int) -> int:
        return sum(1 if a > 0 else -1 for a in self.letters if abs(a) == i + 1)


def _reduce_letters(letters: Sequence[int]) -> tuple:
    stack = []
    for a in letters:
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def _reduce_pair(left: tuple, right: tuple) -> tuple:
    # fast path for two reduced words: cancel at the junction only
    i = 0
    n, m = len(left), len(right)
    while i < n and i < m and left[n - 1 - i] == -right[i]:
        i += 1
    out = left[: n - i] + right[i:]
    if _is_reduced_tuple(left) and _is_reduced_tuple(right):
        return out
    return _reduce_letters(out)


def _is_reduced_tuple(ls: tuple) -> bool:
    for i in range(len(ls) - 1):
        if ls[i] == -ls[i + 1]:
            return False
    return True


def reduce(w: Word) -> Word:
    return Word(_reduce_letters(w.letters))


def word_product(*words: Word) -> Word:
    out: list = []
    for w in words:
        for a in w.letters:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
    return Word(out)


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return word_product(a.inverse(), b.inverse(), a, b)


def commutator_power(x: Word, y: Word, m: int, n: int) -> Word:
    if m == 0 or n == 0:
        raise ValueError("exponents must be nonzero")
    return commutator(x ** m, y ** n)


def abelianization(g: Word, rank: int) -> tuple:
    out = [0] * rank
    for a in g.letters:
        i = abs(a) - 1
        if i >= rank:
            raise ValueError(f"letter {a} outside rank {rank}")
        out[i] += 1 if a > 0 else -1
    return tuple(out)


def least_rotation(s: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(s)
    if n == 0:
        return 0
    ss = list(s) + list(s)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = ss[j]
        i = f[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def border_array(s: Sequence) -> list:
    fail = [0] * (len(s) + 1)
    fail[0] = -1
    k = -1
    for i, c in enumerate(s):
        while k >= 0 and s[k] != c:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    return fail


def find_subsequence(hay: Sequence, needle: Sequence) -> int:
    """KMP search; index of the first occurrence or -1."""
    if not needle:
        return 0
    fail = border_array(needle)
    k = 0
    for i, c in enumerate(hay):
        while k >= 0 and (k == len(needle) or needle[k] != c):
            k = fail[k]
        k += 1
        if k == len(needle):
            return i - len(needle) + 1
    return -1


class CyclicWord:
    """A cyclically reduced word up to rotation."""

    __slots__ = ("letters", "_canon")

    def __init__(self, letters: Iterable[int]):
        letters = tuple(letters)
        if not _is_reduced_tuple(letters) or (len(letters) > 1 and letters[0] == -letters[-1]):
            raise ValueError("not cyclically reduced")
        self.letters = letters
        self._canon = None

    def canonical(self) -> tuple:
        if self._canon is None:
            k = least_rotation(self.letters)
            self._canon = self.letters[k:] + self.letters[:k]
        return self._canon

    def rotation(self, k: int) -> tuple:
        n = len(self.letters)
        if n == 0:
            return ()
        k %= n
        return self.letters[k:] + self.letters[:k]

    def as_word(self) -> Word:
        return Word(self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"CyclicWord({self.letters!r})"


def cyclic_reduce(w: Word) -> tuple:
    """Split a word as conjugator * core * conjugator^-1 with a cyclically reduced core."""
    ls = _reduce_letters(w.letters)
    i, j = 0, len(ls) - 1
    while i < j and ls[i] == -ls[j]:
        i += 1
        j -= 1
    return Word(ls[:i]), CyclicWord(ls[i : j + 1])


def is_conjugate(u: Word, v: Word) -> Optional[Word]:
    """A word c with c u c^-1 = v, or None."""
    a, cu = cyclic_reduce(u)
    b, cv = cyclic_reduce(v)
    U, V = cu.letters, cv.letters
    if len(U) != len(V):
        return None
    if not U:
        return Word()
    # V = Q P where U = P Q, so V = P^-1 U P
    k = find_subsequence(V + V, U)
    if k < 0:
        return None
    # U occurs in VV at k: V = V[k:] + V[:k] rotated... recover P with U = P Q, V = Q P
    p_len = (len(U) - k) % len(U)
    P = Word(U[:p_len])
    return word_product(b, P.inverse(), a.inverse())


def is_proper_power(u: Word) -> Optional[tuple]:
    """(root, exponent) with exponent >= 2 when u is a proper power."""
    conj, core = cyclic_reduce(u)
    C = core.letters
    if not C:
        raise ValueError("trivial word has no root")
    n = len(C)
    period = n - border_array(C)[n]
    if period < n and n % period == 0:
        root = word_product(conj, Word(C[:period]), conj.inverse())
        return root, n // period
    return None


def root_of(u: Word) -> tuple:
    """(root, exponent) with the root not a proper power; exponent >= 1."""
    pp = is_proper_power(u)
    if pp is None:
        return reduce(u), 1
    return pp


def conjugate_to_inverse(u: Word) -> bool:
    return is_conjugate(u, u.inverse()) is not None


def power_of(g: Word, c: Word) -> Optional[int]:
    """k with g = c^k, or None.  c must be nontrivial."""
    g = reduce(g)
    if not g:
        return 0
    conj, core = cyclic_reduce(c)
    C = core.letters
    if not C:
        raise ValueError("trivial base")
    inner = word_product(conj.inverse(), g, conj).letters
    if len(inner) % len(C):
        return None
    k = len(inner) // len(C)
    if inner == C * k:
        return k
    Ci = Word(C).inverse().letters
    if inner == Ci * k:
        return -k
    return None


def random_reduced_word(rng: random.Random, rank: int, length: int) -> Word:
    out: list = []
    while len(out) < length:
        a = rng.randint(1, rank) * rng.choice((1, -1))
        if out and out[-1] == -a:
            continue
        out.append(a)
    return Word(out)


def all_reduced_words(rank: int, max_length: int):
    """Every reduced word of length <= max_length, shortest first."""
    letters = [i for g in range(1, rank + 1) for i in (g, -g)]
    layer = [()]
    yield Word()
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for a in letters:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        for w in nxt:
            yield Word(w)
        layer = nxt


class WordParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("alphabet needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for nm in names:
            if not nm or not (nm[0].isalpha() or nm[0] == "_") or not all(
                ch.isalnum() or ch == "_" for ch in nm
            ):
                raise ValueError(f"bad generator name {nm!r}")
        object.__setattr__(self, "names", names)

    @classmethod
    def of(cls, names) -> "Alphabet":
        if isinstance(names, str):
            parts = names.replace(",", " ").split()
            if len(parts) == 1 and len(parts[0]) > 1 and parts[0].isalpha():
                parts = list(parts[0])
            names = parts
        return cls(tuple(names))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def gen(self, name: str, power: int = 1) -> Word:
        return Word.gen(self.index(name), power)

    def gens(self) -> tuple:
        return tuple(Word.gen(i) for i in range(self.rank))

    def parse(self, text: str) -> Word:
        return _Parser(self, text).parse()

    def __call__(self, text: str) -> Word:
        return self.parse(text)

    def format(self, w: Word, compact: bool = False) -> str:
        if not w:
            return "1"
        out = []
        ls = w.letters
        i = 0
        while i < len(ls):
            j = i
            while j < len(ls) and ls[j] == ls[i]:
                j += 1
            a, k = ls[i], j - i
            name = self.names[abs(a) - 1]
            if compact and self._compact_ok():
                tok = name if a > 0 else name.upper()
                out.extend([tok] * k)
            else:
                e = k if a > 0 else -k
                out.append(name if e == 1 else f"{name}^{e}")
            i = j
        return " ".join(out)

    def _compact_ok(self) -> bool:
        return all(
            len(n) == 1 and n.islower() and n.upper() not in self.names for n in self.names
        )


class _Parser:
    def __init__(self, alphabet: Alphabet, text: str):
        self.alphabet = alphabet
        self.text = text
        self.pos = 0
        self.names = sorted(alphabet.names, key=len, reverse=True)

    def error(self, msg: str):
        raise WordParseError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t*.":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Word:
        w = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return w

    def expr(self) -> Word:
        parts = []
        while True:
            c = self.peek()
            if not c or c in ")],":
                break
            parts.append(self.factor())
        return word_product(*parts)

    def factor(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            digits = self.text[start : self.pos]
            if digits in ("", "+", "-"):
                self.pos = start
                self.error("expected an exponent")
            base = base ** int(digits)
        return base

    def atom(self) -> Word:
        c = self.peek()
        if c == "(":
            self.pos += 1
            w = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return w
        if c == "[":
            self.pos += 1
            a = self.expr()
            if self.peek() != ",":
                self.error("expected ','")
            self.pos += 1
            b = self.expr()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            return commutator(a, b)
        if c == "1":
            self.pos += 1
            return Word()
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return self.alphabet.gen(name)
        if c and c.isupper():
            low = c.lower()
            if low in self.alphabet.names:
                self.pos += 1
                return self.alphabet.gen(low, -1)
        self.error(f"unknown symbol {c!r}" if c else "unexpected end of input")
