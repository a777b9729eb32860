"""Finite-rank lexicographically ordered abelian groups.

Elements are vectors of exact scalars, most significant coordinate first.
Each component is either ``"Z"`` (integers) or ``"Q"`` (rationals).
Order-preserving automorphisms are lower-triangular matrices with a
positive diagonal, and affine maps on Z x L0 are pairs (theta, mu).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Scalar = Union[int, Fraction]

KINDS = ("Z", "Q")


class SignatureMismatch(ValueError):
    pass


def _parse_scalar(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"unsupported scalar {value!r}")


def _scalar_json(kind: str, value: Scalar):
    if kind == "Z":
        return int(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Signature:
    kinds: tuple

    def __post_init__(self):
        kinds = tuple(self.kinds)
        if not kinds:
            raise ValueError("signature needs at least one component")
        for k in kinds:
            if k not in KINDS:
                raise ValueError(f"unknown component kind {k!r}")
        object.__setattr__(self, "kinds", kinds)

    @classmethod
    def parse(cls, text) -> "Signature":
        """Accept ``"Z,Z,Q"``, ``"ZZQ"`` or a sequence of kind strings."""
        if isinstance(text, Signature):
            return text
        if isinstance(text, str):
            parts = [p for p in text.replace(",", " ").split()]
            if len(parts) == 1 and len(parts[0]) > 1:
                parts = list(parts[0])
            return cls(tuple(p.upper() for p in parts))
        return cls(tuple(str(k).upper() for k in text))

    @property
    def rank(self) -> int:
        return len(self.kinds)

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.kinds + other.kinds)

    def __getitem__(self, i):
        return self.kinds[i]

    def __len__(self):
        return len(self.kinds)

    def __str__(self):
        return "x".join(self.kinds)


Z = Signature(("Z",))
Q = Signature(("Q",))
Z2 = Signature(("Z", "Z"))


def _check_same(a: Signature, b: Signature):
    if a != b:
        raise SignatureMismatch(f"signature mismatch: {a} vs {b}")


def _coerce(sig: Signature, coords: Iterable) -> tuple:
    out = []
    for kind, c in zip(sig.kinds, coords):
        t = type(c)
        if t is int and kind == "Z":
            out.append(c)
            continue
        if t is Fraction and kind == "Q":
            out.append(c)
            continue
        f = _parse_scalar(c)
        if kind == "Z":
            if f.denominator != 1:
                raise ValueError(f"non-integer {f} in an integer component")
            out.append(int(f))
        else:
            out.append(f)
    return tuple(out)


@dataclass(frozen=True)
class LexVector:
    sig: Signature
    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.sig.rank:
            raise ValueError(f"expected {self.sig.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", _coerce(self.sig, coords))

    @classmethod
    def of(cls, sig, *coords) -> "LexVector":
        return cls(Signature.parse(sig), coords)

    @classmethod
    def zero(cls, sig: Signature) -> "LexVector":
        return cls(sig, (0,) * sig.rank)

    @classmethod
    def unit(cls, sig: Signature, i: int) -> "LexVector":
        return cls(sig, tuple(1 if j == i else 0 for j in range(sig.rank)))

    def leading_index(self) -> Optional[int]:
        for i, c in enumerate(self.coords):
            if c != 0:
                return i
        return None

    def sign(self) -> int:
        i = self.leading_index()
        if i is None:
            return 0
        return 1 if self.coords[i] > 0 else -1

    def is_zero(self) -> bool:
        return self.leading_index() is None

    def is_positive(self) -> bool:
        return self.sign() > 0

    @classmethod
    def _raw(cls, sig: Signature, coords: tuple) -> "LexVector":
        # coords already of the right types (sums and negatives of valid coords)
        v = object.__new__(cls)
        object.__setattr__(v, "sig", sig)
        object.__setattr__(v, "coords", coords)
        return v

    def __add__(self, other: "LexVector") -> "LexVector":
        if self.sig is not other.sig:
            _check_same(self.sig, other.sig)
        return LexVector._raw(self.sig, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LexVector") -> "LexVector":
        if self.sig is not other.sig:
            _check_same(self.sig, other.sig)
        return LexVector._raw(self.sig, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LexVector":
        return LexVector._raw(self.sig, tuple(-a for a in self.coords))

    def __mul__(self, k) -> "LexVector":
        if isinstance(k, LexVector):
            return NotImplemented
        if type(k) is int:
            return LexVector._raw(self.sig, tuple(k * a for a in self.coords))
        return LexVector(self.sig, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __abs__(self) -> "LexVector":
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return lex_compare(self, other) < 0

    def __le__(self, other):
        return lex_compare(self, other) <= 0

    def __gt__(self, other):
        return lex_compare(self, other) > 0

    def __ge__(self, other):
        return lex_compare(self, other) >= 0

    def __str__(self):
        parts = [str(c) for c in self.coords]
        if len(parts) == 1:
            return parts[0]
        return "(" + ",".join(parts) + ")"

    def to_json(self) -> dict:
        return {
            "sig": list(self.sig.kinds),
            "coords": [_scalar_json(k, c) for k, c in zip(self.sig.kinds, self.coords)],
        }

    @classmethod
    def from_json(cls, data) -> "LexVector":
        return cls(Signature.parse(data["sig"]), data["coords"])


def lex_compare(a: LexVector, b: LexVector) -> int:
    """-1, 0 or 1 as a is less than, equal to or greater than b."""
    _check_same(a.sig, b.sig)
    for x, y in zip(a.coords, b.coords):
        if x != y:
            return -1 if x < y else 1
    return 0


@dataclass(frozen=True, order=False)
class ConvexClass:
    """Convex subgroup generated by a vector; None stands for the trivial subgroup."""

    leading_index: Optional[int]

    @property
    def is_bottom(self) -> bool:
        return self.leading_index is None

    def __lt__(self, other: "ConvexClass") -> bool:
        # strict inclusion
        if other.leading_index is None:
            return False
        if self.leading_index is None:
            return True
        return self.leading_index > other.leading_index

    def __le__(self, other: "ConvexClass") -> bool:
        return self == other or self < other


def convex_class(a: LexVector) -> ConvexClass:
    return ConvexClass(a.leading_index())


def much_less(a: LexVector, b: LexVector) -> bool:
    """a << b: k*a < b for every integer k."""
    _check_same(a.sig, b.sig)
    if not b.is_positive():
        return False
    return convex_class(a) < convex_class(b)


def _identity_matrix(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _lower_inverse(matrix) -> Optional[list]:
    n = len(matrix)
    inv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for i in range(j, n):
            acc = Fraction(1 if i == j else 0)
            for k in range(j, i):
                acc -= matrix[i][k] * inv[k][j]
            if matrix[i][i] == 0:
                return None
            inv[i][j] = acc / matrix[i][i]
    return inv


def _structurally_ok(matrix, sig: Signature) -> bool:
    n = sig.rank
    if len(matrix) != n or any(len(row) != n for row in matrix):
        return False
    for i in range(n):
        for j in range(n):
            v = matrix[i][j]
            if j > i and v != 0:
                return False
            if sig.kinds[i] == "Z" and j <= i:
                # integer rows may only read integer coordinates
                if sig.kinds[j] == "Q" and v != 0:
                    return False
                if Fraction(v).denominator != 1:
                    return False
        if matrix[i][i] <= 0:
            return False
        if sig.kinds[i] == "Z" and matrix[i][i] != 1:
            return False
    return True


def is_order_preserving(matrix, sig: Optional[Signature] = None) -> bool:
    """Structural test for an o-automorphism of the lex group with signature sig.

    Without a signature every component is taken to be rational.
    """
    n = len(matrix)
    if sig is None:
        sig = Signature(("Q",) * n)
    try:
        m = [[_parse_scalar(v) for v in row] for row in matrix]
    except (TypeError, ValueError):
        return False
    if not _structurally_ok(m, sig):
        return False
    inv = _lower_inverse(m)
    return inv is not None and _structurally_ok(inv, sig)


@dataclass(frozen=True)
class OAutomorphism:
    sig: Signature
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(_parse_scalar(v) for v in row) for row in self.matrix)
        if not is_order_preserving(m, self.sig):
            raise ValueError(f"matrix {m} is not an o-automorphism of {self.sig}")
        m = tuple(
            tuple(int(v) if v.denominator == 1 else v for v in row) for row in m
        )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_ident", m == _identity_matrix(self.sig.rank))
        object.__setattr__(self, "_memo", {})

    @classmethod
    def identity(cls, sig: Signature) -> "OAutomorphism":
        return cls(sig, _identity_matrix(sig.rank))

    @classmethod
    def scale(cls, q, sig: Signature = Q) -> "OAutomorphism":
        """Multiplication by q on every rational component."""
        q = _parse_scalar(q)
        rows = []
        for i, kind in enumerate(sig.kinds):
            rows.append(tuple((q if kind == "Q" else 1) if i == j else 0 for j in range(sig.rank)))
        return cls(sig, tuple(rows))

    @classmethod
    def shear(cls, a: int, sig: Signature = Z2, row: int = 1, col: int = 0) -> "OAutomorphism":
        """Elementary map adding a times coordinate col to coordinate row."""
        m = [list(r) for r in _identity_matrix(sig.rank)]
        m[row][col] = a
        return cls(sig, tuple(tuple(r) for r in m))

    @property
    def rank(self) -> int:
        return self.sig.rank

    def __call__(self, a: LexVector) -> LexVector:
        _check_same(self.sig, a.sig)
        if self._ident:
            return a
        # the same few vectors get transported over and over in the model checks
        hit = self._memo.get(a.coords)
        if hit is None:
            n = self.rank
            hit = LexVector(
                self.sig,
                tuple(sum(self.matrix[i][j] * a.coords[j] for j in range(i + 1)) for i in range(n)),
            )
            if len(self._memo) > 4096:
                self._memo.clear()
            self._memo[a.coords] = hit
        return hit

    def __matmul__(self, other: "OAutomorphism") -> "OAutomorphism":
        _check_same(self.sig, other.sig)
        n = self.rank
        prod = tuple(
            tuple(sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return OAutomorphism(self.sig, prod)

    def inverse(self) -> "OAutomorphism":
        return OAutomorphism(self.sig, tuple(tuple(r) for r in _lower_inverse(self.matrix)))

    def is_identity(self) -> bool:
        return self._ident

    def columns_of_defect(self) -> list:
        """Columns of I - theta as vectors."""
        n = self.rank
        cols = []
        for j in range(n):
            cols.append(
                LexVector(
                    self.sig,
                    tuple((1 if i == j else 0) - self.matrix[i][j] for i in range(n)),
                )
            )
        return cols

    def to_json(self) -> dict:
        return {
            "sig": list(self.sig.kinds),
            "matrix": [
                [_scalar_json("Q", v) if isinstance(v, Fraction) else v for v in row]
                for row in self.matrix
            ],
        }

    @classmethod
    def from_json(cls, data) -> "OAutomorphism":
        return cls(Signature.parse(data["sig"]), tuple(tuple(r) for r in data["matrix"]))


def oauto_apply(theta: OAutomorphism, a: LexVector) -> LexVector:
    return theta(a)


def oauto_compose(theta: OAutomorphism, phi: OAutomorphism) -> OAutomorphism:
    return theta @ phi


def oauto_invert(theta: OAutomorphism) -> OAutomorphism:
    return theta.inverse()


def is_tame(theta: OAutomorphism, nu: LexVector) -> bool:
    """Every value of (1 - theta) is << |nu|.

    By linearity it is enough to look at the columns of I - theta.
    """
    _check_same(theta.sig, nu.sig)
    target = abs(nu)
    if not target.is_positive():
        return False
    return all(much_less(c, target) for c in theta.columns_of_defect())


@dataclass(frozen=True)
class AffineMap:
    """beta(m, lam) = (m, theta(lam) + m*mu) on Z x L0."""

    theta: OAutomorphism
    mu: LexVector

    def __post_init__(self):
        _check_same(self.theta.sig, self.mu.sig)

    @classmethod
    def identity(cls, sig: Signature) -> "AffineMap":
        return cls(OAutomorphism.identity(sig), LexVector.zero(sig))

    @classmethod
    def translation(cls, mu: LexVector) -> "AffineMap":
        return cls(OAutomorphism.identity(mu.sig), mu)

    @property
    def sig(self) -> Signature:
        return self.theta.sig

    @property
    def lambda_sig(self) -> Signature:
        return Z + self.sig

    def apply(self, point):
        m, lam = point
        return m, self.theta(lam) + self.mu * m

    def apply_lambda(self, v: LexVector) -> LexVector:
        """Act on an element of Z x L0 written as a single lex vector."""
        _check_same(v.sig, self.lambda_sig)
        if self.is_identity():
            return v
        m = v.coords[0]
        lam = LexVector(self.sig, v.coords[1:])
        _, out = self.apply((m, lam))
        return LexVector(v.sig, (m,) + out.coords)

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        # (self o other): mu = mu_self + theta_self(mu_other)
        return AffineMap(self.theta @ other.theta, self.mu + self.theta(other.mu))

    def inverse(self) -> "AffineMap":
        inv = self.theta.inverse()
        return AffineMap(inv, -inv(self.mu))

    def is_identity(self) -> bool:
        return self.theta.is_identity() and self.mu.is_zero()

    def as_oautomorphism(self) -> OAutomorphism:
        """The same map as a triangular automorphism of Z x L0."""
        n = self.sig.rank
        rows = [(1,) + (0,) * n]
        for i in range(n):
            rows.append((self.mu.coords[i],) + self.theta.matrix[i])
        return OAutomorphism(self.lambda_sig, tuple(rows))

    def to_json(self) -> dict:
        return {"theta": self.theta.to_json(), "mu": self.mu.to_json()}

    @classmethod
    def from_json(cls, data) -> "AffineMap":
        return cls(OAutomorphism.from_json(data["theta"]), LexVector.from_json(data["mu"]))


def affine_apply(beta: AffineMap, point):
    return beta.apply(point)


def affine_compose(beta: AffineMap, gamma: AffineMap) -> AffineMap:
    return beta @ gamma


def affine_invert(beta: AffineMap) -> AffineMap:
    return beta.inverse()


def _kind_fits(src: str, dst: str) -> bool:
    return src == dst or (src == "Z" and dst == "Q")


class CoordinateEmbedding:
    """Places a source group into a target group starting at a coordinate."""

    def __init__(self, source: Signature, target: Signature, position: int):
        if position < 0 or position + source.rank > target.rank:
            raise ValueError("source does not fit into target at that position")
        for i, kind in enumerate(source.kinds):
            if not _kind_fits(kind, target.kinds[position + i]):
                raise ValueError(
                    f"component {i} of kind {kind} cannot map into {target.kinds[position + i]}"
                )
        self.source = source
        self.target = target
        self.position = position

    def __call__(self, a: LexVector) -> LexVector:
        _check_same(a.sig, self.source)
        coords = [0] * self.target.rank
        for i, c in enumerate(a.coords):
            coords[self.position + i] = c
        return LexVector(self.target, coords)

    def lift(self, theta: OAutomorphism) -> OAutomorphism:
        _check_same(theta.sig, self.source)
        n = self.target.rank
        m = [list(r) for r in _identity_matrix(n)]
        p = self.position
        for i in range(self.source.rank):
            for j in range(self.source.rank):
                m[p + i][p + j] = theta.matrix[i][j]
        return OAutomorphism(self.target, tuple(tuple(r) for r in m))

    def __repr__(self):
        return f"CoordinateEmbedding({self.source} -> {self.target} @ {self.position})"


def coordinate_embedding(source: Signature, target: Signature, position: int) -> CoordinateEmbedding:
    return CoordinateEmbedding(source, target, position)


def lex_vector(sig, coords: Sequence) -> LexVector:
    return LexVector(Signature.parse(sig), tuple(coords))
