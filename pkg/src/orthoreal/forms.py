"""Quadratic spaces over F_q: discriminant, split/non-split type, restriction, sums.

Odd q: the space is given by a symmetric Gram matrix B and Q(v) = v^T B v.
Even q: the space is given by an upper-triangular matrix A with
Q(v) = v^T A v and polar form B = A + A^T (alternating, nondegenerate).

The discriminant is the square class of det(B), unnormalised.  The type of
an odd-q space is read off by comparing that class with the class of the
split Gram J_n (J_{n-1} + [1] for n odd); the comparison absorbs the
(-1)^{n(n-1)/2} normalisation, so the rule is convention-free.
"""

from __future__ import annotations

import enum
import random
from itertools import product

import numpy as np

from .algebra import linalg as la
from .algebra.field import GF, Field, SquareClass, square_class
from .errors import CharTwoDiscriminant, DegenerateForm, DependentBasis, FieldMismatch

__all__ = [
    "QuadSpace", "FormType", "discriminant", "form_type", "restrict", "direct_sum",
    "witt_index", "arf_invariant", "antidiag", "standard_space", "read_space", "write_space",
    "CONVENTIONS",
]

CONVENTIONS = {
    "discriminant": "square class of det(Gram), unnormalised; type = Split iff it matches the class of det of J_n (J_{n-1}+[1] for odd n)",
    "spinor_norm": "theta(r_v) = square class of Q(v) = v^T B v",
    "char2_omega": "Omega = {g : rank(g + I) even}; SO, K, T all coincide with Omega in characteristic 2",
}

# exhaustive Witt-index search is allowed when n*log2(q) <= this
_EXHAUSTIVE_BITS = 24


class FormType(enum.Enum):
    SPLIT = "+"
    NONSPLIT = "-"

    def __str__(self):
        return "Split" if self is FormType.SPLIT else "NonSplit"

    @property
    def sign(self) -> int:
        return 1 if self is FormType.SPLIT else -1


def antidiag(n: int) -> np.ndarray:
    """J_n: ones on the antidiagonal."""
    return np.fliplr(np.eye(n, dtype=np.int64))


def _upper(F: Field, M: np.ndarray) -> np.ndarray:
    """Upper-triangular matrix defining the same quadratic form as M."""
    U = np.triu(F.vadd(M, M.T))
    np.fill_diagonal(U, np.diag(M))
    return U


class QuadSpace:
    """A nondegenerate quadratic space F_q^n (immutable)."""

    __slots__ = ("field", "n", "gram", "quad", "_disc", "_type")

    def __init__(self, field: Field, gram=None, quad=None, check: bool = True):
        self.field = field
        if field.p == 2:
            if quad is None:
                raise ValueError("characteristic 2 spaces are given by their quadratic matrix")
            A = _upper(field, np.array(quad, dtype=np.int64) % field.q)
            self.quad = A
            self.gram = field.vadd(A, A.T)
        else:
            if gram is None:
                raise ValueError("odd characteristic spaces are given by a Gram matrix")
            G = np.array(gram, dtype=np.int64)
            if check and not np.array_equal(G, G.T):
                raise ValueError("Gram matrix must be symmetric")
            self.gram = G
            self.quad = None
        self.n = self.gram.shape[0]
        self.gram.setflags(write=False)
        if self.quad is not None:
            self.quad.setflags(write=False)
        self._disc = None
        self._type = None
        if check and self.n and la.det(field, self.gram) == 0:
            raise DegenerateForm("the polar form is degenerate")

    @classmethod
    def from_gram_ints(cls, q: int, rows) -> QuadSpace:
        F = GF(q)
        return cls(F, gram=np.vectorize(F.from_int, otypes=[np.int64])(np.array(rows, dtype=np.int64)))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def odd(self) -> bool:
        return self.field.p != 2

    def __eq__(self, other):
        if not isinstance(other, QuadSpace):
            return NotImplemented
        if self.field != other.field or self.n != other.n:
            return False
        if self.odd:
            return np.array_equal(self.gram, other.gram)
        return np.array_equal(self.quad, other.quad)

    def __hash__(self):
        data = self.gram if self.odd else self.quad
        return hash((self.field.q, self.n, data.tobytes()))

    def __repr__(self):
        kind = "gram" if self.odd else "quad"
        data = self.gram if self.odd else self.quad
        return f"QuadSpace(q={self.q}, n={self.n}, {kind}={data.tolist()})"

    # evaluation -----------------------------------------------------------

    def B(self, u, v) -> int:
        F = self.field
        return int(F.matmul(F.matmul(np.asarray(u)[None, :], self.gram), np.asarray(v)[:, None])[0, 0])

    def Q(self, v) -> int:
        F = self.field
        M = self.gram if self.odd else self.quad
        v = np.asarray(v, dtype=np.int64)
        return int(F.matmul(F.matmul(v[None, :], M), v[:, None])[0, 0])

    def Q_many(self, V) -> np.ndarray:
        """Q on every column of V."""
        F = self.field
        M = self.gram if self.odd else self.quad
        V = np.asarray(V, dtype=np.int64)
        MV = F.matmul(M, V)
        return F.vsum(F.vmul(V, MV), axis=0)

    def gram_of(self, U, W=None) -> np.ndarray:
        """Matrix of B between the columns of U and W."""
        F = self.field
        W = U if W is None else W
        return F.matmul(F.matmul(np.asarray(U).T, self.gram), np.asarray(W))

    def is_isometry(self, g) -> bool:
        F = self.field
        g = np.asarray(g, dtype=np.int64)
        if g.shape != (self.n, self.n):
            return False
        if not np.array_equal(F.matmul(F.matmul(g.T, self.gram), g), self.gram):
            return False
        if not self.odd:
            return np.array_equal(self.Q_many(g), np.diag(self.quad))
        return True

    def is_isometry_batch(self, G) -> np.ndarray:
        F = self.field
        G = np.asarray(G, dtype=np.int64)
        lhs = F.matmul(F.matmul(np.swapaxes(G, -1, -2), self.gram), G)
        ok = np.all(lhs == self.gram, axis=(-1, -2))
        if not self.odd:
            MV = F.matmul(self.quad, G)
            qv = F.vsum(F.vmul(G, MV), axis=-2)
            ok &= np.all(qv == np.diag(self.quad), axis=-1)
        return ok

    def describe(self) -> dict:
        d = {"q": self.q, "n": self.n, "field": self.field.describe()}
        if self.odd:
            d["gram"] = self.gram.tolist()
            d["discriminant"] = str(discriminant(self))
        else:
            d["quad"] = self.quad.tolist()
        d["type"] = str(form_type(self))
        return d


def discriminant(S: QuadSpace) -> SquareClass:
    if not S.odd:
        raise CharTwoDiscriminant("use form_type (Arf/Witt dichotomy) in characteristic 2")
    if S._disc is None:
        if S.n == 0:
            S._disc = SquareClass.TRIVIAL
        else:
            d = la.det(S.field, S.gram)
            if d == 0:
                raise DegenerateForm("degenerate form")
            S._disc = square_class(S.field, d)
    return S._disc


def _split_reference_class(F: Field, n: int) -> SquareClass:
    # det J_{2m} = (-1)^m; det(J_{2m} + [1]) = (-1)^m
    m = n // 2
    return square_class(F, F.from_int((-1) ** m))


def form_type(S: QuadSpace) -> FormType:
    if S._type is None:
        if S.odd:
            ok = discriminant(S) == _split_reference_class(S.field, S.n)
            S._type = FormType.SPLIT if ok else FormType.NONSPLIT
        else:
            if S.n % 2:
                raise DegenerateForm("odd dimension in characteristic 2 is defective")
            S._type = FormType.SPLIT if witt_index(S) == S.n // 2 else FormType.NONSPLIT
    return S._type


def _find_singular(S: QuadSpace, W: np.ndarray, rng: random.Random) -> np.ndarray | None:
    """A nonzero v in span(W) with Q(v) = 0, or None if there is none."""
    F = S.field
    d = W.shape[1]
    q = F.q
    # random probes first
    tries = 0 if d <= 2 else 64 * q
    for _ in range(tries):
        c = np.array([rng.randrange(q) for _ in range(d)], dtype=np.int64)
        if not c.any():
            continue
        v = F.matmul(W, c)
        if S.Q(v) == 0:
            return v
    if d * np.log2(q) > _EXHAUSTIVE_BITS and d > 2:
        raise RuntimeError("no singular vector found by random search")
    coeffs = np.array(list(product(range(q), repeat=d)), dtype=np.int64)[1:]
    V = F.matmul(W, coeffs.T)
    vals = S.Q_many(V)
    hits = np.nonzero(vals == 0)[0]
    if hits.size == 0:
        return None
    return V[:, hits[0]]


def witt_index(S: QuadSpace, seed: int = 0) -> int:
    """Dimension of a maximal totally singular subspace, built greedily."""
    F = S.field
    rng = random.Random(seed)
    W = np.eye(S.n, dtype=np.int64)
    count = 0
    while W.shape[1] >= 2:
        v = _find_singular(S, W, rng)
        if v is None:
            break
        bv = S.gram_of(W, v[:, None])[:, 0]
        j = int(np.nonzero(bv)[0][0])
        w = W[:, j]
        H = np.stack([v, w], axis=1)
        # orthogonal complement of <v, w> inside span(W)
        K = la.nullspace(F, S.gram_of(H, W))
        W = F.matmul(W, K)
        count += 1
    return count


def arf_invariant(S: QuadSpace) -> int:
    """Arf invariant (0 split, 1 non-split) by counting singular vectors, q even."""
    F = S.field
    n, q = S.n, F.q
    coeffs = np.array(list(product(range(q), repeat=n)), dtype=np.int64).T
    zeros = int(np.sum(S.Q_many(coeffs) == 0))
    m = n // 2
    plus = q ** (2 * m - 1) + q**m - q ** (m - 1)
    return 0 if zeros == plus else 1


def restrict(S: QuadSpace, basis) -> QuadSpace:
    """Quadratic space on span(basis) in the coordinates of ``basis`` (columns)."""
    F = S.field
    P = np.asarray(basis, dtype=np.int64)
    if P.ndim == 1:
        P = P[:, None]
    if P.shape[0] != S.n:
        raise ValueError("basis vectors have the wrong length")
    if P.shape[1] and not la.independent(F, P):
        raise DependentBasis("basis vectors are linearly dependent")
    if S.odd:
        return QuadSpace(F, gram=S.gram_of(P), check=False)
    M = F.matmul(F.matmul(P.T, S.quad), P)
    return QuadSpace(F, quad=M, check=False)


def is_nondegenerate(S: QuadSpace) -> bool:
    return S.n == 0 or la.det(S.field, S.gram) != 0


def _block(F, A, B):
    n1, n2 = A.shape[0], B.shape[0]
    M = np.zeros((n1 + n2, n1 + n2), dtype=np.int64)
    M[:n1, :n1] = A
    M[n1:, n1:] = B
    return M


def direct_sum(S1: QuadSpace, S2: QuadSpace) -> QuadSpace:
    if S1.field != S2.field:
        raise FieldMismatch("direct sum of spaces over different fields")
    F = S1.field
    if S1.odd:
        return QuadSpace(F, gram=_block(F, S1.gram, S2.gram), check=False)
    return QuadSpace(F, quad=_block(F, S1.quad, S2.quad), check=False)


def zero_space(F: Field) -> QuadSpace:
    if F.p == 2:
        return QuadSpace(F, quad=np.zeros((0, 0), dtype=np.int64), check=False)
    return QuadSpace(F, gram=np.zeros((0, 0), dtype=np.int64), check=False)


def _anisotropic_delta(F: Field) -> int:
    """delta with t^2 + t + delta irreducible over F_q, q even."""
    for d in range(1, F.q):
        if all(F.add(F.mul(x, x), F.add(x, d)) != 0 for x in range(F.q)):
            return d
    raise AssertionError("no anisotropic binary form")


def standard_space(n: int, q: int, sign: int = 1) -> QuadSpace:
    """Canonical split (sign=+1) or non-split (sign=-1) space of dimension n over F_q.

    Odd q: Gram J_n for the split even case; J_{n-2} + diag(1, -nu) with nu
    the least nonsquare for the non-split even case; J_{n-1} + [1] or
    J_{n-1} + [nu] for odd n.  Even q: x1x2 + x3x4 + ... with the last pair
    replaced by x^2 + xy + delta y^2 in the non-split case.
    """
    F = GF(q)
    if F.p != 2:
        nu = F.nonsquare()
        if n % 2 == 0:
            if sign > 0:
                G = antidiag(n)
            else:
                G = _block(F, antidiag(n - 2), np.array([[1, 0], [0, F.neg(nu)]], dtype=np.int64))
        else:
            tail = np.array([[1 if sign > 0 else nu]], dtype=np.int64)
            G = _block(F, antidiag(n - 1), tail)
        S = QuadSpace(F, gram=G)
        return S
    if n % 2:
        raise ValueError("characteristic 2 requires even dimension")
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(0, n, 2):
        A[i, i + 1] = 1
    if sign < 0:
        A[n - 2, n - 2] = 1
        A[n - 1, n - 1] = _anisotropic_delta(F)
    return QuadSpace(F, quad=A)


def write_space(S: QuadSpace) -> str:
    kind = "gram" if S.odd else "quad"
    return f"form={kind}\n" + la.write_matrix(S.field, S.gram if S.odd else S.quad)


def read_space(text: str) -> QuadSpace:
    lines = text.strip().splitlines()
    head = lines[0].strip()
    if not head.startswith("form="):
        raise ValueError("space file must start with form=gram or form=quad")
    kind = head.split("=", 1)[1].strip()
    F, M = la.read_matrix("\n".join(lines[1:]))
    if kind == "gram":
        return QuadSpace(F, gram=M)
    if kind == "quad":
        return QuadSpace(F, quad=M)
    raise ValueError(f"unknown form kind {kind!r}")
