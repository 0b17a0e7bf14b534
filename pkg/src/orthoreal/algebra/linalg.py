"""Dense exact linear algebra over F_q on integer numpy arrays.

Matrices are 2-d ``int64`` arrays of field codes.  Vectors in returned
bases are columns unless stated otherwise.
"""

from __future__ import annotations

import numpy as np

from ..errors import FieldMismatch
from .field import Field
from .poly import FqPoly, factorize

__all__ = [
    "rref", "rank", "nullspace", "left_nullspace", "solve", "inverse", "det", "identity",
    "charpoly", "poly_eval_matrix", "elementary_divisors", "FqMatrix", "column_space",
    "independent", "matpow", "read_matrix", "write_matrix", "intersect_kernel",
]


def identity(F: Field, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(F: Field, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = F.inv(int(M[r, c]))
        if inv != 1:
            M[r] = F.vmul(M[r], inv)
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            M[nzr] = F.vsub(M[nzr], F.vmul(col[nzr, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M, pivots


def rank(F: Field, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: Field, A) -> np.ndarray:
    """Basis of {x : A x = 0} as columns (shape cols x d)."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in piv]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        N[fc, j] = 1
        for i, pc in enumerate(piv):
            N[pc, j] = F.neg(int(R[i, fc]))
    return N


def left_nullspace(F: Field, A) -> np.ndarray:
    """Basis of {y : y^T A = 0} as columns."""
    return nullspace(F, np.asarray(A).T)


def column_space(F: Field, A) -> np.ndarray:
    """Independent columns spanning the column space (a subset of A's columns)."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return A.reshape(A.shape[0], 0)
    _, piv = rref(F, A)
    return A[:, piv]


def independent(F: Field, A) -> bool:
    A = np.asarray(A)
    return rank(F, A) == A.shape[1]


def solve(F: Field, A, B) -> np.ndarray | None:
    """A particular solution X of A X = B (B a matrix or vector), or None."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    n = A.shape[1]
    R, piv = rref(F, np.hstack([A, B]))
    if any(p >= n for p in piv):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        X[pc] = R[i, n:]
    return X[:, 0] if vec else X


def inverse(F: Field, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] >= n:
        raise ZeroDivisionError("singular matrix")
    return R[:, n:]


def det(F: Field, A) -> int:
    M = np.array(A, dtype=np.int64, copy=True)
    n = M.shape[0]
    d = 1
    for c in range(n):
        nz = np.nonzero(M[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            M[[c, piv]] = M[[piv, c]]
            d = F.neg(d)
        pv = int(M[c, c])
        d = F.mul(d, pv)
        inv = F.inv(pv)
        below = M[c + 1:, c]
        nzr = np.nonzero(below)[0]
        if nzr.size:
            rows = c + 1 + nzr
            fac = F.vmul(M[rows, c], inv)
            M[rows] = F.vsub(M[rows], F.vmul(fac[:, None], M[c][None, :]))
    return d


def matpow(F: Field, A, e: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if e < 0:
        A = inverse(F, A)
        e = -e
    out = np.eye(A.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            out = F.matmul(out, A)
        A = F.matmul(A, A)
        e >>= 1
    return out


def charpoly(F: Field, A) -> FqPoly:
    """Characteristic polynomial det(tI - A) via Hessenberg reduction."""
    H = np.array(A, dtype=np.int64, copy=True)
    n = H.shape[0]
    # reduce to upper Hessenberg form by similarity
    for m in range(1, n - 1):
        nz = np.nonzero(H[m:, m - 1])[0]
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        inv = F.inv(int(H[m, m - 1]))
        for i in range(m + 1, n):
            u = F.mul(int(H[i, m - 1]), inv)
            if u:
                H[i] = F.vsub(H[i], F.vmul(u, H[m]))
                H[:, m] = F.vadd(H[:, m], F.vmul(u, H[:, i]))
    Hl = H.tolist()
    t = FqPoly.x(F)
    polys = [FqPoly.const(F, 1)]
    for m in range(1, n + 1):
        pm = (t - FqPoly.const(F, Hl[m - 1][m - 1])) * polys[m - 1]
        tprod = 1
        for i in range(m - 1, 0, -1):
            tprod = F.mul(tprod, Hl[i][i - 1])
            c = F.mul(tprod, Hl[i - 1][m - 1])
            if c:
                pm = pm - polys[i - 1] * c
        polys.append(pm)
    return polys[n]


def poly_eval_matrix(F: Field, f: FqPoly, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    I = np.eye(n, dtype=np.int64)
    for c in reversed(f.coeffs):
        out = F.vadd(F.matmul(out, A), F.vmul(c, I))
    return out


def elementary_divisors(F: Field, A) -> tuple[tuple[FqPoly, int], ...]:
    """Elementary divisors of a square matrix as a sorted tuple of (f, e), with repetition."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if n == 0:
        return ()
    chi = charpoly(F, A)
    out = []
    for f, mult in factorize(chi):
        d = f.degree
        M = poly_eval_matrix(F, f, A)
        P = np.eye(n, dtype=np.int64)
        nulls = [0]
        while nulls[-1] < d * mult:
            P = F.matmul(P, M)
            nulls.append(n - rank(F, P))
        ge = [(nulls[j] - nulls[j - 1]) // d for j in range(1, len(nulls))] + [0]
        for j in range(1, len(nulls)):
            count = ge[j - 1] - ge[j]
            out.extend([(f, j)] * count)
    return tuple(sorted(out, key=lambda fe: (fe[0].sort_key(), fe[1])))


def intersect_kernel(F: Field, basis, constraints) -> np.ndarray:
    """Columns of span(basis) annihilated by every row of ``constraints``."""
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[1] == 0:
        return basis
    C = F.matmul(np.asarray(constraints, dtype=np.int64), basis)
    K = nullspace(F, C)
    return F.matmul(basis, K)


class FqMatrix:
    """Immutable n x m matrix over a :class:`Field`."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a):
        arr = np.array(a, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("FqMatrix needs a 2-d array")
        arr.setflags(write=False)
        self.field = field
        self.a = arr

    @classmethod
    def identity(cls, field: Field, n: int) -> FqMatrix:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_ints(cls, field: Field, rows) -> FqMatrix:
        """Integer entries mapped into the prime subfield (so -1 means p-1)."""
        return cls(field, np.vectorize(field.from_int, otypes=[np.int64])(np.array(rows, dtype=np.int64)))

    @property
    def shape(self):
        return self.a.shape

    def _check(self, other: FqMatrix):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __matmul__(self, other: FqMatrix) -> FqMatrix:
        self._check(other)
        return FqMatrix(self.field, self.field.matmul(self.a, other.a))

    def __add__(self, other: FqMatrix) -> FqMatrix:
        self._check(other)
        return FqMatrix(self.field, self.field.vadd(self.a, other.a))

    def __sub__(self, other: FqMatrix) -> FqMatrix:
        self._check(other)
        return FqMatrix(self.field, self.field.vsub(self.a, other.a))

    def __neg__(self) -> FqMatrix:
        return FqMatrix(self.field, self.field.vneg(self.a))

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash((self.field.q, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FqMatrix({self.field!r}, {self.a.tolist()})"

    @property
    def T(self) -> FqMatrix:
        return FqMatrix(self.field, self.a.T)

    def inverse(self) -> FqMatrix:
        return FqMatrix(self.field, inverse(self.field, self.a))

    def det(self) -> int:
        return det(self.field, self.a)

    def rank(self) -> int:
        return rank(self.field, self.a)

    def nullity(self) -> int:
        return self.a.shape[1] - self.rank()

    def __pow__(self, e: int) -> FqMatrix:
        return FqMatrix(self.field, matpow(self.field, self.a, e))

    def charpoly(self) -> FqPoly:
        return charpoly(self.field, self.a)

    def elementary_divisors(self):
        return elementary_divisors(self.field, self.a)

    def to_text(self) -> str:
        return write_matrix(self.field, self.a)


def write_matrix(F: Field, A) -> str:
    A = np.asarray(A)
    rows, cols = A.shape
    lines = [f"q={F.p}^{F.k} n={rows} m={cols}"]
    for r in A.tolist():
        lines.append(" ".join(F.encode(x) for x in r))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, int, int, int]:
    parts = dict(tok.split("=", 1) for tok in line.split())
    p, k = parts["q"].split("^") if "^" in parts["q"] else (parts["q"], "1")
    return int(p), int(k), int(parts["n"]), int(parts["m"])


def read_matrix(text: str, field: Field | None = None) -> tuple[Field, np.ndarray]:
    """Parse the matrix text format; returns (field, array)."""
    from .field import _field

    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    p, k, n, m = _parse_header(lines[0])
    F = _field(p, k)
    if field is not None and field != F:
        raise FieldMismatch(f"file is over {F!r}, expected {field!r}")
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} rows, found {len(body)}")
    A = np.zeros((n, m), dtype=np.int64)
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != m:
            raise ValueError(f"row {i} has {len(toks)} entries, expected {m}")
        A[i] = [F.decode(t) for t in toks]
    return F, A
