"""Orthogonal groups O(V) and the subgroups SO, K, T, Omega.

Spinor norms come from an explicit factorization into reflections.  Small
groups can be enumerated outright by breadth-first closure; the elements of
each enumerated O(V) carry (det, spinor norm) labels propagated along the
search tree, which makes subgroup filtering a mask operation.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .algebra import linalg as la
from .algebra.field import Field, SquareClass, square_class
from .algebra.linalg import FqMatrix
from .errors import GroupTooLarge, NotAnIsometry, SpaceMismatch, SpinorNormCharTwo
from .forms import QuadSpace, discriminant, form_type, standard_space
from .kernels import batch_rank

__all__ = [
    "Isometry", "GroupSpec", "MatrixGroup", "TAGS", "spinor_norm", "member", "reflections",
    "reflection_matrix", "cd_factorization", "enumerate_group", "group_order", "det_sign",
    "dickson_parity", "random_element", "derived_subgroup", "closure", "resolve_cap", "set_threads",
]

TAGS = ("O", "SO", "K", "T", "Omega", "POmega")
DEFAULT_ENUM_CAP = 10**6
_THREADS = 1


def set_threads(n: int) -> None:
    """Worker count used by group enumeration when none is passed explicitly."""
    global _THREADS
    if n < 1:
        raise ValueError("thread count must be positive")
    _THREADS = int(n)
_BRUTE_BITS = 20


def resolve_cap(cap: int | None, default: int) -> int:
    """Explicit cap, else ORTHOREAL_CAP, else the module default."""
    if cap is not None:
        if cap <= 0:
            raise ValueError("caps must be positive")
        return int(cap)
    env = os.environ.get("ORTHOREAL_CAP")
    if env:
        return int(float(env))
    return default


class Isometry:
    """An element of O(V) for a fixed quadratic space V."""

    __slots__ = ("space", "matrix")

    def __init__(self, space: QuadSpace, g, check: bool = True):
        self.space = space
        a = np.array(g, dtype=np.int64)
        if check and not space.is_isometry(a):
            raise NotAnIsometry("matrix does not preserve the quadratic form")
        a.setflags(write=False)
        self.matrix = a

    @classmethod
    def from_ints(cls, space: QuadSpace, rows, check: bool = True) -> Isometry:
        F = space.field
        a = np.vectorize(F.from_int, otypes=[np.int64])(np.array(rows, dtype=np.int64))
        return cls(space, a, check=check)

    @classmethod
    def identity(cls, space: QuadSpace) -> Isometry:
        return cls(space, np.eye(space.n, dtype=np.int64), check=False)

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def n(self) -> int:
        return self.space.n

    def _same(self, other: Isometry):
        if self.space != other.space:
            raise SpaceMismatch("isometries of different spaces")

    def __matmul__(self, other: Isometry) -> Isometry:
        self._same(other)
        return Isometry(self.space, self.field.matmul(self.matrix, other.matrix), check=False)

    def __neg__(self) -> Isometry:
        return Isometry(self.space, self.field.vneg(self.matrix), check=False)

    def __pow__(self, e: int) -> Isometry:
        if e < 0:
            return self.inverse() ** (-e)
        return Isometry(self.space, la.matpow(self.field, self.matrix, e), check=False)

    def inverse(self) -> Isometry:
        return Isometry(self.space, la.inverse(self.field, self.matrix), check=False)

    def det(self) -> int:
        return la.det(self.field, self.matrix)

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, np.eye(self.n, dtype=np.int64))

    def fq(self) -> FqMatrix:
        return FqMatrix(self.field, self.matrix)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"Isometry(q={self.space.q}, {self.matrix.tolist()})"


# reflections and the spinor norm ---------------------------------------------


def reflection_matrix(S: QuadSpace, v) -> np.ndarray:
    """Matrix of the reflection (q odd) or orthogonal transvection (q even) along v."""
    F = S.field
    v = np.asarray(v, dtype=np.int64)
    qv = S.Q(v)
    if qv == 0:
        raise ValueError("reflection along a singular vector")
    c = F.div(F.from_int(2), qv) if S.odd else F.inv(qv)
    row = F.matmul(v[None, :], S.gram)[0]
    outer = F.vmul(v[:, None], row[None, :])
    return F.vsub(np.eye(S.n, dtype=np.int64), F.vmul(c, outer))


@lru_cache(maxsize=256)
def _orthogonal_basis(S: QuadSpace) -> tuple[np.ndarray, ...]:
    """Pairwise orthogonal anisotropic vectors spanning V (q odd)."""
    F = S.field
    W = np.eye(S.n, dtype=np.int64)
    out = []
    while W.shape[1]:
        qs = S.Q_many(W)
        nz = np.nonzero(qs)[0]
        if nz.size:
            v = W[:, nz[0]]
        else:
            G = S.gram_of(W)
            i, j = (int(x) for x in np.argwhere(G != 0)[0])
            v = F.vadd(W[:, i], W[:, j])
        out.append(v)
        W = F.matmul(W, la.nullspace(F, S.gram_of(v[:, None], W)))
    return tuple(out)


def cd_factorization(S: QuadSpace, g) -> list[np.ndarray]:
    """Vectors v_1..v_m with g = r_{v_1} ... r_{v_m}, m <= 2n (q odd)."""
    if not S.odd:
        raise SpinorNormCharTwo("reflection factorization is only used in odd characteristic")
    F = S.field
    h = np.asarray(g, dtype=np.int64)
    vecs: list[np.ndarray] = []
    for b in _orthogonal_basis(S):
        y = F.matmul(h, b)
        if np.array_equal(y, b):
            continue
        w = F.vsub(y, b)
        if S.Q(w) != 0:
            h = F.matmul(reflection_matrix(S, w), h)
            vecs.append(w)
        else:
            # Q(y-b) + Q(y+b) = 4 Q(b) != 0, so y+b is anisotropic
            w = F.vadd(y, b)
            h = F.matmul(reflection_matrix(S, b), F.matmul(reflection_matrix(S, w), h))
            vecs.extend([w, b])
    if not np.array_equal(h, np.eye(S.n, dtype=np.int64)):
        raise NotAnIsometry("factorization did not terminate at the identity")
    return vecs


def spinor_norm(g: Isometry) -> SquareClass:
    S = g.space
    if not S.odd:
        raise SpinorNormCharTwo("spinor norm is not defined in characteristic 2; use dickson_parity")
    out = SquareClass.TRIVIAL
    for v in cd_factorization(S, g.matrix):
        out = out * square_class(S.field, S.Q(v))
    return out


def det_sign(g: Isometry) -> int:
    d = g.det()
    return 1 if d == 1 else -1


def dickson_parity(g: Isometry) -> int:
    """rank(g - I) mod 2."""
    F = g.field
    return la.rank(F, F.vsub(g.matrix, np.eye(g.n, dtype=np.int64))) % 2


def _labels_ok(tag: str, odd: bool, det_bit, theta_bit):
    """Membership from label bits (det = -1, spinor norm nonsquare / odd rank parity)."""
    if tag == "O":
        return np.ones_like(det_bit, dtype=bool) if isinstance(det_bit, np.ndarray) else True
    if not odd:
        return det_bit == 0
    if tag == "SO":
        return det_bit == 0
    if tag == "K":
        return theta_bit == 0
    if tag == "T":
        return (det_bit ^ theta_bit) == 0
    return (det_bit == 0) & (theta_bit == 0)


@dataclass(frozen=True)
class GroupSpec:
    """One of O, SO, K, T, Omega, POmega on a fixed quadratic space."""

    tag: str
    space: QuadSpace

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown group tag {self.tag!r}; expected one of {TAGS}")

    @classmethod
    def standard(cls, tag: str, n: int, q: int, sign: int = 1) -> GroupSpec:
        return cls(tag, standard_space(n, q, sign))

    @property
    def field(self) -> Field:
        return self.space.field

    def center(self) -> list[np.ndarray]:
        """{+-I} intersected with Omega."""
        S = self.space
        I = np.eye(S.n, dtype=np.int64)
        out = [I]
        if S.odd and S.n % 2 == 0 and discriminant(S) is SquareClass.TRIVIAL:
            out.append(S.field.vneg(I))
        return out

    def order(self) -> int:
        return group_order(self.tag, self.space)

    def name(self) -> str:
        S = self.space
        sign = ""
        if S.n % 2 == 0:
            sign = "+" if form_type(S).sign > 0 else "-"
        return f"{self.tag}{sign}({S.n},{S.q})"


def _order_O(S: QuadSpace) -> int:
    q, n = S.q, S.n
    if n == 0:
        return 1
    if n % 2:
        m = n // 2
        return 2 * q ** (m * m) * math.prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    m = n // 2
    eps = form_type(S).sign
    return 2 * q ** (m * (m - 1)) * (q**m - eps) * math.prod(q ** (2 * i) - 1 for i in range(1, m))


def group_order(tag: str, S: QuadSpace) -> int:
    """Closed-form order (n >= 2)."""
    o = _order_O(S)
    if tag == "O":
        return o
    if tag in ("SO", "K", "T"):
        return o // 2
    om = o // 4 if S.odd else o // 2
    if tag == "Omega":
        return om
    return om // len(GroupSpec("POmega", S).center())


def member(g: Isometry, G: GroupSpec) -> bool:
    if g.space != G.space:
        raise SpaceMismatch("element and group live on different spaces")
    if G.tag == "O":
        return True
    if not g.space.odd:
        return dickson_parity(g) == 0
    d = 0 if g.det() == 1 else 1
    if G.tag == "SO":
        return d == 0
    t = spinor_norm(g).value
    return bool(_labels_ok(G.tag, True, d, t))


def element_labels(g: Isometry) -> tuple[int, int]:
    """(det bit, spinor-norm bit); in characteristic 2 both are the rank parity."""
    if not g.space.odd:
        p = dickson_parity(g)
        return p, p
    return (0 if g.det() == 1 else 1), spinor_norm(g).value


def _projective_lines(F: Field, n: int):
    """Vectors whose first nonzero coordinate is 1, in lexicographic order."""
    for lead in range(n):
        for tail in product(range(F.q), repeat=n - lead - 1):
            v = np.zeros(n, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = tail
            yield v


def reflection_vectors(S: QuadSpace) -> np.ndarray:
    """One anisotropic vector per projective line, as rows."""
    rows = [v for v in _projective_lines(S.field, S.n)]
    if not rows:
        return np.zeros((0, S.n), dtype=np.int64)
    V = np.array(rows, dtype=np.int64)
    return V[S.Q_many(V.T) != 0]


def reflections(S: QuadSpace):
    for v in reflection_vectors(S):
        yield Isometry(S, reflection_matrix(S, v), check=False)


# enumeration -------------------------------------------------------------------


class _Keyer:
    """Packs matrices into integer keys (int64 when they fit, else Python ints)."""

    def __init__(self, q: int, n: int):
        self.q, self.n = q, n
        self.small = n * n * math.log2(q) < 62
        if self.small:
            self.powers = np.array([q**i for i in range(n * n)], dtype=np.int64)

    def keys(self, M: np.ndarray) -> np.ndarray:
        flat = np.asarray(M, dtype=np.int64).reshape(-1, self.n * self.n)
        if self.small:
            return flat @ self.powers
        return np.array([int.from_bytes(r.astype(np.uint8).tobytes(), "little") for r in flat], dtype=object)


def _expand(F: Field, frontier: np.ndarray, gens: list[np.ndarray], threads: int) -> np.ndarray:
    """All products frontier[j] @ gens[i], ordered element-major."""

    def work(block):
        out = np.stack([F.matmul(block, g) for g in gens], axis=1)
        return out.reshape(-1, *block.shape[1:])

    if threads <= 1 or frontier.shape[0] < 256:
        return work(frontier)
    parts = np.array_split(frontier, threads)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        res = list(ex.map(work, parts))
    return np.concatenate(res)


def closure(F: Field, n: int, gens: list[np.ndarray], cap: int | None = None, labels=None,
            threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Breadth-first closure of the group generated by ``gens``.

    ``labels`` optionally assigns each generator an int bitmask; element
    labels are XORs along the search tree (valid when the labels define a
    homomorphism to an elementary abelian 2-group).  Returns (elements,
    labels) with elements in discovery order.
    """
    keyer = _Keyer(F.q, n)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    glab = np.zeros(len(gens), dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
    I = np.eye(n, dtype=np.int64)[None]
    elems = [I]
    labs = [np.zeros(1, dtype=np.int64)]
    seen = np.sort(keyer.keys(I))
    frontier, flab = I, labs[0]
    total = 1
    ng = len(gens)
    while frontier.shape[0] and ng:
        cand = _expand(F, frontier, gens, threads)
        clab = (flab[:, None] ^ glab[None, :]).reshape(-1)
        ck = keyer.keys(cand)
        _, first = np.unique(ck, return_index=True)
        first.sort()
        fresh = first[~np.isin(ck[first], seen)]
        frontier, flab = cand[fresh], clab[fresh]
        if fresh.size:
            elems.append(frontier)
            labs.append(flab)
            seen = np.sort(np.concatenate([seen, ck[fresh]]))
            total += fresh.size
            if cap is not None and total > cap:
                raise GroupTooLarge(total, cap)
    return np.concatenate(elems), np.concatenate(labs)


class MatrixGroup:
    """A fully enumerated group of isometries; elements stored as an (N, n, n) array.

    For POmega the stored matrices are canonical representatives of the
    cosets gZ (the one with the smaller key).
    """

    def __init__(self, spec: GroupSpec, elems: np.ndarray, labels: np.ndarray, gens=None):
        self.spec = spec
        self.space = spec.space
        self.field = spec.space.field
        self.n = spec.space.n
        self.elems = np.ascontiguousarray(elems, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.gens = gens
        self.projective = spec.tag == "POmega" and len(spec.center()) > 1
        self._keyer = _Keyer(self.field.q, self.n)
        keys = self.canonical_keys(self.elems)
        self._order = np.argsort(keys, kind="stable")
        self._sorted = keys[self._order]

    def __len__(self) -> int:
        return self.elems.shape[0]

    def canonical_keys(self, M: np.ndarray) -> np.ndarray:
        k = self._keyer.keys(M)
        if self.projective:
            k2 = self._keyer.keys(self.field.vneg(np.asarray(M)))
            k = np.minimum(k, k2) if self._keyer.small else np.array([min(a, b) for a, b in zip(k, k2)], dtype=object)
        return k

    def find(self, M: np.ndarray) -> np.ndarray:
        """Indices of the matrices in M (stack), -1 where absent."""
        M = np.asarray(M, dtype=np.int64)
        if M.ndim == 2:
            M = M[None]
        k = self.canonical_keys(M)
        pos = np.searchsorted(self._sorted, k)
        pos = np.minimum(pos, len(self._sorted) - 1)
        hit = self._sorted[pos] == k
        return np.where(hit, self._order[pos], -1)

    def index(self, g) -> int:
        m = g.matrix if isinstance(g, Isometry) else g
        return int(self.find(m)[0])

    def __contains__(self, g) -> bool:
        return self.index(g) >= 0

    def element(self, i: int) -> Isometry:
        return Isometry(self.space, self.elems[i], check=False)

    def __iter__(self):
        for i in range(len(self)):
            yield self.element(i)

    def identity_index(self) -> int:
        return self.index(np.eye(self.n, dtype=np.int64))

    def inverses(self) -> np.ndarray:
        """Index of the inverse of each element, computed as B^-1 g^T B."""
        F = self.field
        B = self.space.gram
        Binv = la.inverse(F, B)
        inv = F.matmul(F.matmul(Binv, np.swapaxes(self.elems, 1, 2)), B)
        return self.find(inv)

    def right_perm(self, g: np.ndarray) -> np.ndarray:
        """Permutation i -> index(elems[i] @ g)."""
        return self.find(self.field.matmul(self.elems, np.asarray(g, dtype=np.int64)))


_O_CACHE: dict = {}


def _brute_force_O(S: QuadSpace) -> np.ndarray:
    F = S.field
    n = S.n
    out = []
    total = F.q ** (n * n)
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        M = np.empty((idx.size, n * n), dtype=np.int64)
        for j in range(n * n):
            M[:, j] = idx % F.q
            idx = idx // F.q
        M = M.reshape(-1, n, n)
        out.append(M[S.is_isometry_batch(M)])
    return np.concatenate(out)


def _labels_of(S: QuadSpace, elems: np.ndarray) -> np.ndarray:
    F = S.field
    if not S.odd and F.k == 1:
        I = np.eye(S.n, dtype=np.int64)
        par = batch_rank(F.p, F.vsub(elems, I)) % 2
        return par | (par << 1)
    out = np.zeros(elems.shape[0], dtype=np.int64)
    for i, m in enumerate(elems):
        d, t = element_labels(Isometry(S, m, check=False))
        out[i] = d | (t << 1)
    return out


def _enumerate_O(S: QuadSpace, threads: int = 1) -> MatrixGroup:
    key = (S, "O")
    if key in _O_CACHE:
        return _O_CACHE[key]
    F = S.field
    target = _order_O(S)
    vecs = reflection_vectors(S)
    rng = random.Random(0)
    perm = list(range(len(vecs)))
    rng.shuffle(perm)
    vecs = vecs[perm]
    k = min(len(vecs), S.n + 2)
    elems = None
    while True:
        gens = [reflection_matrix(S, v) for v in vecs[:k]]
        if S.odd:
            glab = [1 | ((square_class(F, S.Q(v)).value) << 1) for v in vecs[:k]]
        else:
            glab = [3] * k
        elems, labs = closure(F, S.n, gens, labels=glab, threads=threads)
        if elems.shape[0] == target or k == len(vecs):
            break
        k = min(len(vecs), 2 * k)
    if elems.shape[0] != target:
        # reflections do not generate O (this happens for O+(4,2))
        if S.n * S.n * math.log2(F.q) > _BRUTE_BITS:
            raise RuntimeError(f"reflections generate a proper subgroup of O and brute force is too large ({S!r})")
        elems = _brute_force_O(S)
        labs = _labels_of(S, elems)
        gens = None
    grp = MatrixGroup(GroupSpec("O", S), elems, labs, gens=gens)
    _O_CACHE[key] = grp
    return grp


def enumerate_group(G: GroupSpec, cap: int | None = None, threads: int | None = None) -> MatrixGroup:
    """All elements of G, after checking the closed-form order against ``cap``."""
    cap = resolve_cap(cap, DEFAULT_ENUM_CAP)
    full_order = _order_O(G.space)
    if full_order > cap:
        raise GroupTooLarge(G.order() if G.tag == "O" else full_order, cap)
    full = _enumerate_O(G.space, threads=_THREADS if threads is None else threads)
    if G.tag == "O":
        return full
    odd = G.space.odd
    d = full.labels & 1
    t = (full.labels >> 1) & 1
    mask = _labels_ok(G.tag, odd, d, t)
    elems, labs = full.elems[mask], full.labels[mask]
    if G.tag == "POmega" and len(G.center()) > 1:
        keyer = _Keyer(G.space.q, G.space.n)
        k1 = keyer.keys(elems)
        k2 = keyer.keys(G.space.field.vneg(elems))
        keep = k1 < k2
        elems, labs = elems[keep], labs[keep]
    return MatrixGroup(G, elems, labs)


def derived_subgroup(grp: MatrixGroup) -> np.ndarray:
    """Elements of [G, G] as the normal closure of generator commutators (independent oracle)."""
    F, n = grp.field, grp.n
    gens = grp.gens
    if gens is None:
        gens = [grp.elems[i] for i in random.Random(1).sample(range(len(grp)), min(8, len(grp)))]
    inv = [la.inverse(F, g) for g in gens]
    I = np.eye(n, dtype=np.int64)
    cgens = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = F.matmul(F.matmul(gens[i], gens[j]), F.matmul(inv[i], inv[j]))
            if not np.array_equal(c, I):
                cgens.append(c)
    while True:
        H, _ = closure(F, n, cgens)
        keyer = _Keyer(F.q, n)
        hk = set(keyer.keys(H).tolist())
        added = False
        for c in list(cgens):
            for g, gi in zip(gens, inv):
                y = F.matmul(F.matmul(g, c), gi)
                if keyer.keys(y[None])[0] not in hk:
                    cgens.append(y)
                    added = True
                    break
            if added:
                break
        if not added:
            return H


def random_element(G: GroupSpec, rng: random.Random, max_tries: int = 1000) -> Isometry:
    """A random element of G: a random product of reflections, rejected until it lies in G."""
    S = G.space
    F = S.field
    n = S.n
    for _ in range(max_tries):
        g = np.eye(n, dtype=np.int64)
        length = rng.randint(2 * n, 3 * n + 1)
        for _ in range(length):
            while True:
                v = np.array([rng.randrange(F.q) for _ in range(n)], dtype=np.int64)
                if v.any() and S.Q(v) != 0:
                    break
            g = F.matmul(g, reflection_matrix(S, v))
        iso = Isometry(S, g, check=False)
        if member(iso, G):
            return iso
    raise RuntimeError("could not sample an element of the group")
