"""Deciding real, strongly real and weakly real elements.

Two exact search strategies are provided.

``naive``
    enumerate every linear combination of a basis of the twisted centralizer
    {X : X g = T X} (T = +-g^-1) and keep the isometries.

``structured``
    treat X as an isomorphism of F_q[t]-modules.  The decomposition of g
    supplies cyclic generators v_a with annihilators f_a^e_a, and X is fixed
    by the images w_a = X v_a, which must lie in ker f_a^e_a(T).  The
    isometry conditions B(T^i w_a, T^j w_b) = B(g^i v_a, g^j v_b) are
    quadratic in w_a when a = b (scanned by the compiled kernel) and linear
    in w_a once w_b is fixed (filtered by backtracking).  Generators are
    grouped into clusters of primary components stable under the pairing
    f -> f* (and f -> f(-t) for the -g^-1 target).  X splits as an orthogonal
    sum over clusters, so det, spinor norm and X^2 are assembled from
    per-cluster signatures by a small product over clusters.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._kernels_py import _coeff_block
from .algebra import linalg as la
from .algebra.poly import reciprocal
from .decomp import decompose, krylov, strongly_real_sufficient
from .errors import SearchTooLarge, WrongAmbient
from .forms import restrict
from .ogroup import (
    GroupSpec, Isometry, MatrixGroup, _enumerate_O, _labels_ok, closure, element_labels,
    enumerate_group, member, random_element, resolve_cap,
)

__all__ = [
    "TwistedCentralizerSpace", "twisted_centralizer", "RealityVerdict", "decide_reality",
    "structural_real_so", "conjugator_signatures", "conjugacy_classes", "ClassInfo", "ClassReport",
    "census", "sampled_census", "DEFAULT_SEARCH_CAP",
]

DEFAULT_SEARCH_CAP = 2 * 10**8
NAIVE_LIMIT = 200_000
_BATCH = 1 << 14


# ---------------------------------------------------------------------------
# twisted centralizer


@dataclass
class TwistedCentralizerSpace:
    g: Isometry
    sign: int
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> np.ndarray:
        F = self.g.field
        n = self.g.n
        if not self.basis:
            return np.zeros((n, n), dtype=np.int64)
        stack = np.stack([b.reshape(-1) for b in self.basis])
        return F.matmul(np.asarray(coeffs, dtype=np.int64), stack).reshape(n, n)

    def to_dict(self) -> dict:
        return {"sign": self.sign, "dim": self.dim, "basis": [b.tolist() for b in self.basis]}


def _target(g: Isometry, sign: int) -> np.ndarray:
    F = g.field
    gi = g.inverse().matrix
    return gi if sign == 1 else F.vneg(gi)


def _solution_basis(F, A: np.ndarray, T: np.ndarray) -> list:
    """Basis of {X : X A = T X}, using row-major vec(X)."""
    n = A.shape[0]
    I = np.eye(n, dtype=np.int64)
    M = F.vsub(np.kron(I, A.T), np.kron(T, I))
    N = la.nullspace(F, M)
    return [N[:, j].reshape(n, n).copy() for j in range(N.shape[1])]


def twisted_centralizer(g: Isometry, sign: int = 1) -> TwistedCentralizerSpace:
    """Kernel of X -> X g - sign * g^-1 X."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return TwistedCentralizerSpace(g, sign, _solution_basis(g.field, g.matrix, _target(g, sign)))


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class RealityVerdict:
    group: str
    is_real: bool
    is_strongly_real: bool
    certificate: np.ndarray | None = None
    involution: np.ndarray | None = None
    projective: bool = False
    is_real_mod_z: bool | None = None
    is_strongly_real_mod_z: bool | None = None
    certificate_mod_z: np.ndarray | None = None
    involution_mod_z: np.ndarray | None = None
    search_cost: int = 0
    method: str = ""
    dims: dict = field(default_factory=dict)

    @property
    def is_weakly_real(self) -> bool:
        return self.is_real and not self.is_strongly_real

    @property
    def is_weakly_real_mod_z(self) -> bool | None:
        if not self.projective:
            return None
        return bool(self.is_real_mod_z and not self.is_strongly_real_mod_z)

    def to_dict(self) -> dict:
        def m(x):
            return None if x is None else np.asarray(x).tolist()

        d = {
            "group": self.group,
            "is_real": self.is_real,
            "is_strongly_real": self.is_strongly_real,
            "is_weakly_real": self.is_weakly_real,
            "certificate": m(self.certificate),
            "involution": m(self.involution),
            "search_cost": self.search_cost,
            "method": self.method,
            "twisted_centralizer_dims": {str(k): v for k, v in self.dims.items()},
        }
        if self.projective:
            d.update({
                "is_real_mod_z": self.is_real_mod_z,
                "is_strongly_real_mod_z": self.is_strongly_real_mod_z,
                "is_weakly_real_mod_z": self.is_weakly_real_mod_z,
                "certificate_mod_z": m(self.certificate_mod_z),
                "involution_mod_z": m(self.involution_mod_z),
            })
        return d


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, k: int, d: int = 0, q: int = 0) -> None:
        self.used += k
        if self.used > self.cap:
            raise SearchTooLarge(d, q**d if q else self.used, self.cap, self.used)


def _square_type(F, M: np.ndarray) -> str:
    k = M.shape[0]
    I = np.eye(k, dtype=np.int64)
    M2 = F.matmul(M, M)
    if np.array_equal(M2, I):
        return "I"
    if np.array_equal(M2, F.vneg(I)):
        return "-I"
    return "X"


def _combine_sq(a: str, b: str) -> str:
    return a if a == b and a != "X" else "X"


# ---------------------------------------------------------------------------
# naive enumeration


def _naive_states(g: Isometry, T: np.ndarray, budget: _Budget, done) -> dict:
    """{(det bit, theta bit, square type): X} over all isometries X with X g = T X."""
    S = g.space
    F = S.field
    n = g.n
    basis = _solution_basis(F, g.matrix, T)
    d = len(basis)
    total = F.q**d
    if budget.used + total > budget.cap:
        raise SearchTooLarge(d, total, budget.cap)
    states: dict = {}
    if d == 0:
        return states
    stack = np.stack([b.reshape(-1) for b in basis])
    for start in range(0, total, _BATCH):
        stop = min(total, start + _BATCH)
        budget.spend(stop - start, d, F.q)
        C = _coeff_block(F.q, d, start, stop)
        X = F.matmul(C, stack).reshape(-1, n, n)
        ok = S.is_isometry_batch(X)
        for M in X[ok]:
            dbit, tbit = element_labels(Isometry(S, M, check=False))
            key = (dbit, tbit, _square_type(F, M))
            states.setdefault(key, M.copy())
        if done(states):
            break
    return states


# ---------------------------------------------------------------------------
# structured search


def _cluster_key(f, twisted: bool):
    orbit = {f, reciprocal(f)}
    if twisted:
        for h in list(orbit):
            r = h.compose_neg().monic()
            orbit.update({r, reciprocal(r)})
    return min(orbit, key=lambda h: h.sort_key())


def _filter_linear(F, cand: np.ndarray, R: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Mask of rows w of cand with w . R[:, k] == targets[k]."""
    if R.shape[1] == 0:
        return np.ones(cand.shape[0], dtype=bool)
    if F.k == 1:
        return kernels.filter_bilinear(F.p, R.T % F.p, cand % F.p, targets % F.p)
    vals = F.matmul(cand, R)
    return np.all(vals == targets[None, :], axis=1)


class _Structured:
    def __init__(self, g: Isometry, T: np.ndarray, twisted: bool, budget: _Budget):
        self.g = g
        self.S = g.space
        self.F = g.space.field
        self.T = T
        self.budget = budget
        F, S = self.F, self.S
        dec = decompose(g)
        gens = []
        for b in dec.blocks:
            for v, (f, e) in zip(b.generators, b.divisors):
                gens.append((np.asarray(v, dtype=np.int64), f, e, f.degree * e))
        self.gens = gens
        A = g.matrix
        self.K = np.hstack([krylov(F, A, v, L) for v, _, _, L in gens])
        self.Kinv = la.inverse(F, self.K)
        offs = np.cumsum([0] + [L for *_, L in gens])
        self.cols = [list(range(offs[i], offs[i + 1])) for i in range(len(gens))]
        Lmax = max(L for *_, L in gens)
        Tinv = la.inverse(F, T)
        ginv = g.inverse().matrix
        self.Tp = {0: np.eye(g.n, dtype=np.int64)}
        self.gp = {0: np.eye(g.n, dtype=np.int64)}
        for k in range(1, Lmax):
            self.Tp[k] = F.matmul(T, self.Tp[k - 1])
            self.Tp[-k] = F.matmul(Tinv, self.Tp[-k + 1])
            self.gp[k] = F.matmul(A, self.gp[k - 1])
            self.gp[-k] = F.matmul(ginv, self.gp[-k + 1])
        clusters: dict = {}
        for i, (_, f, _, _) in enumerate(gens):
            clusters.setdefault(_cluster_key(f, twisted), []).append(i)
        self.clusters = list(clusters.values())

    def _scan(self, a: int) -> np.ndarray:
        """Images w for generator a satisfying its own isometry conditions (rows)."""
        F, S = self.F, self.S
        v, f, e, L = self.gens[a]
        Ka = la.nullspace(F, la.poly_eval_matrix(F, f**e, self.T))
        k = Ka.shape[1]
        if k == 0:
            return np.zeros((0, self.g.n), dtype=np.int64)
        self.budget.spend(F.q**k, k, F.q)
        forms, targets = [], []
        if S.odd:
            forms.append(F.matmul(F.matmul(Ka.T, S.gram), Ka))
            targets.append(int(S.gram_of(v[:, None])[0, 0]))
        else:
            forms.append(F.matmul(F.matmul(Ka.T, S.quad), Ka))
            targets.append(int(S.Q(v)))
        for j in range(1, L):
            forms.append(F.matmul(F.matmul(Ka.T, S.gram), F.matmul(self.Tp[j], Ka)))
            targets.append(int(S.gram_of(v[:, None], F.matmul(self.gp[j], v)[:, None])[0, 0]))
        C = kernels.scan_quadratic_field(F, np.array(forms), np.array(targets, dtype=np.int64), F.q**k)
        if C.shape[0] == 0:
            return np.zeros((0, self.g.n), dtype=np.int64)
        return F.matmul(C, Ka.T)

    def cluster_signatures(self, idx: list) -> dict:
        """{(det bit, theta bit, square type): {generator: w}} for one cluster."""
        F, S = self.F, self.S
        order_cols = [c for a in idx for c in self.cols[a]]
        Kc = self.K[:, order_cols]
        Lc = self.Kinv[order_cols, :]
        Sc = restrict(S, Kc)
        cands = {a: self._scan(a) for a in idx}
        order = sorted(idx, key=lambda a: cands[a].shape[0])
        if any(cands[a].shape[0] == 0 for a in idx):
            return {}
        sigs: dict = {}
        full = 12 if S.odd else 4
        B = S.gram

        def leaf(chosen: dict) -> None:
            Wc = np.hstack([krylov(F, self.T, chosen[a], self.gens[a][3]) for a in idx])
            M = F.matmul(Lc, Wc)
            dbit, tbit = element_labels(Isometry(Sc, M, check=False))
            sigs.setdefault((dbit, tbit, _square_type(F, M)), dict(chosen))

        def rec(pos: int, chosen: dict) -> bool:
            if pos == len(order):
                leaf(chosen)
                return len(sigs) >= full
            a = order[pos]
            va, _, _, La = self.gens[a]
            cand = cands[a]
            if chosen:
                cols, targs = [], []
                for b, wb in chosen.items():
                    vb, _, _, Lb = self.gens[b]
                    for k in range(-(La - 1), Lb):
                        cols.append(F.matmul(B, F.matmul(self.Tp[k], wb)))
                        targs.append(int(F.vsum(F.vmul(va, F.matmul(B, F.matmul(self.gp[k], vb))))))
                R = np.stack(cols, axis=1)
                cand = cand[_filter_linear(F, cand, R, np.array(targs, dtype=np.int64))]
            self.budget.spend(cand.shape[0])
            for w in cand:
                chosen[a] = w
                if rec(pos + 1, chosen):
                    return True
                del chosen[a]
            return False

        rec(0, {})
        return sigs

    def states(self) -> dict:
        """Combine per-cluster signatures into global states with assembled certificates."""
        F, n = self.F, self.g.n
        states = {(0, 0, "I"): {}}
        for idx in self.clusters:
            sigs = self.cluster_signatures(idx)
            new = {}
            for (d1, t1, s1), w1 in states.items():
                for (d2, t2, s2), w2 in sigs.items():
                    key = (d1 ^ d2, t1 ^ t2, _combine_sq(s1, s2))
                    if key not in new:
                        new[key] = {**w1, **w2}
            states = new
            if not states:
                return {}
        out = {}
        for key, ws in states.items():
            W = np.hstack([krylov(F, self.T, ws[a], self.gens[a][3]) for a in range(len(self.gens))])
            out[key] = F.matmul(W, self.Kinv)
        return out


# ---------------------------------------------------------------------------
# driver


def _branch_states(g: Isometry, T: np.ndarray, twisted: bool, method: str, budget: _Budget, done) -> dict:
    F = g.field
    if la.elementary_divisors(F, T) != la.elementary_divisors(F, g.matrix):
        return {}
    if method == "naive":
        return _naive_states(g, T, budget, done)
    return _Structured(g, T, twisted, budget).states()


def conjugator_signatures(g: Isometry, target=None, cap: int | None = None, method: str = "structured") -> dict:
    """Every (det bit, spinor bit, square type) realised by an isometry X with X g X^-1 = target.

    ``target`` defaults to g^-1; pass g itself for the centralizer.  Square
    types are "I", "-I" or "X".  Values are sample witnesses.
    """
    F = g.field
    T = g.inverse().matrix if target is None else np.asarray(target, dtype=np.int64)
    twisted = np.array_equal(T, F.vneg(g.inverse().matrix)) and g.space.odd
    budget = _Budget(DEFAULT_SEARCH_CAP if cap is None else cap)
    return _branch_states(g, T, twisted, method, budget, lambda s: False)


def _verify(g: Isometry, G: GroupSpec, T: np.ndarray, X: np.ndarray) -> None:
    F = g.field
    if not g.space.is_isometry(X):
        raise AssertionError("certificate is not an isometry")
    if not np.array_equal(F.matmul(X, g.matrix), F.matmul(T, X)):
        raise AssertionError("certificate does not conjugate g to the target")
    if not member(Isometry(g.space, X, check=False), _membership_spec(G)):
        raise AssertionError("certificate is not in the group")


def _membership_spec(G: GroupSpec) -> GroupSpec:
    return GroupSpec("Omega", G.space) if G.tag == "POmega" else G


def decide_reality(g: Isometry, G: GroupSpec, projective: bool = False, cap: int | None = None,
                   method: str = "auto") -> RealityVerdict:
    """Is g conjugate to its inverse in G, and by an involution?

    With ``projective`` (forced for POmega) the targets are g^-1 and -g^-1,
    and strong reality mod Z asks for X^2 in Z = {+-I} intersected with G.
    ``method`` is "naive", "structured" or "auto" (naive when the twisted
    centralizer has at most NAIVE_LIMIT points).
    """
    if g.space != G.space:
        from .errors import SpaceMismatch

        raise SpaceMismatch("element and group live on different spaces")
    cap = DEFAULT_SEARCH_CAP if cap is None else cap
    F, S, n = g.field, g.space, g.n
    spec = _membership_spec(G)
    odd = S.odd
    projective = projective or G.tag == "POmega"
    minus_I = F.vneg(np.eye(n, dtype=np.int64))
    z_nontrivial = odd and member(Isometry(S, minus_I, check=False), spec)
    zsq = {"I", "-I"} if z_nontrivial else {"I"}
    budget = _Budget(cap)

    def ok(key) -> bool:
        return bool(_labels_ok(spec.tag, odd, key[0], key[1]))

    branches = [1] + ([-1] if projective and z_nontrivial else [])
    dims = {}
    results = {}
    g2 = F.matmul(g.matrix, g.matrix)
    if np.array_equal(g2, np.eye(n, dtype=np.int64)):
        lab = element_labels(g)
        results[1] = {(lab[0], lab[1], "I"): g.matrix.copy()}
        budget.used = 1
        chosen = "involution"
    else:
        chosen = method
        for s in branches:
            T = _target(g, s)
            m = method
            if m == "auto":
                d = len(_solution_basis(F, g.matrix, T))
                dims[s] = d
                m = "naive" if F.q**d <= NAIVE_LIMIT else "structured"
            chosen = m if chosen in ("auto", m) else "mixed"
            want = zsq if s == -1 else {"I"}

            def done(states, want=want):
                return any(ok(k) and k[2] in want for k in states)

            results[s] = _branch_states(g, T, s == -1, m, budget, done)

    plus = results.get(1, {})
    minus = results.get(-1, {})

    def pick(states, sqs=None):
        for k, X in sorted(states.items(), key=lambda kv: kv[0][2] != "I"):
            if ok(k) and (sqs is None or k[2] in sqs):
                return X
        return None

    cert = pick(plus)
    inv = pick(plus, {"I"})
    v = RealityVerdict(spec.name() if G.tag != "POmega" else G.name(), cert is not None, inv is not None,
                       cert, inv, projective, search_cost=budget.used, method=chosen, dims=dims)
    gi = g.inverse().matrix
    for X in (cert, inv):
        if X is not None:
            _verify(g, G, gi, X)
    if projective:
        c1, c2 = pick(plus), pick(minus)
        i1, i2 = pick(plus, zsq), pick(minus, zsq)
        v.certificate_mod_z = c1 if c1 is not None else c2
        v.involution_mod_z = i1 if i1 is not None else i2
        v.is_real_mod_z = v.certificate_mod_z is not None
        v.is_strongly_real_mod_z = v.involution_mod_z is not None
        if c2 is not None:
            _verify(g, G, F.vneg(gi), c2)
    return v


def structural_real_so(g: Isometry) -> bool:
    """Reality in SO(4m+2, q), q odd: some elementary divisor (t +- 1)^e with e odd."""
    S = g.space
    if not S.odd or S.n % 4 != 2:
        raise WrongAmbient("needs odd q and n = 2 mod 4")
    if g.det() != 1:
        raise WrongAmbient("element is not in SO")
    F = g.field
    for f, e in la.elementary_divisors(F, g.matrix):
        if f.degree == 1 and f[0] in (1, F.neg(1)) and e % 2 == 1:
            return True
    return False


# ---------------------------------------------------------------------------
# census


@dataclass
class ClassInfo:
    rep: np.ndarray
    size: int
    real: bool
    strongly_real: bool
    scan_real: bool
    scan_strongly_real: bool
    extra: dict = field(default_factory=dict)

    @property
    def weakly_real(self) -> bool:
        return self.real and not self.strongly_real

    def to_dict(self) -> dict:
        return {"rep": self.rep.tolist(), "size": self.size, "real": self.real,
                "strongly_real": self.strongly_real, "weakly_real": self.weakly_real,
                "scan_real": self.scan_real, "scan_strongly_real": self.scan_strongly_real, **self.extra}


@dataclass
class ClassReport:
    group: str
    order: int
    classes: list
    checks: list
    sampled: bool = False

    @property
    def n_real(self) -> int:
        return sum(c.real for c in self.classes)

    @property
    def n_strongly_real(self) -> int:
        return sum(c.strongly_real for c in self.classes)

    def to_dict(self) -> dict:
        return {"group": self.group, "order": self.order, "sampled": self.sampled,
                "n_classes": len(self.classes), "n_real": self.n_real,
                "n_strongly_real": self.n_strongly_real,
                "classes": [c.to_dict() for c in self.classes], "checks": self.checks}


def _generators(grp: MatrixGroup, order: int, seed: int = 0) -> list:
    """A few random elements that generate the whole group."""
    rng = random.Random(seed)
    F, n = grp.field, grp.n
    gens: list = []
    while True:
        gens.append(grp.elems[rng.randrange(len(grp))])
        if len(gens) < 2:
            continue
        H, _ = closure(F, n, gens)
        if H.shape[0] >= order:
            return gens


def _classes(grp: MatrixGroup, gens: list) -> np.ndarray:
    """Class id per element (union-find over conjugation by the generators)."""
    F = grp.field
    N = len(grp)
    parent = np.arange(N)

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in gens:
        si = la.inverse(F, s)
        conj = grp.find(F.matmul(F.matmul(s, grp.elems), si))
        for i, j in enumerate(conj.tolist()):
            a, b = root(i), root(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return np.array([root(i) for i in range(N)])


def _scan_strong(grp: MatrixGroup, reps: list, cls: np.ndarray, inv: np.ndarray) -> list:
    """Group-scan strong reality: an involution s in G with s r s = r^-1 (mod Z when projective)."""
    F = grp.field
    n = grp.n
    sq = grp.find(F.matmul(grp.elems, grp.elems))
    invols = grp.elems[sq == grp.identity_index()]
    out = []
    for r in reps:
        conj = grp.find(F.matmul(F.matmul(invols, grp.elems[r]), invols))
        out.append(bool(np.any(conj == inv[r])))
    return out


def _theorem_checks(G: GroupSpec, classes: list, grp: MatrixGroup, reps_idx: list) -> list:
    S = G.space
    q, n = S.q, S.n
    odd = S.odd
    sign = 0
    if n % 2 == 0:
        from .forms import form_type

        sign = form_type(S).sign
    all_real = all(c.real for c in classes)
    all_sr = all(c.strongly_real for c in classes)
    real_imp_sr = all(c.strongly_real for c in classes if c.real)
    checks = []

    def add(name, expected, observed):
        checks.append({"name": name, "expected": expected, "observed": observed, "holds": expected == observed})

    small_ok = not (q == 3 and n < 6)
    if odd and G.tag == "O" and n >= 2:
        add("O strongly real", True, all_sr)
    if odd and G.tag == "SO" and n >= 3:
        add("SO real iff n != 2 mod 4", n % 4 != 2, all_real)
        add("SO strongly real iff real", all_real, all_sr)
    if odd and G.tag == "K" and n >= 3 and small_ok:
        exp = (q % 4 == 1 or n in (8, 9)
               or (sign == 1 and n % 4 == 2) or (n % 4 == 3 and _odd_type(S) == 1)
               or (sign == -1 and n % 4 == 0) or (n % 4 == 1 and _odd_type(S) == -1))
        add("K strongly real classification", exp, all_sr)
    if odd and G.tag == "Omega" and n >= 3 and small_ok:
        exp = (q % 4 == 1 and n % 4 != 2) or (q % 4 == 3 and sign == -1 and n % 4 == 0) or n in (8, 9)
        add("Omega strongly real classification", exp, all_sr)
    if odd and G.tag == "Omega" and n % 4 == 2 and (
            (sign == -1 and q % 4 == 1) or (sign == 1 and q % 4 == 3)):
        add("real classes strongly real (Omega, 4m+2)", True, real_imp_sr)
    if odd and G.tag in ("Omega", "POmega") and n % 4 == 2 and sign == 1 and q % 4 == 1:
        add("real classes strongly real (Omega+/POmega+, q = 1 mod 4)", True, real_imp_sr)
    if not odd and G.tag == "Omega" and n % 4 == 2:
        pred = [c.extra.get("predicate") for c in classes]
        add("char 2 strong reality predicate", True,
            all(p == c.strongly_real for p, c in zip(pred, classes)))
        add("inverting involution outside Omega", True, all(c.extra.get("outer_involution") for c in classes))
    return checks


def _odd_type(S) -> int:
    """Type label used for odd n: +1 if the discriminant class is trivial."""
    from .forms import discriminant
    from .algebra.field import SquareClass

    return 1 if discriminant(S) is SquareClass.TRIVIAL else -1


def _outer_involutions(G: GroupSpec) -> np.ndarray:
    full = _enumerate_O(G.space)
    F = full.field
    sq = full.find(F.matmul(full.elems, full.elems))
    inv = sq == full.identity_index()
    outside = full.labels & 1 == 1
    return full.elems[inv & outside]


def conjugacy_classes(grp: MatrixGroup, cap: int | None = None, seed: int = 0):
    """(class id per element, representative indices, class sizes); ids are 0..r-1 in rep order."""
    G = grp.spec
    if G.tag == "POmega":
        om = GroupSpec("Omega", G.space)
        base, order = enumerate_group(om, cap), om.order()
    else:
        base, order = grp, G.order()
    gens = _generators(base, order, seed)
    roots = _classes(grp, gens)
    uniq, sizes = np.unique(roots, return_counts=True)
    keys = grp.canonical_keys(grp.elems)
    reps = []
    for r in uniq:
        members = np.nonzero(roots == r)[0]
        reps.append(int(members[np.argmin(keys[members])]) if grp._keyer.small else int(members[0]))
    cls = np.searchsorted(uniq, roots)
    return cls, reps, sizes


def census(G: GroupSpec, cap: int | None = None, search_cap: int | None = None, seed: int = 0) -> ClassReport:
    """All conjugacy classes of G with reality labels and theorem checks."""
    grp = enumerate_group(G, cap)
    F = grp.field
    cls, reps, sizes = conjugacy_classes(grp, cap, seed)
    inv = grp.inverses()
    scan_real = [bool(cls[inv[r]] == cls[r]) for r in reps]
    scan_sr = _scan_strong(grp, reps, cls, inv)
    outer = _outer_involutions(G) if (not G.space.odd and G.space.n % 4 == 2 and G.tag == "Omega") else None
    classes = []
    for r, size, sr_, ss_ in zip(reps, sizes, scan_real, scan_sr):
        g = grp.element(r)
        v = decide_reality(g, G, projective=G.tag == "POmega", cap=search_cap)
        real = v.is_real_mod_z if G.tag == "POmega" else v.is_real
        strong = v.is_strongly_real_mod_z if G.tag == "POmega" else v.is_strongly_real
        extra = {"order": _elem_order(F, g.matrix), "search_cost": v.search_cost}
        if outer is not None:
            extra["predicate"] = strongly_real_sufficient(decompose(g)).verdict is True
            conj = F.matmul(F.matmul(outer, g.matrix), outer)
            gi = g.inverse().matrix
            extra["outer_involution"] = bool(np.any(np.all(conj == gi, axis=(1, 2))))
        classes.append(ClassInfo(g.matrix.copy(), int(size), bool(real), bool(strong), sr_, ss_, extra))
    checks = _theorem_checks(G, classes, grp, reps)
    checks.append({"name": "search agrees with group scan", "expected": True,
                   "observed": all(c.real == c.scan_real and c.strongly_real == c.scan_strongly_real
                                   for c in classes),
                   "holds": all(c.real == c.scan_real and c.strongly_real == c.scan_strongly_real
                                for c in classes)})
    return ClassReport(G.name(), len(grp), classes, checks)


def _elem_order(F, A: np.ndarray) -> int:
    I = np.eye(A.shape[0], dtype=np.int64)
    M, k = A, 1
    while not np.array_equal(M, I):
        M = F.matmul(M, A)
        k += 1
    return k


def sampled_census(G: GroupSpec, count: int = 1000, seed: int = 0, search_cap: int | None = None) -> dict:
    """Reality statistics over random elements, for groups too large to enumerate."""
    rng = random.Random(seed)
    n_real = n_sr = 0
    real_not_sr = 0
    for _ in range(count):
        g = random_element(_membership_spec(G), rng)
        v = decide_reality(g, G, projective=G.tag == "POmega", cap=search_cap)
        real = v.is_real_mod_z if G.tag == "POmega" else v.is_real
        strong = v.is_strongly_real_mod_z if G.tag == "POmega" else v.is_strongly_real
        n_real += bool(real)
        n_sr += bool(strong)
        real_not_sr += bool(real and not strong)
    return {"group": G.name(), "sampled": True, "count": count, "seed": seed, "n_real": n_real,
            "n_strongly_real": n_sr, "n_weakly_real": real_not_sr, "n_not_real": count - n_real}
