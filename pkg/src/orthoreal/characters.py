"""Character tables of small matrix groups by Dixon's method.

Class sums act on the centre of the group algebra through the class
multiplication coefficients; their common eigenvectors over a prime field
F_l, l = 1 mod exp(G), are the central characters.  Degrees follow from the
orthogonality relations and exact values in Z[zeta_e] are recovered from
eigenvalue multiplicities, so nothing is ever rounded.

Cyclotomic values are integer vectors in the power basis 1, z, ..., z^(phi(e)-1)
of Q(zeta_e), with zeta_e identified with a fixed primitive e-th root in F_l.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import linalg as la
from .algebra.field import GF, is_prime
from .errors import GroupTooLarge, NotInvolutory
from .ogroup import GroupSpec, MatrixGroup, enumerate_group
from .reality import conjugacy_classes

__all__ = [
    "CharTable", "char_table", "fs_indicator", "twisted_indicator", "weak_index_two_check",
    "lift_check", "cyclotomic_poly", "DEFAULT_TABLE_CAP",
]

DEFAULT_TABLE_CAP = 10**5


# ---------------------------------------------------------------------------
# cyclotomic integers


@lru_cache(maxsize=None)
def cyclotomic_poly(e: int) -> tuple:
    """Integer coefficients of Phi_e, low degree first."""
    num = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            out[k - db] = c
            for i, bi in enumerate(b):
                a[k - db + i] -= c * bi
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return out


def _reduce(vec, e: int) -> tuple:
    """Reduce a length-e exponent vector modulo Phi_e."""
    phi = cyclotomic_poly(e)
    deg = len(phi) - 1
    v = [int(x) for x in vec]
    for k in range(len(v) - 1, deg - 1, -1):
        c = v[k]
        if c:
            for i, pi in enumerate(phi):
                v[k - deg + i] -= c * pi
    return tuple(v[:deg])


def _conj_exponents(vec, e: int) -> list:
    out = [0] * e
    for k, c in enumerate(vec):
        out[(-k) % e] += c
    return out


def _cyc_str(v: tuple) -> str:
    terms = []
    for k, c in enumerate(v):
        if c:
            terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# table


@dataclass
class CharTable:
    group: str
    order: int
    grp: MatrixGroup = field(repr=False)
    cls: np.ndarray = field(repr=False)
    reps: list = field(repr=False)
    sizes: np.ndarray = field(repr=False)
    elem_orders: list = field(default_factory=list)
    power: list = field(default_factory=list, repr=False)
    inverse: list = field(default_factory=list)
    square: list = field(default_factory=list)
    exponent: int = 1
    ell: int = 2
    root: int = 1
    modular: np.ndarray = field(default=None, repr=False)
    values: list = field(default_factory=list, repr=False)
    exponents: list = field(default_factory=list, repr=False)
    degrees: list = field(default_factory=list)
    indicators: list = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def class_of(self, M) -> int:
        idx = self.grp.find(np.asarray(M, dtype=np.int64))
        if idx[0] < 0:
            raise ValueError("matrix is not in the group")
        return int(self.cls[idx[0]])

    def is_real_valued(self, i: int) -> bool:
        e = self.exponent
        return all(_reduce(_conj_exponents(x, e), e) == _reduce(x, e) for x in self.exponents[i])

    def real_classes(self) -> list:
        return [k for k in range(self.n_classes) if self.inverse[k] == k]

    def involution_count(self) -> int:
        """#{g : g^2 = 1} (mod Z for projective groups)."""
        ident = self.cls[self.grp.identity_index()]
        return int(sum(self.sizes[k] for k in range(self.n_classes) if self.square[k] == ident))

    def validate(self) -> dict:
        """Orthogonality relations and the standard counting identities, all exact."""
        L, N = self.ell, self.order
        X = self.modular
        r = self.n_classes
        sizes = np.array(self.sizes, dtype=np.int64) % L
        Xinv = X[:, self.inverse]
        row = (X * sizes[None, :]) % L @ Xinv.T % L
        rows_ok = np.array_equal(row, (np.eye(r, dtype=np.int64) * (N % L)) % L)
        col = X.T @ Xinv % L
        cexp = np.zeros((r, r), dtype=np.int64)
        for k in range(r):
            cexp[k, k] = (N // int(self.sizes[k])) % L
        cols_ok = np.array_equal(col, cexp)
        fs_sum = sum(eps * d for eps, d in zip(self.indicators, self.degrees))
        return {
            "sum_degree_squares": sum(d * d for d in self.degrees) == N,
            "row_orthogonality": bool(rows_ok),
            "column_orthogonality": bool(cols_ok),
            "n_characters_eq_n_classes": len(self.degrees) == r,
            "n_real_valued_eq_n_real_classes":
                sum(self.is_real_valued(i) for i in range(r)) == len(self.real_classes()),
            "fs_count_eq_involutions": fs_sum == self.involution_count(),
            "indicators_in_range": all(x in (-1, 0, 1) for x in self.indicators),
        }

    def to_dict(self, with_values: bool = True) -> dict:
        d = {
            "group": self.group, "order": self.order, "n_classes": self.n_classes,
            "class_sizes": [int(s) for s in self.sizes], "element_orders": self.elem_orders,
            "inverse_class": self.inverse, "square_class": self.square,
            "exponent": self.exponent, "prime": self.ell, "degrees": self.degrees,
            "fs_indicators": self.indicators,
            "class_representatives": [self.grp.elems[i].tolist() for i in self.reps],
            "value_basis": f"powers of z = exp(2 pi i/{self.exponent}) modulo Phi_{self.exponent}",
        }
        if with_values:
            d["values"] = [[list(v) for v in row] for row in self.values]
        return d


def _smallest_prime(e: int, lower: int) -> int:
    ell = e + 1
    while ell <= lower or not is_prime(ell):
        ell += e
    return ell


def _primitive_root(ell: int) -> int:
    m = ell - 1
    fac = [p for p in range(2, m + 1) if m % p == 0 and is_prime(p)]
    for a in range(2, ell):
        if all(pow(a, m // p, ell) != 1 for p in fac):
            return a
    raise ArithmeticError("no primitive root")


def _class_coefficients(grp: MatrixGroup, cls: np.ndarray, reps: list) -> np.ndarray:
    """a[j][i, k] = #{y in C_j : z_k y^-1 in C_i}."""
    F = grp.field
    r = len(reps)
    inv = grp.inverses()
    out = np.zeros((r, r, r), dtype=np.int64)
    Z = grp.elems[reps]
    for j in range(r):
        Y = grp.elems[inv[np.nonzero(cls == j)[0]]]
        for k in range(r):
            idx = grp.find(F.matmul(Z[k], Y))
            out[j, :, k] = np.bincount(cls[idx], minlength=r)
    return out


def _eigen_split(Fl, mats: list, r: int, rng: random.Random) -> list:
    """Common eigenvectors (columns) of the commuting matrices ``mats`` over Fl."""
    L = Fl.p
    spaces = [np.eye(r, dtype=np.int64)]
    done = []
    combos = [None] + list(range(len(mats)))
    tries = 0
    while spaces:
        tries += 1
        if tries > 4 * len(combos) + 20:
            raise ArithmeticError("class algebra did not split")
        c = [rng.randrange(L) for _ in mats]
        M = np.zeros((r, r), dtype=np.int64)
        for ci, A in zip(c, mats):
            M = (M + ci * A) % L
        nxt = []
        for W in spaces:
            if W.shape[1] == 1:
                done.append(W[:, 0])
                continue
            X = la.solve(Fl, W, Fl.matmul(M, W))
            chi = la.charpoly(Fl, X)
            lam = np.arange(L, dtype=np.int64)
            val = np.zeros(L, dtype=np.int64)
            for coef in reversed(chi.coeffs):
                val = (val * lam + coef) % L
            for root in np.nonzero(val == 0)[0]:
                K = la.nullspace(Fl, Fl.vsub(X, (np.eye(X.shape[0], dtype=np.int64) * int(root)) % L))
                nxt.append(Fl.matmul(W, K))
        spaces = nxt
    return done


def char_table(G: GroupSpec, cap: int | None = None, ell: int | None = None, seed: int = 0) -> CharTable:
    """Full character table of G (|G| <= cap)."""
    cap = DEFAULT_TABLE_CAP if cap is None else cap
    if G.order() > cap:
        raise GroupTooLarge(G.order(), cap)
    grp = enumerate_group(G, max(cap, 10**6))
    F = grp.field
    N = len(grp)
    cls, reps, sizes = conjugacy_classes(grp, None, seed)
    r = len(reps)
    ident = grp.identity_index()
    # power maps
    power, orders = [], []
    for i in reps:
        A = grp.elems[i]
        seq = [int(cls[ident])]
        P = A
        while True:
            j = int(grp.find(P)[0])
            if j == ident:
                break
            seq.append(int(cls[j]))
            P = F.matmul(P, A)
        power.append(seq)
        orders.append(len(seq))
    e = math.lcm(*orders)
    inverse = [p[-1] if len(p) > 1 else p[0] for p in power]
    square = [p[2 % len(p)] for p in power]
    L = ell if ell is not None else _smallest_prime(e, 2 * math.isqrt(N) + 2)
    if (L - 1) % e or L <= 2 * math.isqrt(N) + 1:
        raise ValueError(f"prime {L} unsuitable for exponent {e} and order {N}")
    Fl = GF(L)
    coeff = _class_coefficients(grp, cls, reps)
    mats = [coeff[j] % L for j in range(r)]
    vecs = _eigen_split(Fl, mats, r, random.Random(seed))
    id_cls = int(cls[ident])
    sizes_l = [int(s) % L for s in sizes]
    Zroot = pow(_primitive_root(L), (L - 1) // e, L)
    rows = []
    for w in vecs:
        w = (w * pow(int(w[id_cls]), -1, L)) % L
        S = sum(int(w[k]) * int(w[inverse[k]]) * pow(sizes_l[k], -1, L) for k in range(r)) % L
        d2 = (N % L) * pow(S, -1, L) % L
        d = next(x for x in range(1, L // 2 + 1) if x * x % L == d2)
        theta = np.array([int(w[k]) * d * pow(sizes_l[k], -1, L) % L for k in range(r)], dtype=np.int64)
        rows.append((d, theta))
    rows.sort(key=lambda dt: (dt[0], [(-int(x)) % L for x in dt[1]]))
    if rows and rows[0][0] != 1:
        raise ArithmeticError("trivial character missing")
    T = CharTable(G.name(), N, grp, cls, reps, sizes, orders, power, inverse, square, e, L, Zroot)
    T.modular = np.array([t for _, t in rows], dtype=np.int64)
    T.degrees = [d for d, _ in rows]
    for d, theta in rows:
        vals, exps = [], []
        for k in range(r):
            o = orders[k]
            z = pow(Zroot, e // o, L)
            inv_o = pow(o, -1, L)
            vec = [0] * e
            total = 0
            for s_ in range(o):
                m = sum(int(theta[power[k][t]]) * pow(z, (-s_ * t) % o, L) for t in range(o)) * inv_o % L
                if m > d:
                    raise ArithmeticError("eigenvalue multiplicity out of range")
                vec[s_ * (e // o)] += m
                total += m
            if total != d:
                raise ArithmeticError("multiplicities do not add up to the degree")
            exps.append(vec)
            vals.append(_reduce(vec, e))
        T.values.append(vals)
        T.exponents.append(exps)
    T.indicators = [fs_indicator(T, i) for i in range(r)]
    return T


def _to_sign(x: int, L: int) -> int:
    x %= L
    if x == 0:
        return 0
    if x == 1:
        return 1
    if x == L - 1:
        return -1
    raise ArithmeticError(f"indicator value {x} mod {L} is not in {{-1, 0, 1}}")


def fs_indicator(T: CharTable, chi: int) -> int:
    """Frobenius-Schur indicator via the squaring map on classes."""
    L = T.ell
    s = sum(int(T.sizes[k]) % L * int(T.modular[chi, T.square[k]]) for k in range(T.n_classes)) % L
    return _to_sign(s * pow(T.order % L, -1, L), L)


def twisted_indicator(T: CharTable, s, chi: int) -> int:
    """(1/|H|) sum_h chi(h s h s^-1), for s normalising H with s^2 in Z."""
    grp = T.grp
    F = grp.field
    s = np.asarray(s, dtype=np.int64)
    n = grp.n
    s2 = F.matmul(s, s)
    I = np.eye(n, dtype=np.int64)
    if not (np.array_equal(s2, I) or (grp.projective and np.array_equal(s2, F.vneg(I)))):
        raise NotInvolutory("twisting element does not square to the identity")
    sinv = la.inverse(F, s)
    prods = F.matmul(F.matmul(grp.elems, s), F.matmul(grp.elems, sinv))
    idx = grp.find(prods)
    if np.any(idx < 0):
        raise ValueError("conjugation by s does not preserve the group")
    counts = np.bincount(T.cls[idx], minlength=T.n_classes)
    L = T.ell
    tot = sum(int(counts[k]) % L * int(T.modular[chi, k]) for k in range(T.n_classes)) % L
    return _to_sign(tot * pow(T.order % L, -1, L), L)


def weak_index_two_check(TG: CharTable, TH: CharTable, s) -> list:
    """Per psi in Irr(H): induce to G = <H, s> and compare indicators.

    Irreducible induction needs eps(chi) = eps(psi) + eps_s(psi); a sum of two
    constituents needs eps(chi1) + eps(chi2) = eps(psi) + eps_s(psi) with
    eps(chi1) = eps(chi2).
    """
    if TG.ell != TH.ell:
        raise ValueError("tables must share the prime")
    L = TG.ell
    fuse = [TG.class_of(TH.grp.elems[i]) for i in TH.reps]
    index = TG.order // TH.order
    out = []
    for p in range(TH.n_classes):
        ind = np.zeros(TG.n_classes, dtype=np.int64)
        for c, k in enumerate(fuse):
            ind[k] = (ind[k] + int(TH.sizes[c]) * int(TH.modular[p, c])) % L
        for k in range(TG.n_classes):
            if ind[k]:
                ind[k] = ind[k] * index % L * pow(int(TG.sizes[k]) % L, -1, L) % L
        mult = []
        for x in range(TG.n_classes):
            m = sum(int(TG.sizes[k]) * int(ind[k]) % L * int(TG.modular[x, TG.inverse[k]])
                    for k in range(TG.n_classes)) % L * pow(TG.order % L, -1, L) % L
            mult.append(m)
        cons = [x for x, m in enumerate(mult) if m]
        eps_psi = TH.indicators[p]
        eps_tw = twisted_indicator(TH, s, p)
        lhs = [TG.indicators[x] for x in cons]
        if len(cons) == 1 and mult[cons[0]] == 1:
            holds = lhs[0] == eps_psi + eps_tw
            kind = "irreducible"
        else:
            holds = len(cons) == 2 and lhs[0] == lhs[1] and sum(lhs) == eps_psi + eps_tw
            kind = "two constituents"
        out.append({"psi": p, "kind": kind, "constituents": cons, "eps_psi": eps_psi,
                    "eps_twisted": eps_tw, "eps_constituents": lhs, "holds": bool(holds),
                    "eps_psi_nonnegative": eps_psi >= 0})
    return out


def lift_check(TQ: CharTable, TH: CharTable) -> dict:
    """Inflate every character of H/Z to H; check it is irreducible with the same indicator."""
    if TQ.ell != TH.ell:
        raise ValueError("tables must share the prime")
    qmap = [TQ.class_of(TH.grp.elems[i]) for i in TH.reps]
    rows = {tuple(r.tolist()): i for i, r in enumerate(TH.modular)}
    matches = []
    for w in range(TQ.n_classes):
        infl = tuple(int(TQ.modular[w, qmap[c]]) for c in range(TH.n_classes))
        i = rows.get(infl)
        matches.append({"quotient_char": w, "h_char": i,
                        "eps_quotient": TQ.indicators[w],
                        "eps_h": None if i is None else TH.indicators[i]})
    ok = all(m["h_char"] is not None and m["eps_quotient"] == m["eps_h"] for m in matches)
    F = TH.grp.field
    minus = F.vneg(np.eye(TH.grp.n, dtype=np.int64))
    z_idx = TH.grp.find(minus)[0]
    if z_idx >= 0:
        zc = int(TH.cls[z_idx])
        trivial_on_z = [i for i in range(TH.n_classes) if int(TH.modular[i, zc]) == TH.degrees[i] % TH.ell]
    else:
        trivial_on_z = list(range(TH.n_classes))
    multiset_ok = sorted(TQ.indicators) == sorted(TH.indicators[i] for i in trivial_on_z)
    return {"holds": bool(ok and multiset_ok), "inflation_ok": ok, "multiset_ok": multiset_ok,
            "matches": matches}
