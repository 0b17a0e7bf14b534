"""Explicit elements: the unipotent u, the swap s0, h, u1, h0, eta and the weakly real families.

All constructors need q = 3 (mod 4) and run their checks on creation; the
outcome of every check is recorded in ``NamedConstruction.assertions``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import linalg as la
from .algebra.field import GF, Field
from .algebra.poly import FqPoly
from .errors import EtaConstructionFailed, WrongFieldClass
from .forms import QuadSpace, antidiag, form_type, restrict
from .ogroup import GroupSpec, Isometry, enumerate_group, member
from .reality import conjugator_signatures, decide_reality

__all__ = [
    "NamedConstruction", "build_u", "build_s0", "build_h", "build_u1", "build_h0", "build_eta",
    "build_weakly_real_family", "u1_involution", "u1_involution_eigenspace", "negative_control",
    "CONSTRUCTIONS",
]


@dataclass
class NamedConstruction:
    name: str
    space: QuadSpace
    element: Isometry
    group: GroupSpec
    assertions: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def matrix(self) -> np.ndarray:
        return self.element.matrix

    @property
    def ok(self) -> bool:
        return all(a["holds"] for a in self.assertions)

    def check(self, name: str, holds, detail=None) -> None:
        self.assertions.append({"name": name, "holds": bool(holds), "detail": detail})

    def to_dict(self) -> dict:
        return {"name": self.name, "group": self.group.name(), "q": self.space.q, "n": self.space.n,
                "matrix": self.matrix.tolist(), "ok": self.ok, "assertions": self.assertions,
                "notes": self.notes}


def _field(q: int) -> Field:
    if q % 2 == 0 or q % 4 != 3:
        raise WrongFieldClass(f"q = {q} is not 3 mod 4")
    return GF(q)


def _ints(F: Field, rows) -> np.ndarray:
    return np.vectorize(F.from_int, otypes=[np.int64])(np.array(rows, dtype=np.int64))


def _blockdiag(*mats) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


def _lin(F: Field, a: int) -> FqPoly:
    """t + a."""
    return FqPoly.from_ints(F, [a, 1])


def _t2p1(F: Field) -> FqPoly:
    return FqPoly.from_ints(F, [1, 0, 1])


def _check_divisors(c: NamedConstruction, expected: list) -> None:
    F = c.space.field
    got = la.elementary_divisors(F, c.matrix)
    want = tuple(sorted(expected, key=lambda fe: (fe[0].sort_key(), fe[1])))
    c.check("elementary divisors", got == want, [[str(f), e] for f, e in got])


def _u_matrix(F: Field) -> np.ndarray:
    return _ints(F, [[1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]])


def _u1_matrix(F: Field) -> np.ndarray:
    gam = (F.p - 1) // 2
    blk = [[1, -1, gam], [0, 1, 1], [0, 0, 1]]
    b = _ints(F, blk)
    return _blockdiag(b, b)


def build_u(q: int) -> NamedConstruction:
    F = _field(q)
    S = QuadSpace(F, gram=antidiag(4))
    g = Isometry(S, _u_matrix(F))
    G = GroupSpec("Omega", S)
    c = NamedConstruction("u", S, g, G)
    c.check("form is split", form_type(S).sign == 1)
    c.check("u in Omega+(4,q)", member(g, G))
    _check_divisors(c, [(_lin(F, -1), 2), (_lin(F, -1), 2)])
    sigs = conjugator_signatures(g)
    so_inverters = [k for k in sigs if k[0] == 0]
    c.check("every SO inverter lies outside Omega", so_inverters and all(k[1] == 1 for k in so_inverters),
            [list(map(str, k)) for k in sigs])
    c.check("no inverter squares to -I", all(k[2] != "-I" for k in sigs))
    return c


def build_s0(q: int) -> NamedConstruction:
    F = _field(q)
    S = QuadSpace(F, gram=antidiag(4))
    I2 = np.eye(2, dtype=np.int64)
    s = np.zeros((4, 4), dtype=np.int64)
    s[:2, 2:] = I2
    s[2:, :2] = I2
    g = Isometry(S, s)
    c = NamedConstruction("s0", S, g, GroupSpec("SO", S))
    u = _u_matrix(F)
    c.check("s0 in SO+(4,q)", member(g, GroupSpec("SO", S)))
    c.check("s0 not in Omega+(4,q)", not member(g, GroupSpec("Omega", S)))
    c.check("s0 inverts u", np.array_equal(F.matmul(F.matmul(s, u), s), la.inverse(F, u)))
    E = _ints(F, [[1, 0], [0, 1], [-1, 0], [0, -1]])
    sub = restrict(S, E)
    c.notes["minus_eigenspace_gram"] = sub.gram.tolist()
    c.check("-1 eigenspace form [[0,-2],[-2,0]] is split",
            np.array_equal(sub.gram, _ints(F, [[0, -2], [-2, 0]])) and form_type(sub).sign == 1)
    return c


def _h_parts(q: int):
    F = _field(q)
    B = _blockdiag(antidiag(4), np.eye(2, dtype=np.int64))
    S = QuadSpace(F, gram=B)
    A = _blockdiag(_u_matrix(F), _ints(F, -np.eye(2, dtype=np.int64)))
    return F, S, A


def build_h(q: int, verify_reality: bool = True) -> NamedConstruction:
    F, S, A = _h_parts(q)
    g = Isometry(S, A)
    G = GroupSpec("Omega", S)
    c = NamedConstruction("h", S, g, G)
    c.check("form is non-split", form_type(S).sign == -1)
    c.check("h in Omega-(6,q)", member(g, G))
    m1, p1 = _lin(F, -1), _lin(F, 1)
    _check_divisors(c, [(m1, 2), (m1, 2), (p1, 1), (p1, 1)])
    if verify_reality:
        v = decide_reality(g, GroupSpec("POmega", S), projective=True)
        c.notes["reality"] = {"real_mod_z": v.is_real_mod_z, "strongly_real_mod_z": v.is_strongly_real_mod_z,
                              "search_cost": v.search_cost}
        c.check("hZ weakly real in POmega-(6,q)", v.is_weakly_real_mod_z)
    return c


def build_u1(q: int) -> NamedConstruction:
    F = _field(q)
    S = QuadSpace(F, gram=_blockdiag(antidiag(3), antidiag(3)))
    g = Isometry(S, _u1_matrix(F))
    G = GroupSpec("Omega", S)
    c = NamedConstruction("u1", S, g, G)
    c.notes["gamma"] = (F.p - 1) // 2
    c.check("form is non-split", form_type(S).sign == -1)
    c.check("u1 in Omega-(6,q)", member(g, G))
    m1 = _lin(F, -1)
    _check_divisors(c, [(m1, 3), (m1, 3)])
    sigs = conjugator_signatures(g)
    so_invols = [k for k in sigs if k[0] == 0 and k[2] == "I"]
    c.check("every SO involution inverting u1 lies in Omega", so_invols and all(k[1] == 0 for k in so_invols),
            [list(map(str, k)) for k in sigs])
    c.check("some SO inverter lies outside Omega", any(k[0] == 0 and k[1] == 1 for k in sigs))
    cent = conjugator_signatures(g, target=g.matrix)
    c.check("centralizer meets both Omega cosets of SO",
            {k[1] for k in cent if k[0] == 0} == {0, 1})
    for fam, want in ((1, -1), (2, 1)):
        x = u1_involution(q, fam, 1, 1, 1)
        E = u1_involution_eigenspace(q, fam, 1, 1, 1)
        sub = restrict(S, E)
        ok = (S.is_isometry(x) and np.array_equal(F.matmul(x, x), np.eye(6, dtype=np.int64))
              and np.array_equal(F.matmul(F.matmul(x, g.matrix), x), g.inverse().matrix)
              and np.array_equal(F.matmul(x, E), F.vneg(E))
              and 6 - la.rank(F, F.vadd(x, np.eye(6, dtype=np.int64))) == E.shape[1])
        c.check(f"involution family {fam} inverts u1 with the stated -1 eigenspace", ok)
        c.check(f"involution family {fam} eigenspace form is {'split' if want == 1 else 'non-split'}",
                form_type(sub).sign == want, sub.gram.tolist())
        c.check(f"involution family {fam} lies in Omega", member(Isometry(S, x), G))
    return c


def u1_involution(q: int, family: int, a1: int, b1: int, c1: int) -> np.ndarray:
    """Member of one of the two involution families inverting u1, free parameters a1, b1, c1."""
    F = _field(q)
    a1, b1, c1 = (F.from_int(x) for x in (a1, b1, c1))
    sq = lambda x: F.mul(x, x)  # noqa: E731
    s = 1 if family == 1 else -1
    # family 1: a1^2 + c1^2 + 2 a2 = 0; family 2: with -2 a2 instead
    a2 = F.div(F.add(sq(a1), sq(c1)), F.from_int(-2 * s))
    b2 = F.div(F.add(sq(b1), sq(c1)), F.from_int(-2 * s))
    c2 = F.div(F.mul(c1, F.add(a1, b1)), F.from_int(-2 * s))
    d, m = F.from_int(s), F.from_int(-s)
    rows = [
        [d, a1, a2, 0, c1, c2],
        [0, m, a1, 0, 0, c1],
        [0, 0, d, 0, 0, 0],
        [0, c1, c2, d, b1, b2],
        [0, 0, c1, 0, m, b1],
        [0, 0, 0, 0, 0, d],
    ]
    return np.array(rows, dtype=np.int64)


def u1_involution_eigenspace(q: int, family: int, a1: int, b1: int, c1: int) -> np.ndarray:
    """Columns spanning the -1 eigenspace, in the order used for the restricted Gram matrix."""
    F = _field(q)
    a1, b1, c1 = (F.from_int(x) for x in (a1, b1, c1))
    h = lambda x: F.neg(F.div(x, 2))  # noqa: E731
    if family == 1:
        cols = [[h(a1), 1, 0, h(c1), 0, 0], [h(c1), 0, 0, h(b1), 1, 0]]
    else:
        cols = [[1, 0, 0, 0, 0, 0], [0, h(a1), 1, 0, h(c1), 0], [0, 0, 0, 1, 0, 0], [0, h(c1), 0, 0, h(b1), 1]]
    return np.array(cols, dtype=np.int64).T


def build_h0(q: int, verify_reality: bool = True) -> NamedConstruction:
    F = _field(q)
    S = QuadSpace(F, gram=_blockdiag(antidiag(3), antidiag(3), antidiag(4)))
    A = _blockdiag(_u1_matrix(F), F.vneg(_u_matrix(F)))
    g = Isometry(S, A)
    G = GroupSpec("Omega", S)
    c = NamedConstruction("h0", S, g, G)
    c.check("form is non-split", form_type(S).sign == -1)
    c.check("h0 in Omega-(10,q)", member(g, G))
    m1, p1 = _lin(F, -1), _lin(F, 1)
    _check_divisors(c, [(m1, 3), (m1, 3), (p1, 2), (p1, 2)])
    if verify_reality:
        v = decide_reality(g, GroupSpec("POmega", S), projective=True)
        c.notes["reality"] = {"real_mod_z": v.is_real_mod_z, "strongly_real_mod_z": v.is_strongly_real_mod_z,
                              "search_cost": v.search_cost}
        c.check("h0Z weakly real in POmega-(10,q)", v.is_weakly_real_mod_z)
    return c


def _companion(F: Field, f: FqPoly) -> np.ndarray:
    d = f.degree
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        C[i, i - 1] = 1
    for i in range(d):
        C[i, d - 1] = F.neg(f[i])
    return C


def _eta_conjugators(F: Field, n: int, count: int = 64):
    """Deterministic sequence of invertible matrices: I, then unitriangular shears."""
    yield np.eye(n, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for a in range(1, F.q):
                P = np.eye(n, dtype=np.int64)
                P[i, j] = a
                yield P
                k += 1
                if k >= count:
                    return


def build_eta(q: int, verify_centralizer: bool | None = None) -> NamedConstruction:
    """eta = diag(C, C^-T) on a hyperbolic space, C the companion matrix of (t^2+1)^2.

    The exhaustive centralizer check runs by default only for q = 3; the
    centralizer has order of roughly q^(8+) and is out of reach beyond that.
    """
    F = _field(q)
    if verify_centralizer is None:
        verify_centralizer = q == 3
    Z, I4 = np.zeros((4, 4), dtype=np.int64), np.eye(4, dtype=np.int64)
    S = QuadSpace(F, gram=np.block([[Z, I4], [I4, Z]]))
    G = GroupSpec("Omega", S)
    f = FqPoly.from_ints(F, [1, 0, 1]) ** 2
    C0 = _companion(F, f)
    tries = 0
    for P in _eta_conjugators(F, 4):
        tries += 1
        C = F.matmul(F.matmul(P, C0), la.inverse(F, P))
        A = _blockdiag(C, la.inverse(F, C).T.copy())
        g = Isometry(S, A)
        if member(g, G):
            break
    else:
        raise EtaConstructionFailed("no conjugate of the companion matrix gave an element of Omega")
    c = NamedConstruction("eta", S, g, G)
    c.notes["retries"] = tries - 1
    c.check("form is split", form_type(S).sign == 1)
    c.check("det 1", g.det() == 1)
    c.check("eta in Omega+(8,q)", member(g, G))
    _check_divisors(c, [(_t2p1(F), 2), (_t2p1(F), 2)])
    e2 = F.matmul(A, A)
    c.check("eta^2 has only eigenvalue -1",
            all(fe[0] == _lin(F, 1) for fe in la.elementary_divisors(F, e2)))
    if verify_centralizer:
        cent = conjugator_signatures(g, target=A)
        c.check("centralizer in O+(8,q) lies in Omega", all(k[0] == 0 and k[1] == 0 for k in cent),
                [list(map(str, k)) for k in cent])
    return c


def build_weakly_real_family(m: int, q: int, verify_reality: bool = True, cap: int | None = None
                             ) -> NamedConstruction:
    """g1 = h + eta^l in dimension 8l+6, or g0 = h0 + eta^l in dimension 8l+10."""
    _field(q)
    if m < 1:
        raise ValueError("m must be at least 1")
    n = 4 * m + 2
    if n % 8 == 6:
        base, l, name = build_h(q, verify_reality=False), (n - 6) // 8, "g1"
    else:
        base, l, name = build_h0(q, verify_reality=False), (n - 10) // 8, "g0"
    F = base.space.field
    grams, mats = [base.space.gram], [base.matrix]
    eta = build_eta(q, verify_centralizer=False) if l else None
    for _ in range(l):
        grams.append(eta.space.gram)
        mats.append(eta.matrix)
    S = QuadSpace(F, gram=_blockdiag(*grams))
    g = Isometry(S, _blockdiag(*mats))
    G = GroupSpec("Omega", S)
    c = NamedConstruction(name if l else base.name, S, g, G)
    c.notes["l"] = l
    c.check("form is non-split", form_type(S).sign == -1)
    c.check(f"element in Omega-({n},q)", member(g, G))
    if l:
        base_f = {f for f, _ in la.elementary_divisors(F, base.matrix)}
        eta_f = {f for f, _ in la.elementary_divisors(F, eta.matrix)}
        c.check("eigenvalues of the two parts are disjoint", not (base_f & eta_f))
    if verify_reality:
        from .errors import SearchTooLarge

        try:
            v = decide_reality(g, GroupSpec("POmega", S), projective=True, cap=cap)
            c.notes["reality"] = {"method": "search", "real_mod_z": v.is_real_mod_z,
                                  "strongly_real_mod_z": v.is_strongly_real_mod_z,
                                  "search_cost": v.search_cost}
            c.check("weakly real in POmega-", v.is_weakly_real_mod_z)
        except SearchTooLarge as exc:
            parts = build_h(q) if name == "g1" else build_h0(q)
            et = build_eta(q)
            c.notes["reality"] = {"method": "component-wise", "search": exc.to_dict()}
            c.check("base part weakly real mod Z", parts.ok)
            c.check("eta centralizer inside Omega", et.ok)
    return c


def negative_control(q: int = 3) -> NamedConstruction:
    """An element of Omega+(4,q) with the single divisor (t^2+1)^2; it is not real there."""
    F = _field(q)
    G = GroupSpec.standard("Omega", 4, q, 1)
    grp = enumerate_group(G)
    want = ((_t2p1(F), 2),)
    keys = grp.canonical_keys(grp.elems)
    pick = next(grp.elems[i] for i in np.argsort(keys, kind="stable")
                if la.elementary_divisors(F, grp.elems[i]) == want)
    g = Isometry(G.space, pick)
    c = NamedConstruction("negative_control", G.space, g, G)
    _check_divisors(c, list(want))
    v = decide_reality(g, G)
    c.notes["reality"] = {"real": v.is_real, "search_cost": v.search_cost}
    c.check("not real in Omega+(4,q)", not v.is_real)
    return c


CONSTRUCTIONS = {
    "u": build_u, "s0": build_s0, "h": build_h, "u1": build_u1, "h0": build_h0, "eta": build_eta,
}
