import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoreal.algebra import linalg as la
from orthoreal.algebra.field import GF, SquareClass, square_class
from orthoreal.errors import GroupTooLarge, NotAnIsometry, SpaceMismatch, SpinorNormCharTwo
from orthoreal.forms import QuadSpace, antidiag, direct_sum, standard_space
from orthoreal.ogroup import (
    GroupSpec, Isometry, derived_subgroup, element_labels, enumerate_group, group_order, member, random_element,
    reflection_matrix, reflections, spinor_norm,
)

ODD_SPACES = [(n, q, s) for q in (3, 5, 7, 9) for n in range(1, 7) for s in ((1, -1) if n % 2 == 0 else (1,))]


def wall_spinor(g: Isometry) -> SquareClass:
    """Spinor norm from the Wall form on im(1 - g): det of x_i^T G (1-g) x_j, times 2^rank."""
    S, F = g.space, g.field
    A = F.vsub(np.eye(g.n, dtype=np.int64), g.matrix)
    W = la.column_space(F, A)
    k = W.shape[1]
    if k == 0:
        return SquareClass.TRIVIAL
    X = la.solve(F, A, W)
    M = F.matmul(F.matmul(X.T, S.gram), W)
    return square_class(F, F.mul(la.det(F, M), F.pow(F.from_int(2), k)))


@pytest.mark.parametrize("n,q,sign", ODD_SPACES)
def test_spinor_norm_matches_wall_formula(n, q, sign):
    S = standard_space(n, q, sign)
    rng = random.Random(n * 100 + q)
    for _ in range(25):
        g = random_element(GroupSpec("O", S), rng)
        assert spinor_norm(g) == wall_spinor(g)


@pytest.mark.parametrize("n,q,sign", [(4, 5, -1), (6, 3, 1), (5, 7, 1), (3, 9, 1)])
@given(seed=st.integers(0, 10**6))
def test_spinor_norm_homomorphism_and_invariance(n, q, sign, seed):
    S = standard_space(n, q, sign)
    rng = random.Random(seed)
    G = GroupSpec("O", S)
    g, h = random_element(G, rng), random_element(G, rng)
    assert spinor_norm(g @ h) == spinor_norm(g) * spinor_norm(h)
    assert spinor_norm(h @ g @ h.inverse()) == spinor_norm(g)
    assert (g @ h).det() == GF(q).mul(g.det(), h.det())


def test_direct_sum_laws():
    rng = random.Random(3)
    S1, S2 = standard_space(3, 5), standard_space(2, 5, -1)
    S = direct_sum(S1, S2)
    for _ in range(20):
        g1 = random_element(GroupSpec("O", S1), rng)
        g2 = random_element(GroupSpec("O", S2), rng)
        M = np.zeros((5, 5), dtype=np.int64)
        M[:3, :3], M[3:, 3:] = g1.matrix, g2.matrix
        g = Isometry(S, M)
        assert spinor_norm(g) == spinor_norm(g1) * spinor_norm(g2)
        assert g.det() == S.field.mul(g1.det(), g2.det())


def test_single_reflection_and_minus_identity():
    S = standard_space(3, 7)
    F = S.field
    for v in ([1, 0, 0], [0, 1, 0], [1, 1, 1], [2, 0, 3]):
        v = np.array(v, dtype=np.int64)
        if S.Q(v):
            r = Isometry(S, reflection_matrix(S, v))
            assert spinor_norm(r) == square_class(F, S.Q(v))
            assert r.det() == F.neg(1)
    minus = Isometry(S, F.vneg(np.eye(3, dtype=np.int64)))
    for d in (1, F.nonsquare()):
        T = QuadSpace(F, gram=np.diag([1, 1, d]).astype(np.int64))
        m = Isometry(T, F.vneg(np.eye(3, dtype=np.int64)))
        assert spinor_norm(m) == square_class(F, d)
    assert minus.det() == F.neg(1)


def test_reflections_enumerate_anisotropic_points():
    for gram in (antidiag(2), np.eye(2, dtype=np.int64)):
        S = QuadSpace(GF(3), gram=gram)
        refl = list(reflections(S))
        aniso = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0) and S.Q(np.array([a, b]))]
        assert len(refl) == len(aniso) // 2
        for r in refl:
            assert (r @ r).is_identity()
            assert r.det() == 2


SMALL = [(n, q, s) for n, q in ((2, 3), (2, 5), (3, 3), (4, 3), (2, 4), (4, 2), (6, 2)) for s in
         ((1, -1) if n % 2 == 0 else (1,))]


@pytest.mark.parametrize("n,q,sign", SMALL)
def test_enumerated_orders_and_cosets(n, q, sign):
    S = standard_space(n, q, sign)
    O = enumerate_group(GroupSpec("O", S))
    assert len(O) == group_order("O", S)
    for tag in ("SO", "K", "T", "Omega"):
        assert len(enumerate_group(GroupSpec(tag, S))) == group_order(tag, S)
    if S.odd:
        counts = np.bincount(O.labels, minlength=4)
        assert len(set(counts.tolist())) == 1
    for i in random.Random(0).sample(range(len(O)), min(40, len(O))):
        g = O.element(i)
        assert member(g, GroupSpec("Omega", S)) == (O.labels[i] == 0)
        assert element_labels(g) == (int(O.labels[i] & 1), int(O.labels[i] >> 1))


def test_orders_from_examples():
    assert group_order("Omega", standard_space(6, 2, 1)) == 20160
    assert group_order("Omega", standard_space(6, 2, -1)) == 25920
    so = enumerate_group(GroupSpec("SO", standard_space(2, 3, -1)))
    assert len(so) == 4
    F = so.field
    orders = set()
    for g in so.elems:
        k, P = 1, g
        while not np.array_equal(P, np.eye(2, dtype=np.int64)):
            P, k = F.matmul(P, g), k + 1
        orders.add(k)
    assert max(orders) == 4  # cyclic of order q + 1


@pytest.mark.parametrize("n,q,sign", [(4, 3, 1), (4, 3, -1), (3, 5, 1), (4, 2, -1), (6, 2, 1), (6, 2, -1), (4, 4, 1)])
def test_omega_is_commutator_closure(n, q, sign):
    S = standard_space(n, q, sign)
    O = enumerate_group(GroupSpec("O", S))
    Om = enumerate_group(GroupSpec("Omega", S))
    D = derived_subgroup(O)
    assert len(D) == len(Om) and (Om.find(D) >= 0).all()


def test_plus_4_2_commutator_subgroup_has_index_two_in_omega():
    # O+(4,2) = S3 wr 2 is not perfect-by-index-2: [O, O] is smaller than the Dickson kernel
    S = standard_space(4, 2, 1)
    O = enumerate_group(GroupSpec("O", S))
    Om = enumerate_group(GroupSpec("Omega", S))
    D = derived_subgroup(O)
    assert (Om.find(D) >= 0).all() and len(Om) == 2 * len(D) == 36


def test_named_element_memberships():
    q = 3
    F = GF(q)
    S = QuadSpace(F, gram=antidiag(4))
    s0 = np.zeros((4, 4), dtype=np.int64)
    s0[:2, 2:] = np.eye(2, dtype=np.int64)
    s0[2:, :2] = np.eye(2, dtype=np.int64)
    g = Isometry(S, s0)
    assert member(g, GroupSpec("SO", S)) and not member(g, GroupSpec("Omega", S))
    ident = Isometry.identity(S)
    assert all(member(ident, GroupSpec(t, S)) for t in ("O", "SO", "K", "T", "Omega"))


def test_errors():
    S = standard_space(2, 3)
    with pytest.raises(NotAnIsometry):
        Isometry(S, [[1, 1], [0, 1]])
    with pytest.raises(GroupTooLarge) as exc:
        enumerate_group(GroupSpec("O", standard_space(8, 3)), cap=10**6)
    assert exc.value.order == group_order("O", standard_space(8, 3))
    with pytest.raises(SpinorNormCharTwo):
        spinor_norm(Isometry.identity(standard_space(2, 2)))
    with pytest.raises(SpaceMismatch):
        member(Isometry.identity(S), GroupSpec("SO", standard_space(2, 5)))
    with pytest.raises(ValueError):
        GroupSpec("SL", S)


def test_pomega_quotient_size():
    for sign in (1, -1):
        S = standard_space(4, 3, sign)
        P = enumerate_group(GroupSpec("POmega", S))
        assert len(P) == group_order("POmega", S)
    assert len(enumerate_group(GroupSpec("POmega", standard_space(4, 3, 1)))) == 144
