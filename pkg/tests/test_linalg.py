import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoreal.algebra import linalg as la
from orthoreal.algebra.field import GF
from orthoreal.algebra.poly import FqPoly, irreducibles


def matrices(q, n, m=None):
    m = n if m is None else m
    return st.lists(st.integers(0, q - 1), min_size=n * m, max_size=n * m).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(n, m))


def rowspace_size(F, A):
    seen = set()
    for c in itertools.product(range(F.q), repeat=A.shape[0]):
        v = F.matmul(np.array(c, dtype=np.int64)[None, :], A)[0]
        seen.add(v.tobytes())
    return len(seen)


def leibniz_det(F, A):
    n = A.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = 1
        for i in range(n):
            term = F.mul(term, int(A[i, perm[i]]))
        total = F.add(total, F.neg(term) if inversions % 2 else term)
    return total


@pytest.mark.parametrize("q", [2, 3, 4])
@given(data=st.data())
def test_rank_matches_rowspace_count(q, data):
    F = GF(q)
    A = data.draw(matrices(q, 3, 4))
    assert q ** la.rank(F, A) == rowspace_size(F, A)
    N = la.nullspace(F, A)
    assert N.shape[1] == 4 - la.rank(F, A)
    assert not F.matmul(A, N).any()


@pytest.mark.parametrize("q", [3, 5, 9])
@given(data=st.data())
def test_det_inverse_solve(q, data):
    F = GF(q)
    A = data.draw(matrices(q, 4))
    B = data.draw(matrices(q, 4))
    d = la.det(F, A)
    assert d == leibniz_det(F, A)
    assert la.det(F, F.matmul(A, B)) == F.mul(d, la.det(F, B))
    if d:
        Ai = la.inverse(F, A)
        assert np.array_equal(F.matmul(A, Ai), np.eye(4, dtype=np.int64))
        X = la.solve(F, A, B)
        assert np.array_equal(F.matmul(A, X), B)


@pytest.mark.parametrize("q", [5, 7, 9])
@given(data=st.data())
def test_charpoly_values_and_cayley_hamilton(q, data):
    F = GF(q)
    A = data.draw(matrices(q, 4))
    chi = la.charpoly(F, A)
    assert chi.degree == 4 and chi.is_monic()
    for lam in F.elements():
        M = F.vsub(F.vmul(lam, np.eye(4, dtype=np.int64)), A)
        assert chi.eval(lam) == la.det(F, M)
    assert not la.poly_eval_matrix(F, chi, A).any()


def companion(F, f):
    d = f.degree
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        C[i, i - 1] = 1
    for i in range(d):
        C[i, d - 1] = F.neg(f[i])
    return C


def blockdiag(*ms):
    n = sum(m.shape[0] for m in ms)
    out = np.zeros((n, n), dtype=np.int64)
    k = 0
    for m in ms:
        out[k:k + m.shape[0], k:k + m.shape[0]] = m
        k += m.shape[0]
    return out


@pytest.mark.parametrize("q", [2, 3, 5])
def test_elementary_divisors_of_companion_sums(q):
    F = GF(q)
    lin = list(irreducibles(F, 1))
    quad = list(irreducibles(F, 2))
    wanted = [(lin[0], 2), (lin[0], 1), (quad[0], 1), (lin[-1], 3)]
    A = blockdiag(*(companion(F, f**e) for f, e in wanted))
    P = np.eye(A.shape[0], dtype=np.int64)
    P[0, -1] = 1
    P[2, 1] = F.neg(1)
    A = F.matmul(F.matmul(P, A), la.inverse(F, P))
    got = la.elementary_divisors(F, A)
    key = lambda fe: (fe[0].sort_key(), fe[1])
    assert sorted(got, key=key) == sorted(wanted, key=key)


@pytest.mark.parametrize("q", [3, 4])
@given(data=st.data())
def test_elementary_divisor_kernel_dimensions(q, data):
    F = GF(q)
    A = data.draw(matrices(q, 5))
    divs = la.elementary_divisors(F, A)
    prod = FqPoly(F, [1])
    for f, e in divs:
        prod = prod * f**e
    assert prod == la.charpoly(F, A)
    for f in {f for f, _ in divs}:
        N = la.poly_eval_matrix(F, f, A)
        for k in (1, 2, 3):
            expect = f.degree * sum(min(e, k) for g, e in divs if g == f)
            assert 5 - la.rank(F, la.matpow(F, N, k)) == expect


@pytest.mark.parametrize("q", [3, 4, 9])
def test_matrix_text_roundtrip(q):
    F = GF(q)
    A = np.arange(12, dtype=np.int64).reshape(3, 4) % q
    F2, B = la.read_matrix(la.write_matrix(F, A))
    assert F2 == F and np.array_equal(A, B)


def test_read_matrix_rejects_bad_shapes():
    with pytest.raises(ValueError):
        la.read_matrix("q=3 n=2 m=2\n1 0\n")
    with pytest.raises(ValueError):
        la.read_matrix("q=3 n=1 m=2\n1 0 1\n")
