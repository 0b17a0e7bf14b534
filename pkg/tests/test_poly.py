import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoreal.algebra.field import GF
from orthoreal.algebra.poly import FqPoly, factorize, irreducibles, is_irreducible, reciprocal, twist


def mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def necklace(q, d):
    return sum(mobius(d // k) * q**k for k in range(1, d + 1) if d % k == 0) // d


def monic(F, coeffs):
    return FqPoly(F, list(coeffs) + [1])


@pytest.mark.parametrize("q,d", [(2, 1), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (9, 2)])
def test_irreducible_count_matches_necklace_formula(q, d):
    F = GF(q)
    found = list(irreducibles(F, d))
    assert len(found) == necklace(q, d)
    assert all(is_irreducible(f) for f in found)


def _has_proper_factor(f):
    F = f.field
    for d in range(1, f.degree // 2 + 1):
        for c in itertools.product(range(F.q), repeat=d):
            if f.divmod(monic(F, c))[1].degree < 0:
                return True
    return False


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rabin_test_agrees_with_trial_division(q):
    F = GF(q)
    for c in itertools.product(range(q), repeat=3):
        f = monic(F, c)
        assert is_irreducible(f) == (not _has_proper_factor(f))


@pytest.mark.parametrize("q", [2, 3, 5, 9])
@given(data=st.data())
def test_factorization_reassembles(q, data):
    F = GF(q)
    deg = data.draw(st.integers(1, 7))
    c = data.draw(st.lists(st.integers(0, q - 1), min_size=deg, max_size=deg))
    f = monic(F, c)
    prod = FqPoly(F, [1])
    for g, m in factorize(f):
        assert is_irreducible(g) and g.is_monic()
        prod = prod * g**m
    assert prod == f


@given(data=st.data())
def test_divmod_identity(data):
    F = GF(7)
    a = FqPoly(F, data.draw(st.lists(st.integers(0, 6), min_size=1, max_size=8)))
    b = monic(F, data.draw(st.lists(st.integers(0, 6), min_size=0, max_size=4)))
    quo, rem = a.divmod(b)
    assert quo * b + rem == a
    assert rem.degree < b.degree


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_reciprocal_and_twist_roots(q):
    F = GF(q)
    for f in irreducibles(F, 1):
        a = F.neg(f[0])
        if a == 0:
            continue
        assert reciprocal(f).eval(F.inv(a)) == 0
        assert twist(f).eval(F.neg(F.inv(a))) == 0
    for f in irreducibles(F, 2):
        assert reciprocal(reciprocal(f)) == f
        assert twist(twist(f)) == f


def test_self_reciprocal_examples():
    F = GF(3)
    t2p1 = FqPoly(F, [1, 0, 1])
    assert reciprocal(t2p1) == t2p1
    assert reciprocal(FqPoly(F, [2, 1])) == FqPoly(F, [2, 1])
    f = FqPoly(F, [2, 1, 1])  # t^2 + t + 2
    assert reciprocal(f) != f and reciprocal(f).eval(0) != 0
