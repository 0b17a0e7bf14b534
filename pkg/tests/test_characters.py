import numpy as np
import pytest

from orthoreal.characters import (
    char_table, cyclotomic_poly, fs_indicator, lift_check, twisted_indicator, weak_index_two_check,
)
from orthoreal.errors import NotInvolutory
from orthoreal.ogroup import GroupSpec, enumerate_group
from orthoreal.reality import census

_T: dict = {}


def table(tag, n, q, sign, ell=None):
    key = (tag, n, q, sign, ell)
    if key not in _T:
        _T[key] = char_table(GroupSpec.standard(tag, n, q, sign), ell=ell)
    return _T[key]


SMALL = [("Omega", 2, 3, -1), ("Omega", 4, 3, 1), ("Omega", 4, 3, -1), ("SO", 4, 3, -1), ("O", 4, 3, 1),
         ("O", 4, 3, -1), ("POmega", 4, 3, 1), ("Omega", 6, 2, 1), ("Omega", 6, 2, -1), ("O", 4, 2, 1),
         ("Omega", 5, 3, 1)]


@pytest.mark.parametrize("e,coeffs", [
    (1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)),
    (8, (1, 0, 0, 0, 1)), (12, (1, 0, -1, 0, 1)),
])
def test_cyclotomic_small(e, coeffs):
    assert tuple(cyclotomic_poly(e)) == coeffs


@pytest.mark.parametrize("e", [5, 9, 10, 15, 24, 30])
def test_cyclotomic_product_identity(e):
    # x^e - 1 = prod over d | e of Phi_d
    prod = np.array([1])
    for d in range(1, e + 1):
        if e % d == 0:
            prod = np.convolve(prod, np.array(cyclotomic_poly(d)))
    want = np.zeros(e + 1, dtype=int)
    want[0], want[e] = -1, 1
    assert np.array_equal(prod, want)


@pytest.mark.parametrize("key", SMALL)
def test_tables_validate(key):
    T = table(*key)
    v = T.validate()
    assert all(v.values()), v


@pytest.mark.parametrize("key", SMALL)
def test_class_count_matches_census(key):
    T = table(*key)
    rep = census(GroupSpec.standard(*key))
    assert T.n_classes == len(rep.classes)
    n_real_chars = sum(T.is_real_valued(i) for i in range(T.n_classes))
    assert n_real_chars == sum(c.scan_real for c in rep.classes)


@pytest.mark.parametrize("key", SMALL)
def test_fs_count_against_direct_square_count(key):
    T = table(*key)
    grp = T.grp
    F = grp.field
    sq = F.matmul(grp.elems, grp.elems)
    n_sq1 = int((grp.find(sq) == grp.identity_index()).sum())
    assert sum(e * d for e, d in zip(T.indicators, T.degrees)) == n_sq1
    assert [fs_indicator(T, i) for i in range(T.n_classes)] == T.indicators


def test_omega_minus_2_3_linear():
    T = table("Omega", 2, 3, -1)
    assert T.degrees == [1] * T.order


@pytest.mark.parametrize("key,degrees", [
    (("Omega", 4, 3, -1), [1, 5, 5, 8, 8, 9, 10]),
    (("POmega", 4, 3, 1), sorted(a * b for a in (1, 1, 1, 3) for b in (1, 1, 1, 3))),
    (("Omega", 6, 2, 1), [1, 7, 14, 20, 21, 21, 21, 28, 35, 45, 45, 56, 64, 70]),
    (("Omega", 6, 2, -1), [1, 5, 5, 6, 10, 10, 15, 15, 20, 24, 30, 30, 30, 40, 40, 45, 45, 60, 64, 81]),
])
def test_degree_multisets(key, degrees):
    assert sorted(table(*key).degrees) == degrees


@pytest.mark.parametrize("sign", [1, -1])
def test_full_orthogonal_indicators_all_one(sign):
    assert set(table("O", 4, 3, sign).indicators) == {1}


@pytest.mark.parametrize("sign", [1, -1])
def test_char2_omega6_indicators_nonnegative(sign):
    assert min(table("Omega", 6, 2, sign).indicators) >= 0


def _outer_involution(big, small):
    F = big.field
    I = np.eye(big.n, dtype=np.int64)
    sq = F.matmul(big.elems, big.elems)
    for i in range(len(big)):
        if np.array_equal(sq[i], I) and small.find(big.elems[i])[0] < 0:
            return big.elems[i]
    raise AssertionError("none found")


@pytest.fixture(scope="module")
def index_two_pair():
    TH = table("Omega", 4, 3, -1)
    TG = table("K", 4, 3, -1, ell=TH.ell)
    return TG, TH, _outer_involution(TG.grp, TH.grp)


def test_twisted_count_identity(index_two_pair):
    _, TH, s = index_two_pair
    grp = TH.grp
    F = grp.field
    prods = F.matmul(F.matmul(grp.elems, s), F.matmul(grp.elems, s))
    n_fix = int((grp.find(prods) == grp.identity_index()).sum())
    eps = [twisted_indicator(TH, s, i) for i in range(TH.n_classes)]
    assert sum(e * d for e, d in zip(eps, TH.degrees)) == n_fix


def test_weak_index_two(index_two_pair):
    rows = weak_index_two_check(*index_two_pair)
    assert len(rows) == index_two_pair[1].n_classes
    assert all(r["holds"] for r in rows)


def test_twisted_indicator_rejects_non_involution(index_two_pair):
    _, TH, _ = index_two_pair
    g = next(m for m in TH.grp.elems if not np.array_equal(TH.grp.field.matmul(m, m), np.eye(4, dtype=np.int64)))
    with pytest.raises(NotInvolutory):
        twisted_indicator(TH, g, 0)


@pytest.mark.parametrize("sign", [1, -1])
def test_lift_from_projective(sign):
    TH = table("Omega", 4, 3, sign)
    TQ = table("POmega", 4, 3, sign, ell=TH.ell)
    r = lift_check(TQ, TH)
    assert r["holds"], r


def test_to_dict_and_class_of():
    T = table("Omega", 4, 3, 1)
    d = T.to_dict()
    assert d["n_classes"] == T.n_classes == len(d["values"])
    assert T.class_of(np.eye(4, dtype=np.int64)) == T.cls[T.grp.identity_index()]
    with pytest.raises(ValueError):
        T.class_of(np.zeros((4, 4), dtype=np.int64))


def test_table_is_deterministic():
    a = char_table(GroupSpec.standard("Omega", 4, 3, -1)).to_dict()
    b = char_table(GroupSpec.standard("Omega", 4, 3, -1)).to_dict()
    assert a == b
