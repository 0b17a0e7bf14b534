import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoreal.algebra import linalg as la
from orthoreal.algebra.field import GF, SquareClass
from orthoreal.algebra.poly import FqPoly, factorize
from orthoreal.decomp import BLOCK_TYPES, check_invariants, classify_block_membership, decompose, strongly_real_sufficient
from orthoreal.forms import discriminant, standard_space
from orthoreal.ogroup import GroupSpec, Isometry, enumerate_group, random_element

SPACES = [(n, q, s) for q in (2, 3, 4, 5) for n in range(2, 9) for s in ((1, -1) if n % 2 == 0 else (1,))
          if q % 2 or n % 2 == 0]


@pytest.mark.parametrize("n,q,sign", SPACES)
@given(seed=st.integers(0, 2**32 - 1))
def test_invariants_on_random_isometries(n, q, sign, seed):
    g = random_element(GroupSpec("O", standard_space(n, q, sign)), random.Random(seed))
    d = decompose(g)
    result = check_invariants(d)
    assert all(result.values()), result
    assert sum(b.dim for b in d.blocks) == n
    assert all(b.type_tag in BLOCK_TYPES for b in d.blocks)
    if q % 2:
        assert all(b.isotropic_split in (None, True) for b in d.blocks)


def test_deterministic():
    g = random_element(GroupSpec("O", standard_space(6, 5, -1)), random.Random(7))
    a, b = decompose(g).to_dict(), decompose(g).to_dict()
    assert a == b


@pytest.mark.parametrize("n,q", [(3, 3), (4, 5), (5, 7)])
def test_identity_splits_into_lines(n, q):
    d = decompose(Isometry.identity(standard_space(n, q)))
    assert [b.type_tag for b in d.blocks] == ["T2minus"] * n
    assert all(b.dim == 1 and b.divisors[0][1] == 1 for b in d.blocks)
    for b in d.blocks:
        m = classify_block_membership(b)
        assert m.det == 1 and m.theta is SquareClass.TRIVIAL


def _shape(d):
    return sorted((b.type_tag, b.dim, tuple((str(f), e) for f, e in b.divisors)) for b in d.blocks)


def test_h_blocks(fixture_element):
    d = decompose(fixture_element("h_q3"))
    assert _shape(d) == [("T1minus", 4, (("t + 2", 2), ("t + 2", 2))),
                         ("T2plus", 1, (("t + 1", 1),)), ("T2plus", 1, (("t + 1", 1),))]
    for b in d.blocks:
        m = classify_block_membership(b)
        assert m.fact_holds
        if b.type_tag == "T1minus":
            assert m.in_omega
        else:
            assert m.det == -1 and m.theta == discriminant(b.space)


def test_h0_blocks(fixture_element):
    d = decompose(fixture_element("h0_q3"))
    assert _shape(d) == [("T1plus", 4, (("t + 1", 2), ("t + 1", 2))),
                         ("T2minus", 3, (("t + 2", 3),)), ("T2minus", 3, (("t + 2", 3),))]
    assert all(classify_block_membership(b).fact_holds for b in d.blocks)


def _subspaces(q, d, k):
    """All k-dimensional subspaces of F_q^d as RREF row matrices."""
    for pivots in itertools.combinations(range(d), k):
        free = [(i, j) for i in range(k) for j in range(d) if j > pivots[i] and j not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            M = np.zeros((k, d), dtype=np.int64)
            for i, p in enumerate(pivots):
                M[i, p] = 1
            for (i, j), v in zip(free, vals):
                M[i, j] = v
            yield M


def _has_orthogonal_summand(b):
    F = b.space.field
    d = b.dim
    for k in range(1, d):
        for R in _subspaces(F.q, d, k):
            X = R.T
            if la.rank(F, np.hstack([X, F.matmul(b.action, X)])) != k:
                continue
            if la.det(F, b.space.gram_of(X)) != 0:
                return True
    return False


@pytest.mark.parametrize("seed", range(12))
def test_small_blocks_are_indecomposable(seed):
    rng = random.Random(seed)
    S = standard_space(rng.choice([4, 5, 6]), 3, rng.choice([1, -1]))
    g = random_element(GroupSpec("O", S), rng)
    for b in decompose(g).blocks:
        if b.dim <= 4:
            assert not _has_orthogonal_summand(b), (b.type_tag, b.dim)


def test_indecomposable_fixture_blocks(fixture_element):
    for stem in ("h_q3", "u_q3", "u1_q3"):
        for b in decompose(fixture_element(stem)).blocks:
            assert not _has_orthogonal_summand(b)


def _find(group, pred):
    for g in group:
        if pred(g):
            return g
    raise LookupError


def test_char2_phi9_conditions_false():
    F = GF(2)
    phi9 = FqPoly(F, [1, 0, 0, 1, 0, 0, 1])
    assert factorize(phi9) == [(phi9, 1)]
    grp = enumerate_group(GroupSpec("Omega", standard_space(6, 2, -1)))
    cube = F.matmul(F.matmul(grp.elems, grp.elems), grp.elems)
    nine = F.matmul(F.matmul(cube, cube), cube)
    I = np.eye(6, dtype=np.int64)
    idx = np.nonzero(np.all(nine == I, axis=(1, 2)) & ~np.all(cube == I, axis=(1, 2)))[0]
    g = _find((grp.element(i) for i in idx),
              lambda g: la.elementary_divisors(F, g.matrix) == ((phi9, 1),))
    v = strongly_real_sufficient(decompose(g))
    assert v.conditions["count_selfdual_4r2"] == 1
    assert not v.conditions["even_count_selfdual_4r2"] and not v.conditions["unipotent_block"]
    assert v.verdict is False


def test_char2_unipotent_cyclic_block_condition_true():
    grp = enumerate_group(GroupSpec("Omega", standard_space(6, 2, 1)))
    F = grp.field

    def has_block(g):
        d = decompose(g)
        return any(b.type_tag == "C2cyclic" and b.divisors == ((FqPoly(F, [1, 1]), 2),) for b in d.blocks)

    g = _find(grp, has_block)
    v = strongly_real_sufficient(decompose(g))
    assert v.conditions["unipotent_block"] and v.verdict is True


def test_odd_type2star_plane_condition():
    # an element of SO-(2,7) of order q + 1 is a single T2star plane
    grp = enumerate_group(GroupSpec("SO", standard_space(2, 7, -1)))
    g = _find(grp, lambda g: decompose(g).blocks[0].type_tag == "T2star")
    v = strongly_real_sufficient(decompose(g))
    assert v.conditions["dim2mod4_type2star_or_3"] and v.verdict is True


def test_isotropic_split_false_only_in_char_two():
    g = _find(enumerate_group(GroupSpec("O", standard_space(6, 2, -1))),
              lambda g: any(b.isotropic_split is False for b in decompose(g).blocks))
    d = decompose(g)
    assert all(check_invariants(d).values())
    assert all(b.type_tag == "C2bicyclic" for b in d.blocks if b.isotropic_split is False)
    for sign in (1, -1):
        for h in enumerate_group(GroupSpec("O", standard_space(4, 3, sign))):
            assert all(b.isotropic_split is not False for b in decompose(h).blocks)
