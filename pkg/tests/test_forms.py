import itertools

import numpy as np
import pytest

from orthoreal.algebra.field import GF, SquareClass
from orthoreal.errors import CharTwoDiscriminant, DegenerateForm, DependentBasis, FieldMismatch
from orthoreal.forms import (
    FormType, QuadSpace, antidiag, arf_invariant, direct_sum, discriminant, form_type, read_space, restrict,
    standard_space, witt_index, write_space,
)


def gram(q, rows):
    return QuadSpace.from_gram_ints(q, rows)


def singular_count(S):
    """Nonzero vectors with Q(v) = 0, by enumeration."""
    F = S.field
    V = np.array(list(itertools.product(range(F.q), repeat=S.n)), dtype=np.int64).T
    return int(np.count_nonzero(S.Q_many(V) == 0)) - 1


def expected_singular(q, n, sign):
    if n % 2:
        m = n // 2
        return q ** (2 * m) - 1
    m = n // 2
    return (q**m - sign) * (q ** (m - 1) + sign)


VALID = [(q, n, s) for q in (2, 3, 4, 5) for n in (2, 3, 4) for s in (1, -1)
         if n % 2 == 0 or (s == 1 and q % 2)]


@pytest.mark.parametrize("q,n,sign", VALID)
def test_standard_space_type_by_vector_count(q, n, sign):
    S = standard_space(n, q, sign)
    assert singular_count(S) == expected_singular(q, n, sign)
    if n % 2 == 0:
        assert form_type(S).sign == sign
        assert witt_index(S) == n // 2 - (sign == -1)


def test_j4_discriminant_trivial():
    for q in (3, 5, 7, 9):
        S = QuadSpace(GF(q), gram=antidiag(4))
        assert discriminant(S) is SquareClass.TRIVIAL
        assert form_type(S) is FormType.SPLIT


@pytest.mark.parametrize("q", [3, 7, 11])
def test_construction_forms(q):
    J4 = antidiag(4)
    six = direct_sum(QuadSpace(GF(q), gram=J4), QuadSpace(GF(q), gram=np.eye(2, dtype=np.int64)))
    assert form_type(six) is FormType.NONSPLIT
    plane = gram(q, [[0, -2], [-2, 0]])
    assert discriminant(plane) is SquareClass.NONSQUARE
    assert form_type(plane) is FormType.SPLIT
    J3 = antidiag(3)
    z = np.zeros((3, 3), dtype=np.int64)
    assert form_type(QuadSpace(GF(q), gram=np.block([[J3, z], [z, J3]]))) is FormType.NONSPLIT
    assert form_type(QuadSpace(GF(q), gram=np.eye(2, dtype=np.int64))) is FormType.NONSPLIT


def test_j3_sum_nonsplit_by_witt_oracle():
    S = QuadSpace(GF(3), gram=np.block([[antidiag(3), np.zeros((3, 3), dtype=np.int64)],
                                        [np.zeros((3, 3), dtype=np.int64), antidiag(3)]]))
    assert singular_count(S) == expected_singular(3, 6, -1)
    assert witt_index(S) == 2


def test_restrict_examples():
    S = QuadSpace(GF(7), gram=antidiag(4))
    F = S.field
    basis = np.array([[1, 0], [0, 1], [F.neg(1), 0], [0, F.neg(1)]], dtype=np.int64)
    R = restrict(S, basis)
    assert R.gram.tolist() == [[0, F.from_int(-2)], [F.from_int(-2), 0]]
    assert restrict(S, np.eye(4, dtype=np.int64)) == S
    with pytest.raises(DependentBasis):
        restrict(S, np.array([[1, 1], [0, 0], [0, 0], [0, 0]], dtype=np.int64))


def test_char_two_errors_and_arf():
    S = standard_space(4, 2, -1)
    with pytest.raises(CharTwoDiscriminant):
        discriminant(S)
    assert arf_invariant(S) == 1 and arf_invariant(standard_space(4, 2, 1)) == 0
    assert arf_invariant(standard_space(6, 4, -1)) == 1


def test_degenerate_and_mismatch():
    with pytest.raises(DegenerateForm):
        gram(3, [[1, 0], [0, 0]])
    with pytest.raises(FieldMismatch):
        direct_sum(standard_space(2, 3), standard_space(2, 5))


@pytest.mark.parametrize("q,n,sign", [(3, 4, -1), (4, 4, -1), (9, 3, 1), (2, 6, 1)])
def test_space_text_roundtrip(q, n, sign):
    S = standard_space(n, q, sign)
    assert read_space(write_space(S)) == S


@pytest.mark.parametrize("q", [3, 5])
def test_direct_sum_types_multiply(q):
    for s1, s2 in itertools.product((1, -1), repeat=2):
        S = direct_sum(standard_space(2, q, s1), standard_space(2, q, s2))
        assert form_type(S).sign == s1 * s2
