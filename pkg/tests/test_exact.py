import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from surfcalc.errors import UsageError
from surfcalc.exact import (
    QMatrix, determinant, fmt, is_negative_definite, leading_minors, nullspace, rref,
    solve_linear, to_rational,
)

small = st.fractions(min_value=-6, max_value=6, max_denominator=6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def symmetric(draw, lo=1, hi=4):
    n = draw(st.integers(lo, hi))
    upper = {(i, j): draw(small) for i in range(n) for j in range(i, n)}
    return QMatrix.from_rows([[upper[min(i, j), max(i, j)] for j in range(n)] for i in range(n)])


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = Fraction(-1) ** inversions
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


def negdef_by_all_principal_minors(A: QMatrix) -> bool:
    # -A positive definite iff every principal minor of -A is positive
    n = A.rows
    neg = [[-A[i, j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            if leibniz_det([[neg[i][j] for j in idx] for i in idx]) <= 0:
                return False
    return True


def test_to_rational_and_fmt():
    assert to_rational("-12/5") == Fraction(-12, 5)
    assert to_rational(3) == 3
    assert fmt(Fraction(4)) == "4"
    assert fmt(Fraction(-6, 5)) == "-6/5"
    assert fmt(Fraction(2, 4)) == "1/2"
    with pytest.raises(UsageError):
        to_rational(0.5)


def test_solve_examples():
    A = QMatrix.from_rows([[-1, 1], [1, -2]])
    assert solve_linear(A, [-1, 0]) == (2, 1)
    assert solve_linear(QMatrix.identity(2), [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    assert solve_linear(QMatrix.from_rows([[1, 1], [2, 2]]), [1, 1]) is None
    with pytest.raises(UsageError):
        solve_linear(A, [1, 2, 3])
    with pytest.raises(UsageError):
        solve_linear(QMatrix.from_rows([[1, 2]]), [1])


def test_negative_definite_examples():
    assert is_negative_definite(QMatrix.from_rows([[-1, 1], [1, -2]]))
    G = QMatrix.from_rows([[-2, 1, 1, 0], [1, -2, 0, 0], [1, 0, -2, 1], [0, 0, 1, -2]])
    assert leading_minors(G) == [-2, 3, -4, 5]
    assert is_negative_definite(G)
    assert not is_negative_definite(QMatrix.from_rows([[0]]))
    with pytest.raises(UsageError):
        is_negative_definite(QMatrix.from_rows([[-1, 1], [0, -1]]))


def test_qmatrix_shape_checks():
    with pytest.raises(UsageError):
        QMatrix.from_rows([[1, 2], [3]])
    M = QMatrix.from_rows([[1, 2], [3, 4]])
    assert M.submatrix([1]).to_rows() == [[4]]
    assert M.matvec([1, 1]) == (3, 7)
    assert not M.is_symmetric()


@given(square(3), st.lists(small, min_size=3, max_size=3))
def test_solution_substitutes_back(rows, b):
    A = QMatrix.from_rows(rows)
    x = solve_linear(A, b)
    if x is None:
        assert determinant(A) == 0
    else:
        assert A.matvec(x) == tuple(b)


@given(st.integers(1, 4).flatmap(square))
def test_determinant_matches_sympy(rows):
    assert determinant(QMatrix.from_rows(rows)) == sympy.Matrix(rows).det()


@given(symmetric())
def test_negdef_matches_minors_oracle(A):
    assert is_negative_definite(A) == negdef_by_all_principal_minors(A)


@given(symmetric(2, 4))
def test_negdef_inherited_by_principal_submatrices(A):
    if is_negative_definite(A):
        for k in range(1, A.rows):
            for idx in itertools.combinations(range(A.rows), k):
                assert is_negative_definite(A.submatrix(idx))


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rref_and_nullspace(rows):
    reduced, pivots = rref(rows)
    assert len(pivots) == sympy.Matrix(rows).rank()
    again, _ = rref(reduced)
    assert again == reduced
    for v in nullspace(rows, 4):
        assert all(sum(r[j] * v[j] for j in range(4)) == 0 for r in rows)
    assert len(nullspace(rows, 4)) == 4 - len(pivots)


@given(small, small, small)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert to_rational(to_rational(a)) == a
    assert a.denominator > 0
