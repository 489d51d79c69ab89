from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injgen.linalg import (QQ, DimensionError, Field, Mat, column_space, kernel_basis, left_kernel,
                           minimal_polynomial, poly_eval_matrix, solve, solve_matrix, sparse_kernel)

GF5 = Field(5)


def matrices(field=QQ, max_rows=5, max_cols=5):
    def build(shape):
        r, c = shape
        lo, hi = (-4, 4) if field.is_rational else (0, field.p - 1)
        return st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: Mat.from_rows(field, rows, cols=c))
    return st.tuples(st.integers(0, max_rows), st.integers(0, max_cols)).flatmap(build)


def test_field_coercion():
    assert QQ("3/6") == Fraction(1, 2)
    assert GF5(7) == 2
    assert GF5.inv(2) == 3
    with pytest.raises(ValueError):
        Field(6)


def test_rank_and_kernel_small():
    m = Mat.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])
    assert m.rank() == 1
    K = kernel_basis(m)
    assert K.cols == 2
    assert (m @ K).is_zero()


def test_solve_inconsistent_and_shape():
    m = Mat.from_rows(QQ, [[1, 1], [1, 1]])
    assert solve(m, [1, 2]) is None
    assert solve(m, [2, 2]) is not None
    with pytest.raises(DimensionError):
        solve(m, [1, 2, 3])


def test_inverse_over_gf():
    m = Mat.from_rows(GF5, [[1, 2], [3, 4]])
    assert m @ m.inverse() == Mat.identity(GF5, 2)


def test_minimal_polynomial_nilpotent():
    n = Mat.from_rows(QQ, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert minimal_polynomial(n) == [0, 0, 0, 1]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + kernel_basis(m).cols == m.cols
    assert (m @ kernel_basis(m)).is_zero()
    assert column_space(m).cols == m.rank()
    assert (left_kernel(m) @ m).is_zero() if m.rows else True


@settings(max_examples=60, deadline=None)
@given(matrices(GF5))
def test_rank_nullity_gf5(m):
    assert m.rank() + kernel_basis(m).cols == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_solve_recovers_consistent_systems(m, xs):
    x = xs[:m.cols]
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=4, max_cols=4))
def test_solve_matrix_matches_columns(m):
    B = m @ Mat.identity(QQ, m.cols)
    X = solve_matrix(m, B)
    assert X is not None and m @ X == B


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=4, max_cols=4).filter(lambda m: m.rows == m.cols))
def test_minimal_polynomial_annihilates(m):
    assert poly_eval_matrix(minimal_polynomial(m), m).is_zero()


@settings(max_examples=80, deadline=None)
@given(matrices(QQ, 6, 7))
def test_sparse_kernel_matches_dense(m):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m.data]
    assert sparse_kernel(QQ, rows, m.cols) == kernel_basis(m).columns()


@settings(max_examples=80, deadline=None)
@given(matrices(GF5, 6, 7))
def test_sparse_kernel_matches_dense_mod_p(m):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m.data]
    assert sparse_kernel(GF5, rows, m.cols) == kernel_basis(m).columns()
