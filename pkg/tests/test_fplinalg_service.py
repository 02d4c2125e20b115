import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from models.errors import FieldError
from models.matrix import FpMatrix
from services import fplinalg_service as la

PRIMES = st.sampled_from([2, 3, 5, 7])


def matrices(max_side=6):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(lambda shape: arrays(np.int64, shape, elements=st.integers(0, 6)))


@seed(1)
@given(matrices(), PRIMES)
def test_rank_plus_nullity(a, p):
    a = a % p
    assert la.rank_of(a, p) + la.nullspace(a, p).shape[0] == a.shape[1]


@seed(2)
@given(matrices(), PRIMES)
def test_nullspace_is_annihilated(a, p):
    kernel = la.nullspace(a, p)
    assert not np.any(la.mat_mul(a, kernel.T, p))


@seed(3)
@given(matrices(), PRIMES)
def test_left_kernel_is_annihilated(a, p):
    kernel = la.left_kernel(a, p)
    assert not np.any(la.mat_mul(kernel, a, p))
    assert kernel.shape[0] == a.shape[0] - la.rank_of(a, p)


@seed(4)
@settings(max_examples=60)
@given(matrices(), PRIMES, st.data())
def test_solve_left_finds_consistent_solutions(a, p, data):
    x = data.draw(arrays(np.int64, (2, a.shape[0]), elements=st.integers(0, p - 1)))
    b = la.mat_mul(x, a, p)
    found = la.solve_left(a, b, p)
    assert found is not None
    assert np.array_equal(la.mat_mul(found, a, p), b)


@seed(5)
@given(matrices(), PRIMES)
def test_row_basis_spans_the_rows(a, p):
    basis = la.row_basis(a, p)
    assert basis.shape[0] == la.rank_of(a, p)
    assert la.in_span(a % p, basis, p)


def test_solve_left_reports_inconsistency():
    a = np.array([[1, 0], [0, 0]])
    assert la.solve_left(a, np.array([[0, 1]]), 2) is None


def test_inverse_over_f5():
    a = np.array([[2, 1], [1, 1]])
    inv = la.inverse(a, 5)
    assert np.array_equal(la.mat_mul(a, inv, 5), np.eye(2, dtype=np.int64))
    assert la.inverse(np.array([[1, 2], [2, 4]]), 5) is None


def test_intersect_of_coordinate_planes():
    a = np.array([[1, 0, 0], [0, 1, 0]])
    b = np.array([[0, 1, 0], [0, 0, 1]])
    assert np.array_equal(la.intersect(a, b, 3), np.array([[0, 1, 0]]))


def test_empty_inputs():
    assert la.rank_of(np.zeros((0, 3), dtype=np.int64), 2) == 0
    assert la.as_rows([], 4).shape == (0, 4)
    assert la.nullspace(np.zeros((0, 3), dtype=np.int64), 2).shape == (3, 3)


def test_fpmatrix_wrappers():
    m = FpMatrix(3, [[1, 2], [2, 1]])
    reduced, rank, pivots = la.rref(m)
    assert rank == 1 and pivots == [0]
    assert la.kernel_basis(m).rows == 1
    x = la.solve(m, FpMatrix(3, [[0, 0]]))
    assert x is not None and x.rows == 1


def test_matrix_product_needs_same_field():
    with pytest.raises(FieldError):
        FpMatrix(2, [[1]]) @ FpMatrix(3, [[1]])


@pytest.mark.parametrize('modulus', [0, 1, 4, 9])
def test_modulus_must_be_prime(modulus):
    with pytest.raises(FieldError):
        FpMatrix(modulus, [[1]])
