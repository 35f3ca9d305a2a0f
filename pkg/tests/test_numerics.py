import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crscope.errors import InputError
from crscope.numerics import (
    Tolerance,
    check_hermitian,
    grouped_permutation,
    null_space,
    rank_gap,
    rank_tol,
    realify,
    signature,
    standard_complex_structure,
)

from conftest import random_hermitian, random_unitary


def test_realify_block_layout():
    M = np.array([[1 + 2j, 3 - 1j]])
    assert np.array_equal(realify(M), [[1, 3, -2, 1], [2, -1, 1, 3]])


def test_realify_is_multiplicative(rng):
    A = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    B = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    assert np.allclose(realify(A @ B), realify(A) @ realify(B))


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 5), st.integers(0, 2**32 - 1))
def test_realified_rank_doubles(p, q, r, seed):
    rng = np.random.default_rng(seed)
    r = min(r, p, q)
    A = (rng.normal(size=(p, r)) + 1j * rng.normal(size=(p, r))) @ (rng.normal(size=(r, q)) + 0j)
    assert rank_tol(realify(A)) == 2 * rank_tol(A) == 2 * r


def test_rank_of_zero_and_empty():
    assert rank_tol(np.zeros((3, 3))) == 0
    assert rank_tol(np.zeros((0, 4))) == 0


def test_rank_is_relative_to_largest_singular_value():
    assert rank_tol(np.diag([1e6, 1.0, 1e-2])) == 3
    assert rank_tol(np.diag([1e6, 1.0, 1e-4])) == 2
    assert rank_tol(np.diag([1.0, 1e-10])) == 1


def test_rank_gap_log_distance():
    gap = rank_gap(np.diag([1.0, 1e-3]))
    assert gap == pytest.approx(6.0)
    assert rank_gap(np.diag([1.0, 0.0])) == pytest.approx(9.0)


def test_null_space_is_orthonormal_kernel(rng):
    A = rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5))
    N = null_space(A)
    assert N.shape == (5, 3)
    assert np.allclose(A @ N, 0)
    assert np.allclose(N.conj().T @ N, np.eye(3))


def test_tolerance_validation():
    with pytest.raises(InputError):
        Tolerance(rank_tol=0.0)
    with pytest.raises(InputError):
        Tolerance(eig_tol=1.5)


def test_check_hermitian_rejects_and_symmetrizes():
    with pytest.raises(InputError):
        check_hermitian([[1, 1], [0, 1]])
    H = check_hermitian([[1, 1j + 1e-14], [-1j, 2]])
    assert np.array_equal(H, H.conj().T)


def test_signature_counts_with_relative_band():
    assert signature(np.diag([3.0, -1.0, 1e-12, -2.0])) == (1, 1, 2)
    assert signature(np.zeros((2, 2))) == (0, 2, 0)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_signature_is_unitarily_invariant(n, seed):
    rng = np.random.default_rng(seed)
    H = random_hermitian(n, rng)
    U = random_unitary(n, rng)
    assert signature(U.conj().T @ H @ U) == signature(H)


def test_grouped_structure_maps_to_global_structure():
    for counts in [(2, 1, 1), (3, 0, 2), (1, 0, 0)]:
        J = standard_complex_structure(*counts)
        P = grouped_permutation(*counts)
        N = sum(counts)
        assert np.allclose(P @ J @ P.T, realify(1j * np.eye(N)))
        assert np.allclose(J @ J, -np.eye(2 * N))
