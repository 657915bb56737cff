import numpy as np
import pytest
from hypothesis import given, strategies as st

from magbilap import min_singular_value, singular_values
from magbilap.svd import bidiagonal_singular_values, bidiagonalize


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_against_numpy(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    ref = np.linalg.svd(A, compute_uv=False)
    got = singular_values(A)
    assert got.shape == ref.shape
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-13 * ref[0])
    assert min_singular_value(A) == pytest.approx(ref[-1], rel=1e-11, abs=1e-13 * ref[0])


@pytest.mark.parametrize("shape", [(40, 40), (79, 81), (200, 150)])
def test_larger_shapes(shape):
    rng = np.random.default_rng(sum(shape))
    A = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    ref = np.linalg.svd(A, compute_uv=False)
    assert np.max(np.abs(singular_values(A) - ref) / ref) < 1e-12


def test_zero_and_diagonal():
    assert np.array_equal(singular_values(np.zeros((3, 2))), [0, 0])
    assert min_singular_value(np.zeros((2, 2))) == 0.0
    D = np.diag([3.0, -1e-8, 2.0, 0.5j])
    assert np.allclose(singular_values(D), [3, 2, 0.5, 1e-8], rtol=1e-13, atol=0)
    assert min_singular_value(D) == pytest.approx(1e-8, rel=1e-12)


def test_rank_deficient():
    rng = np.random.default_rng(3)
    B = rng.normal(size=(6, 2)) @ rng.normal(size=(2, 5))
    assert min_singular_value(B) < 1e-12 * singular_values(B)[0]


def test_bidiagonal_preserves_values():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(7, 4)) + 1j * rng.normal(size=(7, 4))
    d, e = bidiagonalize(A)
    B = np.diag(d) + np.diag(e, 1)
    assert np.allclose(np.linalg.svd(B, compute_uv=False), np.linalg.svd(A, compute_uv=False))
    assert np.allclose(bidiagonal_singular_values(d, e), np.linalg.svd(B, compute_uv=False))


def test_hermitian_shift_floor():
    # ||(A - i nu) x|| >= |nu| ||x|| for Hermitian A
    rng = np.random.default_rng(9)
    X = rng.normal(size=(30, 30)) + 1j * rng.normal(size=(30, 30))
    A = X + X.conj().T
    for nu in (0.5, 1.0, 2.0):
        assert min_singular_value(A - 1j * nu * np.eye(30)) >= nu * (1 - 1e-12)
