import numpy as np
import pytest
from hypothesis import given, strategies as st

from qorrelate.errors import (DimensionMismatch, InputError, NotHermitian,
                              NotPSD, SingularMatrix)
from qorrelate.matkernel import (Tolerance, check_hermitian, hermitian_eig,
                                 inv_sqrtm_psd, matrix_rank, partial_trace,
                                 partial_transpose, pinv, random_hermitian,
                                 random_orthogonal, sqrtm_psd, svd,
                                 trace_norm)

def moore_penrose_residuals(A, Ap):
    """The four defining conditions, each relative to its natural scale."""
    H = lambda M: M.conj().T
    nA, nP = max(np.abs(A).max(), 1e-300), max(np.abs(Ap).max(), 1e-300)
    return (np.abs(A @ Ap @ A - A).max() / nA, np.abs(Ap @ A @ Ap - Ap).max() / nP,
            np.abs(H(A @ Ap) - A @ Ap).max(), np.abs(H(Ap @ A) - Ap @ A).max())


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6),
       st.booleans())
def test_pinv_moore_penrose(seed, r, c, k, cplx):
    rng = np.random.default_rng(seed)
    draw = lambda *s: rng.standard_normal(s) + (1j * rng.standard_normal(s) if cplx else 0)
    A = draw(r, k) @ draw(k, c)
    for r in moore_penrose_residuals(A, pinv(A)):
        assert r < 1e-8


def test_pinv_rank_deficient_and_zero(rng):
    B = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 4))
    assert matrix_rank(B) == 2
    assert max(moore_penrose_residuals(B, pinv(B))) < 1e-8
    assert np.all(pinv(np.zeros((3, 2))) == 0)
    assert pinv(np.zeros((3, 2))).shape == (2, 3)


def test_pinv_matches_numpy_for_full_rank(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.allclose(pinv(A), np.linalg.inv(A))


def test_svd_and_trace_norm(rng):
    A = rng.standard_normal((3, 5))
    U, s, V = svd(A)
    assert np.allclose(U @ np.diag(s) @ V.conj().T, A)
    assert np.all(np.diff(s) <= 0)
    assert trace_norm(np.diag([3.0, -2.0, 0.5])) == pytest.approx(5.5)
    assert trace_norm(np.zeros((0, 0))) == 0.0


def test_hermitian_checks(rng):
    H = random_hermitian(4, rng)
    w, V = hermitian_eig(H)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(H @ V, V * w)
    with pytest.raises(NotHermitian):
        check_hermitian(H + np.triu(np.ones((4, 4)), 1) * 1e-6)
    with pytest.raises(DimensionMismatch):
        check_hermitian(np.ones((2, 3)))
    with pytest.raises(InputError):
        check_hermitian(np.array([[np.nan, 0], [0, 1]]))


def test_custom_tolerance_relaxes_hermiticity():
    M = np.array([[1, 1e-7], [0, 1]])
    with pytest.raises(NotHermitian):
        check_hermitian(M)
    check_hermitian(M, Tolerance(eps_herm=1e-6))
    with pytest.raises(InputError):
        Tolerance(eps_psd=0)


def test_sqrtm_and_inverse(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    P = A @ A.conj().T + 0.1 * np.eye(3)
    S = sqrtm_psd(P)
    assert np.allclose(S @ S, P)
    assert np.allclose(inv_sqrtm_psd(P) @ S, np.eye(3))
    with pytest.raises(NotPSD):
        sqrtm_psd(-np.eye(2))
    with pytest.raises(SingularMatrix):
        inv_sqrtm_psd(np.diag([1.0, 0.0]))


def test_partial_trace_and_transpose(rng):
    a, b = random_hermitian(2, rng), random_hermitian(3, rng)
    M = np.kron(a, b)
    assert np.allclose(partial_trace(M, 2, 3, 'A'), a * np.trace(b))
    assert np.allclose(partial_trace(M, 2, 3, 'B'), b * np.trace(a))
    assert np.allclose(partial_transpose(M, 2, 3), np.kron(a, b.T))
    with pytest.raises(InputError):
        partial_trace(M, 2, 3, 'C')
    with pytest.raises(DimensionMismatch):
        partial_transpose(M, 2, 2)


def test_random_orthogonal(rng):
    O = random_orthogonal(5, rng)
    assert np.allclose(O @ O.T, np.eye(5))
