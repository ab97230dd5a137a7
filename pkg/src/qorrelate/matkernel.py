"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays.  Everything here is a pure function of
its arguments; thresholds come from a :class:`Tolerance` instance.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, InputError, NotHermitian, NotPSD,
                     SingularMatrix)


@dataclass(frozen=True)
class Tolerance:
    eps_herm: float = 1e-10
    eps_psd: float = 1e-10
    eps_rank: float = 1e-10
    eps_conv: float = 1e-12

    def __post_init__(self):
        for name in ('eps_herm', 'eps_psd', 'eps_rank', 'eps_conv'):
            if not getattr(self, name) > 0:
                raise InputError(f'{name} must be strictly positive')


DEFAULT_TOL = Tolerance()


def as_matrix(M, dtype=complex):
    """Return ``M`` as a finite 2-D array, raising on NaN/Inf."""
    A = np.asarray(M, dtype=dtype)
    if A.ndim != 2:
        raise DimensionMismatch(f'expected a 2-D matrix, got shape {A.shape}')
    if not np.all(np.isfinite(A)):
        raise InputError('matrix has non-finite entries')
    return A


def hermitian_residual(M):
    M = np.asarray(M)
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def check_hermitian(M, tol=DEFAULT_TOL):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f'matrix is not square: {M.shape}')
    res = hermitian_residual(M)
    if res > tol.eps_herm:
        raise NotHermitian(f'Hermiticity residual {res:.3e} exceeds {tol.eps_herm:.1e}')
    return M


def hermitian_eig(M, tol=DEFAULT_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, V)`` with ``M @ V[:, i] == w[i] * V[:, i]``.
    """
    M = check_hermitian(M, tol)
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    return w[::-1].copy(), V[:, ::-1].copy()


def svd(M):
    """Thin SVD ``M = U @ diag(s) @ V^dagger`` with ``s`` descending."""
    M = as_matrix(M, dtype=np.result_type(np.asarray(M).dtype, float))
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    return U, s, Vh.conj().T


def trace_norm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False).sum())


def pinv(M, tol=DEFAULT_TOL):
    """Moore-Penrose inverse with a relative singular-value cutoff.

    Singular values below ``tol.eps_rank * s_max`` are treated as zero, so
    exactly rank-deficient Gram matrices (e.g. traceless SCMs) need no
    special handling by the caller.
    """
    U, s, V = svd(M)
    if s.size == 0 or s[0] == 0:
        return np.zeros((np.shape(M)[1], np.shape(M)[0]), dtype=U.dtype)
    keep = s > tol.eps_rank * s[0]
    return (V[:, keep] / s[keep]) @ U[:, keep].conj().T


def matrix_rank(M, tol=DEFAULT_TOL):
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol.eps_rank * s[0]))


def kron(A, B):
    return np.kron(A, B)


def partial_trace(M, dimA, dimB, keep='A'):
    """Trace out one factor of a ``(dimA*dimB)``-square operator."""
    M = np.asarray(M)
    if M.shape != (dimA * dimB, dimA * dimB):
        raise DimensionMismatch(f'shape {M.shape} does not match dims ({dimA}, {dimB})')
    T = M.reshape(dimA, dimB, dimA, dimB)
    if keep == 'A':
        return np.einsum('ibjb->ij', T)
    if keep == 'B':
        return np.einsum('aiaj->ij', T)
    raise InputError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(M, dimA, dimB):
    """Transpose on subsystem B."""
    M = np.asarray(M)
    if M.shape != (dimA * dimB, dimA * dimB):
        raise DimensionMismatch(f'shape {M.shape} does not match dims ({dimA}, {dimB})')
    T = M.reshape(dimA, dimB, dimA, dimB)
    return T.transpose(0, 3, 2, 1).reshape(dimA * dimB, dimA * dimB)


def _psd_eig(M, tol):
    M = check_hermitian(M, tol)
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    if w.size and w[0] < -tol.eps_psd:
        raise NotPSD(f'minimum eigenvalue {w[0]:.3e} below -{tol.eps_psd:.1e}')
    return np.clip(w, 0.0, None), V


def sqrtm_psd(M, tol=DEFAULT_TOL):
    w, V = _psd_eig(M, tol)
    return (V * np.sqrt(w)) @ V.conj().T


def inv_sqrtm_psd(M, tol=DEFAULT_TOL):
    w, V = _psd_eig(M, tol)
    if w.size and w[0] < tol.eps_rank:
        raise SingularMatrix(f'minimum eigenvalue {w[0]:.3e} below {tol.eps_rank:.1e}')
    return (V / np.sqrt(w)) @ V.conj().T


def random_orthogonal(m, rng):
    """Haar-random element of O(m)."""
    Q, R = np.linalg.qr(rng.standard_normal((m, m)))
    return Q * np.sign(np.diag(R))


def random_hermitian(d, rng):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (A + A.conj().T) / 2
