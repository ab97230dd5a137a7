"""Density matrices: Bloch form, named families, sampling, normal form.

States are square complex ``numpy`` arrays.  Bipartite states always have
equal local dimensions ``d`` and are ``d^2 x d^2``.
"""
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import (DimensionMismatch, NoConvergence, NotPSD,
                     ParameterOutOfRange, RankDeficientMarginal)
from .matkernel import (DEFAULT_TOL, check_hermitian, inv_sqrtm_psd,
                        partial_trace, partial_transpose)
from .subasis import gell_mann_basis

PAULI = np.array([[[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=complex)


def check_state(rho, tol=DEFAULT_TOL):
    """Validate Hermiticity, unit trace and positivity; return the array."""
    rho = check_hermitian(rho, tol)
    tr = np.trace(rho).real
    if abs(tr - 1) > 1e-10:
        raise NotPSD(f'trace is {tr!r}, expected 1')
    w = np.linalg.eigvalsh(rho)
    if w[0] < -tol.eps_psd:
        raise NotPSD(f'minimum eigenvalue {w[0]:.3e}')
    return rho


def local_dim(rho):
    """Local dimension ``d`` of a bipartite ``d^2 x d^2`` state."""
    n = np.shape(rho)[0]
    d = isqrt(n)
    if d * d != n or d < 2:
        raise DimensionMismatch(f'{n}x{n} is not a bipartite state with equal local dimensions')
    return d


def marginals(rho):
    d = local_dim(rho)
    return partial_trace(rho, d, d, 'A'), partial_trace(rho, d, d, 'B')


def from_bloch(rhat, basis=None, tol=DEFAULT_TOL):
    """``rho = I/d + rhat . pi / 2``; rejects vectors outside the state space."""
    rhat = np.asarray(rhat, dtype=float)
    d = isqrt(rhat.size + 1)
    if d * d != rhat.size + 1:
        raise DimensionMismatch(f'Bloch vector length {rhat.size} is not d^2 - 1')
    basis = basis or gell_mann_basis(d)
    if basis.dim != d:
        raise DimensionMismatch('Bloch vector does not match basis dimension')
    rho = np.eye(d) / d + np.einsum('a,aij->ij', rhat, basis.generators) / 2
    w = np.linalg.eigvalsh(rho)
    if w[0] < -tol.eps_psd:
        raise NotPSD(f'Bloch vector lies outside the state space (min eigenvalue {w[0]:.3e})')
    return rho


def to_bloch(rho, basis=None):
    rho = np.asarray(rho)
    basis = basis or gell_mann_basis(rho.shape[0])
    return np.einsum('ij,aji->a', rho, basis.generators).real


def purity(rho):
    rho = np.asarray(rho)
    return float(np.einsum('ij,ji->', rho, rho).real)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_hs(d, rng_seed=None):
    """Hilbert-Schmidt random state ``A A^dagger / Tr[A A^dagger]`` (Ginibre ``A``)."""
    rng = _rng(rng_seed)
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


def random_pure(d, rng_seed=None):
    rng = _rng(rng_seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_product(d, rng_seed=None, pure=False):
    rng = _rng(rng_seed)
    draw = random_pure if pure else random_hs
    return np.kron(draw(d, rng), draw(d, rng))


def random_separable(d, rng_seed=None, n_terms=8):
    """Random convex mixture of ``1..n_terms`` pure product states."""
    rng = _rng(rng_seed)
    k = int(rng.integers(1, n_terms + 1))
    p = rng.dirichlet(np.ones(k))
    return sum(pk * random_product(d, rng, pure=True) for pk in p)


def werner(p):
    """Singlet mixed with white noise: ``p |psi_s><psi_s| + (1-p) I/4``."""
    if not 0 <= p <= 1:
        raise ParameterOutOfRange(f'p must lie in [0, 1], got {p}')
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return p * np.outer(psi, psi).astype(complex) + (1 - p) * np.eye(4) / 4


def bell_diagonal(t, tol=DEFAULT_TOL):
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise DimensionMismatch('bell_diagonal expects three correlation coefficients')
    rho = (np.eye(4) + np.einsum('a,aij,akl->ikjl', t, PAULI, PAULI).reshape(4, 4)) / 4
    w = np.linalg.eigvalsh(rho)
    if w[0] < -tol.eps_psd:
        raise NotPSD(f'correlations {t.tolist()} do not define a state')
    return rho


def isotropic(d, eta):
    """``I/d^2 + (eta / 2d) sum_mu pi_mu (x) pi_mu^T``."""
    if not 0 < eta <= 1:
        raise ParameterOutOfRange(f'eta must lie in (0, 1], got {eta}')
    P = gell_mann_basis(d).generators
    corr = np.einsum('aij,alk->ikjl', P, P).reshape(d * d, d * d)
    return np.eye(d * d) / d ** 2 + eta / (2 * d) * corr


def horodecki_3x3(t):
    """Horodecki's 3x3 PPT entangled family (Phys. Lett. A 232, 333 (1997)).

    Basis order ``|00>, |01>, ..., |22>``; ``t`` is the family parameter ``a``.
    """
    if not 0 <= t <= 1:
        raise ParameterOutOfRange(f't must lie in [0, 1], got {t}')
    rho = np.diag([t, t, t, t, t, t, (1 + t) / 2, t, (1 + t) / 2]).astype(complex)
    for i, j in ((0, 4), (0, 8), (4, 8)):
        rho[i, j] = rho[j, i] = t
    rho[6, 8] = rho[8, 6] = np.sqrt(1 - t * t) / 2
    return rho / (8 * t + 1)


def horodecki_noise(t, p):
    if not 0 <= p <= 1:
        raise ParameterOutOfRange(f'p must lie in [0, 1], got {p}')
    return p * horodecki_3x3(t) + (1 - p) * np.eye(9) / 9


def chi_matrix(rho, basis=None):
    """``chi_mu_nu = Tr[rho (P_mu (x) P_nu)]``; ``rho = 1/4 sum chi P (x) P``."""
    rho = np.asarray(rho)
    d = local_dim(rho)
    basis = basis or gell_mann_basis(d)
    if basis.dim != d:
        raise DimensionMismatch('basis dimension does not match the state')
    F = basis.full
    T = rho.reshape(d, d, d, d)
    half = np.einsum('abcd,mca->mbd', T, F)
    return np.einsum('mbd,ndb->mn', half, F).real


def chi_prime(chi, d):
    """Coefficient matrix of ``rho_A (x) rho_B`` built from ``chi``."""
    chi = np.asarray(chi)
    return d / 2 * np.outer(chi[:, 0], chi[0, :])


def ppt_positive(rho, tol=DEFAULT_TOL):
    """Return ``(is_ppt, min eigenvalue of the partial transpose on B)``."""
    d = local_dim(rho)
    w = np.linalg.eigvalsh(partial_transpose(rho, d, d))
    return bool(w[0] >= -tol.eps_psd), float(w[0])


@dataclass
class NormalForm:
    state: np.ndarray
    filter_a: np.ndarray
    filter_b: np.ndarray
    iterations: int
    deviation: float


def normal_form(rho, tol=DEFAULT_TOL, max_iter=500):
    """Bring a state to maximally mixed marginals by local filtering.

    Iterates ``rho <- (F_A (x) F_B) rho (F_A (x) F_B)^dagger / Tr`` with
    ``F = (d rho_X)^(-1/2)``.  The output equals
    ``(A (x) B) rho (A (x) B)^dagger`` normalised, with ``A = filter_a`` and
    ``B = filter_b``.
    """
    rho = np.asarray(rho, dtype=complex)
    d = local_dim(rho)
    eye = np.eye(d)
    A, B = eye.astype(complex), eye.astype(complex)
    for it in range(max_iter + 1):
        ra, rb = marginals(rho)
        dev = max(np.abs(ra - eye / d).max(), np.abs(rb - eye / d).max())
        if dev < tol.eps_conv:
            return NormalForm(rho, A, B, it, float(dev))
        if it == max_iter:
            break
        lo = min(np.linalg.eigvalsh(ra)[0], np.linalg.eigvalsh(rb)[0])
        if lo * d < tol.eps_rank:
            raise RankDeficientMarginal(f'marginal eigenvalue {lo:.3e} after {it} iterations')
        fa = inv_sqrtm_psd(d * ra, tol)
        fb = inv_sqrtm_psd(d * rb, tol)
        F = np.kron(fa, fb)
        rho = F @ rho @ F.conj().T
        rho = (rho + rho.conj().T) / 2
        rho /= np.trace(rho).real
        A, B = fa @ A, fb @ B
    raise NoConvergence(f'normal form not reached in {max_iter} iterations (deviation {dev:.3e})')
