"""Variance sums over measurement sets and their state-independent bounds."""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSCM
from .matkernel import DEFAULT_TOL, check_hermitian
from .measurement import Measurement, optimize_pure
from .qstate import purity
from .subasis import gell_mann_basis


def variance(rho, X, tol=DEFAULT_TOL):
    X = check_hermitian(X, tol)
    rho = np.asarray(rho)
    m1 = np.einsum('ij,ji->', rho, X).real
    m2 = np.einsum('ij,jk,ki->', rho, X, X).real
    return max(float(m2 - m1 * m1), 0.0)


def vsum(rho, X):
    """Sum of the variances of every observable in ``X``."""
    rho = np.asarray(rho)
    obs = X.observables if isinstance(X, Measurement) else np.asarray(X)
    if rho.shape != obs.shape[1:]:
        raise DimensionMismatch(f'state {rho.shape} vs observables {obs.shape[1:]}')
    m1 = np.einsum('ij,mji->m', rho, obs).real
    m2 = np.einsum('ij,mjk,mki->m', rho, obs, obs).real
    return float(np.clip(m2 - m1 * m1, 0.0, None).sum())


@dataclass
class CasimirData:
    N: np.ndarray
    cprime: np.ndarray
    residual: float


def casimir(X, basis=None):
    """``N = sum_mu nhat_mu nhat_mu^T`` and ``C' = sum_kl N_kl pi_k pi_l``.

    ``residual`` is the deviation of ``sum_mu X_mu^2`` from its expansion
    into the identity, linear and ``C'`` parts.
    """
    d = X.dim
    basis = basis or gell_mann_basis(d)
    P = basis.generators
    hat = X.hat
    n0 = X.coeffs[:, 0]
    N = hat.T @ hat
    cprime = np.einsum('kl,kij,ljn->in', N, P, P)
    lin = np.einsum('m,ma,aij->ij', n0, hat, P)
    expected = (2 / d) * (n0 @ n0) * np.eye(d) + 2 * np.sqrt(2 / d) * lin + cprime
    total = np.einsum('mij,mjk->ik', X.observables, X.observables)
    return CasimirData(N, cprime, float(np.abs(total - expected).max()))


@dataclass
class UncertaintyBound:
    value: float
    method: str
    certificate: np.ndarray | None = None


def uncertainty_bound(X, method='auto', n_starts=128, seed=0):
    """State-independent lower bound ``S`` on the variance sum of ``X``.

    ``method='auto'`` uses a closed form when ``X`` belongs to a known
    family and falls back to minimising the variance sum over pure states
    (the minimum of a concave function sits on the extreme points).  The
    numeric value is the best local minimum found, not a certified global
    one.
    """
    fam = X.family
    name, d = fam.get('name'), X.dim
    if method == 'auto':
        if name == 'dichotomy':
            return UncertaintyBound(fam['alpha'] ** 2 * (1 - abs(np.cos(fam['theta']))),
                                    'closed_form_dichotomy')
        if name == 'scm':
            return UncertaintyBound(2 * d * d * fam['alpha'] ** 2 / (d + 1), 'closed_form_scm')
        if name in ('om', 'identity_gellmann'):
            return UncertaintyBound(float(d - 1), 'closed_form_table')
        if name == 'gellmann':
            return UncertaintyBound(float(2 * (d - 1)), 'closed_form_table')
    Q = np.einsum('mij,mjk->ik', X.observables, X.observables)
    val, v = optimize_pure(X.observables, False, n_starts, seed, extra=Q)
    return UncertaintyBound(max(val, 0.0), 'numeric_min', v)


def scm_vsum_identity(rho, X):
    """Compare the SCM variance sum with ``2 d^2 (d - Tr rho^2) alpha^2 / (d^2 - 1)``."""
    if X.family.get('name') != 'scm':
        raise NotSCM('scm_vsum_identity needs a measurement built by scm()')
    d, alpha = X.dim, X.family['alpha']
    lhs = vsum(rho, X)
    rhs = 2 * d * d * (d - purity(rho)) * alpha ** 2 / (d * d - 1)
    lo, hi = 2 * d * d * alpha ** 2 / (d + 1), 2 * d * alpha ** 2
    return {'lhs': lhs, 'rhs': rhs, 'residual': abs(lhs - rhs),
            'within_bounds': bool(lo - 1e-10 <= lhs <= hi + 1e-10)}


def qubit_bloch_forms(rho, n1, n2):
    """Robertson and Schroedinger right-hand sides for ``n1.sigma, n2.sigma``.

    Both are computed in Bloch form and cross-checked against the operator
    expressions; the returned residuals record the agreement.
    """
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise DimensionMismatch('qubit_bloch_forms needs a single-qubit state')
    n1, n2 = np.asarray(n1, dtype=float), np.asarray(n2, dtype=float)
    P = gell_mann_basis(2).generators
    r = np.einsum('ij,aji->a', rho, P).real
    cross = np.cross(n1, n2) @ r
    # |<[X1, X2]>/2|^2 with <[X1, X2]> = 2i (n1 x n2) . r
    commutator_rhs = cross ** 2
    schrodinger_rhs = commutator_rhs + (n1 @ n2 - (n1 @ r) * (n2 @ r)) ** 2

    X1, X2 = np.einsum('a,aij->ij', n1, P), np.einsum('a,aij->ij', n2, P)

    def ev(A):
        return np.trace(rho @ A)

    op_comm = abs(ev(X1 @ X2 - X2 @ X1) / 2) ** 2
    op_schr = op_comm + abs(ev(X1 @ X2 + X2 @ X1) / 2 - ev(X1) * ev(X2)) ** 2
    return {'commutator_rhs': float(commutator_rhs),
            'schrodinger_rhs': float(schrodinger_rhs),
            'variance_product': variance(rho, X1) * variance(rho, X2),
            'operator_residual': float(max(abs(op_comm - commutator_rhs),
                                           abs(op_schr - schrodinger_rhs)))}


def variance_product_witness(theta):
    """A pure qubit state on which the variance product of the pair at angle
    ``theta`` (and both its lower bounds) vanish: the Bloch vector along the
    second axis."""
    n1 = np.array([1.0, 0, 0])
    n2 = np.array([np.cos(theta), np.sin(theta), 0])
    P = gell_mann_basis(2).generators
    rho = np.eye(2) / 2 + np.einsum('a,aij->ij', n2, P) / 2
    return rho, qubit_bloch_forms(rho, n1, n2)
