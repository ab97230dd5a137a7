"""Correlation-matrix criteria for entanglement and steering (by Alice).

Every criterion returns a :class:`CriterionVerdict`.  Verdicts are one-sided:
``detected`` means the state is certainly entangled (or steerable), while
``not detected`` is inconclusive.  Boundary states within
``detection_eps`` of the bound are reported as not detected.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (DimensionMismatch, NonpositiveXi, NumericalError,
                     RankDeficientMarginal)
from .matkernel import DEFAULT_TOL, svd, trace_norm
from .measurement import (apply_orbit, eigen_norm_bound, max_bx_norm,
                          max_bx_norm_detail)
from .qstate import (chi_matrix, chi_prime, local_dim, marginals,
                     normal_form, purity)
from .uncertainty import uncertainty_bound, vsum

DETECTION_EPS = 1e-9


@dataclass
class CriterionVerdict:
    criterion: str
    lhs: float
    bound: float
    margin: float
    detected: bool
    threshold: float = DETECTION_EPS
    params: dict = field(default_factory=dict)
    notes: str = ''

    def to_json(self):
        return {'criterion': self.criterion, 'lhs': self.lhs, 'bound': self.bound,
                'margin': self.margin, 'detected': self.detected, 'params': self.params}


def _verdict(cid, lhs, bound, margin, eps, params=None, notes=''):
    return CriterionVerdict(cid, float(lhs), float(bound), float(margin),
                            bool(margin > eps), eps, dict(params or {}), notes)


@dataclass
class CorrelationMatrices:
    C: np.ndarray
    gamma: np.ndarray
    xA: np.ndarray
    xB: np.ndarray
    chi: np.ndarray
    residual: float | None = None


def _check_pair(rho, XA, XB):
    if XA.m != XB.m:
        raise DimensionMismatch(f'measurements have {XA.m} and {XB.m} components')
    d = local_dim(rho)
    if XA.dim != d or XB.dim != d:
        raise DimensionMismatch(f'state has local dimension {d}, measurements act on {XA.dim} and {XB.dim}')
    return d


def correlations(rho, XA, XB, cross_check=True):
    """``C_mu_nu = <X^A_mu (x) X^B_nu>`` and ``gamma = x^A x^B^T - C``.

    Computed from operator expectations; with ``cross_check`` the
    coefficient-matrix route ``M_A^T chi M_B`` is evaluated as well and must
    agree to 1e-8.
    """
    rho = np.asarray(rho)
    d = _check_pair(rho, XA, XB)
    T = rho.reshape(d, d, d, d)
    C = np.einsum('mbd,ndb->mn', np.einsum('abcd,mca->mbd', T, XA.observables),
                  XB.observables).real
    rA, rB = marginals(rho)
    xA = np.einsum('ij,mji->m', rA, XA.observables).real
    xB = np.einsum('ij,mji->m', rB, XB.observables).real
    gamma = np.outer(xA, xB) - C
    chi = residual = None
    if cross_check:
        chi = chi_matrix(rho)
        C2 = XA.M.T @ chi @ XB.M
        g2 = XA.M.T @ (chi_prime(chi, d) - chi) @ XB.M
        residual = float(max(np.abs(C - C2).max(), np.abs(gamma - g2).max()))
        scale = max(1.0, np.abs(C).max())
        if residual > 1e-8 * scale:
            raise NumericalError(f'correlation cross-check failed (residual {residual:.3e})')
    return CorrelationMatrices(C, gamma, xA, xB, chi, residual)


@lru_cache(maxsize=256)
def _S(X):
    return uncertainty_bound(X).value


@lru_cache(maxsize=256)
def _kappa(X):
    return max_bx_norm(X)


@lru_cache(maxsize=256)
def _eig_kappa(X, orbit_search):
    return eigen_norm_bound(X, orbit_search=orbit_search)


def _local_vsums(rho, XA, XB):
    rA, rB = marginals(rho)
    return vsum(rA, XA), vsum(rB, XB)


# -- entanglement ---------------------------------------------------------------

def ent_criterion_C(rho, XA, XB, eps=DETECTION_EPS):
    """Separable states obey ``||C||_tr <= kappa_A kappa_B``."""
    corr = correlations(rho, XA, XB)
    kA, kB = max_bx_norm_detail(XA), max_bx_norm_detail(XB)
    lhs = trace_norm(corr.C)
    bound = _kappa(XA) * _kappa(XB)
    notes = '' if kA.certified and kB.certified else 'kappa from numeric maximisation'
    return _verdict('ent_C', lhs, bound, lhs - bound, eps,
                    {'kappa_A': _kappa(XA), 'kappa_B': _kappa(XB)}, notes)


def ent_criterion_gamma(rho, XA, XB, eps=DETECTION_EPS):
    """Separable states obey ``||gamma||_tr <= ((V_A - S_A) + (V_B - S_B)) / 2``."""
    corr = correlations(rho, XA, XB)
    VA, VB = _local_vsums(rho, XA, XB)
    SA, SB = _S(XA), _S(XB)
    lhs = trace_norm(corr.gamma)
    bound = ((VA - SA) + (VB - SB)) / 2
    return _verdict('ent_gamma', lhs, bound, lhs - bound, eps,
                    {'V_A': VA, 'V_B': VB, 'S_A': SA, 'S_B': SB})


def joint_vsum(rho, XA, XB):
    """Variance sum of the joint observables ``X^A_mu (x) I + I (x) X^B_mu``."""
    d = _check_pair(rho, XA, XB)
    eye = np.eye(d)
    joint = np.array([np.kron(a, eye) + np.kron(eye, b)
                      for a, b in zip(XA.observables, XB.observables)])
    return vsum(rho, joint)


def lur_criterion(rho, XA, XB, eps=DETECTION_EPS):
    """Local uncertainty relation minimised over both measurement orbits.

    The orbit minimum of the joint variance sum is
    ``V_A + V_B - 2 ||gamma||_tr``; separable states keep it above
    ``S_A + S_B``.  Margins are ``bound - lhs``, i.e. twice the margin of
    :func:`ent_criterion_gamma`, and the threshold is scaled to match.
    """
    corr = correlations(rho, XA, XB)
    VA, VB = _local_vsums(rho, XA, XB)
    lhs = VA + VB - 2 * trace_norm(corr.gamma)
    bound = _S(XA) + _S(XB)
    return _verdict('ent_lur', lhs, bound, bound - lhs, 2 * eps,
                    {'V_A': VA, 'V_B': VB, 'S_A': _S(XA), 'S_B': _S(XB)})


def witness(XA, XB, kappa=None):
    """``W = kappa I - sum_mu X^A_mu (x) X^B_mu``."""
    if XA.m != XB.m:
        raise DimensionMismatch(f'measurements have {XA.m} and {XB.m} components')
    if kappa is None:
        kappa = _kappa(XA) * _kappa(XB)
    n = XA.dim * XB.dim
    return kappa * np.eye(n) - sum(np.kron(a, b) for a, b in zip(XA.observables, XB.observables))


def optimal_witness(rho, XA, XB, kappa=None):
    """Witness built from the orbit members that diagonalise ``C``.

    Returns ``(W, Tr[W rho])``; the expectation equals ``kappa - ||C||_tr``.
    """
    corr = correlations(rho, XA, XB)
    U, _, V = svd(corr.C)
    m = XA.m
    OA, OB = _complete_orthogonal(U.real, m), _complete_orthogonal(V.real, m)
    YA, YB = apply_orbit(OA.T, XA), apply_orbit(OB.T, XB)
    if kappa is None:
        kappa = _kappa(XA) * _kappa(XB)
    W = witness(YA, YB, kappa)
    return W, float(np.einsum('ij,ji->', W, rho).real)


def _complete_orthogonal(U, m):
    if U.shape == (m, m):
        return U
    Q, _ = np.linalg.qr(np.hstack([U, np.eye(m)]))
    Q[:, :U.shape[1]] = U
    return Q


def normalform_criterion(rho, variant='C_nf', tol=DEFAULT_TOL, eps=DETECTION_EPS, max_iter=500):
    """Basis-level criteria that all three complete measurement families share.

    ``C_nf``: after local filtering to the normal form, the correlation block
    of the coefficient matrix obeys ``||chi~||_tr <= 2(d-1)/d``.
    ``gamma_nf``: ``||chi' - chi||_tr <= 2 - Tr[rho_A^2] - Tr[rho_B^2]``.
    """
    rho = np.asarray(rho)
    d = local_dim(rho)
    if variant == 'C_nf':
        try:
            nf = normal_form(rho, tol, max_iter)
        except RankDeficientMarginal as exc:
            return CriterionVerdict('ent_C_nf', float('nan'), 2 * (d - 1) / d, float('nan'),
                                    False, eps, {}, f'inconclusive: {exc}')
        chi = chi_matrix(nf.state)
        lhs = trace_norm(chi[1:, 1:])
        bound = 2 * (d - 1) / d
        return _verdict('ent_C_nf', lhs, bound, lhs - bound, eps,
                        {'iterations': nf.iterations, 'deviation': nf.deviation})
    if variant == 'gamma_nf':
        chi = chi_matrix(rho)
        rA, rB = marginals(rho)
        lhs = trace_norm(chi_prime(chi, d) - chi)
        bound = 2 - purity(rA) - purity(rB)
        return _verdict('ent_gamma_nf', lhs, bound, lhs - bound, eps)
    raise ValueError(f'unknown variant {variant!r}')


# -- steering -------------------------------------------------------------------

def steer_criterion_C(rho, XA, XB, orbit_search=False, eps=DETECTION_EPS):
    """Unsteerable states obey ``||C||_tr <= kappa_A kappa_B`` with
    ``kappa_A = sqrt(sum_mu lambda_max(X^A_mu^2))``."""
    corr = correlations(rho, XA, XB)
    kA, kB = _eig_kappa(XA, orbit_search), _kappa(XB)
    lhs = trace_norm(corr.C)
    return _verdict('steer_C', lhs, kA * kB, lhs - kA * kB, eps,
                    {'kappa_A': kA, 'kappa_B': kB, 'orbit_search': orbit_search})


def _xi_bound(xi, VA_terms, VB, SB):
    return (float(np.sum(np.asarray(xi) ** 2 * VA_terms)) + VB - SB) / 2


def steer_criterion_gamma(rho, XA, XB, xi=1.0, eps=DETECTION_EPS):
    """Variance-weighted steering criterion.

    Scalar ``xi > 0``:
    ``||gamma||_tr <= (xi^2 V_A + V_B - S_B) / (2 xi)``.
    Vector ``xi`` (one weight per observable of Alice):
    ``||diag(xi) gamma||_tr <= (V(rho_A, xi o X^A) + V_B - S_B) / 2``.
    ``xi = 1`` is the unenhanced form.
    """
    corr = correlations(rho, XA, XB)
    rA, rB = marginals(rho)
    VB, SB = vsum(rB, XB), _S(XB)
    VA_terms = np.array([vsum(rA, X[None]) for X in XA.observables])
    if np.ndim(xi) == 0:
        xi = float(xi)
        if xi <= 0:
            raise NonpositiveXi(f'xi must be positive, got {xi}')
        lhs = trace_norm(corr.gamma)
        bound = (xi * xi * VA_terms.sum() + VB - SB) / (2 * xi)
        params = {'xi': xi}
    else:
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (XA.m,):
            raise DimensionMismatch(f'xi needs {XA.m} entries, got {xi.shape}')
        lhs = trace_norm(xi[:, None] * corr.gamma)
        bound = _xi_bound(xi, VA_terms, VB, SB)
        params = {'xi': xi.tolist()}
    params.update({'V_A': float(VA_terms.sum()), 'V_B': VB, 'S_B': SB})
    return _verdict('steer_gamma', lhs, bound, lhs - bound, eps, params)


def steer_criterion_gamma_nf(rho, XA, XB, xi, eps=DETECTION_EPS):
    """Normal-form version: local variances replaced by their values at
    maximally mixed marginals, ``(2 sum xi^2 |n^A|^2 + 2 sum |n^B|^2 - d S_B) / 2d``."""
    corr = correlations(rho, XA, XB)
    d = XA.dim
    xi = np.broadcast_to(np.asarray(xi, dtype=float), (XA.m,))
    lhs = trace_norm(xi[:, None] * corr.gamma)
    nA = np.sum(XA.hat ** 2, axis=1)
    nB = np.sum(XB.hat ** 2, axis=1)
    bound = (2 * np.sum(xi ** 2 * nA) + 2 * nB.sum() - d * _S(XB)) / (2 * d)
    return _verdict('steer_gamma_nf', lhs, bound, lhs - bound, eps, {'xi': xi.tolist()})


def best_xi(rho, XA, XB, lo=1e-3, hi=10.0):
    """Scalar ``xi`` maximising the margin of :func:`steer_criterion_gamma`.

    Bounded Brent/golden-section search; returns ``(xi, verdict)``.
    """
    corr = correlations(rho, XA, XB)
    rA, rB = marginals(rho)
    VA, VB, SB = vsum(rA, XA), vsum(rB, XB), _S(XB)
    g = trace_norm(corr.gamma)
    res = minimize_scalar(lambda x: (x * x * VA + VB - SB) / (2 * x) - g,
                          bounds=(lo, hi), method='bounded', options={'xatol': 1e-10})
    xi = float(res.x)
    return xi, steer_criterion_gamma(rho, XA, XB, xi)


def steer_lur(rho, XA, XB, eps=DETECTION_EPS):
    """Orbit-minimised joint variance sum against Bob's bound ``S_B``."""
    corr = correlations(rho, XA, XB)
    VA, VB = _local_vsums(rho, XA, XB)
    lhs = VA + VB - 2 * trace_norm(corr.gamma)
    SB = _S(XB)
    return _verdict('steer_lur', lhs, SB, SB - lhs, 2 * eps,
                    {'V_A': VA, 'V_B': VB, 'S_B': SB})
