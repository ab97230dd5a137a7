"""Measurement sets, their orbits, SCM construction and state reconstruction.

A measurement is an ordered list of ``m`` Hermitian ``d x d`` observables.
Row ``mu`` of :attr:`Measurement.coeffs` holds the coefficients of
observable ``mu`` in the basis of :mod:`qorrelate.subasis`, so
``coeffs.T`` is the matrix ``M`` that maps the state coefficient matrix to
correlation matrices.

Constructors for the named families attach a ``family`` record (name plus
parameters).  Closed-form bounds are dispatched on it, and
:func:`apply_orbit` keeps it because those bounds are orbit invariants.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import (DimensionMismatch, IncompleteMeasurement,
                     InconsistentData, InputError, NotOrthogonal, NotSCM)
from .matkernel import DEFAULT_TOL, check_hermitian, matrix_rank, pinv
from .subasis import assemble_observable, expand_observable, gell_mann_basis

HOMOGENEITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Measurement:
    dim: int
    observables: np.ndarray  # (m, d, d)
    coeffs: np.ndarray  # (m, d^2)
    traceless: bool
    homogeneous: bool
    common_trace: float | None
    alpha: float | None
    family: dict = field(default_factory=dict)

    @property
    def m(self):
        return len(self.observables)

    @property
    def hat(self):
        """Traceless coefficient vectors, one row per observable."""
        return self.coeffs[:, 1:]

    @property
    def M(self):
        """Coefficient matrix with observables as columns (``d^2 x m``)."""
        return self.coeffs.T

    def __len__(self):
        return self.m


def new_measurement(mats, basis=None, family=None, tol=DEFAULT_TOL):
    mats = [np.asarray(X, dtype=complex) for X in mats]
    if not mats:
        raise InputError('a measurement needs at least one observable')
    d = mats[0].shape[0]
    for X in mats:
        if X.shape != (d, d):
            raise DimensionMismatch(f'observable shapes differ: {X.shape} vs {(d, d)}')
        check_hermitian(X, tol)
    basis = basis or gell_mann_basis(d)
    obs = np.array(mats)
    coeffs = np.array([expand_observable(X, basis, tol) for X in obs])
    traces = np.trace(obs, axis1=1, axis2=2).real
    lengths = np.linalg.norm(coeffs[:, 1:], axis=1)
    common_trace = float(traces[0]) if np.ptp(traces) <= HOMOGENEITY_TOL else None
    homogeneous = bool(np.ptp(lengths) <= HOMOGENEITY_TOL)
    obs.setflags(write=False)
    coeffs.setflags(write=False)
    return Measurement(
        dim=d, observables=obs, coeffs=coeffs,
        traceless=bool(np.all(np.abs(traces) <= HOMOGENEITY_TOL)),
        homogeneous=homogeneous, common_trace=common_trace,
        alpha=float(lengths[0]) if homogeneous else None,
        family=dict(family or {}))


def apply_orbit(O, X, tol=DEFAULT_TOL):
    """Measurement ``Y_mu = sum_nu O_mu_nu X_nu`` on the orbit of ``X``."""
    O = np.asarray(O, dtype=float)
    if O.shape != (X.m, X.m):
        raise DimensionMismatch(f'orbit matrix must be {X.m}x{X.m}, got {O.shape}')
    if np.abs(O @ O.T - np.eye(X.m)).max() > tol.eps_herm:
        raise NotOrthogonal('orbit matrix is not orthogonal')
    return new_measurement(np.einsum('mn,nij->mij', O, X.observables),
                           family=X.family, tol=tol)


def regular_simplex(n):
    """``n + 1`` unit vectors in R^n with pairwise cosine ``-1/n``.

    Built from the Helmert basis of the hyperplane orthogonal to
    ``(1, ..., 1)``; vertex ``i`` is the projection of ``e_i``.
    """
    if n < 1:
        raise InputError('simplex dimension must be >= 1')
    H = np.zeros((n, n + 1))
    for k in range(1, n + 1):
        H[k - 1, :k] = 1
        H[k - 1, k] = -k
        H[k - 1] /= np.sqrt(k * (k + 1))
    return (H * np.sqrt((n + 1) / n)).T


def scm(d, alpha, h, basis=None, rotation=None):
    """Symmetric complete measurement ``X_mu = (h/d) I + alpha e_mu . pi``.

    ``rotation`` optionally rotates the simplex inside R^(d^2-1); the
    canonical orientation is used otherwise.
    """
    if alpha <= 0 or h < 0:
        raise InputError('SCM needs alpha > 0 and h >= 0')
    basis = basis or gell_mann_basis(d)
    E = regular_simplex(d * d - 1)
    if rotation is not None:
        E = E @ np.asarray(rotation, dtype=float).T
    obs = h / d * np.eye(d) + alpha * np.einsum('ma,aij->mij', E, basis.generators)
    return new_measurement(obs, basis, family={'name': 'scm', 'd': d, 'alpha': alpha, 'h': h})


def sic_parameters(d):
    """``(alpha, h)`` that make an SCM trace-normalised like a SIC-POVM."""
    return np.sqrt((d - 1) / (2 * d ** 3)), 1 / d


def sic_check(X, tol=DEFAULT_TOL):
    """POVM and SIC diagnostics.

    The SIC Gram pattern tested is ``Tr[X_mu X_nu] = (d delta + 1) / (d^2 (d + 1))``,
    the value implied by ``sum X_mu^2 = I/d``.
    """
    d, m = X.dim, X.m
    total = X.observables.sum(axis=0)
    sums_to_identity = bool(np.abs(total - np.eye(d)).max() < 1e-8)
    min_eig = min(np.linalg.eigvalsh(Y)[0] for Y in X.observables)
    is_povm = sums_to_identity and min_eig >= -tol.eps_psd
    target = (d * np.eye(m) + 1) / (d * d * (d + 1))
    gram_ok = m == d * d and bool(np.abs(gram(X) - target).max() < 1e-8)
    return {'is_povm': bool(is_povm), 'is_sic': bool(is_povm and gram_ok),
            'details': {'sums_to_identity': sums_to_identity,
                        'min_eigenvalue': float(min_eig), 'sic_gram': gram_ok}}


def orthogonal_measurement(d, basis=None):
    """``{P_mu / sqrt(2)}``, so ``Tr[X_mu X_nu] = delta_mu_nu``."""
    basis = basis or gell_mann_basis(d)
    return new_measurement(basis.full / np.sqrt(2), basis, family={'name': 'om', 'd': d})


def gellmann_measurement(d, basis=None):
    """The ``d^2 - 1`` generators themselves."""
    basis = basis or gell_mann_basis(d)
    return new_measurement(basis.generators, basis, family={'name': 'gellmann', 'd': d})


def identity_gellmann(d, h, basis=None):
    """``{h I / sqrt(d), pi_mu / sqrt(2)}``; ``h = 1`` is the orthogonal measurement."""
    basis = basis or gell_mann_basis(d)
    obs = np.concatenate([h / np.sqrt(d) * np.eye(d)[None], basis.generators / np.sqrt(2)])
    return new_measurement(obs, basis, family={'name': 'identity_gellmann', 'd': d, 'h': h})


def pauli():
    return gellmann_measurement(2)


def qubit_pair(n1, n2):
    """Two qubit observables ``n1 . sigma`` and ``n2 . sigma``."""
    n1, n2 = np.asarray(n1, dtype=float), np.asarray(n2, dtype=float)
    P = gell_mann_basis(2).generators
    obs = [np.einsum('a,aij->ij', n, P) for n in (n1, n2)]
    fam = {}
    l1, l2 = np.linalg.norm(n1), np.linalg.norm(n2)
    if l1 > 0 and abs(l1 - l2) <= HOMOGENEITY_TOL:
        cos = np.clip(n1 @ n2 / (l1 * l2), -1, 1)
        fam = {'name': 'dichotomy', 'theta': float(np.arccos(cos)), 'alpha': float(l1)}
    return new_measurement(obs, family=fam)


def dichotomy(theta, alpha=1.0):
    """Qubit pair in the x-y plane with angle ``theta`` between the axes."""
    return qubit_pair(alpha * np.array([1.0, 0, 0]),
                      alpha * np.array([np.cos(theta), np.sin(theta), 0]))


def expectation_vector(rho, X):
    rho = np.asarray(rho)
    if rho.shape != (X.dim, X.dim):
        raise DimensionMismatch(f'state is {rho.shape}, measurement acts on dimension {X.dim}')
    return np.einsum('ij,mji->m', rho, X.observables).real


def gram(X):
    return np.einsum('mij,nji->mn', X.observables, X.observables).real


def span_dim(X, tol=DEFAULT_TOL):
    return matrix_rank(gram(X), tol)


def _complete_system(xvec, X, tol):
    """Observables and data spanning operator space.

    When ``X`` alone falls one dimension short but ``X`` plus the identity
    does not, the identity is appended with expectation 1 (unit trace).
    """
    x = np.asarray(xvec, dtype=float)
    if x.shape != (X.m,):
        raise DimensionMismatch(f'expected {X.m} expectation values, got {x.shape}')
    obs = X.observables
    full = X.dim ** 2
    if span_dim(X, tol) != full:
        obs = np.concatenate([np.eye(X.dim)[None], obs])
        x = np.concatenate([[1.0], x])
        r = matrix_rank(np.einsum('mij,nji->mn', obs, obs).real, tol)
        if r != full:
            raise IncompleteMeasurement(f'observables and identity span {r} dimensions, need {full}')
    return obs, x


def purity_from_moments(xvec, X, tol=DEFAULT_TOL):
    """``Tr[rho^2] = x^T Omega^- x`` for a complete measurement."""
    obs, x = _complete_system(xvec, X, tol)
    G = np.einsum('mij,nji->mn', obs, obs).real
    return float(x @ pinv(G, tol).real @ x)


def reconstruct_general(xvec, X, tol=DEFAULT_TOL):
    """``rho = sum_mu w_mu X_mu`` with ``w = Omega^- x`` (null-space term dropped)."""
    obs, x = _complete_system(xvec, X, tol)
    G = np.einsum('mij,nji->mn', obs, obs).real
    Gp = pinv(G, tol).real
    if np.abs(G @ Gp @ x - x).max() > 1e-8 * max(1.0, np.abs(x).max()):
        raise InconsistentData('expectation values are not consistent with any operator')
    return np.einsum('m,mij->ij', Gp @ x, obs)


@dataclass
class Reconstruction:
    state: np.ndarray
    is_psd: bool
    min_eigenvalue: float


def reconstruct_scm(xvec, X, tol=DEFAULT_TOL):
    """Closed-form reconstruction from SCM expectation values.

    For ``h = 0`` the measurement is padded with the identity (whose
    expectation is 1) and the block pseudo-inverse ``1/d (+) Omega'^-`` is
    used, which reduces to the same expression with ``h = 0``.
    """
    fam = X.family
    if fam.get('name') != 'scm':
        raise NotSCM('reconstruct_scm needs a measurement built by scm()')
    d, alpha, h = X.dim, fam['alpha'], fam['h']
    x = np.asarray(xvec, dtype=float)
    if x.shape != (X.m,):
        raise DimensionMismatch(f'expected {X.m} expectation values, got {x.shape}')
    c = (d * d - 1) / (2 * d * d * alpha ** 2)
    if h > 0:
        rho = c * np.einsum('m,mij->ij', x, X.observables) + (1 / d - h * h * c) * np.eye(d)
    else:
        aug = np.concatenate([np.eye(d)[None], X.observables])
        G = np.einsum('mij,nji->mn', aug, aug).real
        w = pinv(G, tol).real @ np.concatenate([[1.0], x])
        rho = np.einsum('m,mij->ij', w, aug)
    w_min = float(np.linalg.eigvalsh(rho)[0])
    return Reconstruction(rho, w_min >= -tol.eps_psd, w_min)


# -- B(X) extremes -----------------------------------------------------------

def _pure_objective(vr, obs, sign, extra=None):
    """``sign * f`` and its gradient for ``f = |x|^2`` (or variance sum when
    ``extra`` holds ``sum X_mu^2``) over unnormalised state vectors."""
    d = obs.shape[1]
    v = vr[:d] + 1j * vr[d:]
    n = np.vdot(v, v).real
    Xv = obs @ v
    a = np.einsum('i,mi->m', v.conj(), Xv).real / n
    f = a @ a
    grad = 2 * np.einsum('m,mi->i', a, Xv - a[:, None] * v) / n
    if extra is not None:
        Qv = extra @ v
        b = np.vdot(v, Qv).real / n
        f = b - f
        grad = (Qv - b * v) / n - grad
    g = 2 * np.concatenate([grad.real, grad.imag])
    return sign * f, sign * g


def optimize_pure(obs, maximize, n_starts, seed=0, extra=None, tol=1e-12):
    """Multi-start L-BFGS over pure states; returns ``(best value, best vector)``.

    Ties are resolved by the lowest start index, so results are deterministic.
    """
    obs = np.asarray(obs, dtype=complex)
    d = obs.shape[1]
    rng = np.random.default_rng(seed)
    starts = rng.standard_normal((n_starts, 2 * d))
    sign = -1.0 if maximize else 1.0
    best, best_v = None, None
    for s in starts:
        res = minimize(_pure_objective, s, args=(obs, sign, extra), jac=True,
                       method='L-BFGS-B', options={'ftol': tol, 'gtol': 1e-10})
        val = sign * res.fun
        if best is None or (val > best + 1e-15 if maximize else val < best - 1e-15):
            best, best_v = val, res.x
    v = best_v[:d] + 1j * best_v[d:]
    return float(best), v / np.linalg.norm(v)


@dataclass
class BxNorm:
    value: float
    method: str
    certified: bool


def max_bx_norm_detail(X, n_starts=64, seed=0):
    """``max |x|`` over the expectation-vector set, with the method used.

    Named families use their closed forms; anything else is maximised over
    pure states, which gives a lower bound on the true maximum
    (``certified=False``).
    """
    fam = X.family
    name, d = fam.get('name'), X.dim
    if name == 'scm':
        return BxNorm(float(np.sqrt(2 * d * fam['alpha'] ** 2 / (d + 1) + fam['h'] ** 2)), 'closed_form', True)
    if name == 'identity_gellmann':
        return BxNorm(float(np.sqrt((d - 1 + fam['h'] ** 2) / d)), 'closed_form', True)
    if name == 'gellmann':
        return BxNorm(float(np.sqrt(2 * (d - 1) / d)), 'closed_form', True)
    if name == 'om':
        return BxNorm(1.0, 'closed_form', True)
    if name == 'dichotomy':
        return BxNorm(float(fam['alpha'] * np.sqrt(1 + abs(np.cos(fam['theta'])))), 'closed_form', True)
    best, _ = optimize_pure(X.observables, True, n_starts, seed)
    return BxNorm(float(np.sqrt(max(best, 0.0))), 'numeric_max', False)


def max_bx_norm(X, n_starts=64, seed=0):
    return max_bx_norm_detail(X, n_starts, seed).value


def max_bx_norm_numeric(X, n_starts=64, seed=0):
    """Pure-state maximisation regardless of family (cross-check path)."""
    best, _ = optimize_pure(X.observables, True, n_starts, seed)
    return float(np.sqrt(max(best, 0.0)))


# -- steering bound on Alice's side -------------------------------------------

def _eig_norm(obs):
    return float(np.sqrt(sum(np.linalg.eigvalsh(Y @ Y)[-1] for Y in obs)))


def _cayley(params, m):
    A = np.zeros((m, m))
    A[np.triu_indices(m, 1)] = params
    A = A - A.T
    I = np.eye(m)
    return np.linalg.solve(I + A, I - A)


@dataclass
class EigenBound:
    value: float
    orbit_searched: bool
    upper_bound_on_min: bool


def eigen_norm_bound_detail(X, orbit_search=False, n_starts=32, seed=0):
    """``sqrt(sum_mu lambda_max(X_mu^2))`` for ``X`` as given, optionally
    reduced by a Cayley-parametrised search over its orbit.

    Any orbit member's value is a valid (if looser) bound, so the search only
    ever tightens it; the result is flagged as an upper bound on the orbit
    minimum.
    """
    base = _eig_norm(X.observables)
    if not orbit_search or X.m < 2:
        return EigenBound(base, False, True)
    m = X.m
    k = m * (m - 1) // 2
    rng = np.random.default_rng(seed)

    def f(p):
        return _eig_norm(np.einsum('mn,nij->mij', _cayley(p, m), X.observables))

    best = base
    for i in range(n_starts):
        p0 = np.zeros(k) if i == 0 else rng.normal(scale=1.0, size=k)
        res = minimize(f, p0, method='Powell', options={'xtol': 1e-8, 'ftol': 1e-12})
        best = min(best, float(res.fun))
    return EigenBound(best, True, True)


def eigen_norm_bound(X, orbit_search=False, n_starts=32, seed=0):
    return eigen_norm_bound_detail(X, orbit_search, n_starts, seed).value


def assemble(coeffs, d):
    """Measurement from a ``m x d^2`` coefficient matrix."""
    basis = gell_mann_basis(d)
    return new_measurement([assemble_observable(n, basis) for n in np.asarray(coeffs)], basis)
