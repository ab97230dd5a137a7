"""Orthogonal Hermitian operator basis: identity plus su(d) generators.

Normalisation is ``Tr[P_mu P_nu] = 2 delta_mu_nu`` for the full set
``(P_0, pi_1, ..., pi_{d^2-1})`` with ``P_0 = sqrt(2/d) * I``.  Generators use
the generalized Gell-Mann order: symmetric off-diagonal pairs ``(j, k)`` for
``j < k`` in lexicographic order, then the antisymmetric pairs in the same
order, then the ``d-1`` diagonal matrices.  For ``d = 2`` this gives
``(sigma_x, sigma_y, sigma_z)``.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, DimensionTooSmall
from .matkernel import DEFAULT_TOL, check_hermitian


@dataclass(frozen=True, eq=False)
class SuBasis:
    dim: int
    pi0: np.ndarray
    generators: np.ndarray  # shape (d^2 - 1, d, d)

    @property
    def full(self):
        """All ``d^2`` basis operators, identity component first."""
        return np.concatenate([self.pi0[None], self.generators])


@dataclass(frozen=True, eq=False)
class StructureConstants:
    f: np.ndarray
    g: np.ndarray


def _generators(d):
    gens = []
    pairs = list(combinations(range(d), 2))
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1
        gens.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        gens.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        gens.append(np.sqrt(2 / (l * (l + 1))) * np.diag(diag).astype(complex))
    return np.array(gens)


@lru_cache(maxsize=None)
def _cached_basis(d):
    pi0 = np.sqrt(2 / d) * np.eye(d, dtype=complex)
    gens = _generators(d)
    pi0.setflags(write=False)
    gens.setflags(write=False)
    return SuBasis(d, pi0, gens)


def gell_mann_basis(d):
    if int(d) != d or d < 2:
        raise DimensionTooSmall(f'dimension must be an integer >= 2, got {d}')
    return _cached_basis(int(d))


def structure_constants(basis):
    """Real tensors ``f`` and ``g`` of
    ``pi_a pi_b = (2/d) delta_ab I + sum_c (i f_abc + g_abc) pi_c``."""
    P = basis.generators
    prod = np.einsum('aij,bjk->abik', P, P)
    comm = prod - prod.transpose(1, 0, 2, 3)
    anti = prod + prod.transpose(1, 0, 2, 3)
    f = np.einsum('abij,cji->abc', comm, P) / 4j
    g = np.einsum('abij,cji->abc', anti, P) / 4
    return StructureConstants(f.real.copy(), g.real.copy())


def expand_observable(X, basis, tol=DEFAULT_TOL):
    """Real coefficients ``n_mu = Tr[X P_mu] / 2`` (length ``d^2``)."""
    X = check_hermitian(X, tol)
    if X.shape[0] != basis.dim:
        raise DimensionMismatch(f'observable is {X.shape[0]}-dimensional, basis is {basis.dim}')
    return np.einsum('ij,aji->a', X, basis.full).real / 2


def assemble_observable(n, basis):
    n = np.asarray(n, dtype=float)
    if n.shape != (basis.dim ** 2,):
        raise DimensionMismatch(f'expected {basis.dim ** 2} coefficients, got {n.shape}')
    return np.einsum('a,aij->ij', n, basis.full)
