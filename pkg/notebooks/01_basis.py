"""Generalized Gell-Mann basis, structure constants and Bloch vectors."""
import numpy as np

from qorrelate import gell_mann_basis, random_hs
from qorrelate.qstate import from_bloch, purity, to_bloch
from qorrelate.subasis import structure_constants

d = 3
B = gell_mann_basis(d)
print('generators:', B.generators.shape)

# Tr[Pi_mu Pi_nu] = 2 delta, including Pi_0 = sqrt(2/d) I
G = np.einsum('aij,bji->ab', B.full, B.full).real
print('orthonormal:', np.allclose(G, 2 * np.eye(d * d)))

# sum_mu pi_mu^2 is a multiple of the identity
cas = np.einsum('aij,ajk->ik', B.generators, B.generators)
print('Casimir constant:', cas[0, 0].real, 'expected', 2 * (d * d - 1) / d)

sc = structure_constants(B)
print('f antisymmetric:', np.allclose(sc.f, -sc.f.transpose(1, 0, 2)))

rho = random_hs(d, 0)
r = to_bloch(rho)
print('Bloch round trip:', np.allclose(from_bloch(r), rho))
print('purity from |r|^2:', 1 / d + r @ r / 2, 'direct', purity(rho))
