"""Symmetric complete measurements, SIC-POVMs and state reconstruction."""
import numpy as np

from qorrelate import random_hs
from qorrelate.measurement import (expectation_vector, gram, reconstruct_general,
                                   reconstruct_scm, scm, sic_check, sic_parameters)

d = 3
alpha, h = sic_parameters(d)
X = scm(d, alpha, h)
print('SIC parameters for d=3:', alpha, h)
print('Gram matrix diagonal / off-diagonal:', gram(X)[0, 0], gram(X)[0, 1])
print('SIC check (depends on simplex orientation):', sic_check(X))

rho = random_hs(d, 1)
x = expectation_vector(rho, X)
rec = reconstruct_scm(x, X)
print('closed-form reconstruction error:', np.abs(rec.state - rho).max())

# h = 0: the observables are traceless; the identity is appended internally
X0 = scm(d, 1.0, 0.0)
rec0 = reconstruct_general(expectation_vector(rho, X0), X0)
print('pseudo-inverse branch error:', np.abs(rec0 - rho).max())
