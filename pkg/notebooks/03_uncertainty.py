"""Variance sums and their state-independent lower bounds."""
import numpy as np

from qorrelate import random_hs
from qorrelate.measurement import dichotomy, orthogonal_measurement, scm
from qorrelate.uncertainty import scm_vsum_identity, uncertainty_bound, vsum

for theta in (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2):
    X = dichotomy(theta)
    closed = uncertainty_bound(X)
    numeric = uncertainty_bound(X, method='numeric')
    print(f'theta={theta:.3f}  closed {closed.value:.6f}  numeric {numeric.value:.6f}')

d = 3
X = scm(d, 1.0, 0.2)
rho = random_hs(d, 2)
print('SCM variance sum identity:', scm_vsum_identity(rho, X))
print('OM bound:', uncertainty_bound(orthogonal_measurement(d)).value,
      'variance sum of a random state:', vsum(rho, orthogonal_measurement(d)))
