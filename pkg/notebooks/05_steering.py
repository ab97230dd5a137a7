"""Steering criteria for Werner and isotropic states."""
import numpy as np

from qorrelate.criteria import best_xi, steer_criterion_C, steer_criterion_gamma, steer_lur
from qorrelate.experiments import werner_closed_form, werner_two_setting_threshold
from qorrelate.measurement import gellmann_measurement, orthogonal_measurement, pauli
from qorrelate.qstate import isotropic, werner

om = orthogonal_measurement(2)
print('OM steering at p=0.65:', steer_criterion_C(werner(0.65), om, om).detected)

for delta in (np.pi / 4, np.pi / 2, 3 * np.pi / 4):
    print(f'two settings at angle {delta:.3f}: p* {werner_two_setting_threshold(delta):.6f}'
          f'  closed form {werner_closed_form(delta):.6f}')

P = pauli()
rho = werner(0.7)
xi, v = best_xi(rho, P, P)
print(f'best xi {xi:.4f}: margin {v.margin:.4f}')
print('LUR with xi=1:', steer_lur(rho, P, P).detected)

d = 3
g = gellmann_measurement(d)
for eta in (0.45, 0.55):
    v = steer_criterion_gamma(isotropic(d, eta), g, g, xi=eta)
    print(f'isotropic d=3 eta={eta}: detected {v.detected} (threshold {1 / np.sqrt(d + 1):.4f})')
