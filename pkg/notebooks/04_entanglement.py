"""Entanglement criteria on Werner, Bell-diagonal and Horodecki states."""
import numpy as np

from qorrelate.criteria import (ent_criterion_C, ent_criterion_gamma, lur_criterion,
                                normalform_criterion, optimal_witness)
from qorrelate.measurement import orthogonal_measurement, scm, sic_parameters
from qorrelate.qstate import bell_diagonal, horodecki_noise, ppt_positive, werner

om = orthogonal_measurement(2)
for p in (0.2, 1 / 3, 0.5, 0.9):
    v = ent_criterion_C(werner(p), om, om)
    print(f'Werner p={p:.3f}: ||C|| {v.lhs:.4f} vs {v.bound:.4f} detected {v.detected}')

rho = werner(0.6)
print('gamma criterion:', ent_criterion_gamma(rho, om, om).detected,
      'LUR:', lur_criterion(rho, om, om).detected)

W, expectation = optimal_witness(rho, om, om)
print('optimal witness expectation (negative means detected):', expectation)

print('normal form on Bell-diagonal t=(-0.8,-0.8,-0.8):',
      normalform_criterion(bell_diagonal([-0.8, -0.8, -0.8])).to_json())

# bound entanglement: PPT but detected by the SIC correlation criterion
rhoH = horodecki_noise(0.3, 0.999)
sic = scm(3, *sic_parameters(3))
print('Horodecki PPT:', ppt_positive(rhoH)[0],
      'SIC criterion detects:', ent_criterion_C(rhoH, sic, sic).detected)
