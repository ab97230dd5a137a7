"""Entanglement and steering detection from arbitrary Hermitian measurement sets."""
from .criteria import (CorrelationMatrices, CriterionVerdict, best_xi,
                       correlations, ent_criterion_C, ent_criterion_gamma,
                       lur_criterion, normalform_criterion, optimal_witness,
                       steer_criterion_C, steer_criterion_gamma,
                       steer_criterion_gamma_nf, steer_lur, witness)
from .errors import *  # noqa: F401,F403
from .matkernel import DEFAULT_TOL, Tolerance, pinv, svd, trace_norm
from .measurement import (Measurement, apply_orbit, dichotomy,
                          eigen_norm_bound, gellmann_measurement,
                          identity_gellmann, max_bx_norm, new_measurement,
                          orthogonal_measurement, pauli, qubit_pair,
                          reconstruct_general, reconstruct_scm, scm,
                          sic_check, sic_parameters)
from .qstate import (bell_diagonal, chi_matrix, chi_prime, from_bloch,
                     horodecki_3x3, horodecki_noise, isotropic, marginals,
                     normal_form, ppt_positive, purity, random_hs, to_bloch,
                     werner)
from .subasis import gell_mann_basis, structure_constants
from .uncertainty import casimir, uncertainty_bound, vsum

__version__ = '0.1.0'
