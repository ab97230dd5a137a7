import numpy as np
import pytest
from hypothesis import given, strategies as st

from qorrelate.criteria import (best_xi, correlations, ent_criterion_C,
                                ent_criterion_gamma, joint_vsum,
                                lur_criterion, normalform_criterion,
                                optimal_witness, steer_criterion_C,
                                steer_criterion_gamma,
                                steer_criterion_gamma_nf, steer_lur, witness)
from qorrelate.errors import DimensionMismatch, NonpositiveXi
from qorrelate.matkernel import random_orthogonal, trace_norm
from qorrelate.measurement import (apply_orbit, dichotomy, gellmann_measurement,
                                   identity_gellmann, new_measurement,
                                   orthogonal_measurement, pauli, scm,
                                   sic_parameters)
from qorrelate.qstate import (PAULI, bell_diagonal, isotropic, marginals,
                              normal_form, ppt_positive, purity, random_hs,
                              random_product, random_pure, random_separable,
                              werner)
from qorrelate.uncertainty import vsum

seeds = st.integers(0, 2 ** 32 - 1)


def realign(rho, d):
    return rho.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def test_singlet_correlations():
    c = correlations(werner(1), pauli(), pauli())
    assert np.allclose(c.C, -np.eye(3)) and c.residual < 1e-12
    assert np.allclose(c.gamma, np.eye(3))


def test_product_state_gamma_vanishes(rng):
    XA, XB = scm(3, 0.6, 0.2), orthogonal_measurement(3)
    c = correlations(random_product(3, rng), XA, XB)
    assert np.abs(c.gamma).max() < 1e-8


def test_correlation_input_checks():
    with pytest.raises(DimensionMismatch):
        correlations(werner(1), pauli(), orthogonal_measurement(2))
    with pytest.raises(DimensionMismatch):
        correlations(werner(1), gellmann_measurement(3), gellmann_measurement(3))


def test_ccnr_equivalence(rng):
    om = orthogonal_measurement(3)
    for _ in range(5):
        rho = random_hs(9, rng)
        assert ent_criterion_C(rho, om, om).lhs == pytest.approx(trace_norm(realign(rho, 3)))


def test_ent_C_examples():
    sic = scm(2, *sic_parameters(2))
    v = ent_criterion_C(werner(1), sic, sic)
    assert v.bound == pytest.approx(1 / 3) and v.detected
    om = orthogonal_measurement(2)
    assert not ent_criterion_C(werner(1 / 3), om, om).detected


def test_ent_gamma_examples(rng):
    v = ent_criterion_gamma(werner(1), pauli(), pauli())
    assert v.lhs == pytest.approx(3) and v.detected
    assert v.params['S_A'] == pytest.approx(2)
    om = orthogonal_measurement(3)
    for _ in range(5):
        rho = random_hs(9, rng)
        rA, rB = marginals(rho)
        assert ent_criterion_gamma(rho, om, om).bound == pytest.approx((2 - purity(rA) - purity(rB)) / 2)
    assert ent_criterion_gamma(random_product(2, rng), pauli(), pauli()).lhs < 1e-8


def test_lur_closed_form_not_beaten_by_orbit_samples(rng):
    rho = random_hs(4, rng)
    XA, XB = pauli(), dichotomy(1.0)
    XB = new_measurement(np.concatenate([XB.observables, PAULI[2:]]))
    closed = lur_criterion(rho, XA, XB).lhs
    for _ in range(200):
        YA = apply_orbit(random_orthogonal(3, rng), XA)
        YB = apply_orbit(random_orthogonal(3, rng), XB)
        assert joint_vsum(rho, YA, YB) >= closed - 1e-10
    assert not lur_criterion(random_product(2, rng), XA, XB).detected


def test_witness(rng):
    W = witness(pauli(), pauli())
    assert np.allclose(W, W.conj().T)
    for _ in range(500):
        assert np.trace(W @ random_separable(2, rng)).real >= -1e-10
    Wo, e = optimal_witness(werner(1), pauli(), pauli())
    assert e == pytest.approx(1 - 3)
    rho = random_hs(9, rng)
    XA, XB = scm(3, 0.8, 0.1), identity_gellmann(3, 0.5)
    Wo, e = optimal_witness(rho, XA, XB)
    v = ent_criterion_C(rho, XA, XB)
    assert e == pytest.approx(v.bound - v.lhs, abs=1e-8)
    assert np.allclose(Wo, Wo.conj().T)


def test_optimal_witness_soundness(rng):
    XA, XB = orthogonal_measurement(2), orthogonal_measurement(2)
    Wo, _ = optimal_witness(werner(0.9), XA, XB)
    for _ in range(200):
        assert np.trace(Wo @ random_separable(2, rng)).real >= -1e-10


def test_normalform_bell_diagonal():
    for t in ([0.3, -0.4, 0.2], [-0.5, -0.4, -0.3], [0.6, -0.5, 0.1]):
        v = normalform_criterion(bell_diagonal(t), 'C_nf')
        assert v.lhs == pytest.approx(np.abs(t).sum())
        assert v.detected == (np.abs(t).sum() > 1 + 1e-9)


def test_normalform_trivial_and_inconclusive():
    mixed = np.eye(9) / 9
    assert not normalform_criterion(mixed, 'C_nf').detected
    assert not normalform_criterion(mixed, 'gamma_nf').detected
    v = normalform_criterion(random_product(2, 1, pure=True), 'C_nf')
    assert not v.detected and 'inconclusive' in v.notes
    with pytest.raises(ValueError):
        normalform_criterion(mixed, 'other')


def test_normalform_matches_ppt_on_qubits(rng):
    for _ in range(60):
        rho = random_hs(4, rng)
        v = normalform_criterion(rho, 'C_nf')
        ok, mn = ppt_positive(rho)
        if abs(v.margin) > 1e-6 and abs(mn) > 1e-6:
            assert v.detected == (not ok)


@pytest.mark.parametrize('d', [2, 3])
def test_normal_form_equivalence_of_presets(d, rng):
    XS = [scm(d, 0.9, 0.4), identity_gellmann(d, 0.6), orthogonal_measurement(d)]
    for _ in range(20):
        rho = normal_form(random_hs(d * d, rng)).state if d == 2 else \
            normal_form(0.5 * random_hs(d * d, rng) + 0.5 * isotropic(d, 0.9)).state
        verdicts = {ent_criterion_C(rho, X, X).detected for X in XS}
        assert len(verdicts) == 1


def test_steer_C_examples(rng):
    om = orthogonal_measurement(2)
    for p in (0.2, 0.5, 0.9):
        v = steer_criterion_C(werner(p), om, om)
        assert v.lhs == pytest.approx((3 * p + 1) / 2)
        assert v.bound == pytest.approx(np.sqrt(2))
    assert not steer_criterion_C(random_product(2, rng), om, om).detected
    X = dichotomy(np.pi / 2)
    v = steer_criterion_C(werner(0.8), X, X)
    assert v.lhs == pytest.approx(1.6) and v.bound == pytest.approx(np.sqrt(2))


def test_steer_gamma_bell_diagonal():
    for t in ([-0.6, -0.5, -0.4], [0.3, 0.3, -0.9], [0.5, 0.4, -0.8], [0.7, -0.6, 0.5]):
        t = np.array(t)
        v = steer_criterion_gamma(bell_diagonal(t), pauli(), pauli(), t)
        assert v.lhs == pytest.approx(t @ t)
        assert v.detected == (t @ t > 1 + 1e-9)


@pytest.mark.parametrize('d', [2, 3, 4])
def test_steer_gamma_isotropic(d):
    g = gellmann_measurement(d)
    thr = 1 / np.sqrt(d + 1)
    for eta in (thr - 1e-3, thr + 1e-3):
        assert steer_criterion_gamma(isotropic(d, eta), g, g, eta).detected == (eta > thr)


def test_steer_gamma_scalar_vs_vector_and_errors(rng):
    rho = random_hs(4, rng)
    a = steer_criterion_gamma(rho, pauli(), pauli(), 0.7)
    b = steer_criterion_gamma(rho, pauli(), pauli(), np.full(3, 0.7))
    # the vector form scales gamma by xi; the scalar form divides the bound by xi
    assert b.lhs == pytest.approx(0.7 * a.lhs) and b.bound == pytest.approx(0.7 * a.bound)
    with pytest.raises(NonpositiveXi):
        steer_criterion_gamma(rho, pauli(), pauli(), 0.0)
    with pytest.raises(DimensionMismatch):
        steer_criterion_gamma(rho, pauli(), pauli(), [1, 2])
    v = steer_criterion_gamma(random_product(2, rng), pauli(), pauli(), 0.3)
    assert not v.detected


def test_best_xi_matches_closed_form(rng):
    for _ in range(5):
        rho = random_hs(4, rng)
        xi, v = best_xi(rho, pauli(), pauli())
        rA, rB = marginals(rho)
        a, b = vsum(rA, pauli()), vsum(rB, pauli()) - 2
        assert xi == pytest.approx(np.sqrt(b / a), rel=1e-5)
        for other in (0.3, 0.6, 1.2):
            assert v.margin >= steer_criterion_gamma(rho, pauli(), pauli(), other).margin - 1e-12


def test_steer_gamma_nf_on_normal_form_states(rng):
    rho = bell_diagonal([0.7, -0.6, 0.5])
    xi = np.array([0.5, 0.9, 1.1])
    assert steer_criterion_gamma_nf(rho, pauli(), pauli(), xi).bound == pytest.approx(
        steer_criterion_gamma(rho, pauli(), pauli(), xi).bound)


def test_steer_lur_examples():
    assert steer_lur(werner(1), pauli(), pauli()).detected
    assert not steer_lur(np.eye(4) / 4, pauli(), pauli()).detected


@given(seeds)
def test_soundness_on_separable_and_product(seed):
    rng = np.random.default_rng(seed)
    sep = random_separable(2, rng)
    for X in (pauli(), orthogonal_measurement(2), scm(2, *sic_parameters(2))):
        assert not ent_criterion_C(sep, X, X).detected
        assert not ent_criterion_gamma(sep, X, X).detected
        assert not lur_criterion(sep, X, X).detected
    assert not normalform_criterion(sep, 'gamma_nf').detected
    prod = random_product(2, rng)
    om = orthogonal_measurement(2)
    assert not steer_criterion_C(prod, om, om).detected
    assert not steer_criterion_gamma(prod, pauli(), pauli(), rng.uniform(0.1, 3)).detected
    assert not steer_lur(prod, pauli(), pauli()).detected


@given(seeds)
def test_equivalences(seed):
    rng = np.random.default_rng(seed)
    rho = random_hs(4, rng) if seed % 2 else 0.5 * random_hs(4, rng) + 0.5 * werner(1)
    XA, XB = pauli(), apply_orbit(random_orthogonal(3, rng), pauli())
    assert lur_criterion(rho, XA, XB).detected == ent_criterion_gamma(rho, XA, XB).detected
    assert steer_lur(rho, XA, XB).detected == steer_criterion_gamma(rho, XA, XB, 1.0).detected
    assert lur_criterion(rho, XA, XB).margin == pytest.approx(2 * ent_criterion_gamma(rho, XA, XB).margin)


@given(seeds, st.sampled_from([2, 3]))
def test_orbit_invariance(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_hs(d * d, rng)
    pairs = [(scm(d, 0.8, 0.3), orthogonal_measurement(d)),
             (identity_gellmann(d, 0.4), scm(d, 1.0, 0.0)),
             (gellmann_measurement(d), gellmann_measurement(d))]
    for XA, XB in pairs:
        YA = apply_orbit(random_orthogonal(XA.m, rng), XA)
        YB = apply_orbit(random_orthogonal(XB.m, rng), XB)
        for fn in (ent_criterion_C, ent_criterion_gamma, lur_criterion, steer_lur):
            a, b = fn(rho, XA, XB), fn(rho, YA, YB)
            assert a.lhs == pytest.approx(b.lhs, abs=1e-8)
            assert a.bound == pytest.approx(b.bound, abs=1e-8)
        a, b = steer_criterion_gamma(rho, XA, XB, 0.6), steer_criterion_gamma(rho, YA, YB, 0.6)
        assert (a.lhs, a.bound) == pytest.approx((b.lhs, b.bound), abs=1e-8)
    if d == 2:
        P = pauli()
        QA = apply_orbit(random_orthogonal(3, rng), P)
        QB = apply_orbit(random_orthogonal(3, rng), P)
        a, b = steer_criterion_C(rho, P, P), steer_criterion_C(rho, QA, QB)
        assert (a.lhs, a.bound) == pytest.approx((b.lhs, b.bound), abs=1e-8)
