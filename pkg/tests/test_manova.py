import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from matbeta import manova
from matbeta.errors import DegenerateDesign, NotEstimable, NotPD, ShapeError
from matbeta.fixtures import EXAMPLES, ROY_TABLE, toy_oneway
from matbeta.hyper import SeriesControl
from matbeta.manova import HypothesisSpec, LinearModel, SSMatrices
from oracles import beta_prime_upper


def toy_ss():
    Y, X, C = toy_oneway()
    return manova.sums_of_squares(LinearModel(Y, X), HypothesisSpec(C))


def test_fit_reproduces_group_means():
    Y, X, _ = toy_oneway()
    fitted = X @ manova.fit(LinearModel(Y, X))
    for g in range(3):
        rows = slice(4 * g, 4 * g + 4)
        assert np.allclose(fitted[rows], Y[rows].mean(axis=0))


def test_sums_of_squares_match_direct_formulas():
    Y, X, _ = toy_oneway()
    ss = toy_ss()
    grand = Y.mean(axis=0)
    between = np.zeros((2, 2))
    within = np.zeros((2, 2))
    for g in range(3):
        block = Y[4 * g:4 * g + 4]
        dev = block.mean(axis=0) - grand
        between += 4 * np.outer(dev, dev)
        within += (block - block.mean(axis=0)).T @ (block - block.mean(axis=0))
    assert np.allclose(ss.S_H, between, atol=1e-12)
    assert np.allclose(ss.S_E, within, atol=1e-12)
    assert (ss.nu_h, ss.nu_e) == (2, 9)


def test_generalised_inverse_choice_does_not_matter():
    # reparametrise with a full-rank cell-means design; S_H, S_E must not move
    Y, X, _ = toy_oneway()
    cells = X[:, 1:]
    ss_full = manova.sums_of_squares(LinearModel(Y, cells),
                                     HypothesisSpec(np.array([[1.0, -1, 0], [1, 0, -1]])))
    ss = toy_ss()
    assert np.allclose(ss.S_H, ss_full.S_H, atol=1e-12)
    assert np.allclose(ss.S_E, ss_full.S_E, atol=1e-12)


def test_not_estimable():
    Y, X, _ = toy_oneway()
    with pytest.raises(NotEstimable):
        manova.sums_of_squares(LinearModel(Y, X), HypothesisSpec(np.array([[0.0, 1.0, 0.0, 0.0]])))


def test_model_shape_checks():
    Y, X, C = toy_oneway()
    with pytest.raises(ShapeError):
        LinearModel(Y[:-1], X)
    with pytest.raises(DegenerateDesign):
        LinearModel(Y[:2], X[:2])
    with pytest.raises(ShapeError):
        HypothesisSpec(C[:, :3]).resolve(LinearModel(Y, X))
    with pytest.raises(DegenerateDesign):
        HypothesisSpec(np.vstack([C, C[0]])).resolve(LinearModel(Y, X))


def test_swap_parameters():
    assert manova.swap_parameters(2, 1, 24) == (1, 2, 23)
    assert manova.swap_parameters(2, 3, 24) == (2, 3, 24)
    assert manova.swap_parameters(4, 2, 10) == (2, 4, 8)
    with pytest.raises(DegenerateDesign):
        manova.swap_parameters(5, 1, 3)


def test_criteria_relations():
    ss = toy_ss()
    rep = manova.classical_criteria(ss)
    st_ = rep.statistics
    lam = np.array(rep.eigenvalues)
    th = lam / (1 + lam)
    assert st_["Wilks_Lambda"] == pytest.approx(np.prod(1 - th))
    assert st_["Wilks_Lambda"] == pytest.approx(st_["Wilks_Lambda_det"], rel=1e-10)
    assert st_["U_s"] == pytest.approx(np.trace(manova.f_statistic(ss)), rel=1e-12)
    assert st_["V_s"] + st_["W_s"] == pytest.approx(rep.s)
    assert st_["theta_max"] == pytest.approx(th[0])
    assert st_["T_D"] == pytest.approx(np.trace(ss.S_H) / np.trace(ss.S_E))
    # harmonic-mean forms: T = R / (1 - R) holds with the s-normalisation
    R, T = st_["R_s"], st_["T_s"]
    assert T == pytest.approx(rep.s / np.sum(1 / lam[:rep.s]))
    assert R == pytest.approx(rep.s / np.sum(1 / th[:rep.s]))
    assert T == pytest.approx(R / (1 - R), rel=1e-12)


def test_singular_hypothesis_statistics():
    rep = manova.criteria_from_spectrum([0.8, 0.0, 0.0], 1)
    assert rep.s == 1
    assert rep.statistics["V"] is None and rep.statistics["lambda_min"] is None
    assert rep.statistics["T_D"] is None
    assert rep.statistics["R_s"] == pytest.approx(0.8 / 1.8)


@given(st.floats(0.1, 10), st.integers(0, 10**6))
def test_invariance_under_affine_response_change(c, seed):
    # Y -> Y A with A nonsingular leaves the F_c spectrum unchanged
    Y, X, C = toy_oneway()
    rng = np.random.default_rng(seed)
    A = c * (np.eye(2) + 0.3 * rng.standard_normal((2, 2)))
    if abs(np.linalg.det(A)) < 1e-3:
        return
    base = manova.spectrum(manova.f_statistic(toy_ss()))
    ss = manova.sums_of_squares(LinearModel(Y @ A, X), HypothesisSpec(C))
    moved = manova.spectrum(manova.f_statistic(ss))
    assert np.allclose(base, moved, rtol=1e-8, atol=1e-12)


def test_example_one_criteria():
    ex = EXAMPLES["1"]
    rep = manova.criteria_from_spectrum(manova.spectrum(ex.fc), ex.nu_h)
    assert rep.statistics["Wilks_Lambda"] == pytest.approx(0.154012, abs=1e-5)
    assert rep.eigenvalues == pytest.approx(list(ex.eigenvalues), abs=1e-6)


@pytest.mark.parametrize("key", sorted(ROY_TABLE))
def test_roy_largest_roots(key):
    lam = manova.spectrum(EXAMPLES[key].fc)
    assert lam[0] == pytest.approx(ROY_TABLE[key], abs=1e-5)


def test_zero_hypothesis_gives_p_one():
    ss = SSMatrices(np.zeros((2, 2)), np.eye(2), 3, 20)
    rep = manova.matrix_p_value(ss)
    assert rep.p_value == 1.0 and not rep.reject


def test_partially_singular_argument_raises():
    with pytest.raises(NotPD):
        manova.fc_p_value(np.diag([0.5, 0.0]), 3, 20)


def test_rank_one_swap_matches_scalar_tail():
    ex = EXAMPLES["2A"]
    rep = manova.fc_p_value(ex.fc, ex.nu_h, ex.nu_e)
    assert rep.reduced == (1, 2, 23)
    lam = rep.eigenvalues[0]
    assert rep.p_value == pytest.approx(beta_prime_upper(lam, 1.0, 11.5), rel=1e-9)


def _scalar_model(slope):
    rng = np.random.default_rng(1)
    X = np.column_stack([np.ones(20), rng.standard_normal(20)])
    Y = (X @ [1.0, slope] + rng.standard_normal(20)).reshape(-1, 1)
    ss = manova.sums_of_squares(LinearModel(Y, X), HypothesisSpec(np.array([[0.0, 1.0]])))
    F = (ss.S_H[0, 0] / 1) / (ss.S_E[0, 0] / 18)
    return manova.matrix_p_value(ss), stats.f.sf(F, 1, 18)


def test_scalar_model_is_the_f_test():
    rep, expected = _scalar_model(1.5)
    assert not rep.prob.truncated_only
    assert rep.p_value == pytest.approx(expected, rel=1e-8)


def test_small_root_is_flagged_truncated():
    # lambda ~ 0.02: only the slowly converging beta-I forms are available
    rep, expected = _scalar_model(0.4)
    assert rep.prob.truncated_only
    tail = max(o.tail_estimate for o in rep.prob.outcomes.values() if o.usable)
    assert abs(rep.p_value - expected) < 10 * tail


def test_toy_decision_and_kind_one_check():
    rep = manova.matrix_p_value(toy_ss())
    assert rep.p_value < 1e-6
    assert rep.decisions == {0.05: True, 0.01: True}
    assert rep.kind_i_check < 1e-12


def test_decision_monotone_in_scale():
    base = EXAMPLES["2B"].fc
    ctrl = SeriesControl(max_degree=120)
    ps = [manova.fc_p_value(c * base, 3, 24, ctrl=ctrl).p_value for c in (0.5, 1.0, 2.0, 4.0)]
    assert all(a >= b - 1e-9 for a, b in zip(ps, ps[1:]))


def test_cov_equality_example():
    ex = EXAMPLES["3"]
    rep = manova.fc_p_value(ex.fc, ex.nu_h, ex.nu_e)
    assert rep.p_value == pytest.approx(ex.target, abs=1e-4)
    S2 = np.diag([2.0, 1.0, 3.0, 0.5])
    root = np.sqrt(S2)
    S1 = root @ ex.fc @ root
    rep2 = manova.cov_equality_test(S1, S2, ex.nu_h, ex.nu_e)
    assert rep2.p_value == pytest.approx(rep.p_value, rel=1e-8)
    assert math.isfinite(rep2.statistics["T_D"])
