import math

import numpy as np
import pytest
from scipy.linalg import eigh

from dkp_linear import oracle, spectrum
from dkp_linear.spectrum import ModelParams, Parity

ZETA2 = ModelParams(1.0, 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        oracle.OracleConfig(ZETA2, Parity.EVEN, 10.0, points=2)
    with pytest.raises(ValueError):
        oracle.OracleConfig(ZETA2, Parity.EVEN, -1.0)
    # m + lambda x_max = 1.5 < 3 |E|
    with pytest.raises(ValueError):
        oracle.OracleConfig(ZETA2, Parity.EVEN, 1.0, e_expected=math.sqrt(2))
    cfg = oracle.OracleConfig.auto(ZETA2, "even", e_expected=math.sqrt(2))
    assert ZETA2.m + ZETA2.lam * cfg.x_max >= 3 * math.sqrt(2)
    assert (ZETA2.m + ZETA2.lam * cfg.x_max) ** 2 >= 2 + 40 * ZETA2.lam - 1e-9


@pytest.mark.parametrize("parity", list(Parity))
def test_discretization_structure(parity):
    cfg = oracle.OracleConfig(ZETA2, parity, 12.0, points=1000)
    d = oracle.discretize(cfg)
    assert d.diag.size == d.offdiag.size + 1 == d.x.size
    assert np.all(d.weights > 0) and np.all(d.offdiag < 0)
    if parity is Parity.EVEN:
        assert d.x[0] == 0
        assert d.p_node[0] == 1 / ZETA2.m and d.q_node[0] == ZETA2.m
    else:
        assert d.x[0] > 0


def test_matches_dense_generalized_problem():
    # build the unsymmetrized A phi = Lambda W phi densely and compare
    cfg = oracle.OracleConfig(ZETA2, Parity.EVEN, 12.0, points=1000)
    d = oracle.discretize(cfg)
    s = np.sqrt(d.weights)
    A = np.diag(d.diag * s * s) + np.diag(d.offdiag * s[:-1] * s[1:], 1) + np.diag(d.offdiag * s[:-1] * s[1:], -1)
    ref = eigh(A, np.diag(d.weights), eigvals_only=True, subset_by_index=(0, 2))
    lam, _ = oracle._lowest(d, 3, False)
    assert np.allclose(lam, ref, rtol=1e-10)


def test_sturm_bisection_vs_lapack():
    cfg = oracle.OracleConfig(ZETA2, Parity.ODD, 12.0, points=1000)
    d = oracle.discretize(cfg)
    lam, _ = oracle._lowest(d, 3, False)
    assert np.allclose(oracle.bisect_eigenvalues(d.diag, d.offdiag, 3), lam, rtol=1e-12)
    assert oracle.sturm_count(d.diag, d.offdiag, 0.5 * (lam[0] + lam[1])) == 1


@pytest.mark.parametrize("parity", list(Parity))
def test_monotone_grid_convergence(parity):
    x_max = oracle.OracleConfig.auto(ZETA2, parity, k=2).x_max
    es = []
    for pts in (1000, 2000, 4000, 8000):
        d = oracle.discretize(oracle.OracleConfig(ZETA2, parity, x_max, points=pts))
        es.append(math.sqrt(oracle._lowest(d, 1, False)[0][0]))
    diffs = np.diff(es)
    # one direction throughout, steps shrinking, up to 1e-9 noise
    assert np.all(diffs * diffs[0] > -1e-18)
    assert np.all(np.abs(diffs[1:]) <= np.abs(diffs[:-1]) + 1e-9)


def test_even_origin_slope():
    spec = oracle.oracle_spectrum(oracle.OracleConfig.for_state(spectrum.make_state(0, "even")))
    assert oracle.origin_slope(spec, 0) < 1e-4


@pytest.mark.parametrize("n,parity,idx", [(0, "even", 0), (1, "even", 0), (1, "even", 1), (1, "odd", 0), (2, "odd", 0), (2, "odd", 1)])
def test_reference_states_match(n, parity, idx):
    st = spectrum.make_state(n, parity, idx)
    cv = oracle.cross_validate(st)
    assert cv.matched
    assert cv.rel_error_coarse < 1e-3 and cv.rel_error < 1e-4
    assert cv.overlap > 0.9999


def test_zeta_3_plus_sqrt5_energy():
    st = spectrum.make_state(1, "even", 1)
    assert st.E == pytest.approx(2 * math.sqrt(2) / math.sqrt(3 + math.sqrt(5)))
    assert oracle.cross_validate(st).E_oracle == pytest.approx(st.E, rel=1e-3)


def test_negative_control():
    st = spectrum.trial_state(0, "even", 1.0)
    assert st.E == pytest.approx(2.0)
    cv = oracle.cross_validate(st)
    assert cv.status == "mismatch"
    spec = oracle.oracle_spectrum(oracle.OracleConfig.auto(st.params, "even", k=1, e_expected=2.0))
    assert abs(spec.energies[0] - 2.0) / 2.0 > 0.01


def test_energy_sign_independence():
    plus = oracle.cross_validate(spectrum.make_state(1, "odd", 0, energy_sign=1))
    minus = oracle.cross_validate(spectrum.make_state(1, "odd", 0, energy_sign=-1))
    assert plus.E_oracle == minus.E_oracle
    assert minus.matched


def test_parity_mismatch_rejected():
    st = spectrum.make_state(0, "even")
    cfg = oracle.OracleConfig.auto(st.params, "odd", e_expected=st.E)
    with pytest.raises(ValueError):
        oracle.cross_validate(st, cfg)


def test_convergence_report():
    spec = oracle.oracle_spectrum(oracle.OracleConfig.auto(ZETA2, "even", k=3))
    assert np.all(np.diff(spec.lambdas) > 0)
    assert spec.convergence.shape == (3,) and np.all(spec.convergence < 1e-3)
