"""Invariant suites run by ``dkp-linear verify``.

Each suite returns a list of ``Check`` records; a check passes when its
value is within the stated threshold (or, for negative controls, beyond it).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import algebra, hypergeom, laguerre, oracle, spectrum


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool


def _le(name: str, value: float, threshold: float) -> Check:
    return Check(name, float(value), threshold, bool(value <= threshold))


def _gt(name: str, value: float, threshold: float) -> Check:
    return Check(name, float(value), threshold, bool(value > threshold))


def exact_laguerre(n: int, w: float) -> float:
    """L_n^(1)(w) from the exact coefficients at the exact binary value of w."""
    poly = laguerre.laguerre_coeffs(n)
    fw = Fraction(w)
    acc = Fraction(0)
    for c in reversed(poly.scaled_coeffs):
        acc = acc * fw + c
    return float(acc / poly.denom)


def laguerre_scale(n: int, w: float) -> float:
    """max(|L_n(w)|, |w L_n'(w)|): nonzero everywhere, unlike |L_n(w)| near its zeros."""
    return max(abs(exact_laguerre(n, w)), abs(w * laguerre.laguerre_derivative(n, w)))


def algebra_suite() -> list[Check]:
    out = []
    for sector in algebra.SpinSector:
        rep = algebra.build_rep(sector)
        s = sector.value
        out.append(_le(f"{s}_dkp_algebra", algebra.check_dkp_algebra(rep), 0.0))
        out.append(_le(f"{s}_eta_hermiticity", algebra.check_eta_hermiticity(rep), 0.0))
        out.append(_le(f"{s}_eta0_definition", algebra.eta0_residual(rep), 0.0))
        out.append(_le(f"{s}_trace", max(abs(np.trace(b)) for b in rep.betas), 0.0))
    return out


def laguerre_suite() -> list[Check]:
    out = []
    listed = {0: [Fraction(1)], 1: [Fraction(2), Fraction(-1)], 2: [Fraction(3), Fraction(-3), Fraction(1, 2)]}
    mism = sum(laguerre.laguerre_coeffs(n).coeffs() != c for n, c in listed.items())
    out.append(_le("explicit_polynomials_mismatches", mism, 0))
    worst = 0.0
    for n in range(31):
        for w in (0.1, 1.0, 2.0, 5.5, 10.0, 37.0, 100.0):
            worst = max(worst, abs(laguerre.laguerre_eval(n, w) - exact_laguerre(n, w)) / laguerre_scale(n, w))
    out.append(_le("recurrence_vs_exact", worst, 1e-12))
    worst = 0.0
    for n in range(1, 31):
        for w in (0.05, 0.7, 3.0, 20.0, 90.0):
            ln, lm = laguerre.laguerre_eval(n, w), laguerre.laguerre_eval(n - 1, w)
            r = w * laguerre.laguerre_derivative(n, w) - n * ln + (n + 1) * lm
            worst = max(worst, abs(r) / max(1.0, abs(ln)))
    out.append(_le("derivative_identity", worst, 1e-10))
    err = max(abs(laguerre.laguerre_roots(1)[0] - 2), *np.abs(laguerre.laguerre_roots(2) - [3 - math.sqrt(3), 3 + math.sqrt(3)]))
    out.append(_le("explicit_roots_n1_n2", err, 1e-10))
    return out


def hypergeom_suite() -> list[Check]:
    out = []
    grid = product((0.3, 0.7, 1.4), (0.4, 1.5, 2.5), (0.5, 1.0, 2.0))
    out.append(_le("wronskian_grid", max(hypergeom.wronskian_residual(a, b, w) for a, b, w in grid), 1e-6))
    worst = 0.0
    for n in range(21):
        for w in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0):
            worst = max(worst, abs(hypergeom.kummer_m(-n, 2, w) * (n + 1) - exact_laguerre(n, w)) / laguerre_scale(n, w))
    out.append(_le("kummer_laguerre_identity", worst, 1e-12))
    out.append(_le("confluent_equation", max(hypergeom.confluent_residual(a, b, w) for (a, b) in ((0.3, 1.5), (-2, 2), (1, 3)) for w in (0.5, 2.0, 7.0)), 1e-8))
    out.append(_le("exp_growth_law_fails", 0.0 if hypergeom.asymptotic_growth_check(0.5, 2, [10, 20, 40]) else 1.0, 0.0))
    wrong = hypergeom.asymptotic_growth_check(0.5, 2, [40], law=lambda a, b, w: w**-a)
    out.append(_le("wrong_law_accepted", 1.0 if wrong else 0.0, 0.0))
    out.append(_le("polynomial_growth_exponent", max(abs(hypergeom.polynomial_growth_exponent(n, 2) - n) for n in range(1, 6)), 1e-3))
    out.append(_le("tricomi_1_2_3", abs(hypergeom.tricomi_u(1, 2, 3) - 1 / 3), 1e-6))
    ratios = [hypergeom.tricomi_u(-1, 2, t) / hypergeom.kummer_m(-1, 2, t) for t in (3, 5, 10)]
    out.append(_le("tricomi_kummer_proportional", (max(ratios) - min(ratios)) / abs(ratios[0]), 1e-6))
    out.append(_le("tricomi_power_law_w50", abs(hypergeom.tricomi_u(0.3, 1.5, 50) * 50**0.3 - 1), 0.05))
    return out


REFERENCE_STATES = [(0, "even", 0), (1, "even", 0), (1, "even", 1), (1, "odd", 0), (2, "odd", 0), (2, "odd", 1)]


def spectrum_suite() -> list[Check]:
    out = []
    s5 = math.sqrt(5)
    s3 = math.sqrt(3)
    out.append(_le("even_roots_n0", abs(spectrum.even_zeta_roots(0)[0] - 2), 1e-10))
    out.append(_le("even_roots_n1", np.max(np.abs(spectrum.even_zeta_roots(1) - [3 - s5, 3 + s5])), 1e-10))
    out.append(_le("odd_roots_n0_count", spectrum.odd_zeta_roots(0).size, 0))
    out.append(_le("odd_roots_n1", abs(spectrum.odd_zeta_roots(1)[0] - 2), 1e-10))
    out.append(_le("odd_roots_n2", np.max(np.abs(spectrum.odd_zeta_roots(2) - [3 - s3, 3 + s3])), 1e-10))
    delta = spectrum.tail_integral(0, 2.0)
    out.append(_le("delta_closed_form", abs(delta - 3 * math.exp(-2)), 1e-12))
    out.append(_le("delta_vs_quadrature", abs(delta - spectrum.tail_integral_quad(0, 2.0)[0]), 1e-12))
    worst_q = worst_ode = worst_c = worst_bc = 0.0
    for n, parity, idx in REFERENCE_STATES:
        st = spectrum.make_state(n, parity, idx)
        worst_q = max(worst_q, st.residual)
        q, _ = spectrum.charge(st)
        worst_c = max(worst_c, abs(q - 1))
        x = np.concatenate([np.linspace(-6, -0.05, 60), np.linspace(0.05, 6, 60)])
        worst_ode = max(worst_ode, float(np.max(spectrum.eq1_residual(st, x))))
        phi0, dphi0 = spectrum.boundary_values(n, st.zeta, st.m, st.N)
        bc = abs(dphi0) * st.params.lambda_c if st.parity is spectrum.Parity.EVEN else abs(phi0)
        worst_bc = max(worst_bc, bc / st.N)
    out.append(_le("quantization_residual", worst_q, 1e-10))
    out.append(_le("charge_normalization", worst_c, 1e-8))
    out.append(_le("eq1_residual", worst_ode, 1e-6))
    out.append(_le("origin_continuity", worst_bc, 1e-10))
    return out


def oracle_suite() -> list[Check]:
    out = []
    for n, parity in ((0, "even"), (1, "odd")):
        st = spectrum.make_state(n, parity)
        cv = oracle.cross_validate(st)
        out.append(_le(f"oracle_zeta2_n{n}_{parity}_rel_error", cv.rel_error_coarse, 1e-3))
        out.append(_le(f"oracle_zeta2_n{n}_{parity}_richardson_error", cv.rel_error, 1e-4))
        out.append(_gt(f"oracle_zeta2_n{n}_{parity}_overlap", cv.overlap, 0.9999))
    ctrl = spectrum.trial_state(0, "even", 1.0)
    cv = oracle.cross_validate(ctrl)
    out.append(_gt("negative_control_zeta1_deviation", cv.rel_error, 0.01))
    out.append(_le("negative_control_zeta1_matched", 1.0 if cv.matched else 0.0, 0.0))
    return out


SUITES = {
    "algebra": algebra_suite,
    "laguerre": laguerre_suite,
    "hypergeom": hypergeom_suite,
    "spectrum": spectrum_suite,
    "oracle": oracle_suite,
}


def run(scope: str = "all") -> list[Check]:
    names = list(SUITES) if scope == "all" else [scope]
    out = []
    for name in names:
        out.extend(SUITES[name]())
    return out
