"""Quasi-exact bound states of the DKP equation with S(x) = lambda |x|.

Units: hbar = c = 1. Lengths are measured in the Compton wavelength
lambda_C = 1/m when m = 1 (the default everywhere).

A state of quantum number n lives on the half line as
phi(|x|) = N t e^{-t/2} L_n^(1)(t) with t = zeta (1 + |x|/(zeta lambda_C))^2,
and extends to the whole line as an even function when phi'(0+) = 0 or as
an odd function when phi(0+) = 0. Each condition is an algebraic equation
in zeta = m^2/lambda.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.integrate import quad, simpson
from scipy.optimize import brentq

from . import intpoly
from .laguerre import (
    RootPolishError,
    laguerre_coeffs,
    laguerre_derivative,
    laguerre_eval,
    laguerre_pair,
    laguerre_roots,
    min_root_separation,
    newton_polish,
    resultant_nonzero,
)

QUANTIZATION_TOL = 1e-10


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class ModelParams:
    """Mass m and dimensionless inverse coupling zeta = m^2/lambda."""

    m: float
    zeta: float

    def __post_init__(self):
        if not (self.m > 0 and self.zeta > 0):
            raise ValueError(f"need m > 0 and zeta > 0, got m={self.m}, zeta={self.zeta}")

    @classmethod
    def from_lambda(cls, m: float, lam: float) -> "ModelParams":
        if lam <= 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        return cls(m, m * m / lam)

    @classmethod
    def from_zeta(cls, m: float, zeta: float) -> "ModelParams":
        return cls(m, zeta)

    @property
    def lam(self) -> float:
        return self.m * self.m / self.zeta

    @property
    def g(self) -> float:
        return 1.0 / self.zeta

    @property
    def lambda_c(self) -> float:
        return 1.0 / self.m

    def mass_term(self, x):
        """m + S(x)."""
        return self.m + self.lam * np.abs(x)


def t_of_x(x, params: ModelParams):
    """t = zeta (1 + |x| / (zeta lambda_C))^2."""
    z = 1.0 + np.abs(x) / (params.zeta * params.lambda_c)
    return params.zeta * z * z


# -- quantization conditions -------------------------------------------------


def even_condition(n: int, zeta):
    """P(zeta) = (2(n+1) - zeta) L_n(zeta) - 2(n+1) L_{n-1}(zeta), by recurrence."""
    ln, lm = laguerre_pair(n, zeta)
    return (2 * (n + 1) - np.asarray(zeta)) * ln - 2 * (n + 1) * lm


def _even_condition_derivative(n: int, zeta: float) -> float:
    ln = laguerre_eval(n, zeta)
    d_ln = laguerre_derivative(n, zeta)
    d_lm = laguerre_derivative(n - 1, zeta) if n > 0 else 0.0
    return -ln + (2 * (n + 1) - zeta) * d_ln - 2 * (n + 1) * d_lm


def even_condition_poly(n: int) -> intpoly.IntPoly:
    """Integer multiple of P with exact coefficients (ascending powers), degree n+1."""
    a = laguerre_coeffs(n)
    terms = []
    b = laguerre_coeffs(n - 1) if n > 0 else None
    den = lcm(a.denom, b.denom) if b else a.denom
    la = intpoly.scale(a.scaled_coeffs, den // a.denom)
    terms.append(intpoly.mul((2 * (n + 1), -1), la))
    if b:
        lb = intpoly.scale(b.scaled_coeffs, den // b.denom)
        terms.append(intpoly.scale(lb, -2 * (n + 1)))
    out = terms[0]
    for t in terms[1:]:
        out = intpoly.add(out, t)
    return intpoly.exact_div(out, intpoly.content(out))


def even_residual(n: int, zeta: float) -> float:
    """|1 - zeta/(2(n+1)) - L_{n-1}(zeta)/L_n(zeta)|."""
    ln, lm = laguerre_pair(n, zeta)
    if ln == 0:
        return math.inf
    return abs(1 - zeta / (2 * (n + 1)) - lm / ln)


def odd_residual(n: int, zeta: float) -> float:
    """|L_n(zeta)| relative to the evaluation scale sum_j |a_j| zeta^j.

    The coefficients alternate in sign, so that scale is L_n(-zeta) >= n+1;
    near zeta = 0 this reduces to |L_n(zeta)| / (n+1).
    """
    return abs(laguerre_eval(n, zeta)) / laguerre_eval(n, -zeta)


def quantization_residual(n: int, parity: Parity, zeta: float) -> float:
    return even_residual(n, zeta) if Parity(parity) is Parity.EVEN else odd_residual(n, zeta)


def even_zeta_roots(n: int) -> np.ndarray:
    """The n+1 positive roots of P, each bracketed between consecutive zeros of L_n^(1).

    t e^{-t/2} L_n(t) vanishes at 0, at the n zeros of L_n and at infinity,
    and its derivative is e^{-t/2} P(t)/2, so every gap holds exactly one
    root of the degree-(n+1) polynomial P.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    zeros = laguerre_roots(n)
    edges = [0.0, *zeros]
    p_last = even_condition(n, edges[-1])
    upper = 4.0 * (n + 1) + 10.0
    while np.sign(even_condition(n, upper)) == np.sign(p_last):
        upper *= 2
    edges.append(upper)
    roots = []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        x0 = brentq(lambda z: float(even_condition(n, z)), lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        x = newton_polish(lambda z: (float(even_condition(n, z)), _even_condition_derivative(n, z)), x0)
        if x is None or not lo < x < hi:
            # Newton can wander when P' is tiny; the bracketed value is already converged
            x = x0
        # a root shared with L_n would be spurious (the rational form has a pole
        # there); such a root can only sit on a bracket endpoint
        if zeros.size and np.min(np.abs(zeros - x)) <= QUANTIZATION_TOL * x:
            continue
        roots.append(x)
    return np.array(roots)


def odd_zeta_roots(n: int) -> np.ndarray:
    """Zeros of L_n^(1); empty for n = 0."""
    return laguerre_roots(n)


def zeta_roots(n: int, parity: Parity) -> np.ndarray:
    return even_zeta_roots(n) if Parity(parity) is Parity.EVEN else odd_zeta_roots(n)


# -- states ------------------------------------------------------------------


def energy(n: int, zeta: float, m: float = 1.0, sign: int = 1) -> float:
    """E_n = sign * 2 m sqrt(n+1) / sqrt(zeta)."""
    if zeta <= 0 or m <= 0:
        raise ValueError("zeta and m must be positive")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * 2.0 * m * math.sqrt(n + 1) / math.sqrt(zeta)


def boundary_values(n: int, zeta: float, m: float = 1.0, norm: float = 1.0) -> tuple[float, float]:
    """(phi(0+), dphi/dx(0+)) of the half-line solution evaluated at t = zeta."""
    ln, lm = laguerre_pair(n, zeta)
    decay = math.exp(-zeta / 2)
    phi0 = norm * zeta * decay * ln
    bracket = (1 - zeta / (2 * (n + 1))) * ln - lm
    dphi0 = 2 * norm * decay * (n + 1) * m * bracket
    return phi0, dphi0


def tail_integral(n: int, lower: float) -> float:
    """delta = int_lower^inf t e^{-t} L_n(t)^2 dt, exact up to the final rounding.

    t L_n(t)^2 is expanded in powers t^k and each power integrated with the
    upper incomplete gamma recurrence Gamma(k+1, a) = k Gamma(k, a) + a^k e^{-a}.
    ``lower`` is taken as the exact binary rational it represents, so the
    alternating sum is carried out over integers.
    """
    if lower < 0:
        raise ValueError("lower limit must be nonnegative")
    poly = laguerre_coeffs(n)
    sq = intpoly.mul(poly.scaled_coeffs, poly.scaled_coeffs)
    s = (0, *sq)  # multiply by t
    frac = Fraction(lower)
    p, q = frac.numerator, frac.denominator
    top = len(s) - 1
    # h_k = q^k e^{a} Gamma(k+1, a) with a = p/q: h_0 = 1, h_k = k q h_{k-1} + p^k
    h = 1
    total = s[0] * q**top
    for k in range(1, top + 1):
        h = k * q * h + p**k
        total += s[k] * h * q ** (top - k)
    value = Fraction(total, q**top * poly.denom**2)
    return float(value) * math.exp(-lower)


def tail_integral_quad(n: int, lower: float) -> tuple[float, float]:
    """Adaptive-quadrature cross-check of ``tail_integral``: (value, abserr)."""

    def integrand(t):
        return t * (math.exp(-t / 2) * laguerre_eval(n, t)) ** 2

    def log_bound(t):
        # |L_n(t)| <= L_n(-t) for t >= 0
        return math.log(t) - t + 2 * math.log(laguerre_eval(n, -t))

    upper = max(lower, 2.0 * n + 2)
    while log_bound(upper) > -700:
        upper *= 1.2
    return quad(integrand, lower, upper, epsabs=0, epsrel=1e-13, limit=1000)


@dataclass(frozen=True)
class QuasiExactState:
    """A closed-form bound state with its normalization."""

    n: int
    parity: Parity
    zeta: float
    energy_sign: int
    m: float
    E: float
    delta: float
    N: float
    root_index: int | None = None

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.m, self.zeta)

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def epsilon(self) -> float:
        """Dimensionless energy E / (g m)."""
        return self.E / (self.params.g * self.m)

    @property
    def residual(self) -> float:
        return quantization_residual(self.n, self.parity, self.zeta)

    @property
    def quantized(self) -> bool:
        return self.residual < QUANTIZATION_TOL


def normalize_state(n: int, zeta: float, m: float, E: float) -> tuple[float, float]:
    """(delta, N) with N = sqrt(lambda / (delta |E|)), so that int J0 dx = sign(E)."""
    delta = tail_integral(n, zeta)
    lam = m * m / zeta
    return delta, math.sqrt(lam / (delta * abs(E)))


def trial_state(n: int, parity: Parity | str, zeta: float, energy_sign: int = 1, m: float = 1.0) -> QuasiExactState:
    """Build a state at an arbitrary zeta without enforcing quantization.

    Meant for negative controls: the result solves the differential equation
    on the half line but its parity extension is generally not lawful.
    """
    E = energy(n, zeta, m, energy_sign)
    delta, N = normalize_state(n, zeta, m, E)
    return QuasiExactState(n, Parity(parity), float(zeta), energy_sign, m, E, delta, N)


def make_state(n: int, parity: Parity | str, root_index: int = 0, energy_sign: int = 1, m: float = 1.0) -> QuasiExactState:
    parity = Parity(parity)
    roots = zeta_roots(n, parity)
    if roots.size == 0:
        raise ValueError(f"no {parity.value}-parity solutions for n={n}")
    if not 0 <= root_index < roots.size:
        raise IndexError(f"root index {root_index} out of range for {roots.size} roots")
    state = trial_state(n, parity, float(roots[root_index]), energy_sign, m)
    return QuasiExactState(**{**state.__dict__, "root_index": root_index})


# -- sampled eigenfunctions --------------------------------------------------


def half_line(state: QuasiExactState, r):
    """(phi, dphi/dr) of the half-line solution at r = |x| >= 0."""
    p = state.params
    t = t_of_x(r, p)
    ln, lm = laguerre_pair(state.n, t)
    decay = np.exp(-t / 2)
    phi = state.N * t * decay * ln
    n1 = state.n + 1
    dphi_dt = state.N * decay * ((n1 - t / 2) * ln - n1 * lm)
    dt_dr = 2.0 * np.sqrt(t / p.zeta) / p.lambda_c
    return phi, dphi_dt * dt_dr


def phi_whole_line(state: QuasiExactState, x):
    """(phi, dphi/dx) on the whole line with the state's parity."""
    x = np.asarray(x, dtype=float)
    f, df = half_line(state, np.abs(x))
    sgn = np.sign(x)
    if state.parity is Parity.EVEN:
        return f, sgn * df
    return sgn * f, df


def symmetric_grid(x_max: float, samples: int) -> np.ndarray:
    """Odd-length grid, exactly symmetric about 0 and containing 0."""
    if samples < 3 or samples % 2 == 0:
        raise ValueError(f"samples must be odd and >= 3, got {samples}")
    k = (samples - 1) // 2
    pos = x_max * np.arange(1, k + 1) / k
    return np.concatenate([-pos[::-1], [0.0], pos])


def auto_x_max(state: QuasiExactState, ratio: float = 1e-10) -> float:
    """Grow x until |phi(x)| / max|phi| < ratio, past the last Laguerre zero."""
    p = state.params
    zeros = laguerre_roots(state.n)
    t_floor = max(zeros[-1] if zeros.size else 0.0, p.zeta)
    x = p.lambda_c
    while True:
        r = np.linspace(0.0, x, 2001)
        f, _ = half_line(state, r)
        peak = np.max(np.abs(f))
        if t_of_x(x, p) > t_floor and abs(f[-1]) < ratio * peak:
            return x
        x *= 1.25


def _require_normalized(state: QuasiExactState):
    if not (state.N and np.isfinite(state.N) and state.N > 0 and state.delta > 0):
        raise ValueError("state is not normalized")


@dataclass(frozen=True)
class EigenfunctionTable:
    """Whole-line samples of a state.

    ``phi3_im`` is the imaginary part of phi_3 = i/(m+S) dphi/dx (phi_3 is
    purely imaginary for real phi). The remaining spinor components vanish
    identically: Psi_4 = Psi_5 = 0 (spin-0) and Psi_8 = 0 (spin-1); the
    spin-1 sector reduces to the same scalar problem.
    """

    x: np.ndarray
    phi: np.ndarray
    phi2: np.ndarray
    phi3_im: np.ndarray
    J0: np.ndarray
    J1: np.ndarray
    parity: Parity
    lambda_c: float
    scaled: bool = False

    def dimensionless(self) -> "EigenfunctionTable":
        """x/lambda_C, sqrt(lambda_C) * spinor components, lambda_C * currents."""
        if self.scaled:
            return self
        s = math.sqrt(self.lambda_c)
        lc = self.lambda_c
        return EigenfunctionTable(self.x / lc, s * self.phi, s * self.phi2, s * self.phi3_im, lc * self.J0, lc * self.J1, self.parity, lc, True)

    def nodes(self) -> int:
        return count_nodes(self.phi)


def eigenfunction_table(state: QuasiExactState, x_max: float | str = "auto", samples: int = 501) -> EigenfunctionTable:
    _require_normalized(state)
    if x_max == "auto":
        x_max = auto_x_max(state)
    if not x_max > 0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    p = state.params
    x = symmetric_grid(float(x_max), samples)
    phi, dphi = phi_whole_line(state, x)
    ms = p.mass_term(x)
    cphi = phi.astype(complex)
    J1 = np.imag(np.conj(cphi) * dphi) / ms
    return EigenfunctionTable(
        x=x,
        phi=phi,
        phi2=state.E * phi / ms,
        phi3_im=dphi / ms,
        J0=state.E * phi * phi / ms,
        J1=J1,
        parity=state.parity,
        lambda_c=p.lambda_c,
    )


def count_nodes(values) -> int:
    """Sign changes between adjacent samples; exact zeros are skipped, so a node at x = 0 counts once."""
    s = np.sign(np.asarray(values))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def charge(state: QuasiExactState, points: int = 40001) -> tuple[float, float]:
    """(int J0 dx over the whole line, tail bound beyond the sampled range).

    Simpson's rule on the half line (J0 is smooth there) doubled by symmetry;
    the tail beyond x_max is bounded with the closed-form tail integral.
    """
    _require_normalized(state)
    p = state.params
    x_max = auto_x_max(state, ratio=1e-12)
    r = np.linspace(0.0, x_max, points)
    f, _ = half_line(state, r)
    j0 = state.E * f * f / p.mass_term(r)
    inner = 2.0 * simpson(j0, x=r)
    tail = abs(state.E) * state.N**2 / p.lam * tail_integral(state.n, float(t_of_x(x_max, p)))
    return float(inner), tail


def eq1_residual(state: QuasiExactState, x, h: float = 1e-3) -> np.ndarray:
    """Relative residual of d/dx[phi'/(m+S)] + (E^2 - (m+S)^2)/(m+S) phi with 4th-order differences.

    Only meaningful away from x = 0, where |x| has its kink.
    """
    p = state.params
    x = np.asarray(x, dtype=float)

    def f(y):
        return phi_whole_line(state, y)[0]

    f0, fp1, fm1, fp2, fm2 = f(x), f(x + h), f(x - h), f(x + 2 * h), f(x - 2 * h)
    d1 = (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h)
    d2 = (16 * (fp1 + fm1) - (fp2 + fm2) - 30 * f0) / (12 * h * h)
    ms = p.mass_term(x)
    dms = p.lam * np.sign(x)
    terms = (d2 / ms, -dms * d1 / ms**2, (state.E**2 - ms**2) / ms * f0)
    scale = np.max(np.abs(terms[0])) + np.max(np.abs(terms[2]))
    return np.abs(terms[0] + terms[1] + terms[2]) / scale


# -- degeneracy scan ---------------------------------------------------------


@dataclass(frozen=True)
class DegeneracyEntry:
    n: int
    resultant: int
    min_separation: float

    @property
    def nonzero(self) -> bool:
        return self.resultant != 0


def _degeneracy_entry(n: int) -> DegeneracyEntry:
    return DegeneracyEntry(n, resultant_nonzero(n), min_root_separation(n))


def degeneracy_scan(n_max: int, workers: int | None = None) -> list[DegeneracyEntry]:
    """Exact common-root test of L_n^(1) and L_{n-1}^(1) for n = 1..n_max.

    ``workers`` > 1 fans the independent n out to processes; the result
    order is always by n.
    """
    if not 1 <= n_max <= 100:
        raise ValueError(f"n_max must be in [1, 100], got {n_max}")
    ns = range(1, n_max + 1)
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_degeneracy_entry, ns))
    return [_degeneracy_entry(n) for n in ns]


__all__ = [
    "DegeneracyEntry",
    "EigenfunctionTable",
    "ModelParams",
    "Parity",
    "QuasiExactState",
    "RootPolishError",
    "boundary_values",
    "charge",
    "count_nodes",
    "degeneracy_scan",
    "eigenfunction_table",
    "energy",
    "eq1_residual",
    "even_condition",
    "even_condition_poly",
    "even_residual",
    "even_zeta_roots",
    "make_state",
    "normalize_state",
    "odd_residual",
    "odd_zeta_roots",
    "t_of_x",
    "tail_integral",
    "tail_integral_quad",
    "trial_state",
]
