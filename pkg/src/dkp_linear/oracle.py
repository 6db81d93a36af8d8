"""Finite-difference eigenvalues of the reduced DKP equation.

The second-order equation is written in Sturm-Liouville form

    -(p phi')' + q phi = Lambda w phi,   p = w = 1/(m+S),  q = m+S,  Lambda = E^2,

and discretized with central differences on [0, x_max] (S = lambda |x| is
smooth there). Even parity uses a ghost point phi_{-1} = phi_1 with a
half-width first cell so the matrix stays symmetric; odd parity pins
phi(0) = 0. Nothing here touches the Laguerre closed form, so the
eigenvalues are an independent check of the quantization conditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .spectrum import ModelParams, Parity, QuasiExactState, energy, half_line

MIN_POINTS = 1000
MATCH_RTOL = 1e-3
MATCH_OVERLAP = 0.9999
NEAREST_LEVEL_WINDOW = 0.1


@dataclass(frozen=True)
class OracleConfig:
    params: ModelParams
    parity: Parity
    x_max: float
    points: int = 20000
    k: int = 1
    e_expected: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        if self.points < MIN_POINTS:
            raise ValueError(f"need at least {MIN_POINTS} grid points, got {self.points}")
        if not self.x_max > 0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.e_expected is not None:
            depth = self.params.m + self.params.lam * self.x_max
            if depth < 3 * abs(self.e_expected):
                raise ValueError(f"x_max = {self.x_max} too shallow: m + lambda x_max = {depth:.6g} < 3|E| = {3 * abs(self.e_expected):.6g}")

    @classmethod
    def auto(cls, params: ModelParams, parity: Parity | str, *, k: int = 1, points: int = 20000, e_expected: float | None = None) -> "OracleConfig":
        """Choose x_max deep in the classically forbidden region.

        Smallest x with (m + lambda x)^2 >= E^2 + 40 lambda, and at least
        m + lambda x >= 3|E|. Without ``e_expected`` the closed-form energy
        of level k-1 sets the scale.
        """
        e = abs(e_expected) if e_expected is not None else energy(k - 1, params.zeta, params.m)
        m, lam = params.m, params.lam
        x_max = max((math.sqrt(e * e + 40 * lam) - m) / lam, (3 * e - m) / lam, params.lambda_c)
        return cls(params, Parity(parity), x_max, points, k, e_expected)

    @classmethod
    def for_state(cls, state: QuasiExactState, *, points: int = 20000, k: int | None = None) -> "OracleConfig":
        return cls.auto(state.params, state.parity, k=k or state.n + 2, points=points, e_expected=state.E)


@dataclass(frozen=True)
class Discretization:
    """Symmetric tridiagonal form W^{-1/2} A W^{-1/2} on the unknown nodes."""

    x: np.ndarray
    h: float
    diag: np.ndarray
    offdiag: np.ndarray
    weights: np.ndarray
    p_node: np.ndarray
    q_node: np.ndarray


def discretize(config: OracleConfig) -> Discretization:
    p_ = config.params
    n = config.points
    h = config.x_max / n
    j = np.arange(n + 1)
    x_all = j * h
    ms = p_.m + p_.lam * x_all
    p_half = 1.0 / (p_.m + p_.lam * (j[:-1] + 0.5) * h)  # p at x_{j+1/2}
    w_all = 1.0 / ms
    q_all = ms
    if config.parity is Parity.EVEN:
        idx = np.arange(0, n)
        a_diag = np.empty(n)
        a_diag[0] = p_half[0] / h**2 + q_all[0] / 2
        a_diag[1:] = (p_half[:-1][0:n - 1] + p_half[1:n]) / h**2 + q_all[1:n]
        a_off = -p_half[: n - 1] / h**2
        weights = w_all[:n].copy()
        weights[0] /= 2
    else:
        idx = np.arange(1, n)
        a_diag = (p_half[0:n - 1] + p_half[1:n]) / h**2 + q_all[1:n]
        a_off = -p_half[1 : n - 1] / h**2
        weights = w_all[1:n].copy()
    s = 1.0 / np.sqrt(weights)
    diag = a_diag * s * s
    offdiag = a_off * s[:-1] * s[1:]
    return Discretization(x_all[idx], h, diag, offdiag, weights, 1.0 / ms[idx], q_all[idx])


def sturm_count(diag: np.ndarray, offdiag: np.ndarray, sigma: float) -> int:
    """Number of eigenvalues below sigma (LDL^T pivot signs)."""
    count = 0
    d = diag[0] - sigma
    if d < 0:
        count += 1
    tiny = np.finfo(float).tiny
    for i in range(1, diag.size):
        if d == 0:
            d = tiny
        d = diag[i] - sigma - offdiag[i - 1] ** 2 / d
        if d < 0:
            count += 1
    return count


def bisect_eigenvalues(diag: np.ndarray, offdiag: np.ndarray, k: int, rtol: float = 1e-14) -> np.ndarray:
    """Lowest k eigenvalues by Sturm-sequence bisection (slow; pure Python)."""
    radius = np.abs(np.concatenate([[0.0], offdiag])) + np.abs(np.concatenate([offdiag, [0.0]]))
    lo0, hi0 = float(np.min(diag - radius)), float(np.max(diag + radius))
    out = np.empty(k)
    for i in range(k):
        lo, hi = lo0, hi0
        while hi - lo > rtol * max(abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if sturm_count(diag, offdiag, mid) > i:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out


def _lowest(disc: Discretization, k: int, vectors: bool):
    if vectors:
        return eigh_tridiagonal(disc.diag, disc.offdiag, select="i", select_range=(0, k - 1))
    return eigh_tridiagonal(disc.diag, disc.offdiag, eigvals_only=True, select="i", select_range=(0, k - 1)), None


@dataclass(frozen=True)
class OracleSpectrum:
    """Lowest k levels; ``lambdas`` are Richardson-extrapolated from N and 2N points."""

    config: OracleConfig
    lambdas: np.ndarray
    lambdas_coarse: np.ndarray
    lambdas_fine: np.ndarray
    x: np.ndarray
    phi: np.ndarray  # (k, nodes) eigenvectors on the coarse grid, phi = u / sqrt(W)
    weights: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return np.sqrt(self.lambdas)

    @property
    def energies_coarse(self) -> np.ndarray:
        return np.sqrt(self.lambdas_coarse)

    @property
    def convergence(self) -> np.ndarray:
        """|E(N) - E(2N)| per level."""
        return np.abs(np.sqrt(self.lambdas_coarse) - np.sqrt(self.lambdas_fine))


def oracle_spectrum(config: OracleConfig) -> OracleSpectrum:
    disc = discretize(config)
    lam_c, vecs = _lowest(disc, config.k, True)
    fine = OracleConfig(config.params, config.parity, config.x_max, 2 * config.points, config.k)
    lam_f, _ = _lowest(discretize(fine), config.k, False)
    # second-order scheme: error ~ h^2
    lam_r = (4 * lam_f - lam_c) / 3
    phi = (vecs / np.sqrt(disc.weights)[:, None]).T
    return OracleSpectrum(config, lam_r, lam_c, lam_f, disc.x, phi, disc.weights)


def origin_slope(spec: OracleSpectrum, level: int = 0) -> float:
    """One-sided second-order derivative of the eigenvector at x = 0, relative to max|phi|."""
    phi = spec.phi[level]
    h = spec.x[1] - spec.x[0]
    d = (-3 * phi[0] + 4 * phi[1] - phi[2]) / (2 * h)
    return abs(d) / np.max(np.abs(phi))


@dataclass(frozen=True)
class CrossValidation:
    E_state: float
    level: int
    E_oracle: float
    E_oracle_coarse: float
    rel_error: float
    rel_error_coarse: float
    overlap: float
    status: str  # "match" or "mismatch"
    level_in_window: bool  # some oracle level lies within 10% of |E|

    @property
    def matched(self) -> bool:
        return self.status == "match"


def cross_validate(state: QuasiExactState, config: OracleConfig | None = None, spectrum: OracleSpectrum | None = None) -> CrossValidation:
    """Compare a closed-form state against the nearest oracle level.

    Success needs relative energy error < 1e-3 and weighted overlap with the
    sampled closed-form phi > 0.9999. Anything else is a mismatch;
    ``level_in_window`` tells whether the nearest level was at least within
    10% of |E|.
    """
    config = config or OracleConfig.for_state(state)
    if config.parity is not state.parity:
        raise ValueError("config parity does not match the state")
    spec = spectrum or oracle_spectrum(config)
    target = abs(state.E)
    level = int(np.argmin(np.abs(spec.energies - target)))
    e_or = float(spec.energies[level])
    e_c = float(spec.energies_coarse[level])
    err = abs(e_or - target) / target
    err_c = abs(e_c - target) / target
    analytic, _ = half_line(state, spec.x)
    num = spec.phi[level]
    w = spec.weights
    overlap = abs(np.sum(w * num * analytic)) / math.sqrt(np.sum(w * num * num) * np.sum(w * analytic * analytic))
    status = "match" if err < MATCH_RTOL and overlap > MATCH_OVERLAP else "mismatch"
    return CrossValidation(state.E, level, e_or, e_c, err, err_c, float(overlap), status, err <= NEAREST_LEVEL_WINDOW)
