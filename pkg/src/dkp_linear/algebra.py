"""Beta-matrix representations of the DKP algebra and their exact checks.

Matrices are stored as complex numpy arrays whose entries are Gaussian
integers (0, +-1, +-i). The checks split every matrix into integer real and
imaginary parts and multiply over the Gaussian integers, so a residual of 0
is exact rather than "small".
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

METRIC = np.diag([1, -1, -1, -1])


class SpinSector(str, enum.Enum):
    SPIN0 = "spin0"
    SPIN1 = "spin1"


@dataclass(frozen=True)
class BetaRep:
    """One irreducible representation: beta^0..beta^3 and eta^0."""

    spin_sector: SpinSector
    betas: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    eta0: np.ndarray

    @property
    def dimension(self) -> int:
        return self.betas[0].shape[0]


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3), dtype=int)
    for i, j, k in itertools.permutations(range(3)):
        # sign of the permutation (i, j, k) of (0, 1, 2)
        eps[i, j, k] = round(np.linalg.det(np.eye(3)[[i, j, k]]))
    return eps


def _spin0_betas() -> list[np.ndarray]:
    theta = np.array([[0, 1], [1, 0]])
    b0 = np.zeros((5, 5), dtype=complex)
    b0[:2, :2] = theta
    betas = [b0]
    for i in range(3):
        rho = np.zeros((2, 3))
        rho[0, i] = -1
        bi = np.zeros((5, 5), dtype=complex)
        bi[:2, 2:] = rho
        bi[2:, :2] = -rho.T
        betas.append(bi)
    return betas


def _spin1_betas() -> list[np.ndarray]:
    # block offsets: scalar slot 0, then three 3-blocks at 1, 4, 7
    eye = np.eye(3)
    b0 = np.zeros((10, 10), dtype=complex)
    b0[1:4, 4:7] = eye
    b0[4:7, 1:4] = eye
    betas = [b0]
    eps = _levi_civita()
    for i in range(3):
        s_i = -1j * eps[i]  # (s_i)_jk = -i eps_ijk
        e_i = np.zeros(3)
        e_i[i] = 1
        bi = np.zeros((10, 10), dtype=complex)
        bi[0, 4:7] = e_i
        bi[1:4, 7:10] = -1j * s_i
        bi[4:7, 0] = -e_i
        bi[7:10, 1:4] = -1j * s_i
        betas.append(bi)
    return betas


def build_rep(sector: SpinSector | str) -> BetaRep:
    """Build the 5x5 (spin-0) or 10x10 (spin-1) beta matrices."""
    sector = SpinSector(sector)
    betas = _spin0_betas() if sector is SpinSector.SPIN0 else _spin1_betas()
    b0 = betas[0]
    eta0 = 2 * b0 @ b0 - np.eye(b0.shape[0])
    return BetaRep(sector, tuple(betas), eta0)


def _gaussian(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    re = np.rint(mat.real).astype(np.int64)
    im = np.rint(mat.imag).astype(np.int64)
    if not (np.array_equal(re, mat.real) and np.array_equal(im, mat.imag)):
        raise ValueError("matrix entries are not Gaussian integers")
    return re, im


def _gmul(a, b):
    (ar, ai), (br, bi) = a, b
    return ar @ br - ai @ bi, ar @ bi + ai @ br


def _gmax_abs(re: np.ndarray, im: np.ndarray) -> float:
    if re.size == 0:
        return 0.0
    return float(np.sqrt(np.max(re * re + im * im)))


def check_dkp_algebra(rep: BetaRep) -> float:
    """Max residual of b^mu b^nu b^lam + b^lam b^nu b^mu - g^{mu nu} b^lam - g^{lam nu} b^mu.

    All 64 index triples are enumerated. Returns 0.0 exactly for a valid
    representation.
    """
    gb = [_gaussian(b) for b in rep.betas]
    worst = 0.0
    for mu, nu, lam in itertools.product(range(4), repeat=3):
        lhs1 = _gmul(_gmul(gb[mu], gb[nu]), gb[lam])
        lhs2 = _gmul(_gmul(gb[lam], gb[nu]), gb[mu])
        re = lhs1[0] + lhs2[0] - METRIC[mu, nu] * gb[lam][0] - METRIC[lam, nu] * gb[mu][0]
        im = lhs1[1] + lhs2[1] - METRIC[mu, nu] * gb[lam][1] - METRIC[lam, nu] * gb[mu][1]
        worst = max(worst, _gmax_abs(re, im))
    return worst


def check_eta_hermiticity(rep: BetaRep) -> float:
    """Max residual of (eta0 b^mu)^dagger - eta0 b^mu over mu."""
    eta = _gaussian(rep.eta0)
    worst = 0.0
    for b in rep.betas:
        re, im = _gmul(eta, _gaussian(b))
        # conjugate transpose of (re + i im) is re.T - i im.T
        worst = max(worst, _gmax_abs(re.T - re, -im.T - im))
    return worst


def eta0_residual(rep: BetaRep) -> float:
    """Exact check that eta0 == 2 b0 b0 - 1."""
    b0 = _gaussian(rep.betas[0])
    re, im = _gmul(b0, b0)
    eta_re, eta_im = _gaussian(rep.eta0)
    return _gmax_abs(2 * re - np.eye(rep.dimension, dtype=np.int64) - eta_re, 2 * im - eta_im)
