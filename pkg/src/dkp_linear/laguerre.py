"""Generalized Laguerre polynomials L_n^(1).

Two arithmetic paths are kept side by side: exact integer-scaled coefficients
(used for resultants, Horner cross-checks and closed-form integrals) and
floating evaluation by the three-term recurrence (used for roots and
eigenfunctions).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd
from functools import reduce

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from . import intpoly

ROOT_RTOL = 1e-13
_MAX_NEWTON = 50


class RootPolishError(ArithmeticError):
    """Newton polishing of a root failed to converge."""

    def __init__(self, n: int, index: int, estimate: float):
        super().__init__(f"root {index} of L_{n}^(1) did not converge (last estimate {estimate!r})")
        self.n = n
        self.index = index
        self.estimate = estimate


@dataclass(frozen=True)
class LaguerrePoly:
    """L_n^(alpha)(w) = (1/denom) * sum_j scaled_coeffs[j] * w**j."""

    n: int
    scaled_coeffs: tuple[int, ...]
    denom: int
    alpha: int = 1

    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.denom) for c in self.scaled_coeffs]

    def horner(self, w):
        """Evaluate from the exact coefficients (converted to float)."""
        w = np.asarray(w, dtype=float)
        acc = np.zeros_like(w)
        for c in reversed(self.scaled_coeffs):
            acc = acc * w + float(c)
        return acc / float(self.denom)

    def derivative_coeffs(self) -> list[Fraction]:
        return [Fraction(j * c, self.denom) for j, c in enumerate(self.scaled_coeffs)][1:]


def laguerre_coeffs(n: int) -> LaguerrePoly:
    """Exact coefficients of L_n^(1).

    The coefficient of w^j is (n+1)! (-1)^j / ((j+1)! j! (n-j)!), i.e.
    (-1)^j C(n+1, j+1) / j!; multiplying through by n! makes them integers.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    nf = factorial(n)
    raw = [(-1) ** j * comb(n + 1, j + 1) * (nf // factorial(j)) for j in range(n + 1)]
    g = reduce(gcd, raw, nf)
    return LaguerrePoly(n, tuple(c // g for c in raw), nf // g)


def _recurrence(n: int, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (L_n^(1)(w), L_{n-1}^(1)(w)) with L_{-1} taken as zero."""
    prev = np.zeros_like(w)
    cur = np.ones_like(w)
    for k in range(n):
        # (k+1) L_{k+1} = (2k + 2 - w) L_k - (k+1) L_{k-1}
        prev, cur = cur, ((2 * k + 2 - w) * cur - (k + 1) * prev) / (k + 1)
    return cur, prev


def _unwrap(x, scalar: bool):
    return float(x) if scalar else x


def laguerre_eval(n: int, w):
    """L_n^(1)(w) by the three-term recurrence. Accepts scalars or arrays."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    scalar = np.ndim(w) == 0
    val, _ = _recurrence(n, np.asarray(w, dtype=float))
    return _unwrap(val, scalar)


def laguerre_pair(n: int, w):
    """(L_n^(1)(w), L_{n-1}^(1)(w)) from one recurrence sweep."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    scalar = np.ndim(w) == 0
    cur, prev = _recurrence(n, np.asarray(w, dtype=float))
    return _unwrap(cur, scalar), _unwrap(prev, scalar)


def laguerre_derivative(n: int, w):
    """dL_n^(1)/dw from w L' = n L_n - (n+1) L_{n-1}.

    At w = 0 the identity is singular, so the linear coefficient
    -n(n+1)/2 is returned there instead.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    scalar = np.ndim(w) == 0
    w = np.asarray(w, dtype=float)
    cur, prev = _recurrence(n, w)
    at_zero = w == 0
    safe_w = np.where(at_zero, 1.0, w)
    d = (n * cur - (n + 1) * prev) / safe_w
    d = np.where(at_zero, -n * (n + 1) / 2, d)
    return _unwrap(d, scalar)


def jacobi_matrix(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric Jacobi matrix for weight w e^{-w}."""
    k = np.arange(n)
    return 2.0 * k + 2.0, np.sqrt(k[1:] * (k[1:] + 1.0))


def newton_polish(f_and_df, x0: float, *, rtol: float = ROOT_RTOL, max_iter: int = _MAX_NEWTON) -> float | None:
    """Newton iteration until |dx/x| < rtol; None when it does not converge."""
    x = x0
    for _ in range(max_iter):
        f, df = f_and_df(x)
        if df == 0 or not np.isfinite(df):
            return None
        dx = f / df
        x -= dx
        if abs(dx) <= rtol * abs(x):
            return x
    return None


def laguerre_roots(n: int) -> np.ndarray:
    """The n positive zeros of L_n^(1) in increasing order."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n == 0:
        return np.empty(0)
    d, e = jacobi_matrix(n)
    guesses = eigvalsh_tridiagonal(d, e)

    def fdf(x):
        return laguerre_eval(n, x), laguerre_derivative(n, x)

    roots = np.empty(n)
    for i, x0 in enumerate(guesses):
        x = newton_polish(fdf, float(x0))
        if x is None:
            raise RootPolishError(n, i, float(x0))
        roots[i] = x
    roots.sort()
    if not (roots[0] > 0 and np.all(np.diff(roots) > 0)):
        raise ArithmeticError(f"roots of L_{n}^(1) are not distinct and positive")
    return roots


def resultant_nonzero(n: int) -> int:
    """Exact resultant of the integer-scaled L_n^(1) and L_{n-1}^(1).

    A nonzero value certifies that the two polynomials share no root.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return intpoly.resultant(laguerre_coeffs(n).scaled_coeffs, laguerre_coeffs(n - 1).scaled_coeffs)


def min_root_separation(n: int) -> float:
    """Smallest distance between a zero of L_n^(1) and a zero of L_{n-1}^(1); inf for n = 1."""
    a, b = laguerre_roots(n), laguerre_roots(n - 1)
    if a.size == 0 or b.size == 0:
        return float("inf")
    return float(np.min(np.abs(a[:, None] - b[None, :])))
