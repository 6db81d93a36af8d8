"""Kummer's M and Tricomi's U for real arguments.

These are validators rather than a general special-function library: the
series path is limited to |w| <= 50, and U at integer b is obtained from a
symmetric epsilon-offset limit with Richardson extrapolation (accuracy about
1e-6) unless the asymptotic series or the Laplace integral does better.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from scipy.integrate import IntegrationWarning, quad

SERIES_W_LIMIT = 50.0
SERIES_RTOL = 1e-17
SERIES_MAX_TERMS = 1000
LIMIT_EPSILONS = (1e-4, 5e-5)
_EPS = 2.0**-52


class DomainError(ValueError):
    pass


class SeriesRangeError(ValueError):
    pass


class LinearDependenceError(ValueError):
    """M and U are not independent solutions (a is a nonpositive integer)."""


@dataclass(frozen=True)
class ConfluentParams:
    """Parameters of the confluent equation t f'' + (b - t) f' - a f = 0.

    Only beta = +1 (b = 2) is supported for evaluation; beta = -1 (b = 0)
    needs the logarithmic U series, which is not implemented.
    """

    a: float
    beta: int

    def __post_init__(self):
        if self.beta * self.beta != 1:
            raise ValueError(f"beta must be +1 or -1, got {self.beta}")

    @property
    def b(self) -> int:
        return self.beta + 1

    @property
    def supported(self) -> bool:
        return self.beta == 1

    @classmethod
    def from_energy(cls, beta: int, g: float, epsilon: float) -> "ConfluentParams":
        return cls((beta + 1) / 2 - g * epsilon**2 / 4, beta)


def nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def rgamma(x: float) -> float:
    """1/Gamma(x), exactly zero at the poles."""
    if nonpositive_integer(x):
        return 0.0
    return 1.0 / math.gamma(x)


def kummer_m(a: float, b: float, w: float) -> float:
    """M(a, b, w) = sum_j (a)_j / (b)_j w^j / j!.

    When a = -n the n+1 terms are summed exactly over the rationals (the
    float inputs are exact binary fractions) and rounded once, since the
    alternating polynomial cancels badly in floating point. Otherwise the
    series runs until three consecutive terms fall below 1e-17 of the
    partial sum.
    """
    if nonpositive_integer(b):
        raise DomainError(f"M(a, b, w) undefined for b = {b}")
    polynomial = nonpositive_integer(a)
    if not polynomial and abs(w) > SERIES_W_LIMIT:
        raise SeriesRangeError(f"|w| = {abs(w)} exceeds the series limit {SERIES_W_LIMIT}")
    if polynomial:
        fa, fb, fw = Fraction(a), Fraction(b), Fraction(w)
        term = total = Fraction(1)
        for j in range(int(-a)):
            term *= (fa + j) / (fb + j) * fw / (j + 1)
            total += term
        return float(total)
    term = 1.0
    total = 1.0
    small = 0
    for j in range(SERIES_MAX_TERMS):
        term *= (a + j) / (b + j) * w / (j + 1)
        total += term
        small = small + 1 if abs(term) <= SERIES_RTOL * abs(total) else 0
        if small == 3:
            return total
    raise ArithmeticError(f"M({a}, {b}, {w}) series did not converge in {SERIES_MAX_TERMS} terms")


def _tricomi_direct(a: float, b: float, w: float) -> tuple[float, float]:
    """U from the Kummer-function representation, with a roundoff estimate.

    Both terms grow like e^w while U decays like w^-a, so the relative
    roundoff estimate grows quickly with w.
    """
    pref = math.pi / math.sin(math.pi * b)
    first = pref * kummer_m(a, b, w) * rgamma(1 + a - b) * rgamma(b)
    ra = rgamma(a)
    second = 0.0 if ra == 0.0 else pref * w ** (1 - b) * kummer_m(1 + a - b, 2 - b, w) * ra * rgamma(2 - b)
    value = first - second
    scale = abs(first) + abs(second)
    err = 4 * _EPS * scale / abs(value) if value else math.inf
    return value, err


def _tricomi_limit(a: float, b: float, w: float) -> tuple[float, float]:
    e1, e2 = LIMIT_EPSILONS
    v1p, r1p = _tricomi_direct(a, b + e1, w)
    v1m, r1m = _tricomi_direct(a, b - e1, w)
    v2p, r2p = _tricomi_direct(a, b + e2, w)
    v2m, r2m = _tricomi_direct(a, b - e2, w)
    u1, u2 = 0.5 * (v1p + v1m), 0.5 * (v2p + v2m)
    # the offset error is even in epsilon: cancel the epsilon^2 term
    r = (e1 / e2) ** 2
    value = (r * u2 - u1) / (r - 1)
    roundoff = max(r1p * abs(v1p), r1m * abs(v1m), r2p * abs(v2p), r2m * abs(v2m))
    err = (r + 1) / (r - 1) * roundoff / abs(value) if value else math.inf
    # truncation of the epsilon^4 term, roughly the size of the Richardson correction squared
    return value, max(err, abs(u2 - u1) * e2**2 / e1**2 / abs(value) if value else math.inf)


def _tricomi_asymptotic(a: float, b: float, w: float) -> tuple[float, float]:
    """w^-a sum_k (a)_k (1+a-b)_k / k! (-1/w)^k, truncated at its smallest term.

    Terminates exactly (error 0) when a or 1+a-b is a nonpositive integer.
    """
    term = 1.0
    total = 1.0
    c = 1 + a - b
    for k in range(SERIES_MAX_TERMS):
        nxt = term * (a + k) * (c + k) / (k + 1) * (-1.0 / w)
        if nxt == 0.0:
            return total * w ** (-a), 0.0
        if abs(nxt) >= abs(term):
            break
        total += nxt
        term = nxt
        if abs(term) <= SERIES_RTOL * abs(total):
            break
    return total * w ** (-a), abs(term / total)


def _tricomi_integral(a: float, b: float, w: float) -> tuple[float, float]:
    """Laplace-integral representation, valid for a > 0."""
    def integrand(t):
        return math.exp(-w * t) * t ** (a - 1) * (1 + t) ** (b - a - 1)

    with warnings.catch_warnings():
        # roundoff warnings near full precision; abserr still reflects them
        warnings.simplefilter("ignore", IntegrationWarning)
        val, abserr = quad(integrand, 0, math.inf, epsabs=0, epsrel=1e-13, limit=200)
    val *= rgamma(a)
    return val, (abserr * rgamma(a) / abs(val) if val else math.inf) + 1e-14


def tricomi_u(a: float, b: float, w: float, *, full_output: bool = False):
    """U(a, b, w) for w > 0.

    Evaluates the Kummer-function representation (through the symmetric
    b +- epsilon limit when b is an integer) and the large-w asymptotic
    series, keeping whichever has the smaller error estimate; for a > 0 the
    Laplace integral is a further candidate when both are poor. With
    ``full_output=True`` returns ``(value, limit_path)``; ``limit_path``
    flags the reduced-accuracy integer-b route.
    """
    if w <= 0:
        raise DomainError(f"U(a, b, w) requires w > 0, got {w}")
    value, err = _tricomi_asymptotic(a, b, w)
    limit_path = False
    if err > 1e-15:
        integer_b = float(b).is_integer()
        try:
            cand, cerr = _tricomi_limit(a, b, w) if integer_b else _tricomi_direct(a, b, w)
        except SeriesRangeError:
            cand, cerr = value, math.inf
        if cerr < err:
            value, err, limit_path = cand, cerr, integer_b
        if err > 1e-10 and a > 0:
            cand, cerr = _tricomi_integral(a, b, w)
            if cerr < err:
                value, limit_path = cand, False
    return (value, limit_path) if full_output else value


def _central(f: Callable[[float], float], w: float, h: float) -> float:
    return (f(w + h) - f(w - h)) / (2 * h)


def fd_step(w: float) -> float:
    return 1e-5 * max(1.0, abs(w))


def wronskian_residual(a: float, b: float, w: float) -> float:
    """Relative mismatch between the numerical W(M, U) and -Gamma(b)/Gamma(a) w^-b e^w."""
    if nonpositive_integer(a):
        raise LinearDependenceError(f"a = {a}: M and U are linearly dependent")
    if float(b).is_integer():
        raise DomainError(f"direct U path needs non-integer b, got {b}")
    h = fd_step(w)
    if w - h <= 0:
        raise DomainError(f"w = {w} too close to 0 for central differences")
    def u_of(x):
        return _tricomi_direct(a, b, x)[0]

    m = kummer_m(a, b, w)
    u = u_of(w)
    dm = _central(lambda x: kummer_m(a, b, x), w, h)
    du = _central(u_of, w, h)
    rhs = -math.gamma(b) * rgamma(a) * w ** (-b) * math.exp(w)
    return abs((m * du - dm * u) - rhs) / max(1.0, abs(rhs))


def kummer_growth_law(a: float, b: float, w: float) -> float:
    """Dominant large-w term of M: Gamma(b)/Gamma(a) e^w w^(a-b)."""
    return math.gamma(b) * rgamma(a) * math.exp(w) * w ** (a - b)


def asymptotic_growth_check(a: float, b: float, w_list, law: Callable[[float, float, float], float] | None = None) -> bool:
    """True iff M(a,b,w)/law(a,b,w) approaches 1 monotonically and is within 10% at the last w."""
    if nonpositive_integer(a):
        raise ValueError(f"a = {a} gives a polynomial with no e^w growth; use polynomial_growth_exponent")
    law = law or kummer_growth_law
    devs = [abs(kummer_m(a, b, w) / law(a, b, w) - 1.0) for w in w_list]
    monotone = all(d1 >= d2 for d1, d2 in zip(devs, devs[1:]))
    return monotone and devs[-1] <= 0.1


def polynomial_growth_exponent(n: int, b: float, w1: float = 1e6, w2: float = 1e7) -> float:
    """Log-log slope of |M(-n, b, w)| between two large w; tends to n."""
    m1, m2 = abs(kummer_m(-n, b, w1)), abs(kummer_m(-n, b, w2))
    return math.log(m2 / m1) / math.log(w2 / w1)


def confluent_residual(a: float, b: float, w: float) -> float:
    """Relative residual of w f'' + (b - w) f' - a f for f = M(a, b, .), by central differences."""
    h = 1e-3 * max(1.0, abs(w))
    f0 = kummer_m(a, b, w)
    fp, fm = kummer_m(a, b, w + h), kummer_m(a, b, w - h)
    fp2, fm2 = kummer_m(a, b, w + 2 * h), kummer_m(a, b, w - 2 * h)
    d1 = (8 * (fp - fm) - (fp2 - fm2)) / (12 * h)
    d2 = (16 * (fp + fm) - (fp2 + fm2) - 30 * f0) / (12 * h * h)
    terms = (w * d2, (b - w) * d1, a * f0)
    return abs(terms[0] + terms[1] - terms[2]) / max(1.0, *map(abs, terms))
