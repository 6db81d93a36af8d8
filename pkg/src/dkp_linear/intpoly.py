"""Exact polynomial arithmetic over Python integers.

Polynomials are tuples of coefficients in ascending powers, with no trailing
zeros (the zero polynomial is the empty tuple).
"""
from __future__ import annotations

from functools import reduce
from math import gcd

from gmpy2 import mpz

IntPoly = tuple[int, ...]


def trim(p) -> IntPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: IntPoly) -> int:
    return len(p) - 1


def content(p: IntPoly) -> int:
    return reduce(gcd, p, 0)


def mul(p: IntPoly, q: IntPoly) -> IntPoly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def add(p: IntPoly, q: IntPoly) -> IntPoly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def scale(p: IntPoly, c: int) -> IntPoly:
    return trim(c * a for a in p)


def exact_div(p: IntPoly, c: int) -> IntPoly:
    out = []
    for a in p:
        qt, r = divmod(a, c)
        if r:
            raise ArithmeticError(f"coefficient {a} not divisible by {c}")
        out.append(qt)
    return tuple(out)


def prem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r."""
    if not b:
        raise ZeroDivisionError("pseudo-remainder by the zero polynomial")
    r = list(a)
    db = degree(b)
    lb = b[-1]
    e = degree(a) - db + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= lr * c
        r = list(trim(r))
        e -= 1
    return scale(tuple(r), lb**e) if e > 0 else tuple(r)


def resultant(a: IntPoly, b: IntPoly) -> int:
    """Resultant of two integer polynomials by the subresultant PRS.

    Content is factored out first; every division in the loop is exact.
    Arithmetic runs on gmpy2 integers; intermediate coefficients reach tens
    of thousands of bits for degree ~100.
    """
    return int(_resultant(tuple(map(mpz, trim(a))), tuple(map(mpz, trim(b)))))


def _resultant(a, b):
    if not a or not b:
        return 0
    ca, cb = content(a), content(b)
    a, b = exact_div(a, ca), exact_div(b, cb)
    t = ca ** degree(b) * cb ** degree(a)
    s = 1
    if degree(a) < degree(b):
        a, b = b, a
        if degree(a) % 2 and degree(b) % 2:
            s = -1
    if degree(b) == 0:
        return s * t * b[0] ** degree(a)
    g = h = 1
    while True:
        delta = degree(a) - degree(b)
        if degree(a) % 2 and degree(b) % 2:
            s = -s
        r = prem(a, b)
        a = b
        if not r:
            return 0
        b = exact_div(r, g * h**delta)
        g = a[-1]
        if delta:
            # h <- h^(1 - delta) g^delta
            h = _exact_quotient(g**delta, h ** (delta - 1))
        if degree(b) == 0:
            # deg(a) >= 1 here since b was non-constant on entry
            da = degree(a)
            return s * t * _exact_quotient(b[0] ** da, h ** (da - 1))


def _exact_quotient(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("non-exact subresultant update")
    return q
