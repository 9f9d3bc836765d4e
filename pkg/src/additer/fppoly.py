"""Polynomials over a prime field F_p.

Coefficient arrays are numpy int64 vectors, low degree first, with no
trailing zeros (the zero polynomial is the empty array).  Characteristic 2
has a parallel implementation on Python ints (bit i = coefficient of y^i),
which is what makes the irreducible search for large extension degrees cheap.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
from sympy import primefactors


def trim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.flatnonzero(a)
    if len(nz) == 0:
        return a[:0].copy()
    return a[: nz[-1] + 1].copy()


def degree(a) -> int:
    return len(a) - 1


def add(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return trim(out % p)


def sub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    return trim(out % p)


def mul(a, b, p):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    return trim(np.convolve(a, b) % p)


def divmod_(a, b, p):
    if len(b) == 0:
        raise ZeroDivisionError("division by zero polynomial")
    r = np.array(a, dtype=np.int64) % p
    db = len(b) - 1
    if len(r) - 1 < db:
        return np.zeros(0, dtype=np.int64), trim(r)
    inv = pow(int(b[-1]), p - 2, p)
    qt = np.zeros(len(r) - db, dtype=np.int64)
    for k in range(len(r) - 1, db - 1, -1):
        c = int(r[k]) * inv % p
        if c:
            qt[k - db] = c
            r[k - db : k + 1] = (r[k - db : k + 1] - c * b) % p
    return trim(qt), trim(r[:db])


def rem(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if len(a) == 0:
        return a
    return a * pow(int(a[-1]), p - 2, p) % p


def gcd(a, b, p):
    a, b = trim(np.asarray(a) % p), trim(np.asarray(b) % p)
    while len(b):
        a, b = b, rem(a, b, p)
    return monic(a, p)


def mulmod(a, b, m, p):
    return rem(mul(a, b, p), m, p)


def powmod(a, e: int, m, p):
    result = np.array([1], dtype=np.int64)
    base = rem(a, m, p)
    while e:
        if e & 1:
            result = mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = mulmod(base, base, m, p)
    return rem(result, m, p)


def frobenius_power_x(m, k: int, p):
    """y^(p^k) mod m by k successive p-th powers."""
    h = rem(np.array([0, 1], dtype=np.int64), m, p)
    for _ in range(k):
        h = powmod(h, p, m, p)
    return h


def is_irreducible_rabin(f, p) -> bool:
    """Rabin's test: f | y^(p^n) - y and gcd(f, y^(p^(n/l)) - y) = 1 for primes l | n."""
    f = trim(np.asarray(f) % p)
    n = degree(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(f, p)
    y = np.array([0, 1], dtype=np.int64)
    for ell in primefactors(n):
        h = frobenius_power_x(f, n // ell, p)
        if degree(gcd(f, sub(h, y, p), p)) > 0:
            return False
    h = frobenius_power_x(f, n, p)
    return len(sub(h, rem(y, f, p), p)) == 0


# -- characteristic 2 on Python ints -----------------------------------------

_SPREAD = [sum(((b >> i) & 1) << (2 * i) for i in range(8)) for b in range(256)]


def gf2_square(a: int) -> int:
    out = 0
    shift = 0
    while a:
        out |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return out


def gf2_mul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def gf2_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def _gf2_benor(f: int) -> bool:
    n = f.bit_length() - 1
    if n == 1:
        return True
    if not f & 1 or bin(f).count("1") % 2 == 0:
        return False
    u = 2
    for _ in range(n // 2):
        u = gf2_mod(gf2_square(u), f)
        if gf2_gcd(f, u ^ 2) != 1:
            return False
    return True


def _int_to_array(a: int):
    return trim(np.array([(a >> i) & 1 for i in range(max(a.bit_length(), 1))], dtype=np.int64))


def _array_to_int(a) -> int:
    return sum(int(c) << i for i, c in enumerate(a))


# -- odd characteristic: Ben-Or with early exit -------------------------------


def _has_root(f, p) -> bool:
    if p > 64:
        return False
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in f[::-1]:
        acc = (acc * xs + int(c)) % p
    return bool(np.any(acc == 0))


def _benor(f, p) -> bool:
    n = degree(f)
    if n == 1:
        return True
    if f[0] == 0 or _has_root(f, p):
        return False
    y = np.array([0, 1], dtype=np.int64)
    u = y
    for _ in range(n // 2):
        u = powmod(u, p, f, p)
        if degree(gcd(f, sub(u, y, p), p)) > 0:
            return False
    return True


def _fold_reducer(g, p):
    """Remainder modulo monic g, folding x^n = -tail when g's tail is short."""
    n = degree(g)
    neg_tail = (-trim(g[:n])) % p
    t = degree(neg_tail)
    if t > n // 2 or t < 0:
        return lambda a: rem(a, g, p)

    def reduce(a):
        a = np.asarray(a, dtype=np.int64)
        while len(a) > n:
            hi = a[n:]
            lo = np.zeros(max(n, len(hi) + t), dtype=np.int64)
            lo[: min(len(a), n)] = a[:n]
            lo[: len(hi) + t] += np.convolve(hi, neg_tail)
            a = trim(lo % p)
        return a

    return reduce


def _benor_blocked(f, p) -> bool:
    """Ben-Or on the reversal of f, one gcd per block of Frobenius steps.

    f(0) != 0, so f is irreducible iff its reversal is; lexicographic
    candidates vary their top coefficients first, which makes the reversal
    sparse in low degrees and remainders cheap.
    """
    n = degree(f)
    if n == 1:
        return True
    if f[0] == 0 or _has_root(f, p):
        return False
    g = monic(trim(f[::-1].copy()), p)
    reduce = _fold_reducer(g, p)
    y = np.array([0, 1], dtype=np.int64)

    def pth_power(u):
        result = np.array([1], dtype=np.int64)
        base, e = u, p
        while e:
            if e & 1:
                result = reduce(mul(result, base, p))
            e >>= 1
            if e:
                base = reduce(mul(base, base, p))
        return result

    u = y
    i, size = 0, 1
    while i < n // 2:
        acc = np.array([1], dtype=np.int64)
        for _ in range(min(size, n // 2 - i)):
            u = pth_power(u)
            i += 1
            acc = reduce(mul(acc, sub(u, y, p), p))
        if degree(gcd(g, acc, p)) > 0 or len(acc) == 0:
            return False
        size = min(2 * size, 32)
    return True


def is_irreducible(f, p) -> bool:
    f = trim(np.asarray(f) % p)
    if len(f) < 2:
        return False
    f = monic(f, p)
    if p == 2:
        return _gf2_benor(_array_to_int(f))
    return _benor(f, p)


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over F_p.

    Candidates c_0 + c_1 y + ... + y^n are ordered by (c_0, c_1, ..., c_{n-1}),
    so the constant term is the most significant coordinate.
    """
    if n == 1:
        return (0, 1)
    if p == 2:
        # c_0 must be 1; the rest is counted with c_1 most significant.
        for k in range(1 << (n - 1)):
            tail = int(format(k, f"0{n - 1}b")[::-1], 2) if n > 1 else 0
            f = 1 | (tail << 1) | (1 << n)
            if _gf2_benor(f):
                return tuple(int(c) for c in _int_to_array(f))
        raise AssertionError("no irreducible found")  # pragma: no cover
    for coeffs in product(range(1, p), *[range(p)] * (n - 1)):
        f = np.array(list(coeffs) + [1], dtype=np.int64)
        if _benor_blocked(f, p):
            return tuple(int(c) for c in f)
    raise AssertionError("no irreducible found")  # pragma: no cover
