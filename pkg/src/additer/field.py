"""Exact arithmetic in F_p, F_q = F_p[x]/(g) and extensions F_{q^s}.

Elements of F_q are encoded as Python ints: the coordinate vector
(c_0, ..., c_{R-1}) in the power basis of the generator is stored as
c_0 + c_1 p + ... + c_{R-1} p^(R-1).  Scalar routines work on these codes;
the ``v*`` routines work elementwise on numpy arrays of codes.

Extension fields F_{q^s} are absolute extensions F_p[y]/(h) of degree R*s,
elements being length-R*s coordinate vectors, with F_q embedded through a
root of g.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import isprime, primefactors

from . import fppoly
from .errors import DegreeMismatch, NotIrreducible, NotPrime, Unsupported
from .linalg import matmul, rank_kernel

TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1 << 10


@dataclass(frozen=True)
class FieldCtx:
    """The field F_q, q = p^R, presented as F_p[x]/(modulus).

    Build instances with :func:`make_field`, which checks primality and
    irreducibility; the constructor itself trusts its arguments.
    """

    p: int
    R: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        q = self.p**self.R
        object.__setattr__(self, "q", q)
        if q <= TABLE_LIMIT:
            self._build_tables()
        elif self.R == 1:
            object.__setattr__(self, "_tables", False)
        else:
            raise Unsupported(f"F_{q} is beyond desk scale (q > {TABLE_LIMIT} with R > 1)")

    # -- table construction ---------------------------------------------------

    def _poly_mulmod(self, a, b):
        p, R, g = self.p, self.R, self.modulus
        prod = [0] * (2 * R - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * R - 2, R - 1, -1):
            c = prod[k]
            if c:
                for i in range(R + 1):
                    prod[k - R + i] = (prod[k - R + i] - c * g[i]) % p
        return tuple(prod[:R])

    def _build_tables(self):
        p, R, q = self.p, self.R, self.q
        object.__setattr__(self, "_tables", True)
        weights = [p**i for i in range(R)]
        digits = [tuple((k // w) % p for w in weights) for k in range(q)]

        def code(c):
            return sum(x * w for x, w in zip(c, weights))

        # smallest primitive element, by code
        exps = [(q - 1) // ell for ell in primefactors(q - 1)] if q > 2 else []

        def cpow(c, e):
            result, base = (1,) + (0,) * (R - 1), c
            while e:
                if e & 1:
                    result = self._poly_mulmod(result, base)
                base = self._poly_mulmod(base, base)
                e >>= 1
            return result

        one = (1,) + (0,) * (R - 1)
        gen = 1
        for cand in range(1, q):
            c = digits[cand]
            if all(cpow(c, e) != one for e in exps):
                gen = cand
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        cur = one
        g = digits[gen]
        for i in range(q - 1):
            k = code(cur)
            exp[i] = exp[i + q - 1] = k
            log[k] = i
            cur = self._poly_mulmod(cur, g)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_digits", digits)
        object.__setattr__(self, "_weights", weights)
        neg = [code(tuple((-x) % p for x in d)) for d in digits]
        object.__setattr__(self, "_neg", neg)
        if p != 2 and q <= ADD_TABLE_LIMIT:
            dig = np.array(digits, dtype=np.int64).reshape(q, R)
            w = np.array(weights, dtype=np.int64)
            table = ((dig[:, None, :] + dig[None, :, :]) % p) @ w
            object.__setattr__(self, "_addtab", table.tolist())
            object.__setattr__(self, "_addtab_np", table)
        else:
            object.__setattr__(self, "_addtab", None)
        object.__setattr__(self, "_exp_np", np.array(exp, dtype=np.int64))
        object.__setattr__(self, "_log_np", np.array(log, dtype=np.int64))
        object.__setattr__(self, "_neg_np", np.array(neg, dtype=np.int64))
        object.__setattr__(self, "_dig_np", np.array(digits, dtype=np.int64).reshape(q, R))
        object.__setattr__(self, "_w_np", np.array(weights, dtype=np.int64))

    # -- basic constants ------------------------------------------------------

    zero = 0
    one = 1

    @property
    def gen(self) -> int:
        """Code of the generator x mod g (for R = 1 this is the root of g)."""
        if self.R == 1:
            return (-self.modulus[0]) % self.p
        return self.p

    def coords(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.R))

    def from_coords(self, c) -> int:
        if len(c) != self.R:
            raise DegreeMismatch(f"expected {self.R} coordinates, got {len(c)}")
        return sum((int(x) % self.p) * self.p**i for i, x in enumerate(c))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def is_prime_field(self) -> bool:
        return self.R == 1

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not self._tables:
            return (a + b) % self.p
        if self._addtab is not None:
            return self._addtab[a][b]
        da, db = self._digits[a], self._digits[b]
        return sum(((x + y) % self.p) * w for x, y, w in zip(da, db, self._weights))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if not self._tables:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not self._tables:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if not self._tables:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        if not self._tables:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int, k: int = 1) -> int:
        """a^(p^k); k may be negative (k = -1 is the p-th root)."""
        k %= self.R
        if k == 0 or a == 0:
            return a
        return self._exp[(self._log[a] * self.p**k) % (self.q - 1)]

    def pth_root(self, a: int) -> int:
        return self.frob(a, self.R - 1)

    def elements(self):
        return range(self.q)

    # -- vectorised arithmetic on arrays of codes ----------------------------

    def vadd(self, u, v):
        if self.p == 2:
            return u ^ v
        if not self._tables:
            return (u + v) % self.p
        if self._addtab is not None:
            return self._addtab_np[u, v]
        return ((self._dig_np[u] + self._dig_np[v]) % self.p) @ self._w_np

    def vneg(self, u):
        if self.p == 2:
            return u
        if not self._tables:
            return (-u) % self.p
        return self._neg_np[u]

    def vsub(self, u, v):
        return self.vadd(u, self.vneg(v))

    def vscale(self, c: int, u):
        if c == 0:
            return np.zeros_like(u)
        if not self._tables:
            return u * c % self.p
        out = self._exp_np[self._log_np[u] + self._log[c]]
        out[u == 0] = 0
        return out

    def vmul(self, u, v):
        if not self._tables:
            return u * v % self.p
        out = self._exp_np[self._log_np[u] + self._log_np[v]]
        out[(u == 0) | (v == 0)] = 0
        return out

    def vfrob(self, u, k: int = 1):
        k %= self.R
        if k == 0:
            return u.copy()
        out = self._exp_np[(self._log_np[u] * self.p**k) % (self.q - 1)]
        out[u == 0] = 0
        return out


@lru_cache(maxsize=None)
def _make_field(p: int, R: int, modulus: tuple[int, ...] | None) -> FieldCtx:
    if p >= 1 << 31 or not isprime(p):
        raise NotPrime(f"{p} is not a prime below 2^31")
    if R < 1:
        raise DegreeMismatch("extension degree must be >= 1")
    if modulus is None:
        modulus = fppoly.least_irreducible(p, R)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != R + 1 or modulus[-1] != 1:
            raise DegreeMismatch(f"modulus must be monic of degree {R}")
        if not fppoly.is_irreducible_rabin(np.array(modulus, dtype=np.int64), p):
            raise NotIrreducible(f"{modulus} is reducible over F_{p}")
    return FieldCtx(p, R, tuple(modulus))


def make_field(p: int, R: int = 1, modulus=None) -> FieldCtx:
    """Construct F_{p^R}; the modulus defaults to the least monic irreducible."""
    return _make_field(int(p), int(R), None if modulus is None else tuple(int(c) for c in modulus))


class ExtCtx:
    """F_{q^s} as F_p[y]/(h), deg h = R*s, with a fixed embedding of F_q."""

    def __init__(self, base: FieldCtx, s: int):
        if s < 1:
            raise DegreeMismatch("extension degree must be >= 1")
        p = base.p
        self.base = base
        self.s = s
        self.p = p
        self.D = D = base.R * s
        self.modulus_ext = fppoly.least_irreducible(p, D)
        h = np.array(self.modulus_ext, dtype=np.int64)
        self._h_low = h[:D].copy()
        # red[k] = y^(D+k) mod h
        red = np.zeros((max(D - 1, 0), D), dtype=np.int64)
        if D > 1:
            v = (-self._h_low) % p
            red[0] = v
            for k in range(1, D - 1):
                top = v[-1]
                v = np.concatenate(([0], v[:-1]))
                v = (v - top * self._h_low) % p
                red[k] = v
        self._red = red
        self.frob_matrix = self._frobenius_matrix()
        self.embed_gen = self._find_embedding()
        powers = [self.one()]
        for _ in range(1, base.R):
            powers.append(self.mul(powers[-1], self.embed_gen))
        self._gen_powers = np.array(powers, dtype=np.int64).reshape(base.R, D)
        if base.q * D <= 1 << 22:
            codes = np.arange(base.q) if base.q <= TABLE_LIMIT else None
            if codes is not None:
                dig = np.array([base.coords(int(c)) for c in codes], dtype=np.int64)
                self._embed_table = dig @ self._gen_powers % p
            else:
                self._embed_table = None
        else:
            self._embed_table = None

    def __repr__(self):
        return f"ExtCtx(q={self.base.q}, s={self.s}, D={self.D})"

    # -- elements -------------------------------------------------------------

    def zero(self):
        return np.zeros(self.D, dtype=np.int64)

    def one(self):
        e = self.zero()
        e[0] = 1
        return e

    def basis(self, j: int):
        e = self.zero()
        e[j] = 1
        return e

    def reduce(self, c):
        c = np.asarray(c, dtype=np.int64) % self.p
        D = self.D
        if len(c) <= D:
            out = self.zero()
            out[: len(c)] = c
            return out
        return (c[:D] + c[D:] @ self._red[: len(c) - D]) % self.p

    def add(self, u, v):
        return (u + v) % self.p

    def sub(self, u, v):
        return (u - v) % self.p

    def neg(self, u):
        return (-u) % self.p

    def mul(self, u, v):
        return self.reduce(np.convolve(u, v))

    def pow(self, u, e: int):
        result, base = self.one(), u
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frobenius(self, u, k: int = 1):
        for _ in range(k):
            u = self.frob_matrix @ u % self.p
        return u

    def to_int(self, u) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(u))

    def from_int(self, n: int):
        out = self.zero()
        for i in range(self.D):
            n, out[i] = divmod(n, self.p)
        return out

    def embed(self, a: int):
        """Image of the F_q element with code a."""
        if self._embed_table is not None:
            return self._embed_table[a].copy()
        c = np.array(self.base.coords(a), dtype=np.int64)
        return c @ self._gen_powers % self.p

    def mul_matrix(self, e):
        """Matrix over F_p of z -> e*z in the power basis of y."""
        D, p = self.D, self.p
        out = np.zeros((D, D), dtype=np.int64)
        col = np.asarray(e, dtype=np.int64) % p
        for j in range(D):
            out[:, j] = col
            top = col[-1]
            col = np.concatenate(([0], col[:-1]))
            if top:
                col = (col - top * self._h_low) % p
        return out

    # -- construction helpers -------------------------------------------------

    def _frobenius_matrix(self):
        D, p = self.D, self.p
        y = self.zero() if D == 1 else self.basis(1)
        if D == 1:
            return np.ones((1, 1), dtype=np.int64)
        yp = self.pow(y, p)
        out = np.zeros((D, D), dtype=np.int64)
        col = self.one()
        for j in range(D):
            out[:, j] = col
            col = self.mul(col, yp)
        return out

    def _find_embedding(self):
        base, p, D = self.base, self.p, self.D
        g = base.modulus
        # F_q inside F_{p^D} is the fixed space of z -> z^q.
        mat = np.eye(D, dtype=np.int64)
        for _ in range(base.R):
            mat = matmul(self.frob_matrix, mat, p)
        _, kernel = rank_kernel((mat - np.eye(D, dtype=np.int64)) % p, p)
        roots = []
        for combo in product(range(p), repeat=len(kernel)):
            z = np.array(combo, dtype=np.int64) @ kernel % p if len(kernel) else self.zero()
            acc = self.zero()
            for c in reversed(g):
                acc = self.mul(acc, z)
                acc[0] = (acc[0] + c) % p
            if not acc.any():
                roots.append(tuple(int(x) for x in z))
        if not roots:
            raise AssertionError("base modulus has no root in the extension")  # pragma: no cover
        return np.array(min(roots), dtype=np.int64)


@lru_cache(maxsize=None)
def make_extension(ctx: FieldCtx, s: int) -> ExtCtx:
    """F_{q^s} with the lexicographically least root of g as image of x."""
    return ExtCtx(ctx, int(s))
