"""Dense univariate polynomials over F_q.

Coefficients are numpy arrays of F_q element codes, low degree first.
Multiplication goes through the F_p coordinates (R^2 integer convolutions);
everything else (division, gcd, p-th powers) works on the codes directly
with the table-driven vector operations of :class:`FieldCtx`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm

import numpy as np
from sympy import factorint, primefactors

from . import fppoly
from .errors import ConstantInput, ContextMismatch, RootAtZero, Unsupported
from .field import FieldCtx

ORDER_DEGREE_CAP = 64
DEFAULT_SEED = 20240531


class ConstantModulus(ConstantInput):
    pass


def _trim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.flatnonzero(a)
    if len(nz) == 0:
        return np.zeros(0, dtype=np.int64)
    return a[: nz[-1] + 1].copy()


@lru_cache(maxsize=None)
def _theta_table(ctx: FieldCtx):
    """Coordinates of x^j mod g for j < 2R - 1, as a (2R-1, R) array."""
    p, R, g = ctx.p, ctx.R, ctx.modulus
    rows = []
    cur = [1] + [0] * (R - 1)
    for _ in range(2 * R - 1):
        rows.append(cur)
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [(c - top * g[i]) % p for i, c in enumerate(cur)]
    return np.array(rows, dtype=np.int64)


def _convolve(u, v, p):
    if len(u) and min(len(u), len(v)) * float(p - 1) ** 2 >= 2.0**62:
        return np.convolve(u.astype(object), v.astype(object)) % p
    return np.convolve(u, v) % p


def _mul_codes(ctx: FieldCtx, u, v):
    if len(u) == 0 or len(v) == 0:
        return np.zeros(0, dtype=np.int64)
    p, R = ctx.p, ctx.R
    if R == 1:
        return _trim(np.asarray(_convolve(u, v, p), dtype=np.int64))
    du, dv = ctx._dig_np[u], ctx._dig_np[v]
    acc = np.zeros((len(u) + len(v) - 1, 2 * R - 1), dtype=np.int64)
    for a in range(R):
        for b in range(R):
            acc[:, a + b] += np.convolve(du[:, a], dv[:, b])
    coords = (acc % p) @ _theta_table(ctx) % p
    return _trim(coords @ ctx._w_np)


class DensePoly:
    """A polynomial in F_q[X]; immutable by convention."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        self.c = _trim(np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int64))

    # -- constructors -----------------------------------------------------------

    @classmethod
    def _raw(cls, ctx, arr):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.c = _trim(arr)
        return obj

    @classmethod
    def x(cls, ctx):
        return cls(ctx, [0, 1])

    @classmethod
    def const(cls, ctx, a: int):
        return cls(ctx, [a])

    @classmethod
    def monomial(cls, ctx, e: int, a: int = 1):
        arr = np.zeros(e + 1, dtype=np.int64)
        arr[e] = a
        return cls._raw(ctx, arr)

    @classmethod
    def from_terms(cls, ctx, terms):
        """Build from a mapping exponent -> coefficient code."""
        terms = {e: a for e, a in terms.items() if a}
        if not terms:
            return cls(ctx)
        arr = np.zeros(max(terms) + 1, dtype=np.int64)
        for e, a in terms.items():
            arr[e] = a
        return cls._raw(ctx, arr)

    # -- basic properties -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> int:
        return int(self.c[-1]) if len(self.c) else 0

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def coeffs(self) -> list[int]:
        return [int(a) for a in self.c]

    def terms(self) -> dict[int, int]:
        return {int(e): int(self.c[e]) for e in np.flatnonzero(self.c)}

    def sort_key(self):
        return (self.degree, tuple(self.coeffs()))

    def __eq__(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.c, other.c)

    def __hash__(self):
        return hash((self.ctx, tuple(self.coeffs())))

    def __repr__(self):
        from .textio import format_poly

        return f"DensePoly({format_poly(self)})"

    def _check(self, other):
        if not isinstance(other, DensePoly):
            raise TypeError(f"expected DensePoly, got {type(other).__name__}")
        if self.ctx != other.ctx:
            raise ContextMismatch("polynomials over different fields")

    # -- ring operations ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, np.integer)):
            return DensePoly.const(self.ctx, self.ctx.from_int(int(other)))
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.c), len(other.c))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.c)] = self.c
        b[: len(other.c)] = other.c
        return DensePoly._raw(self.ctx, self.ctx.vadd(a, b))

    def __neg__(self):
        return DensePoly._raw(self.ctx, self.ctx.vneg(self.c))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(self.ctx.from_int(int(other)))
        self._check(other)
        return DensePoly._raw(self.ctx, _mul_codes(self.ctx, self.c, other.c))

    __rmul__ = __mul__

    def scale(self, a: int):
        return DensePoly._raw(self.ctx, self.ctx.vscale(a, self.c))

    def __pow__(self, n: int):
        result = DensePoly.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        qt, r = _divmod_codes(self.ctx, self.c, other.c)
        return DensePoly._raw(self.ctx, qt), DensePoly._raw(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        return DensePoly._raw(self.ctx, _rem_codes(self.ctx, self.c, other.c))

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv(self.lead))

    def derivative(self):
        if self.degree < 1:
            return DensePoly(self.ctx)
        ctx = self.ctx
        out = [ctx.mul(ctx.from_int(i), int(a)) for i, a in enumerate(self.c) if i][:]
        return DensePoly(ctx, out)

    def __call__(self, a: int) -> int:
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs()):
            acc = ctx.add(ctx.mul(acc, a), c)
        return acc

    def frobenius_spread(self):
        """f^p: coefficients raised to the p-th power at exponents times p."""
        p = self.ctx.p
        if self.is_zero():
            return self
        arr = np.zeros(p * self.degree + 1, dtype=np.int64)
        arr[::p] = self.ctx.vfrob(self.c, 1)
        return DensePoly._raw(self.ctx, arr)

    def pth_root(self):
        """g with g^p = self; requires every exponent to be a multiple of p."""
        p = self.ctx.p
        if np.any(np.delete(self.c, np.arange(0, len(self.c), p))):
            raise ValueError("not a p-th power")
        return DensePoly._raw(self.ctx, self.ctx.vfrob(self.c[::p], -1))


def _divmod_codes(ctx, a, b):
    r = np.array(a, dtype=np.int64)
    db = len(b) - 1
    if len(r) - 1 < db:
        return np.zeros(0, dtype=np.int64), _trim(r)
    inv_lead = ctx.inv(int(b[-1]))
    qt = np.zeros(len(r) - db, dtype=np.int64)
    for k in range(len(r) - 1, db - 1, -1):
        c = int(r[k])
        if c:
            c = ctx.mul(c, inv_lead)
            qt[k - db] = c
            r[k - db : k + 1] = ctx.vsub(r[k - db : k + 1], ctx.vscale(c, b))
    return qt, _trim(r[:db])


def _rem_codes(ctx, a, b):
    a = _trim(a)
    N = len(b) - 1
    if len(a) <= N:
        return a
    nz = np.flatnonzero(b[:-1])
    if len(nz) <= 64 and (len(nz) == 0 or nz[-1] <= N // 2):
        return _rem_sparse(ctx, a, b, nz)
    return _divmod_codes(ctx, a, b)[1]


def _rem_sparse(ctx, a, b, nz):
    """Reduce a modulo b = lead*X^N + (few low terms) by folding X^N."""
    N = len(b) - 1
    inv_lead = ctx.inv(int(b[-1]))
    tail = [(int(e), ctx.neg(ctx.mul(int(b[e]), inv_lead))) for e in nz]
    r = a.copy()
    while len(r) > N:
        hi = r[N:]
        top = max((e for e, _ in tail), default=0) + len(hi)
        out = np.zeros(max(N, top), dtype=np.int64)
        out[:N] = r[:N]
        for e, c in tail:
            out[e : e + len(hi)] = ctx.vadd(out[e : e + len(hi)], ctx.vscale(c, hi))
        r = _trim(out)
    return r


# -- operations -----------------------------------------------------------------


def poly_gcd(f: DensePoly, g: DensePoly) -> DensePoly:
    """Monic gcd (zero only when both inputs are zero)."""
    f._check(g)
    ctx = f.ctx
    if ctx.q == 2:
        a = fppoly.gf2_gcd(_to_bits(f.c), _to_bits(g.c))
        return DensePoly._raw(ctx, _from_bits(a))
    a, b = f.c, g.c
    while len(b):
        a, b = b, _divmod_codes(ctx, a, b)[1]
    return DensePoly._raw(ctx, a).monic()


def _to_bits(c) -> int:
    return int.from_bytes(np.packbits(c.astype(np.uint8), bitorder="little").tobytes(), "little")


def _from_bits(a: int):
    n = a.bit_length()
    raw = np.frombuffer(a.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(np.int64)


def poly_arith(op: str, f: DensePoly, g: DensePoly):
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "divmod":
        return divmod(f, g)
    if op == "gcd":
        return poly_gcd(f, g)
    raise ValueError(f"unknown operation {op!r}")


def powmod(base: DensePoly, e: int, mod: DensePoly) -> DensePoly:
    result = DensePoly.const(base.ctx, 1) % mod
    b = base % mod
    while e:
        if e & 1:
            result = (result * b) % mod
        e >>= 1
        if e:
            b = (b * b) % mod
    return result


def frobenius_step(h: DensePoly, f: DensePoly) -> DensePoly:
    """h^p mod f."""
    return h.frobenius_spread() % f


class FrobeniusOperator:
    """The F_p-linear map h -> h^p mod f on F_q[X]/(f).

    Sparse moduli reduce fast by folding, so only dense moduli of moderate
    degree get the precomputed matrix; everything else falls back to
    :func:`frobenius_step`.
    """

    MATRIX_LIMIT = 4096

    def __init__(self, f: DensePoly):
        self.f = f
        self.Q = None
        ctx = f.ctx
        N, R, p = f.degree, ctx.R, ctx.p
        nz = np.flatnonzero(f.c[:-1])
        sparse = len(nz) <= 64 and (len(nz) == 0 or nz[-1] <= N // 2)
        if sparse or N < 64 or N * R > self.MATRIX_LIMIT or not ctx._tables:
            return
        if N * R * float(p - 1) ** 2 >= 2.0**53:
            return
        rows = np.zeros((N, N), dtype=np.int64)
        cur = np.array([1], dtype=np.int64)
        shift = np.zeros(p, dtype=np.int64)
        for i in range(N):
            rows[i, : len(cur)] = cur
            cur = _rem_codes(ctx, np.concatenate((shift, cur)), f.c)
        blocks = []
        for j in range(R):
            t = ctx.pow(ctx.gen, j * p) if R > 1 else 1
            blocks.append(ctx._dig_np[ctx.vscale(t, rows)].reshape(N, N * R))
        # column i*R + j is the image of theta^j X^i
        Q = np.stack(blocks, axis=1).reshape(N * R, N * R).T
        dtype = np.float32 if N * R * (p - 1) ** 2 < 1 << 24 else np.float64
        self.Q = Q.astype(dtype)
        self._dtype = dtype

    def __call__(self, h: DensePoly) -> DensePoly:
        if self.Q is None:
            return frobenius_step(h, self.f)
        ctx = h.ctx
        N, R, p = self.f.degree, ctx.R, ctx.p
        codes = np.zeros(N, dtype=np.int64)
        codes[: len(h.c)] = h.c
        v = ctx._dig_np[codes].reshape(N * R).astype(self._dtype)
        w = np.fmod(self.Q @ v, p).astype(np.int64).reshape(N, R)
        return DensePoly._raw(ctx, w @ ctx._w_np)


def modexp_frobenius(f: DensePoly, s: int) -> DensePoly:
    """X^(q^s) mod f, by R*s successive p-th powers."""
    if f.degree < 1:
        raise ConstantModulus("modulus must be nonconstant")
    op = FrobeniusOperator(f)
    h = DensePoly.x(f.ctx) % f
    for _ in range(f.ctx.R * s):
        h = op(h)
    return h


def squarefree_list(f: DensePoly) -> list[tuple[DensePoly, int]]:
    """Pairwise coprime monic squarefree factors with multiplicities."""
    if f.degree < 1:
        raise ConstantInput("squarefree decomposition of a constant")
    f = f.monic()
    p = f.ctx.p
    out: dict[int, DensePoly] = {}

    def record(g, m):
        if g.degree > 0:
            out[m] = out[m] * g if m in out else g

    def run(f, mult):
        d = f.derivative()
        if d.is_zero():
            run(f.pth_root(), mult * p)
            return
        c = poly_gcd(f, d)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            record(w // y, i * mult)
            i += 1
            w = y
            c = c // y
        if c.degree > 0:
            run(c.pth_root(), mult * p)

    run(f, 1)
    return sorted(((g.monic(), m) for m, g in out.items()), key=lambda t: t[1])


def squarefree_decompose(f: DensePoly):
    """(f_0, e, profile): squarefree part, largest multiplicity, multiplicity -> factor."""
    parts = squarefree_list(f)
    f0 = DensePoly.const(f.ctx, 1)
    for g, _ in parts:
        f0 = f0 * g
    e = max(m for _, m in parts)
    return f0, e, {m: g for g, m in parts}


def distinct_degree(f: DensePoly, degrees=None) -> dict[int, DensePoly]:
    """Products of the irreducible factors of each degree, for squarefree f.

    With ``degrees`` given, gcds are only taken at those degrees; the caller
    guarantees that every factor degree is in the set and that the set is
    closed under taking divisors.
    """
    ctx = f.ctx
    f = f.monic()
    X = DensePoly.x(ctx)
    op = FrobeniusOperator(f)
    out: dict[int, DensePoly] = {}
    rest = f
    h = X % f
    i = 0
    limit = max(degrees) if degrees is not None else None
    while rest.degree > 0:
        i += 1
        if degrees is None and rest.degree < 2 * i:
            out[rest.degree] = rest
            break
        if limit is not None and i > limit:
            raise ValueError("factor degrees not covered by the supplied set")
        for _ in range(ctx.R):
            h = op(h)
        if degrees is not None and i not in degrees:
            continue
        g = poly_gcd(rest, h - X)
        if g.degree > 0:
            out[i] = g
            rest = rest // g
    return out


def _random_poly(ctx, deg, rng):
    return DensePoly(ctx, [rng.randrange(ctx.q) for _ in range(deg)])


def equal_degree(f: DensePoly, d: int, rng: random.Random) -> list[DensePoly]:
    """Split a product of distinct monic irreducibles of degree d (Cantor-Zassenhaus)."""
    if f.degree == d:
        return [f]
    ctx = f.ctx
    op = None
    while True:
        a = _random_poly(ctx, f.degree, rng)
        if a.degree < 1:
            continue
        if ctx.p == 2:
            op = FrobeniusOperator(f) if op is None else op
            b, t = a % f, a % f
            for _ in range(ctx.R * d - 1):
                t = op(t)
                b = b + t
        else:
            b = powmod(a, (ctx.q**d - 1) // 2, f) - DensePoly.const(ctx, 1)
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def is_irreducible(f: DensePoly) -> bool:
    """Rabin's test over F_q."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    X = DensePoly.x(f.ctx)
    for ell in primefactors(n):
        h = modexp_frobenius(f, n // ell)
        if poly_gcd(f, h - X).degree > 0:
            return False
    return modexp_frobenius(f, n) == X % f


@dataclass
class Factorization:
    unit: int
    factors: list[tuple[DensePoly, int]] = field(default_factory=list)

    def expand(self, ctx) -> DensePoly:
        out = DensePoly.const(ctx, self.unit)
        for g, m in self.factors:
            out = out * g**m
        return out

    def as_dict(self) -> dict[DensePoly, int]:
        return dict(self.factors)


def factorize(f: DensePoly, seed: int = DEFAULT_SEED) -> Factorization:
    """Complete factorization into monic irreducibles, verified by expansion."""
    if f.degree < 1:
        raise ConstantInput("factorization of a constant")
    rng = random.Random(seed)
    factors = []
    for g, m in squarefree_list(f):
        for d, prod in sorted(distinct_degree(g).items()):
            for h in equal_degree(prod, d, rng):
                factors.append((h.monic(), m))
    factors.sort(key=lambda t: t[0].sort_key())
    result = Factorization(f.lead, factors)
    assert result.expand(f.ctx) == f, "factorization does not reconstruct its input"
    return result


def poly_order(g: DensePoly, degree_cap: int = ORDER_DEGREE_CAP) -> int:
    """Least i >= 1 with g | X^i - 1."""
    if g.degree < 1:
        raise ConstantInput("order of a constant polynomial")
    if g.c[0] == 0:
        raise RootAtZero("order is undefined when g(0) = 0")
    ctx = g.ctx
    X = DensePoly.x(ctx)
    one = DensePoly.const(ctx, 1)
    total = 1
    for P, mu in factorize(g).factors:
        d = P.degree
        if d > degree_cap:
            raise Unsupported(f"irreducible factor of degree {d} exceeds the cap {degree_cap}")
        e = ctx.q**d - 1
        for ell, k in factorint(e).items():
            for _ in range(k):
                if powmod(X, e // ell, P) == one % P:
                    e //= ell
                else:
                    break
        t = 0
        while ctx.p**t < mu:
            t += 1
        total = lcm(total, e * ctx.p**t)
    return total
