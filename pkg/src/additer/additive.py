"""Additive polynomials sum a_i X^(p^i) under composition.

An :class:`AdditivePoly` stores the coefficient of X^(p^i) at index i, so
iterates of dense degree p^(dn) take only dn + 1 slots.  Composition twists
coefficients by Frobenius: (a X^(p^i)) o (b X^(p^j)) = a b^(p^i) X^(p^(i+j)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContextMismatch, NotAdditive, Unsupported, ZeroDivisor, ZeroInput
from .field import ExtCtx, FieldCtx
from .poly import DensePoly

DENSE_LIMIT = 1 << 22


@dataclass(frozen=True)
class AdditivePoly:
    ctx: FieldCtx
    acoeffs: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(c) for c in self.acoeffs)
        while a and a[-1] == 0:
            a = a[:-1]
        object.__setattr__(self, "acoeffs", a)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[int, int]) -> "AdditivePoly":
        terms = {i: c for i, c in terms.items() if c}
        out = [0] * (max(terms) + 1 if terms else 0)
        for i, c in terms.items():
            out[i] = c
        return cls(ctx, tuple(out))

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "AdditivePoly":
        return cls(ctx, (1,))

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "AdditivePoly":
        return cls(ctx, ())

    def __repr__(self):
        from .textio import format_additive

        return f"AdditivePoly({format_additive(self)})"

    def is_zero(self) -> bool:
        return not self.acoeffs

    @property
    def top(self) -> int:
        """Largest index with a nonzero coefficient (-1 for zero)."""
        return len(self.acoeffs) - 1

    @property
    def m(self) -> int:
        """Least index with a nonzero coefficient."""
        if self.is_zero():
            raise ZeroInput("the zero additive polynomial has no valuation")
        return next(i for i, c in enumerate(self.acoeffs) if c)

    @property
    def d(self) -> int:
        return self.top - self.m

    def terms(self) -> dict[int, int]:
        return {i: c for i, c in enumerate(self.acoeffs) if c}

    def is_q_linearized(self) -> bool:
        return all(i % self.ctx.R == 0 for i in self.terms())

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ContextMismatch("additive polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.acoeffs), len(other.acoeffs))
        a = self.acoeffs + (0,) * (n - len(self.acoeffs))
        b = other.acoeffs + (0,) * (n - len(other.acoeffs))
        return AdditivePoly(self.ctx, tuple(self.ctx.add(x, y) for x, y in zip(a, b)))

    def __neg__(self):
        return AdditivePoly(self.ctx, tuple(self.ctx.neg(c) for c in self.acoeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return AdditivePoly(self.ctx, tuple(self.ctx.mul(c, a) for a in self.acoeffs))

    def shift(self, k: int) -> "AdditivePoly":
        """A^(p^k) (k >= 0) or its p^|k|-th root (k < 0, needs support >= |k|)."""
        if k < 0 and any(self.acoeffs[: -k]):
            raise ValueError("shift would drop nonzero coefficients")
        coeffs = tuple(self.ctx.frob(c, k) for c in self.acoeffs)
        return AdditivePoly(self.ctx, (0,) * k + coeffs if k >= 0 else coeffs[-k:])

    def __call__(self, x: int) -> int:
        """Evaluate at an element of F_q."""
        ctx = self.ctx
        acc = 0
        for i, c in enumerate(self.acoeffs):
            if c:
                acc = ctx.add(acc, ctx.mul(c, ctx.frob(x, i)))
        return acc

    def eval_ext(self, ext: ExtCtx, z):
        """Evaluate at z in F_(q^s), through Frobenius powers of z."""
        if ext.base != self.ctx:
            raise ContextMismatch("extension over a different base field")
        acc = ext.zero()
        cur = np.asarray(z, dtype=np.int64) % ext.p
        for i, c in enumerate(self.acoeffs):
            if i:
                cur = ext.frobenius(cur)
            if c:
                acc = ext.add(acc, ext.mul(ext.embed(c), cur))
        return acc


@dataclass(frozen=True)
class AffinePoly:
    """A(X) + b."""

    A: AdditivePoly
    b: int = 0

    @property
    def ctx(self) -> FieldCtx:
        return self.A.ctx

    @property
    def additive_part(self) -> AdditivePoly:
        return self.A

    @property
    def shift(self) -> int:
        return self.b

    def __repr__(self):
        from .textio import format_affine

        return f"AffinePoly({format_affine(self)})"

    def __call__(self, x: int) -> int:
        return self.ctx.add(self.A(x), self.b)


def as_affine(F) -> AffinePoly:
    return F if isinstance(F, AffinePoly) else AffinePoly(F, 0)


def from_dense(f: DensePoly) -> AdditivePoly:
    ctx = f.ctx
    terms = {}
    for e, c in f.terms().items():
        i, pw = 0, 1
        while pw < e:
            pw *= ctx.p
            i += 1
        if pw != e:
            raise NotAdditive(f"exponent {e} is not a power of {ctx.p}")
        terms[i] = c
    return AdditivePoly.from_terms(ctx, terms)


def to_dense(A, limit: int = DENSE_LIMIT) -> DensePoly:
    """Dense expansion of an additive or affine polynomial."""
    F = as_affine(A)
    p = F.ctx.p
    if F.A.top >= 0 and p**F.A.top > limit:
        raise Unsupported(f"dense degree {p}^{F.A.top} exceeds {limit}")
    terms = {p**i: c for i, c in F.A.terms().items()}
    if F.b:
        terms[0] = F.b
    return DensePoly.from_terms(F.ctx, terms)


def lin_associate(f: DensePoly) -> AdditivePoly:
    """L_f: replace X^i by X^(q^i)."""
    R = f.ctx.R
    return AdditivePoly.from_terms(f.ctx, {R * e: c for e, c in f.terms().items()})


def lin_inverse(A: AdditivePoly) -> DensePoly:
    """The f with L_f = A, for A supported on multiples of R."""
    R = A.ctx.R
    if not A.is_q_linearized():
        raise NotAdditive("not a q-linearized polynomial")
    return DensePoly.from_terms(A.ctx, {i // R: c for i, c in A.terms().items()})


def compose(A: AdditivePoly, B: AdditivePoly) -> AdditivePoly:
    """A o B."""
    A._check(B)
    ctx = A.ctx
    if A.is_zero() or B.is_zero():
        return AdditivePoly.zero(ctx)
    out = np.zeros(A.top + B.top + 1, dtype=np.int64)
    b = np.array(B.acoeffs, dtype=np.int64)
    for i, a in enumerate(A.acoeffs):
        if a:
            seg = out[i : i + len(b)]
            out[i : i + len(b)] = ctx.vadd(seg, ctx.vscale(a, ctx.vfrob(b, i)))
    return AdditivePoly(ctx, tuple(out.tolist()))


def compose_folded(A: AdditivePoly, B: AdditivePoly, D: int) -> AdditivePoly:
    """A o B as a map on F_(p^D): indices are taken mod D, since z^(p^D) = z."""
    A._check(B)
    ctx = A.ctx
    a = fold(A, D)
    fb = fold(B, D).acoeffs
    b = np.array(fb + (0,) * (D - len(fb)), dtype=np.int64)
    out = np.zeros(D, dtype=np.int64)
    for i, c in enumerate(a.acoeffs):
        if c:
            out = ctx.vadd(out, np.roll(ctx.vscale(c, ctx.vfrob(b, i)), i))
    return AdditivePoly(ctx, tuple(out.tolist()))


def fold(A: AdditivePoly, D: int) -> AdditivePoly:
    """The polynomial of top index < D inducing the same map as A on F_(p^D)."""
    if A.top < D:
        return A
    ctx = A.ctx
    out = [0] * D
    for i, c in A.terms().items():
        out[i % D] = ctx.add(out[i % D], c)
    return AdditivePoly(ctx, tuple(out))


def map_is_nilpotent(A: AdditivePoly, D: int) -> bool:
    """Is z -> A(z) nilpotent on F_(p^D)?  Squares A until the power reaches D.

    A folded polynomial of top index < D has degree below p^D, so it vanishes
    on F_(p^D) only when it is zero.
    """
    P = fold(A, D)
    k = 1
    while k < D and not P.is_zero():
        P = compose_folded(P, P, D)
        k *= 2
    return P.is_zero()


def iterate(A: AdditivePoly, n: int) -> AdditivePoly:
    """A^(n), the n-fold composition (X for n = 0)."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    result = AdditivePoly.identity(A.ctx)
    base = A
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def iterate_affine(F: AffinePoly, n: int) -> tuple[AdditivePoly, int]:
    """(A^(n), beta_n) with F^(n) = A^(n) + beta_n."""
    F = as_affine(F)
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    ctx = F.ctx
    beta = 0
    for _ in range(n):
        beta = ctx.add(F.A(beta), F.b)
    return iterate(F.A, n), beta


def right_div(B: AdditivePoly, A: AdditivePoly) -> tuple[AdditivePoly, AdditivePoly]:
    """(C, Rm) with B = C o A + Rm and top(Rm) < top(A)."""
    A._check(B)
    if A.is_zero():
        raise ZeroDivisor("right division by the zero additive polynomial")
    ctx = A.ctx
    a_top = A.top
    alpha = A.acoeffs[-1]
    acoef = np.array(A.acoeffs, dtype=np.int64)
    rem = np.array(B.acoeffs, dtype=np.int64)
    quot = np.zeros(max(len(rem) - a_top, 0), dtype=np.int64)
    for top in range(len(rem) - 1, a_top - 1, -1):
        beta = int(rem[top])
        if not beta:
            continue
        k = top - a_top
        c = ctx.div(beta, ctx.frob(alpha, k))
        quot[k] = c
        seg = rem[k : top + 1]
        rem[k : top + 1] = ctx.vsub(seg, ctx.vscale(c, ctx.vfrob(acoef, k)))
        assert rem[top] == 0
    return AdditivePoly(ctx, tuple(quot.tolist())), AdditivePoly(ctx, tuple(rem.tolist()))


def separable_part(A: AdditivePoly) -> tuple[AdditivePoly, int]:
    """(A~, m) with A = A~^(p^m) and A~ having a nonzero X coefficient."""
    if A.is_zero():
        raise ZeroInput("separable part of the zero polynomial")
    m = A.m
    return A.shift(-m), m


@dataclass(frozen=True)
class Exceptional:
    """Classification of aX^(p^h) (+ b) forms."""

    exceptional: bool
    kind: str | None = None
    a: int = 0
    h: int = 0
    b: int = 0

    def __bool__(self):
        return self.exceptional


def is_exceptional(F) -> Exceptional:
    F = as_affine(F)
    terms = F.A.terms()
    if not terms:
        return Exceptional(True, "constant", 0, 0, F.b)
    if len(terms) > 1:
        return Exceptional(False)
    (h, a), = terms.items()
    return Exceptional(True, "monomial" if F.b == 0 else "affine-monomial", a, h, F.b)


def build_S(ctx: FieldCtx, s: int, r: int) -> AdditivePoly:
    """X^(q^(s+r)) - X^(q^r)."""
    if s < 1 or r < 0:
        raise ValueError("need s >= 1 and r >= 0")
    R = ctx.R
    return AdditivePoly.from_terms(ctx, {R * r: ctx.neg(1), R * (s + r): 1})
