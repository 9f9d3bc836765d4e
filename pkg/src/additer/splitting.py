"""Splitting degrees of iterated additive and affine polynomials.

s_F(n) is the least s such that F^(n) splits completely over F_(q^s).  Two
independent routes compute it:

* ``modexp``: search the least j with X^(q^j) = X modulo the separable
  affine polynomial whose roots are those of F^(n).  Small iterates are
  expanded densely; large ones stay in additive form, where X^(p^k) modulo
  an affine polynomial is again affine and one p-th power step costs O(dn).
* ``matrix``: find s_F(1) by linear algebra over F_(q^j), then test the
  candidates s_F(1) p^i by the kernel dimension of T^n (T the matrix of
  z -> A(z)) plus solvability of T^n z = -beta_n.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .additive import (
    AdditivePoly,
    AffinePoly,
    as_affine,
    build_S,
    compose,
    is_exceptional,
    iterate,
    iterate_affine,
    map_is_nilpotent,
    right_div,
    separable_part,
    to_dense,
)
from .errors import ConstantInput, ExceptionalForm, FormulaNotValid, Unsupported, ZeroInput
from .field import make_extension
from .linalg import affine_solve, is_nilpotent, mat_pow, matrix_of_map, rank
from .poly import DensePoly, FrobeniusOperator, poly_order, squarefree_decompose

METHODS = ("auto", "modexp", "matrix", "dense", "twisted")
# above this F_p-dimension, nilpotency of A_* is decided by repeated squaring
MATRIX_NILPOTENT_LIMIT = 96


def search_cap() -> int:
    return int(os.environ.get("ADDITER_SEARCH_CAP", 10_000))


def dense_cap() -> int:
    return int(os.environ.get("ADDITER_DENSE_CAP", 1 << 14))


def ceil_log(p: int, x: Fraction | int) -> int:
    """Least i >= 0 with p^i >= x, in exact arithmetic."""
    i, pw = 0, 1
    while pw < x:
        pw *= p
        i += 1
    return i


# -- the separable affine polynomial behind F^(n) ------------------------------


def reduced_iterate(F, n: int) -> tuple[AdditivePoly, int]:
    """(A~, gamma): F^(n) = (A~ + gamma)^(p^(mn)) with A~ separable."""
    F = as_affine(F)
    An, beta = iterate_affine(F, n)
    At, shift = separable_part(An)
    return At, F.ctx.frob(beta, -shift)


class TwistedFrobenius:
    """Successive X^(p^k) modulo f = A~ + gamma, kept in additive form.

    The remainder of X^(p^k) is rem_k(X) + v_k with rem_k additive of top
    index below D = top(A~).  Raising to the p-th power shifts indices by one
    and twists coefficients; a term c X^(p^D) is replaced through
    X^(p^D) = -(gamma + lower terms of A~) / lead.
    """

    def __init__(self, At: AdditivePoly, gamma: int):
        self.ctx = ctx = At.ctx
        self.D = D = At.top
        a = np.array(At.acoeffs, dtype=np.int64)
        self.low = a[:D]
        self.lead_inv = ctx.inv(int(a[D]))
        self.gamma = gamma
        if D < 1:
            raise ValueError("needs a nonlinear separable part")
        self.rem = np.zeros(D, dtype=np.int64)
        self.rem[0] = 1
        self.v = 0
        self.k = 0

    def step(self):
        ctx, D = self.ctx, self.D
        self.k += 1
        top = ctx.frob(int(self.rem[-1]), 1)
        rem = np.zeros(D, dtype=np.int64)
        rem[1:] = ctx.vfrob(self.rem[:-1], 1)
        v = ctx.frob(self.v, 1)
        if top:
            c = ctx.mul(top, self.lead_inv)
            rem = ctx.vsub(rem, ctx.vscale(c, self.low))
            v = ctx.sub(v, ctx.mul(c, self.gamma))
        self.rem, self.v = rem, v

    def is_x(self) -> bool:
        """Is the current remainder equal to X mod f?"""
        return self.v == 0 and self.rem[0] == 1 and not self.rem[1:].any()


class FrobeniusPowers:
    """X^(p^e) modulo f = A~ + gamma for arbitrary e, by composition.

    Write P_e = G_e(X) + v_e for the affine remainder of X^(p^e).  Raising
    P_a to the p^b-th power and substituting X^(p^b) = P_b gives
    P_(a+b) = G_a^(sigma^b)(P_b) + v_a^(p^b), reduced modulo f by twisted
    right division by A~ (using A~(X) = -gamma modulo f).
    """

    def __init__(self, At: AdditivePoly, gamma: int):
        self.ctx = At.ctx
        self.At = At
        self.D = At.top
        if self.D < 1:
            raise ValueError("needs a nonlinear separable part")
        self.neg_gamma = self.ctx.neg(gamma)

    def _reduce(self, G: AdditivePoly, v: int):
        if G.top >= self.D:
            C, G = right_div(G, self.At)
            v = self.ctx.add(v, C(self.neg_gamma))
        return G, v

    def _combine(self, Pa, Pb, b: int):
        (Ga, va), (Gb, vb) = Pa, Pb
        ctx = self.ctx
        Gt = AdditivePoly(ctx, tuple(ctx.frob(c, b) for c in Ga.acoeffs))
        v = ctx.add(ctx.frob(va, b), Gt(vb))
        return self._reduce(compose(Gt, Gb), v)

    def power(self, e: int):
        """(G_e, v_e) for X^(p^e)."""
        ctx = self.ctx
        result = (AdditivePoly.identity(ctx), 0)
        base = self._reduce(AdditivePoly.from_terms(ctx, {1: 1}), 0)
        base_exp = 1
        while e:
            if e & 1:
                result = self._combine(result, base, base_exp)
            e >>= 1
            if e:
                base = self._combine(base, base, base_exp)
                base_exp *= 2
        return result

    def is_x(self, e: int) -> bool:
        G, v = self.power(e)
        return v == 0 and G == AdditivePoly.identity(self.ctx)


def _search_twisted(At, gamma, cap, step=1):
    """Least multiple j of step with X^(q^j) = X modulo A~ + gamma."""
    R = At.ctx.R
    if step == 1:
        tw = TwistedFrobenius(At, gamma)
        for j in range(1, cap + 1):
            for _ in range(R):
                tw.step()
            if tw.is_x():
                return j
    else:
        fp = FrobeniusPowers(At, gamma)
        for j in range(step, cap + 1, step):
            if fp.is_x(R * j):
                return j
    raise Unsupported(f"splitting degree exceeds the search cap {cap}")


@lru_cache(maxsize=256)
def _twisted_chain(F: AffinePoly, n: int, cap: int) -> int:
    # roots of F^(n-1) are images of roots of F^(n), so s(n-1) divides s(n)
    step = _twisted_chain(F, n - 1, cap) if n > 1 else 1
    At, gamma = reduced_iterate(F, n)
    return _search_twisted(At, gamma, cap, step)


def _search_dense(At, gamma, cap):
    f = to_dense(AffinePoly(At, gamma))
    op = FrobeniusOperator(f)
    X = DensePoly.x(f.ctx) % f
    h = X
    for j in range(1, cap + 1):
        for _ in range(f.ctx.R):
            h = op(h)
        if h == X:
            return j
    raise Unsupported(f"splitting degree exceeds the search cap {cap}")


def _modexp(F, n, cap, route=None):
    At, gamma = reduced_iterate(F, n)
    if route is None:
        route = "dense" if F.ctx.p**At.top <= dense_cap() else "twisted"
    if route == "dense":
        return _search_dense(At, gamma, cap), route
    return _twisted_chain(as_affine(F), n, cap), route


# -- the matrix route ----------------------------------------------------------------


def _roots_in(F: AffinePoly, n: int, j: int, beta: int) -> bool:
    """Do all p^(dn) roots of F^(n) lie in F_(q^j)?"""
    ext = make_extension(F.ctx, j)
    T = matrix_of_map(F.A, ext)
    Tn = mat_pow(T, n)
    if ext.D - rank(Tn) != F.A.d * n:
        return False
    if beta == 0:
        return True
    consistent, _ = affine_solve(Tn, ext.neg(ext.embed(beta)))
    return consistent


def _matrix(F, n, cap):
    ctx = F.ctx
    s1 = next((j for j in range(1, cap + 1) if _roots_in(F, 1, j, F.b)), None)
    if s1 is None:
        raise Unsupported(f"s_F(1) exceeds the search cap {cap}")
    if n == 1:
        return s1
    _, beta = iterate_affine(F, n)
    s = s1
    while s <= cap:
        if _roots_in(F, n, s, beta):
            return s
        s *= ctx.p
    raise Unsupported(f"splitting degree exceeds the search cap {cap}")


# -- public operations --------------------------------------------------------------


def split_degree_route(F, n: int, method: str = "auto", cap: int | None = None) -> tuple[int, str]:
    """s_F(n) together with the route that produced it."""
    F = as_affine(F)
    if n < 1:
        raise ValueError("n must be >= 1")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if F.A.is_zero():
        raise ConstantInput("constant polynomial has no splitting field")
    cap = search_cap() if cap is None else cap
    if is_exceptional(F):
        # aX^(p^h) + b has the single root (-b/a)^(p^-h) in F_q
        return 1, "exceptional"
    if method == "matrix":
        return _matrix(F, n, cap), "matrix"
    route = method if method in ("dense", "twisted") else None
    return _modexp(F, n, cap, route)


def split_degree(F, n: int, method: str = "auto", cap: int | None = None) -> int:
    return split_degree_route(F, n, method, cap)[0]


def splits_in(A, j: int) -> bool:
    """Do all roots of A lie in F_(q^j)?"""
    F = as_affine(A)
    if F.A.is_zero():
        raise ZeroInput("the zero polynomial")
    At, gamma = reduced_iterate(F, 1)
    if At.top == 0:
        return True
    return FrobeniusPowers(At, gamma).is_x(F.ctx.R * j)


def find_s0(A, method: str = "auto") -> int:
    """Largest j with s_A(j) = s_A(1)."""
    A = _additive(A)
    if is_exceptional(A):
        raise ExceptionalForm("s_0 is undefined for aX^(p^h)")
    M = split_degree(A, 1, method)
    # p^(d s0) distinct roots fit in F_(q^M), so s0 <= RM/d
    cap = A.ctx.R * M // A.d + 1
    j = 1
    while split_degree(A, j + 1, method) == M:
        j += 1
        if j > cap:
            raise AssertionError("s_0 search passed its theoretical bound")
    return j


def _additive(A) -> AdditivePoly:
    if isinstance(A, AffinePoly):
        if A.b:
            raise ValueError("expected an additive polynomial")
        return A.A
    return A


def ladder_points(A, i_max: int) -> list[int]:
    """s_i = max{j : s_A(j) = M p^i} for i = 0..i_max, by bisection on splits."""
    A = _additive(A)
    ctx = A.ctx
    M = split_degree(A, 1)
    out = []
    for i in range(i_max + 1):
        S = M * ctx.p**i
        # the p^(dj) distinct roots of A^(j) must fit in F_(q^S)
        lo, hi = 1, ctx.R * S // A.d
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _splits_iterate(A, mid, S):
                lo = mid
            else:
                hi = mid - 1
        out.append(lo)
    return out


def _splits_iterate(A, n, S):
    At, gamma = reduced_iterate(A, n)
    return FrobeniusPowers(At, gamma).is_x(A.ctx.R * S)


@dataclass
class CompanionCertificate:
    A: AdditivePoly
    M: int
    s0: int
    r: int
    A_star: AdditivePoly
    Rq_witness: AdditivePoly
    nilpotent: bool
    formula_valid: bool
    c_A: Fraction | None = None
    c_A_bounds: tuple[Fraction, Fraction] | None = None
    ladder: list[int] = field(default_factory=list)

    @property
    def c_A_status(self) -> str:
        return "exact" if self.c_A is not None else "estimated"


def companion(A, method: str = "auto", ladder_depth: int = 4) -> CompanionCertificate:
    A = _additive(A)
    ctx = A.ctx
    if is_exceptional(A):
        raise ExceptionalForm("no companion polynomial for aX^(p^h)")
    M = split_degree(A, 1, method)
    s0 = find_s0(A, method)
    As0 = iterate(A, s0)
    R = ctx.R
    r = max(1, -(-A.m * s0 // R))
    S = build_S(ctx, M, r)
    A_star, rem = right_div(S, As0)
    if not rem.is_zero():
        raise AssertionError("A^(s0) does not right-divide S_(M,r)")
    if A_star.m < R:
        r += 1
        A_star = A_star.shift(R)
        S = build_S(ctx, M, r)
    if compose(A_star, As0) != S:
        raise AssertionError("certificate identity failed")
    witness = A_star.shift(-R)
    if R * M <= MATRIX_NILPOTENT_LIMIT:
        nilpotent = is_nilpotent(matrix_of_map(A_star, make_extension(ctx, M)))
    else:
        nilpotent = map_is_nilpotent(A_star, R * M)
    cert = CompanionCertificate(A, M, s0, r, A_star, witness, nilpotent, not nilpotent)
    if not nilpotent:
        cert.c_A = Fraction(M, s0)
    else:
        pts = ladder_points(A, ladder_depth)
        cert.ladder = pts
        last = len(pts) - 1
        cert.c_A_bounds = (Fraction(A.d, R), Fraction(M * ctx.p**last, pts[last]))
    return cert


def closed_formula(cert: CompanionCertificate, n: int) -> int:
    """s_A(n) = M p^ceil(log_p(n / s0)), valid when A_* is not nilpotent."""
    if not cert.formula_valid:
        raise FormulaNotValid("A_* is nilpotent over F_(q^M); no closed formula")
    if n <= cert.s0:
        return cert.M
    return cert.M * cert.A.ctx.p ** ceil_log(cert.A.ctx.p, Fraction(n, cert.s0))


@dataclass
class LinearizedFormula:
    f: DensePoly
    f0: DensePoly
    E: int
    e: int
    c_A: int
    x_power: int = 0

    def predict(self, n: int) -> int:
        p = self.f.ctx.p
        return self.E * p ** ceil_log(p, n * self.e)


def linearized_formula(f: DensePoly) -> LinearizedFormula:
    """s(n) for A = L_f in closed form: ord(f0) p^ceil(log_p(ne))."""
    if f.degree < 1:
        raise ConstantInput("f must be nonconstant")
    k = next(i for i, c in enumerate(f.c) if c)
    F = DensePoly._raw(f.ctx, f.c[k:])
    if F.degree < 1:
        raise ExceptionalForm("L_f is a monomial; every iterate splits over F_q")
    f0, e, _ = squarefree_decompose(F)
    E = poly_order(f0)
    return LinearizedFormula(f, f0, E, e, E * e, k)


@dataclass
class SplitEntry:
    n: int
    s: int
    ratio: Fraction
    ladder: int | None
    method: str


@dataclass
class SplittingReport:
    poly: AffinePoly
    entries: list[SplitEntry]
    min_ratio: Fraction
    max_ratio: Fraction
    ladder_points: dict[int, int] = field(default_factory=dict)

    def s(self, n: int) -> int:
        return self.entries[n - 1].s


def _ladder_exponent(s, base, p):
    if s % base:
        return None
    k, i = s // base, 0
    while k % p == 0:
        k //= p
        i += 1
    return i if k == 1 else None


def ratio_scan(F, n_max: int, method: str = "auto") -> SplittingReport:
    F = as_affine(F)
    if is_exceptional(F):
        raise ExceptionalForm("ratio scan needs a non-exceptional polynomial")
    p = F.ctx.p
    entries = []
    for n in range(1, n_max + 1):
        s, route = split_degree_route(F, n, method)
        entries.append(SplitEntry(n, s, Fraction(s, n), None, route))
    base = entries[0].s
    for e in entries:
        e.ladder = _ladder_exponent(e.s, base, p)
    if F.b == 0:
        for e in entries:
            if e.ladder is None or p**e.ladder > p * e.n:
                raise AssertionError(f"s({e.n}) = {e.s} is off the ladder")
            if e.n * p <= n_max:
                t = entries[e.n * p - 1].s
                if t not in (e.s, p * e.s):
                    raise AssertionError(f"s({e.n * p}) = {t} against s({e.n}) = {e.s}")
    points = {}
    last = entries[-1].s
    for e in entries:
        # s_i is only certain once a larger value has been seen
        if e.ladder is not None and e.s < last:
            points[e.ladder] = e.n
    ratios = [e.ratio for e in entries]
    return SplittingReport(F, entries, min(ratios), max(ratios), points)
