"""Seeded property suites over small fields, run by ``additer verify``.

Each suite returns a :class:`SuiteResult` with pass/fail counts; a failing
check records a message instead of raising, so one run reports everything.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .additive import (
    AdditivePoly,
    AffinePoly,
    build_S,
    compose,
    iterate,
    lin_associate,
    right_div,
)
from .dynamics import factor_stats, periodic_count
from .errors import AdditerError
from .field import make_field
from .poly import DensePoly
from .splitting import (
    ceil_log,
    closed_formula,
    companion,
    linearized_formula,
    split_degree,
)

DEFAULT_SEED = 2024


def small_fields():
    return [make_field(2), make_field(3), make_field(2, 2), make_field(3, 2)]


def example_field():
    return make_field(2, 2, [1, 1, 1])


def example_poly() -> AdditivePoly:
    F4 = example_field()
    return AdditivePoly.from_terms(F4, {0: F4.gen, 3: 1})


def random_additive(ctx, rng: random.Random, d_max: int = 3, m_max: int = 1) -> AdditivePoly:
    """Non-exceptional: nonzero coefficients at m and m + d with d >= 1."""
    m = rng.randint(0, m_max)
    d = rng.randint(1, d_max)
    coeffs = [0] * m + [rng.randrange(1, ctx.q)]
    coeffs += [rng.randrange(ctx.q) for _ in range(d - 1)]
    coeffs.append(rng.randrange(1, ctx.q))
    return AdditivePoly(ctx, tuple(coeffs))


def random_linearized_source(ctx, rng: random.Random, deg_max: int = 5) -> DensePoly:
    """Random f with f(0) != 0 and 1 <= deg f <= deg_max."""
    deg = rng.randint(1, deg_max)
    coeffs = [rng.randrange(1, ctx.q)] + [rng.randrange(ctx.q) for _ in range(deg - 1)]
    coeffs.append(rng.randrange(1, ctx.q))
    return DensePoly(ctx, coeffs)


def additive_corpus(seed: int, size: int, fields=None, d_max: int = 3):
    rng = random.Random(seed)
    fields = fields or [make_field(2), make_field(3), make_field(2, 2)]
    return [random_additive(fields[k % len(fields)], rng, d_max) for k in range(size)]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    messages: list[str] = field(default_factory=list)

    def check(self, ok: bool, message: str):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            self.messages.append(message)


def suite_worked_example(seed: int) -> SuiteResult:
    res = SuiteResult("worked-example")
    A = example_poly()
    F4 = A.ctx
    alpha2 = F4.mul(F4.gen, F4.gen)
    cert = companion(A)
    res.check(split_degree(A, 1) == 3 and split_degree(A, 2) == 6, "s_A(1), s_A(2)")
    res.check(cert.s0 == 1 and cert.M == 3 and cert.r == 1, "M, s0, r")
    res.check(cert.A_star == AdditivePoly.from_terms(F4, {2: alpha2, 5: 1}), "A_* = X^32 + a^2 X^4")
    res.check(compose(cert.A_star, A) == build_S(F4, 3, 1), "A_*(A) = X^256 - X^4")
    res.check(not cert.nilpotent and cert.c_A == 3, "nilpotent flag and c_A")
    for n in range(2, 17):
        want = closed_formula(cert, n)
        res.check(split_degree(A, n, "modexp") == want, f"modexp s({n})")
        res.check(split_degree(A, n, "matrix") == want, f"matrix s({n})")
    return res


def suite_x_p_minus_x(seed: int) -> SuiteResult:
    res = SuiteResult("x-p-minus-x")
    for p in (2, 3, 5):
        ctx = make_field(p)
        A = AdditivePoly.from_terms(ctx, {0: p - 1, 1: 1})
        lf = linearized_formula(DensePoly(ctx, [p - 1, 1]))
        for n in range(1, 13):
            want = p ** ceil_log(p, n)
            res.check(split_degree(A, n) == want, f"p={p} n={n} modexp")
            res.check(lf.predict(n) == want, f"p={p} n={n} formula")
    return res


def _ladder(s, base, p):
    if s % base:
        return False
    k = s // base
    while k % p == 0:
        k //= p
    return k == 1


def suite_main_i(seed: int, size: int = 12, n_max: int = 12) -> SuiteResult:
    res = SuiteResult("thm-main-i")
    for A in additive_corpus(seed, size):
        p = A.ctx.p
        s = {n: split_degree(A, n) for n in range(1, n_max + 1)}
        for n in s:
            res.check(_ladder(s[n], s[1], p), f"{A}: s({n}) = {s[n]} off the ladder")
            if n * p <= n_max:
                res.check(s[n * p] in (s[n], p * s[n]), f"{A}: s({n * p}) vs s({n})")
    return res


def suite_main_ii(seed: int, size: int = 12, n_max: int = 12) -> SuiteResult:
    res = SuiteResult("thm-main-ii")
    rng = random.Random(seed + 1)
    for A in additive_corpus(seed, size):
        p = A.ctx.p
        F = AffinePoly(A, rng.randrange(1, A.ctx.q))
        for n in range(1, n_max + 1):
            sa, sb = split_degree(A, n), split_degree(F, n)
            res.check(sb in (sa, p * sa), f"{F}: s_Ab({n}) = {sb}, s_A({n}) = {sa}")
    return res


def suite_methods(seed: int, size: int = 12) -> SuiteResult:
    res = SuiteResult("methods")
    rng = random.Random(seed + 2)
    fields = small_fields()
    for k, A in enumerate(additive_corpus(seed + 2, size, fields, d_max=2)):
        F = AffinePoly(A, rng.randrange(A.ctx.q))
        for n in range(1, 8 // A.d + 1):
            a = split_degree(F, n, "modexp")
            b = split_degree(F, n, "matrix")
            res.check(a == b, f"{F}: n={n} modexp {a} matrix {b}")
    return res


def suite_certificate(seed: int, size: int = 12) -> SuiteResult:
    res = SuiteResult("certificate")
    for A in [example_poly()] + additive_corpus(seed + 3, size, d_max=2):
        cert = companion(A)
        As0 = iterate(A, cert.s0)
        R = A.ctx.R
        res.check(compose(cert.A_star, As0) == build_S(A.ctx, cert.M, cert.r), f"{A}: certificate identity")
        res.check(compose(A, cert.A_star) == compose(cert.A_star, A), f"{A}: A and A_* commute")
        res.check(cert.A_star.m >= R and cert.Rq_witness.shift(R) == cert.A_star, f"{A}: A_* = R^q")
        if cert.formula_valid:
            for n in range(1, 9):
                res.check(closed_formula(cert, n) == split_degree(A, n), f"{A}: closed formula at n={n}")
        else:
            lo, hi = cert.c_A_bounds
            res.check(lo <= hi, f"{A}: bracket")
    return res


def suite_special(seed: int, size: int = 12, n_max: int = 8) -> SuiteResult:
    res = SuiteResult("thm-special")
    rng = random.Random(seed + 4)
    fields = [make_field(2), make_field(3), make_field(2, 2)]
    for k in range(size):
        ctx = fields[k % 3]
        f = random_linearized_source(ctx, rng)
        A = lin_associate(f)
        try:
            lf = linearized_formula(f)
        except AdditerError as exc:
            res.check(False, f"{f}: {exc}")
            continue
        for n in range(1, n_max + 1):
            res.check(lf.predict(n) == split_degree(A, n), f"L_f, f={f}: n={n}")
        if A.d:
            cert = companion(A)
            if cert.formula_valid:
                res.check(cert.c_A == lf.c_A, f"L_f, f={f}: c_A")
    return res


def suite_dyn(seed: int) -> SuiteResult:
    res = SuiteResult("thm-dyn")
    ctx = make_field(2)
    rng = random.Random(seed + 5)
    polys = [AdditivePoly(ctx, (rng.randrange(2), rng.randrange(2), 1)) for _ in range(4)]
    for A in polys:
        for n in range(1, 9):
            e = periodic_count(A, n)
            res.check(e.verified is True and e.pi * ctx.p**e.delta == ctx.q**n, f"{A}: n={n}")
    return res


def suite_main2(seed: int, size: int = 8) -> SuiteResult:
    res = SuiteResult("thm-main2")
    rng = random.Random(seed + 6)
    for A in additive_corpus(seed + 6, size, d_max=2):
        F = AffinePoly(A, rng.randrange(A.ctx.q))
        n = 1
        while A.ctx.p ** (A.d * n) <= 1 << 8:
            try:
                r = factor_stats(F, n, "both")
                res.check(r.rho * r.N == A.ctx.p ** (A.d * n), f"{F}: rho N at n={n}")
            except AssertionError as exc:
                res.check(False, f"{F}: n={n}: {exc}")
            n += 1
    return res


def suite_lemmas(seed: int) -> SuiteResult:
    res = SuiteResult("lemmas")
    rng = random.Random(seed + 7)
    for ctx in (make_field(2), make_field(3)):
        for s in range(1, 4):
            for r in range(0, 4):
                for i in range(0, 3):
                    lhs = iterate(build_S(ctx, s, r), ctx.p**i)
                    res.check(lhs == build_S(ctx, s * ctx.p**i, r * ctx.p**i), f"S_({s},{r}) p^{i}")
    for ctx in small_fields()[:3]:
        for _ in range(5):
            f = DensePoly(ctx, [rng.randrange(ctx.q) for _ in range(rng.randint(1, 5))] + [1])
            n = rng.randint(1, 4)
            res.check(iterate(lin_associate(f), n) == lin_associate(f**n), f"L_(f^n), f={f}")
            A = random_additive(ctx, rng)
            B = random_additive(ctx, rng)
            C, Rm = right_div(B, A)
            res.check(compose(C, A) + Rm == B and Rm.top < A.top, f"right_div {B} by {A}")
    return res


SUITES = {
    "worked-example": suite_worked_example,
    "x-p-minus-x": suite_x_p_minus_x,
    "thm-main-i": suite_main_i,
    "thm-main-ii": suite_main_ii,
    "methods": suite_methods,
    "certificate": suite_certificate,
    "thm-special": suite_special,
    "thm-dyn": suite_dyn,
    "thm-main2": suite_main2,
    "lemmas": suite_lemmas,
}


def run_suites(names=None, seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    names = names or list(SUITES)
    out = []
    for name in names:
        try:
            out.append(SUITES[name](seed))
        except AdditerError as exc:
            res = SuiteResult(name)
            res.check(False, f"raised {type(exc).__name__}: {exc}")
            out.append(res)
    return out
