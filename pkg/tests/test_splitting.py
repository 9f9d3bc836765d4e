from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from additer.additive import AdditivePoly, AffinePoly, compose, iterate, lin_associate, right_div, build_S
from additer.errors import ConstantInput, ExceptionalForm, FormulaNotValid, Unsupported, ZeroInput
from additer.field import make_field
from additer.poly import DensePoly
from additer.splitting import (
    FrobeniusPowers,
    TwistedFrobenius,
    ceil_log,
    closed_formula,
    companion,
    find_s0,
    ladder_points,
    linearized_formula,
    ratio_scan,
    reduced_iterate,
    split_degree,
    split_degree_route,
    splits_in,
)
from additer.verify import example_poly, random_additive

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2, [1, 1, 1])
EXAMPLE = example_poly()


def x_p_minus_x(p):
    return AdditivePoly.from_terms(make_field(p), {0: p - 1, 1: 1})


def test_ceil_log_is_exact_at_boundaries():
    assert [ceil_log(2, n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    assert ceil_log(3, Fraction(9, 1)) == 2
    assert ceil_log(3, Fraction(28, 3)) == 3


def test_splits_in_examples():
    for p in (2, 3, 5):
        assert splits_in(x_p_minus_x(p), 1)
    assert [splits_in(EXAMPLE, j) for j in (1, 2, 3)] == [False, False, True]
    assert splits_in(AdditivePoly.from_terms(F3, {2: 1}), 1)
    with pytest.raises(ZeroInput):
        splits_in(AdditivePoly.zero(F2), 1)


def test_split_degree_examples():
    assert split_degree(x_p_minus_x(3), 4) == 9
    assert split_degree(EXAMPLE, 2) == 6
    F = AffinePoly(AdditivePoly(F2, (1, 1)), 1)
    assert split_degree(F, 1) == 2
    assert split_degree(F.A, 1) == 1
    with pytest.raises(ConstantInput):
        split_degree(AffinePoly(AdditivePoly.zero(F2), 1), 1)
    assert split_degree_route(AdditivePoly.from_terms(F4, {2: 1}), 5) == (1, "exceptional")


def test_search_cap_raises_unsupported():
    with pytest.raises(Unsupported):
        split_degree(EXAMPLE, 1, cap=2)
    with pytest.raises(Unsupported):
        split_degree(EXAMPLE, 1, "matrix", cap=2)


def test_frobenius_powers_match_stepwise():
    rng = random.Random(11)
    for ctx in (F2, F3, F4):
        for _ in range(5):
            F = AffinePoly(random_additive(ctx, rng), rng.randrange(ctx.q))
            At, gamma = reduced_iterate(F, 2)
            tw, fp = TwistedFrobenius(At, gamma), FrobeniusPowers(At, gamma)
            for e in range(1, 30):
                tw.step()
                G, v = fp.power(e)
                assert v == tw.v
                assert list(G.acoeffs) == tw.rem.tolist()[: len(G.acoeffs)]
                assert not tw.rem[len(G.acoeffs):].any()


@pytest.mark.parametrize("ctx", [F2, F3, F4, make_field(3, 2)], ids=lambda c: f"F{c.q}")
def test_methods_agree(ctx):
    rng = random.Random(ctx.q)
    for _ in range(6):
        A = random_additive(ctx, rng, d_max=2)
        F = AffinePoly(A, rng.randrange(ctx.q))
        for n in range(1, 14 // A.d + 1):
            if ctx.q**n > 1 << 40:
                break
            ref = split_degree(F, n, "matrix")
            assert split_degree(F, n, "twisted") == ref
            if ctx.p ** (A.d * n) <= 1 << 12:
                assert split_degree(F, n, "dense") == ref


def test_find_s0_examples():
    assert find_s0(EXAMPLE) == 1
    for p in (2, 3):
        assert find_s0(x_p_minus_x(p)) == 1
    L = lin_associate(DensePoly(F2, [1, 0, 1]))
    assert [split_degree(L, n) for n in (1, 2)] == [2, 4]
    assert find_s0(L) == 1
    with pytest.raises(ExceptionalForm):
        find_s0(AdditivePoly.from_terms(F2, {1: 1}))


def test_companion_worked_example():
    cert = companion(EXAMPLE)
    alpha2 = F4.mul(F4.gen, F4.gen)
    assert (cert.M, cert.s0, cert.r) == (3, 1, 1)
    assert cert.A_star == AdditivePoly.from_terms(F4, {2: alpha2, 5: 1})
    assert not cert.nilpotent and cert.formula_valid and cert.c_A == 3
    assert cert.Rq_witness.shift(2) == cert.A_star
    assert closed_formula(cert, 5) == 24
    assert closed_formula(cert, 1) == 3
    assert closed_formula(cert, 8) == 24


def test_companion_x_p_minus_x():
    for p in (2, 3, 5):
        cert = companion(x_p_minus_x(p))
        assert (cert.M, cert.s0, cert.c_A) == (1, 1, 1)


def test_companion_nilpotent_case():
    A = lin_associate(DensePoly(F2, [1, 1]) ** 3)
    cert = companion(A)
    assert cert.nilpotent and not cert.formula_valid and cert.c_A is None
    assert cert.c_A_status == "estimated"
    lo, hi = cert.c_A_bounds
    assert lo <= hi
    with pytest.raises(FormulaNotValid):
        closed_formula(cert, 3)
    assert linearized_formula(DensePoly(F2, [1, 1]) ** 3).c_A == 3


def test_companion_rejects_exceptional():
    with pytest.raises(ExceptionalForm):
        companion(AdditivePoly.from_terms(F4, {1: F4.gen}))


@pytest.mark.parametrize("ctx", [F2, F3, F4], ids=lambda c: f"F{c.q}")
def test_certificate_invariants(ctx):
    rng = random.Random(99 + ctx.q)
    for _ in range(8):
        A = random_additive(ctx, rng, d_max=2, m_max=2)
        cert = companion(A)
        assert compose(cert.A_star, iterate(A, cert.s0)) == build_S(ctx, cert.M, cert.r)
        assert cert.A_star.m >= ctx.R
        assert compose(A, cert.A_star) == compose(cert.A_star, A)
        C, Rm = right_div(build_S(ctx, cert.M, cert.r), iterate(A, cert.s0))
        assert Rm.is_zero() and C == cert.A_star
        if cert.formula_valid:
            assert cert.c_A == Fraction(cert.M, cert.s0)
            for n in range(1, 10):
                assert closed_formula(cert, n) == split_degree(A, n)


def test_ladder_points_match_direct_scan():
    A = lin_associate(DensePoly(F2, [1, 1]) ** 3)
    pts = ladder_points(A, 3)
    s = {n: split_degree(A, n) for n in range(1, pts[-1] + 2)}
    M = s[1]
    for i, si in enumerate(pts):
        assert s[si] == M * 2**i and s[si + 1] > s[si]


def test_linearized_formula_examples():
    lf = linearized_formula(DensePoly(F3, [2, 1]))
    assert (lf.E, lf.e, lf.c_A) == (1, 1, 1)
    assert [lf.predict(n) for n in (1, 2, 3, 4, 10)] == [1, 3, 3, 9, 27]
    x = DensePoly.x(F2)
    f = (x + 1) ** 2 * (x**2 + x + 1)
    lf = linearized_formula(f)
    assert (lf.E, lf.e, lf.c_A) == (3, 2, 6)
    assert lf.predict(1) == 6 == split_degree(lin_associate(f), 1)
    sq = linearized_formula(x**3 + x + 1)
    assert sq.e == 1 and sq.E == 7
    with pytest.raises(ExceptionalForm):
        linearized_formula(x**3)
    with pytest.raises(ConstantInput):
        linearized_formula(DensePoly.const(F2, 1))


def test_linearized_formula_strips_x_factors():
    x = DensePoly.x(F3)
    f = x**2 * (x + 2)
    lf = linearized_formula(f)
    assert lf.x_power == 2
    A = lin_associate(f)
    assert [lf.predict(n) for n in range(1, 6)] == [split_degree(A, n) for n in range(1, 6)]


def test_ratio_scan_examples():
    rep = ratio_scan(x_p_minus_x(2), 8)
    assert rep.min_ratio == 1 and [e.n for e in rep.entries if e.ratio == 1] == [1, 2, 4, 8]
    rep = ratio_scan(EXAMPLE, 32)
    assert rep.min_ratio == 3 and rep.max_ratio <= 6
    assert all(e.s == 3 * 2 ** e.ladder for e in rep.entries)
    with pytest.raises(ExceptionalForm):
        ratio_scan(AdditivePoly.from_terms(F2, {3: 1}), 4)


def test_iterate_scales_split_degrees():
    k = 2
    B = iterate(EXAMPLE, k)
    assert [split_degree(B, n) for n in range(1, 6)] == [split_degree(EXAMPLE, n * k) for n in range(1, 6)]


@given(st.sampled_from([F2, F3, F4]), st.integers(0, 10**6))
def test_divisibility_and_ladder_property(ctx, seed):
    rng = random.Random(seed)
    A = random_additive(ctx, rng, d_max=2)
    s = [split_degree(A, n) for n in range(1, 9)]
    for j in range(len(s)):
        for n in range(j, len(s)):
            assert s[n] % s[j] == 0
        k = s[j] // s[0]
        while k % ctx.p == 0:
            k //= ctx.p
        assert k == 1
