from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from additer.additive import (
    AdditivePoly,
    AffinePoly,
    build_S,
    compose,
    compose_folded,
    fold,
    from_dense,
    is_exceptional,
    iterate,
    iterate_affine,
    lin_associate,
    lin_inverse,
    map_is_nilpotent,
    right_div,
    separable_part,
    to_dense,
)
from additer.errors import ContextMismatch, NotAdditive, ZeroDivisor, ZeroInput
from additer.field import make_extension, make_field
from additer.poly import DensePoly

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2, [1, 1, 1])
a = F4.gen
a2 = F4.mul(a, a)
FIELDS = [F2, F3, F4, make_field(3, 2)]


def A_(ctx, terms):
    return AdditivePoly.from_terms(ctx, terms)


def additive(ctx, max_top=4):
    return st.lists(st.integers(0, ctx.q - 1), max_size=max_top + 1).map(lambda c: AdditivePoly(ctx, tuple(c)))


EXAMPLE = A_(F4, {0: a, 3: 1})


def test_dense_round_trip_examples():
    x = DensePoly.x(F4)
    assert from_dense(x**8 + x.scale(a)) == EXAMPLE
    assert EXAMPLE.terms() == {0: a, 3: 1}
    assert from_dense(x) == AdditivePoly.identity(F4)
    with pytest.raises(NotAdditive):
        from_dense(DensePoly(F2, [1, 1, 1]))
    assert to_dense(EXAMPLE) == x**8 + x.scale(a)


def test_lin_associate_examples():
    assert lin_associate(DensePoly(F3, [2])) == A_(F3, {0: 2})
    assert lin_associate(DensePoly(F3, [2, 1])) == A_(F3, {0: 2, 1: 1})
    assert lin_associate(DensePoly(F2, [1, 1, 1])) == A_(F2, {0: 1, 1: 1, 2: 1})
    # over F_4 the index is R*i
    assert lin_associate(DensePoly(F4, [a, 1])) == A_(F4, {0: a, 2: 1})
    assert lin_inverse(lin_associate(DensePoly(F4, [a, 0, 1]))) == DensePoly(F4, [a, 0, 1])


def test_compose_examples():
    B = A_(F2, {0: 1, 1: 1})
    assert compose(B, B) == A_(F2, {0: 1, 2: 1})
    assert compose(EXAMPLE, AdditivePoly.identity(F4)) == EXAMPLE
    A_star = A_(F4, {2: a2, 5: 1})
    assert compose(A_star, EXAMPLE) == build_S(F4, 3, 1)
    assert to_dense(build_S(F4, 3, 1)) == DensePoly.from_terms(F4, {256: 1, 4: 1})
    with pytest.raises(ContextMismatch):
        compose(B, EXAMPLE)


@given(st.sampled_from(FIELDS), st.data())
def test_compose_matches_dense_substitution(ctx, data):
    max_top = {2: 5, 3: 3, 4: 2, 9: 1}[ctx.q]
    A = data.draw(additive(ctx, max_top))
    B = data.draw(additive(ctx, max_top))
    fa, fb = to_dense(A), to_dense(B)
    sub = DensePoly(ctx)
    for k, c in fa.terms().items():
        sub = sub + (fb**k).scale(c)
    assert to_dense(compose(A, B)) == sub


def test_iterate_examples():
    B = A_(F2, {0: 1, 1: 1})
    assert iterate(B, 2) == A_(F2, {0: 1, 2: 1})
    assert iterate(EXAMPLE, 0) == AdditivePoly.identity(F4)
    for p in (2, 3, 5):
        ctx = make_field(p)
        f = DensePoly(ctx, [p - 1, 1])
        assert iterate(lin_associate(f), p) == lin_associate(f**p) == A_(ctx, {0: p - 1, p: 1})


@given(st.sampled_from(FIELDS[:3]), st.data())
def test_linearized_power_identity(ctx, data):
    coeffs = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=1, max_size=7))
    f = DensePoly(ctx, coeffs)
    n = data.draw(st.integers(0, 5))
    assert iterate(lin_associate(f), n) == lin_associate(f**n)


def test_iterate_affine_examples():
    B = AffinePoly(A_(F2, {0: 1, 1: 1}), 1)
    assert iterate_affine(B, 1) == (A_(F2, {0: 1, 1: 1}), 1)
    assert iterate_affine(B, 2) == (A_(F2, {0: 1, 2: 1}), 1)
    assert iterate_affine(AffinePoly(EXAMPLE, 0), 3)[1] == 0


def test_right_div_examples():
    A = A_(F2, {0: 1, 1: 1})
    assert right_div(A_(F2, {0: 1, 2: 1}), A) == (A, AdditivePoly.zero(F2))
    assert right_div(EXAMPLE, EXAMPLE) == (AdditivePoly.identity(F4), AdditivePoly.zero(F4))
    C, Rm = right_div(build_S(F4, 3, 1), EXAMPLE)
    assert C == A_(F4, {2: a2, 5: 1}) and Rm.is_zero()
    with pytest.raises(ZeroDivisor):
        right_div(A, AdditivePoly.zero(F2))


@given(st.sampled_from(FIELDS), st.data())
def test_right_div_round_trip(ctx, data):
    A = data.draw(additive(ctx, 4))
    B = data.draw(additive(ctx, 8))
    if A.is_zero():
        return
    C, Rm = right_div(B, A)
    assert compose(C, A) + Rm == B
    assert Rm.top < A.top


@given(st.sampled_from(FIELDS[:3]), st.data())
def test_zero_remainder_iff_dense_divisibility(ctx, data):
    A = data.draw(additive(ctx, 2))
    C = data.draw(additive(ctx, 2))
    if A.is_zero() or (ctx.p ** (A.top + C.top + 1) > 1 << 10):
        return
    for B in (compose(C, A), compose(C, A) + AdditivePoly.identity(ctx)):
        Rm = right_div(B, A)[1]
        dense_rem = to_dense(B) % to_dense(A)
        assert Rm.is_zero() == dense_rem.is_zero()


def test_separable_part_examples():
    assert separable_part(A_(F2, {1: 1, 2: 1})) == (A_(F2, {0: 1, 1: 1}), 1)
    assert separable_part(EXAMPLE) == (EXAMPLE, 0)
    assert separable_part(A_(F3, {4: 1})) == (AdditivePoly.identity(F3), 4)
    with pytest.raises(ZeroInput):
        separable_part(AdditivePoly.zero(F2))


@given(st.sampled_from(FIELDS), st.data())
def test_separable_part_round_trip(ctx, data):
    A = data.draw(additive(ctx, 5))
    if A.is_zero():
        return
    At, m = separable_part(A)
    assert At.acoeffs[0] != 0
    assert At.shift(m) == A
    assert At.top == A.d


def test_exceptional_examples():
    assert is_exceptional(A_(F2, {2: 1})).kind == "monomial"
    assert not is_exceptional(EXAMPLE)
    e = is_exceptional(AffinePoly(A_(F2, {1: 1}), 1))
    assert e and (e.kind, e.a, e.h, e.b) == ("affine-monomial", 1, 1, 1)


def test_build_S_examples():
    assert build_S(F3, 1, 0) == A_(F3, {0: 2, 1: 1})
    assert build_S(F4, 3, 1).terms() == {2: 1, 8: 1}
    assert iterate(build_S(F2, 1, 0), 2) == build_S(F2, 2, 0)


@pytest.mark.parametrize("ctx", [F2, F3])
def test_critical_identity_table(ctx):
    for s in range(1, 4):
        for r in range(0, 4):
            for i in range(0, 3):
                assert iterate(build_S(ctx, s, r), ctx.p**i) == build_S(ctx, s * ctx.p**i, r * ctx.p**i)


@given(st.sampled_from(FIELDS[:3]), st.data())
def test_evaluation_is_additive(ctx, data):
    A = data.draw(additive(ctx, 4))
    s = data.draw(st.integers(1, 3))
    ext = make_extension(ctx, s)
    u = ext.from_int(data.draw(st.integers(0, ctx.q**s - 1)))
    v = ext.from_int(data.draw(st.integers(0, ctx.q**s - 1)))
    lhs = A.eval_ext(ext, ext.add(u, v))
    assert np.array_equal(lhs, ext.add(A.eval_ext(ext, u), A.eval_ext(ext, v)))


@given(st.sampled_from(FIELDS[:3]), st.data())
def test_folding_preserves_the_map(ctx, data):
    A = data.draw(additive(ctx, 9))
    B = data.draw(additive(ctx, 9))
    s = data.draw(st.integers(1, 3))
    ext = make_extension(ctx, s)
    D = ext.D
    z = ext.from_int(data.draw(st.integers(0, ctx.q**s - 1)))
    assert np.array_equal(fold(A, D).eval_ext(ext, z), A.eval_ext(ext, z))
    assert np.array_equal(compose_folded(A, B, D).eval_ext(ext, z), compose(A, B).eval_ext(ext, z))
    powers = A
    for _ in range(D):
        powers = compose_folded(powers, A, D)
    assert map_is_nilpotent(A, D) == fold(powers, D).is_zero()
