from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from additer.errors import DegreeMismatch, NotIrreducible, NotPrime
from additer.field import make_extension, make_field

F2 = make_field(2)
F4 = make_field(2, 2, [1, 1, 1])
F9 = make_field(3, 2, [1, 0, 1])
FIELDS = [F2, make_field(3), F4, F9, make_field(5), make_field(2, 3), make_field(7, 2)]


def test_prime_field_modulus_is_x():
    assert F2.modulus == (0, 1)
    assert F2.q == 2


def test_constructor_errors():
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(NotIrreducible):
        make_field(2, 2, [1, 0, 1])
    with pytest.raises(DegreeMismatch):
        make_field(2, 3, [1, 1, 1])


def test_default_modulus_is_lex_least_and_deterministic():
    assert make_field(3, 2).modulus == make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_element_examples():
    a = F4.gen
    assert F4.mul(a, a) == F4.add(a, 1)
    assert F4.mul(a, 1) == a
    assert F9.mul(F9.gen, F9.gen) == 2


def test_frobenius_and_pth_root_examples():
    a = F4.gen
    assert F4.frob(a, 1) == F4.add(a, 1)
    assert F4.frob(a, 2) == a
    assert all(F2.frob(1, k) == 1 for k in range(5))
    assert F4.pth_root(a) == F4.add(a, 1)
    assert F4.pth_root(0) == 0


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        F4.inv(0)


@pytest.mark.parametrize("ctx", FIELDS, ids=lambda c: f"F{c.q}")
def test_exhaustive_field_axioms(ctx):
    els = list(ctx.elements())[: min(ctx.q, 25)]
    for x, y in itertools.product(els, repeat=2):
        assert ctx.frob(ctx.add(x, y), 1) == ctx.add(ctx.frob(x, 1), ctx.frob(y, 1))
        assert ctx.frob(ctx.mul(x, y), 1) == ctx.mul(ctx.frob(x, 1), ctx.frob(y, 1))
        if y:
            assert ctx.mul(ctx.div(x, y), y) == x
    for x in els:
        assert ctx.pth_root(ctx.frob(x, 1)) == x
        assert ctx.frob(x, ctx.R) == x
        assert ctx.pow(x, ctx.q) == x


@given(st.sampled_from(FIELDS), st.data())
def test_vector_ops_match_scalar_ops(ctx, data):
    u = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=1, max_size=8))
    v = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=len(u), max_size=len(u)))
    c = data.draw(st.integers(0, ctx.q - 1))
    k = data.draw(st.integers(0, 5))
    U, V = np.array(u), np.array(v)
    assert ctx.vadd(U, V).tolist() == [ctx.add(x, y) for x, y in zip(u, v)]
    assert ctx.vsub(U, V).tolist() == [ctx.sub(x, y) for x, y in zip(u, v)]
    assert ctx.vmul(U, V).tolist() == [ctx.mul(x, y) for x, y in zip(u, v)]
    assert ctx.vscale(c, U).tolist() == [ctx.mul(c, x) for x in u]
    assert ctx.vfrob(U, k).tolist() == [ctx.frob(x, k) for x in u]


def test_extension_examples():
    E = make_extension(F2, 2)
    assert E.D == 2
    E = make_extension(F4, 3)
    assert E.D == 6
    g = E.embed_gen
    assert np.array_equal(E.mul(g, g), E.add(g, E.one()))
    E1 = make_extension(F4, 1)
    for a in range(4):
        assert E1.to_int(E1.embed(a)) == a


@pytest.mark.parametrize("ctx,s", [(F2, 3), (F4, 2), (F4, 3), (F9, 2), (make_field(3), 4)])
def test_embedding_is_a_homomorphism(ctx, s):
    E = make_extension(ctx, s)
    els = list(ctx.elements())
    for x, y in itertools.product(els, repeat=2):
        assert np.array_equal(E.embed(ctx.add(x, y)), E.add(E.embed(x), E.embed(y)))
        assert np.array_equal(E.embed(ctx.mul(x, y)), E.mul(E.embed(x), E.embed(y)))
    for c in range(ctx.p):
        assert E.to_int(E.embed(c)) == c


def test_extension_frobenius_has_order_D():
    E = make_extension(F4, 3)
    z = E.from_int(37)
    assert np.array_equal(E.frobenius(z, E.D), z)
    assert not np.array_equal(E.frobenius(z, 1), z) or E.to_int(z) < 2


@given(
    st.sampled_from([3, 5, 7]),
    st.integers(1, 10).flatmap(lambda n: st.lists(st.integers(0, 6), min_size=n, max_size=n)),
)
def test_blocked_irreducibility_matches_rabin(p, low):
    from additer import fppoly

    f = np.array([c % p for c in low] + [1], dtype=np.int64)
    if f[0] == 0:
        f[0] = 1
    assert fppoly._benor_blocked(f, p) == fppoly.is_irreducible_rabin(f, p)


def test_least_irreducible_is_lex_least():
    from additer import fppoly

    for p, n in [(3, 2), (3, 3), (5, 2), (3, 4)]:
        f = fppoly.least_irreducible(p, n)
        assert fppoly.is_irreducible_rabin(np.array(f), p)
        for coeffs in itertools.product(range(1, p), *[range(p)] * (n - 1)):
            if tuple(coeffs) + (1,) == tuple(f):
                break
            assert not fppoly.is_irreducible_rabin(np.array(coeffs + (1,)), p)
