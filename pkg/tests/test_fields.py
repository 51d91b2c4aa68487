"""Base algebra: the tower F_p < F_q < A < Q, ideals, and Galois actions."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from dforge.errors import DivisionByZero, InvalidAutomorphism, ZeroPolynomial
from dforge.extfield import GaloisDatum, apply_automorphism, ext_frobenius
from dforge.fields import Fq, RatFunc, fq_arith, poly_divmod
from dforge.ideals import IdealA, factor_ideal, is_irreducible, rational_roots
from dforge.randgen import random_ext_elem, random_fq_poly, random_ratfunc

from helpers import (
    brute_force_linear_factors,
    get_fq,
    naive_poly_mul,
    quadratic_field,
    rational_field,
)

F3 = get_fq(3)
F9 = get_fq(3, (1, 0, 1))
F4 = get_fq(2, (1, 1, 1))


def test_fq_arith_mod3():
    two = F3.elem(2)
    assert fq_arith(two, two, "add").val == 1
    assert fq_arith(two, two, "mul").val == 1
    assert F3.elem(1).inverse().val == 1


def test_fq_arith_division_by_zero():
    with pytest.raises(DivisionByZero):
        fq_arith(F3.elem(1), F3.elem(0), "div")


@pytest.mark.parametrize("fq", [F3, F9, F4, get_fq(5)])
def test_field_axioms_random_triples(fq):
    rng = random.Random(17)
    for _ in range(1000):
        a, b, c = (fq.elem_packed(rng.randrange(fq.q)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        if a.val:
            assert a * a.inverse() == fq.one


def test_poly_divmod_examples():
    T2p1 = F3.poly([1, 0, 1])
    T = F3.poly([0, 1])
    quo, rem = poly_divmod(T2p1, T)
    assert quo == T and rem == F3.poly([1])
    quo, rem = poly_divmod(T, F3.poly([0, 0, 1]))
    assert quo.is_zero() and rem == T


@pytest.mark.parametrize("fq", [F3, F9])
def test_poly_divmod_roundtrip_random(fq):
    rng = random.Random(3)
    for _ in range(300):
        a = random_fq_poly(rng, fq, 6)
        b = random_fq_poly(rng, fq, 4, nonzero=True)
        quo, rem = poly_divmod(a, b)
        assert quo * b + rem == a
        assert rem.degree < b.degree


def test_poly_mul_against_naive():
    rng = random.Random(5)
    for fq in (F3, F9, F4):
        for _ in range(60):
            a = random_fq_poly(rng, fq, 5)
            b = random_fq_poly(rng, fq, 5)
            assert a * b == naive_poly_mul(a, b)


def test_ratfunc_canonical_form():
    rng = random.Random(11)
    for _ in range(1000):
        a = random_ratfunc(rng, F3, 3)
        b = random_ratfunc(rng, F3, 3)
        if b.is_zero():
            continue
        prod = a * b / b
        assert prod == a
        for v in (a + b, a - b, a * b):
            if not v.is_zero():
                assert v.den.is_monic()
                assert v.num.gcd(v.den).is_one()


def test_zero_ideal_rejected():
    from dforge.errors import ZeroIdeal

    with pytest.raises(ZeroIdeal):
        IdealA(F3.poly_zero)


def test_factor_ideal_examples():
    assert factor_ideal(IdealA(F3.poly([0, 2, 1]))) == [
        (IdealA(F3.poly([2, 1])), 1),
        (IdealA(F3.poly([0, 1])), 1),
    ]
    assert factor_ideal(IdealA(F3.poly([0, 0, 1]))) == [(IdealA(F3.poly([0, 1])), 2)]
    # T^2 + 1 over F_3: no monic linear divides it (brute-force oracle)
    t2p1 = F3.poly([1, 0, 1])
    assert brute_force_linear_factors(t2p1) == []
    assert factor_ideal(IdealA(t2p1)) == [(IdealA(t2p1), 1)]


@pytest.mark.parametrize("fq", [F3, F9, F4])
def test_factor_ideal_remultiplies_and_factors_irreducible(fq):
    rng = random.Random(23)
    T = fq.poly_T()
    for trial in range(40):
        f = random_fq_poly(rng, fq, 7, nonzero=True, monic=True)
        if f.degree < 1:
            continue
        prod = fq.poly_one
        for prime, mult in factor_ideal(IdealA(f), rng=random.Random(trial)):
            gen = prime.gen
            # irreducibility: no nontrivial gcd with T^(q^i) - T below the degree
            r = T % gen
            for i in range(1, gen.degree):
                r = r.frob_power(1) % gen
                assert (r - T % gen).gcd(gen).is_one()
            r = r.frob_power(1) % gen
            assert (r - T % gen).is_zero()
            for _ in range(mult):
                prod = prod * gen
        assert prod == f


def test_ext_frobenius_examples():
    K = quadratic_field(3)
    alpha = K.gen()
    Tp1 = K.from_poly(F3.poly([1, 1]))
    assert ext_frobenius(alpha) == alpha.scale(Tp1.coords[0])
    assert ext_frobenius(K.T()) == K.from_poly(F3.poly([0, 0, 0, 1]))
    c = K.from_poly(F3.poly([2]))
    assert ext_frobenius(c) == c


def test_ext_frobenius_is_additive_and_multiplicative():
    K = quadratic_field(3)
    rng = random.Random(29)
    for _ in range(200):
        a = random_ext_elem(rng, K, 2, poly_only=False)
        b = random_ext_elem(rng, K, 2, poly_only=False)
        assert ext_frobenius(a + b) == ext_frobenius(a) + ext_frobenius(b)
        assert ext_frobenius(a * b) == ext_frobenius(a) * ext_frobenius(b)
        assert a.frob_power(1) == a ** K.fq.q


def test_ext_field_axioms_random_triples():
    K = quadratic_field(3)
    rng = random.Random(30)
    for _ in range(1000):
        a = random_ext_elem(rng, K, 1)
        b = random_ext_elem(rng, K, 1)
        c = random_ext_elem(rng, K, 1)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        if not a.is_zero():
            assert a * a.inverse() == K.one


def test_apply_automorphism_worked_example_shape():
    K = quadratic_field(3)
    alpha = K.gen()
    datum = GaloisDatum(K, [("s", 2, -alpha)])
    s = datum.generator_element("s")
    out = apply_automorphism(datum, s, alpha + K.one)
    assert out == K.one - alpha
    assert apply_automorphism(datum, s, K.T()) == K.T()


def test_automorphism_is_ring_map_and_involution():
    K = quadratic_field(3)
    datum = GaloisDatum(K, [("s", 2, -K.gen())])
    s = datum.generator_element("s")
    rng = random.Random(31)
    for _ in range(1000):
        a = random_ext_elem(rng, K, 1, poly_only=False)
        b = random_ext_elem(rng, K, 1, poly_only=False)
        assert datum.apply(s, a * b) == datum.apply(s, a) * datum.apply(s, b)
        assert datum.apply(s, a + b) == datum.apply(s, a) + datum.apply(s, b)
        assert datum.apply(datum.compose(s, s), a) == a


def test_invalid_automorphism_rejected():
    K = quadratic_field(3)
    with pytest.raises(InvalidAutomorphism):
        GaloisDatum(K, [("s", 2, K.T())])  # T is not a root of x^2 - (T+1)


def test_rational_roots_examples():
    Q = rational_field(3)
    rT = F3.rat(F3.poly([0, 1]))
    minus = RatFunc.from_poly(F3.poly([2]))
    # x^2 - T^2
    g = [rT * rT * minus, F3.rat_zero, F3.rat(F3.poly([1]))]
    roots = rational_roots(g)
    assert {repr(r) for r in roots} == {"T", "2*T"}
    # x^2 - T has no roots in Q for odd q
    g2 = [rT * minus, F3.rat_zero, F3.rat(F3.poly([1]))]
    assert rational_roots(g2) == []
    with pytest.raises(ZeroPolynomial):
        rational_roots([F3.rat_zero])


def test_rational_roots_planted():
    rng = random.Random(37)
    for _ in range(20):
        r1 = random_ratfunc(rng, F3, 2)
        r2 = random_ratfunc(rng, F3, 2)
        irred = RatFunc.from_poly(F3.poly([1, 0, 1]))  # no rational roots
        one = F3.rat_one
        # (x - r1)(x - r2)(x^2 + 1)
        lin1 = [-r1, one]
        lin2 = [-r2, one]
        quad = [irred, F3.rat_zero, one]

        def polymul(a, b):
            out = [F3.rat_zero] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
            return out

        g = polymul(polymul(lin1, lin2), quad)
        roots = rational_roots(g)
        assert set(map(repr, roots)) == {repr(r1), repr(r2)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_axioms_hypothesis(x, y, z):
    a, b, c = F9.elem_packed(x), F9.elem_packed(y), F9.elem_packed(z)
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a and a * b == b * a


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=5),
       st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_divmod_hypothesis(acoeffs, bcoeffs):
    a = F3.poly(acoeffs)
    b = F3.poly(bcoeffs)
    if b.is_zero():
        with pytest.raises(DivisionByZero):
            poly_divmod(a, b)
        return
    quo, rem = poly_divmod(a, b)
    assert quo * b + rem == a and rem.degree < b.degree
