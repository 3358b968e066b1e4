import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import hilbert_brute
from tmod.arith import is_prime
from tmod.localsym import (
    INF,
    QuadElem,
    hilbert_additive_Q,
    place_over,
    product_formula_check,
    symbol_at_place,
)

nonzero = st.integers(-10**5, 10**5).filter(lambda x: x != 0)


def test_hilbert_q_matches_brute_force():
    for p in (2, 3, 5, 7):
        vals = [x for x in range(-12, 13) if x and x % (p * p)]
        for a in vals:
            for b in vals:
                assert hilbert_additive_Q(a, b, p) == hilbert_brute(a, b, p), (a, b, p)


def test_hilbert_q_known_values():
    assert hilbert_additive_Q(-1, -1, 2) == 1
    assert hilbert_additive_Q(-1, -1, INF) == 1
    assert hilbert_additive_Q(2, 3, 3) == 1
    assert hilbert_additive_Q(Fraction(1, 4), 7, 2) == 0


@given(nonzero, nonzero, nonzero, st.sampled_from([2, 3, 5, 7, 11, INF]))
@settings(max_examples=300, deadline=None)
def test_hilbert_bilinear_and_symmetric(a, b, c, p):
    assert hilbert_additive_Q(a, b * c, p) == hilbert_additive_Q(a, b, p) ^ hilbert_additive_Q(a, c, p)
    assert hilbert_additive_Q(a, b, p) == hilbert_additive_Q(b, a, p)
    assert hilbert_additive_Q(a, -a, p) == 0


def test_product_formula_random_pairs():
    rng = random.Random(11)
    for _ in range(10**4):
        a = rng.choice((-1, 1)) * rng.randrange(1, 10**6)
        b = rng.choice((-1, 1)) * rng.randrange(1, 10**6)
        assert product_formula_check(a, b) == 0


def _elements(d, rng, n):
    out = []
    while len(out) < n:
        x = QuadElem.make(d, rng.randrange(-30, 31), rng.randrange(-30, 31))
        if x.norm() != 0:
            out.append(x)
    return out


@pytest.mark.parametrize("d", [-1, -5, -7, -15, -17, 3, 7, 17, -2, 2, 6, -6])
def test_two_adic_symbols_bilinear_symmetric_steinberg(d):
    rng = random.Random(d)
    if d % 8 == 1:
        from tmod.quadclass import QuadField, two_adic_root, _sqrt_d_root

        F = QuadField.from_radicand(d)
        place = place_over(d, 2, root=_sqrt_d_root(F, two_adic_root(F.D)))
    else:
        place = place_over(d, 2)
    xs = _elements(d, rng, 12)
    one = QuadElem.make(d, 1)
    for x in xs:
        for y in xs[:6]:
            s = symbol_at_place(place, x, y)
            assert s == symbol_at_place(place, y, x)
            z = xs[-1]
            assert symbol_at_place(place, x, y * z) == s ^ symbol_at_place(place, x, z)
        assert symbol_at_place(place, x, -x) == 0
        y = QuadElem.make(d, one.r0 - x.r0, -x.r1)
        if y.norm() != 0:
            assert symbol_at_place(place, x, y) == 0


@pytest.mark.parametrize("d,q", [(-15, 3), (-15, 5), (-105, 7), (21, 3), (-6, 3), (35, 7)])
def test_tame_symbols_at_ramified_places(d, q):
    rng = random.Random(q * 1000 + d)
    place = place_over(d, q)
    xs = _elements(d, rng, 10)
    for x in xs:
        for y in xs[:5]:
            assert symbol_at_place(place, x, y) == symbol_at_place(place, y, x)
        y = QuadElem.make(d, 1 - x.r0, -x.r1)
        if y.norm() != 0:
            assert symbol_at_place(place, x, y) == 0


def test_rational_argument_reduces_to_norm():
    d, q = -15, 5
    place = place_over(d, q)
    x = QuadElem.make(d, 0, 1)
    for b in (2, 3, 7, -1):
        assert symbol_at_place(place, QuadElem.make(d, b), x) == hilbert_additive_Q(b, x.norm(), q)


def test_symbol_odd_split_place():
    d = -7
    from tmod.arith import sqrt_mod_prime_power

    root = sqrt_mod_prime_power(d, 11, 20)
    place = place_over(d, 11, root=root)
    x = QuadElem.make(d, 2, 1)
    y = QuadElem.make(d, 11, 0)
    s = symbol_at_place(place, x, y)
    assert s in (0, 1)
    assert is_prime(11)
