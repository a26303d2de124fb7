import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_good_approximations

from bifoliate.contfrac import (
    PeriodicContinuedFraction,
    RationalInput,
    cf_expand,
    cf_value,
    convergents,
    cyclic_equivalent,
    good_approximations,
    primitive_period,
)
from bifoliate.exactmath import QuadraticNumber, quad_floor

phi = QuadraticNumber(1, 1, 2, 5)
silver = QuadraticNumber(1, 1, 1, 2)


def random_irrational(rng):
    while True:
        D = rng.randint(2, 50)
        x = QuadraticNumber(rng.randint(-50, 50), rng.randint(-50, 50), rng.randint(1, 50), D)
        if not x.is_rational:
            return x


def test_expansions():
    assert cf_expand(phi) == PeriodicContinuedFraction(False, (1,), (1,))
    assert cf_expand(silver) == PeriodicContinuedFraction(False, (2,), (2,))
    assert cf_expand(QuadraticNumber(-1, 1, 1, 2)) == PeriodicContinuedFraction(False, (0,), (2,))
    assert str(cf_expand(-phi)) == "-[1; (1)*]"


def test_sqrt_expansions():
    # sqrt(7) = [2; 1, 1, 1, 4]
    assert cf_expand(QuadraticNumber.sqrt(7)).period == (1, 1, 1, 4)
    assert cf_expand(QuadraticNumber.sqrt(13)).period == (1, 1, 1, 1, 6)


def test_rational_rejected():
    with pytest.raises(RationalInput):
        cf_expand(QuadraticNumber(3, 0, 2))


def test_round_trip_random():
    rng = random.Random(11)
    for _ in range(200):
        x = random_irrational(rng)
        cf = cf_expand(x)
        assert cf_value(cf, x.D) == x
        assert primitive_period(cf.period) == list(cf.period)
        assert all(a >= 1 for a in cf.period) and cf.preperiod[0] >= 0


def test_value_without_field_hint():
    for x in (phi, -silver, QuadraticNumber(3, -2, 7, 11)):
        assert cf_value(cf_expand(x)) == x


def test_convergent_examples():
    got = [(c.p, c.q) for c in convergents(cf_expand(phi), 5)]
    assert got == [(1, 0), (1, 1), (2, 1), (3, 2), (5, 3)]
    got = [(c.p, c.q) for c in convergents(cf_expand(QuadraticNumber(-1, 1, 1, 2)), 4)]
    assert got == [(1, 0), (0, 1), (1, 2), (2, 5)]
    cf = cf_expand(QuadraticNumber.sqrt(11))
    assert convergents(cf, 2)[1].as_fraction() == cf.preperiod[0]


@settings(max_examples=60)
@given(st.integers(2, 200), st.integers(1, 30), st.integers(-30, 30))
def test_convergents_unimodular_and_straddle(D, r, p):
    x = QuadraticNumber(p, 1, r, D)
    if x.is_rational or x.sign() <= 0:
        return
    cs = convergents(cf_expand(x), 12)
    for a, b in zip(cs, cs[1:]):
        assert b.p * a.q - a.p * b.q == (1 if (b.index - 1) % 2 == 0 else -1)
    evens = [c.as_fraction() for c in cs if c.index >= 0 and c.index % 2 == 0]
    odds = [c.as_fraction() for c in cs if c.index >= 0 and c.index % 2 == 1]
    assert all(u < v for u, v in zip(evens, evens[1:]))
    assert all(u > v for u, v in zip(odds, odds[1:]))
    assert all((e - x).sign() < 0 for e in evens)
    assert all((o - x).sign() > 0 for o in odds)


def test_good_approximation_examples():
    lower, upper = good_approximations(phi, 5)
    assert set(lower) == {Fraction(1), Fraction(3, 2), Fraction(8, 5)}
    assert Fraction(2) in upper
    _, upper = good_approximations(silver, 2)
    assert set(upper) == {Fraction(3), Fraction(5, 2)}
    rng = random.Random(5)
    for _ in range(20):
        x = random_irrational(rng)
        lower, _ = good_approximations(x, 10)
        assert Fraction(quad_floor(x)) in lower


def test_good_approximations_match_brute_force():
    rng = random.Random(2024)
    for _ in range(50):
        x = random_irrational(rng)
        q_max = rng.randint(1, 200)
        lower, upper = good_approximations(x, q_max)
        blo, bup = brute_good_approximations(x, q_max)
        assert set(lower) == blo, x
        assert set(upper) == bup, x


def test_negative_values_match_brute_force():
    for x in (-phi, -silver, QuadraticNumber(-7, 3, 2, 3)):
        lower, upper = good_approximations(x, 60)
        assert (set(lower), set(upper)) == brute_good_approximations(x, 60)


def test_words():
    assert primitive_period((1, 1)) == [1]
    assert primitive_period((2, 1, 2, 1)) == [2, 1]
    assert primitive_period((3, 1, 2)) == [3, 1, 2]
    assert cyclic_equivalent((1, 2, 1), (2, 1, 1))
    assert not cyclic_equivalent((1,), (2,))
    assert cyclic_equivalent((1, 1), (1,))
    assert not cyclic_equivalent((1, 2, 3), (3, 2, 1))
