from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from summexp.errors import DomainError
from summexp.extrational import INF, ONE, ZERO, ExtRational, conjugate, dual_recip, fmt

rationals = st.fractions(min_value=0, max_value=1000, max_denominator=500)
exponents = st.one_of(st.just(INF), st.fractions(min_value=1, max_value=1000, max_denominator=500).map(ExtRational))


def test_parse_forms():
    assert ExtRational("3/2") == Fraction(3, 2)
    assert ExtRational(" 7 ") == 7
    assert ExtRational("inf") is not None and ExtRational("inf").is_infinite
    assert ExtRational.parse("0.25", allow_decimal=True) == Fraction(1, 4)
    with pytest.raises(DomainError):
        ExtRational("0.25")
    with pytest.raises(DomainError):
        ExtRational("1/0")
    with pytest.raises(DomainError):
        ExtRational("-1")
    with pytest.raises(DomainError):
        ExtRational(1.5)


def test_infinity_table():
    assert ExtRational(3) + INF == INF
    assert ExtRational(3) / INF == ZERO
    assert INF * 2 == INF
    with pytest.raises(DomainError):
        INF * 0
    with pytest.raises(DomainError):
        INF / INF
    with pytest.raises(ZeroDivisionError):
        ONE / 0
    assert ZERO.reciprocal() == INF
    assert INF.reciprocal() == ZERO
    assert INF.recip() == 0


@given(rationals)
def test_every_finite_below_infinity(x):
    assert ExtRational(x) < INF
    assert not INF < ExtRational(x)


@given(rationals, rationals)
def test_ordering_matches_fractions(a, b):
    assert (ExtRational(a) < ExtRational(b)) == (a < b)
    assert (ExtRational(a) == ExtRational(b)) == (a == b)


@given(exponents)
def test_conjugate_is_an_involution(p):
    assert conjugate(conjugate(p)) == p
    assert dual_recip(p) == conjugate(p).recip()


def test_conjugate_values():
    assert conjugate(2) == 2
    assert conjugate(1) == INF
    assert conjugate(Fraction(4, 3)) == 4
    assert conjugate(INF) == 1
    with pytest.raises(DomainError):
        conjugate(Fraction(1, 2))


def test_text_round_trip():
    for text in ("0", "3", "3/2", "inf"):
        assert str(ExtRational(text)) == text
    assert fmt(Fraction(6, 4)) == "3/2"
    assert fmt(None) == "none"
    assert repr(ExtRational("3/2")) == "ExtRational('3/2')"
    assert float(INF) == float("inf")


def test_hashable_and_equal_to_fraction():
    assert hash(ExtRational(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert {ExtRational(2), ExtRational("2")} == {ExtRational(2)}
