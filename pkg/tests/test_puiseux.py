import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legschober.puiseux import (
    FormalType,
    FormalTypeError,
    ParseError,
    conjugate,
    deck_conjugates,
    evaluate_re,
    parse_class,
    ramification,
)


def test_parse_drops_nonnegative_exponents():
    c = parse_class("(2/3)*z^(-3/2) - z^(-1) + 5")
    # z^-1 survives: only exponents >= 0 are quotiented away (see README)
    assert [(e, str(k)) for e, k in c.terms] == [(F(-3, 2), "(2/3)"), (F(-1), "(-1)")]


def test_parse_zero_and_like_terms():
    assert parse_class("0").is_zero
    assert parse_class("3 + z^2").is_zero
    c = parse_class("z^(-2) + z^(-2)")
    assert [(e, str(k)) for e, k in c.terms] == [(F(-2), "(2)")]
    assert parse_class("z^(-2) - z^(-2)").is_zero


@pytest.mark.parametrize("text", ["z^(-3/2", "2*", "z^(-1/0)", "q", "(1+", "z^^2"])
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        parse_class(text)
    assert 0 <= info.value.position <= len(text)


def test_gaussian_coefficients():
    c = parse_class("(1+2i)*z^(-2) + i*z^(-3)")
    assert [e for e, _ in c.terms] == [F(-3), F(-2)]
    assert complex(c.terms[1][1]) == 1 + 2j


def test_ramification():
    assert ramification(parse_class("(2/3)*z^(-3/2)")) == 2
    assert ramification(parse_class("z^(-2)")) == 1
    assert ramification(parse_class("z^(-5/2)+z^(-4/3)")) == 6
    assert ramification(parse_class("0")) == 1


def test_deck_conjugates():
    orbit = deck_conjugates(parse_class("(2/3)*z^(-3/2)"))
    assert [c.render() for c in orbit] == ["(2/3)*z^(-3/2)", "(-2/3)*z^(-3/2)"]
    assert deck_conjugates(parse_class("0")) == [parse_class("0")]
    assert len(deck_conjugates(parse_class("z^(-2)"))) == 1
    assert len(deck_conjugates(parse_class("z^(-4/3)"))) == 3


def test_evaluate_re_examples():
    assert evaluate_re(parse_class("z^(-2)"), 1, 0.0) == pytest.approx(1.0)
    assert evaluate_re(parse_class("(2/3)*z^(-3/2)"), 1, 0.0) == pytest.approx(2 / 3)
    for t in (0.0, 1.0, 2.5):
        assert evaluate_re(parse_class("0"), F(1, 10), t) == 0.0


def _direct(text_terms, eps, theta):
    # theta is an angle on the cover, so no principal branch
    return sum((c * cmath.exp(e * complex(math.log(eps), theta))).real for e, c in text_terms)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 8 * math.pi))
def test_evaluate_re_matches_direct(theta):
    c = parse_class("(2/3)*z^(-3/2) + (1-i)*z^(-5/4)")
    expect = _direct([(-1.5, 2 / 3), (-1.25, 1 - 1j)], 0.2, theta)
    assert evaluate_re(c, F(1, 5), theta) == pytest.approx(expect, rel=1e-9, abs=1e-9)


exps = st.fractions(min_value=-4, max_value=F(-1, 2), max_denominator=4)
coeffs = st.integers(-3, 3).filter(bool)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(exps, coeffs, coeffs), min_size=1, max_size=3))
def test_render_parse_round_trip_and_conjugation(terms):
    c = parse_class(" + ".join(f"({a}+{b}i)*z^({e})" for e, a, b in terms))
    assert parse_class(c.render()) == c
    assert parse_class(parse_class(c.render()).render()) == c
    l = ramification(c)
    assert conjugate(c, l) == c
    orbit = deck_conjugates(c)
    assert l % len(orbit) == 0
    if not c.is_zero:
        nxt = conjugate(c, 1)
        for t in (0.3, 1.7):
            assert evaluate_re(nxt, F(1, 3), t) == pytest.approx(
                evaluate_re(c, F(1, 3), t + 2 * math.pi), rel=1e-9, abs=1e-9)


def test_formal_type_orbits():
    t = FormalType.parse(["(2/3)*z^(-3/2)"])
    assert len(t.classes) == 2
    with pytest.raises(FormalTypeError):
        FormalType((parse_class("z^(-3/2)"),))
    with pytest.raises(FormalTypeError):
        FormalType((parse_class("z^(-2)"), parse_class("z^(-2)")))


def test_formal_type_json_round_trip():
    t = FormalType.parse(["0", "z^(-4/3)", "i*z^(-2)"])
    assert FormalType.from_json(t.to_json()) == t
    data = {"classes": [{"terms": [{"exp": "-3/2", "coeff": "2/3"}]}]}
    assert len(FormalType.from_json(data).classes) == 2
