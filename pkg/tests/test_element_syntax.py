# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from fractions import Fraction
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from thetaplane.coefficient_ring import G_I, ExactScalar, GaussianRational, PhaseWord
from thetaplane.element_syntax import (
    format_element,
    format_element_file,
    parse_element,
    parse_element_file,
)
from thetaplane.errors import ElementSyntaxError, IndexRangeError
from thetaplane.theta_algebra import Element, MultiIndex, generator, mul, star
from tests.strategies import elements, signatures


class TestParse:
    def test_normal_ordering(self, sig2):
        a = parse_element("zb2*z1", sig2)
        assert format_element(a) == "L[2,1]^-1 * z1*zb2"

    def test_precedence(self, sig2):
        a = parse_element("1 + 2*z1^2 - z2", sig2)
        z1, z2 = generator(sig2, "z", 1), generator(sig2, "z", 2)
        assert a == Element.one(sig2) + Element.constant(sig2, 2) * mul(z1, z1) - z2

    def test_unary_minus(self, sig2):
        assert parse_element("-z1", sig2) == -generator(sig2, "z", 1)
        assert parse_element("--z1", sig2) == generator(sig2, "z", 1)

    def test_whitespace_insignificant(self, sig2):
        assert parse_element(" z1 *  zb1 ", sig2) == parse_element("z1*zb1", sig2)

    def test_rational_and_decimal(self, sig2):
        assert parse_element("3/4", sig2) == Element.constant(sig2, Fraction(3, 4))
        assert parse_element("0.25", sig2) == Element.constant(sig2, Fraction(1, 4))

    def test_imaginary_unit(self, sig2):
        assert parse_element("i*z1", sig2) == Element.monomial(sig2, (1, 0), coeff=G_I)
        assert parse_element("i^2", sig2) == Element.constant(sig2, -1)

    def test_phase_atom(self, sig2):
        a = parse_element("L[2,1]^-2 * z1", sig2)
        word = PhaseWord.from_exponents(2, {(2, 1): -2})
        assert a == Element.monomial(sig2, (1, 0), coeff=ExactScalar.phase(word))

    def test_star_function(self, sig2):
        assert parse_element("star(z1*z2)", sig2) == star(mul(generator(sig2, "z", 1), generator(sig2, "z", 2)))

    def test_x_needs_odd_m(self, sig2, sig2_odd):
        assert parse_element("x^2", sig2_odd) == Element.monomial(sig2_odd, (0, 0), t=2)
        with pytest.raises(ElementSyntaxError, match="odd m"):
            parse_element("x", sig2)

    def test_numeric_decimals_are_floats(self, sig2_numeric):
        a = parse_element("0.5*z1", sig2_numeric)
        assert a.coefficient(MultiIndex((1, 0), (0, 0))).value == 0.5

    def test_numeric_rejects_phase_atom(self, sig2_numeric):
        with pytest.raises(ElementSyntaxError, match="exact mode"):
            parse_element("L[2,1]", sig2_numeric)


class TestParseErrors:
    def test_index_out_of_range(self, sig2):
        with pytest.raises(IndexRangeError) as info:
            parse_element("z1 + z3", sig2)
        assert info.value.position == 5

    def test_bad_phase_pair(self, sig2):
        with pytest.raises(IndexRangeError):
            parse_element("L[1,2]", sig2)

    def test_unexpected_character(self, sig2):
        with pytest.raises(ElementSyntaxError, match="unexpected character"):
            parse_element("z1 $ z2", sig2)

    def test_no_implicit_multiplication(self, sig2):
        with pytest.raises(ElementSyntaxError, match="unexpected"):
            parse_element("2 z1", sig2)

    def test_unbalanced(self, sig2):
        with pytest.raises(ElementSyntaxError, match="expected '\\)'"):
            parse_element("(z1 + z2", sig2)

    def test_negative_power(self, sig2):
        with pytest.raises(ElementSyntaxError, match="negative exponents"):
            parse_element("z1^-1", sig2)

    def test_zero_denominator(self, sig2):
        with pytest.raises(ElementSyntaxError, match="zero denominator"):
            parse_element("1/0", sig2)

    def test_generator_without_index(self, sig2):
        with pytest.raises(ElementSyntaxError, match="needs an index"):
            parse_element("z", sig2)

    def test_empty(self, sig2):
        with pytest.raises(ElementSyntaxError):
            parse_element("", sig2)


class TestFormat:
    def test_zero(self, sig2):
        assert format_element(Element.zero(sig2)) == "0"

    def test_graded_order_and_signs(self, sig2):
        a = parse_element("z1^2 - 3/2*zb2 + 1", sig2)
        assert format_element(a) == "1 - 3/2 * zb2 + z1^2"

    def test_gaussian_coefficients(self, sig2):
        c = GaussianRational(Fraction(1, 2), Fraction(-1))
        a = Element.monomial(sig2, (0, 1), coeff=c) + Element.constant(sig2, G_I)
        assert format_element(a) == "i + (1/2 - i) * z2"

    def test_multi_term_coefficient(self, sig2):
        a = parse_element("(1 + L[2,1]) * z1", sig2)
        assert format_element(a) == "(1 + L[2,1]) * z1"

    def test_odd_monomial(self, sig2_odd):
        a = parse_element("2*x^3*z2", sig2_odd)
        assert format_element(a) == "2 * z2*x^3"

    def test_numeric(self, sig2_numeric):
        a = parse_element("0.5*z1 - 0.25*i", sig2_numeric)
        assert format_element(a) == "-0.25*i + 0.5 * z1"


class TestRoundTrip:
    @settings(max_examples=500)
    @given(st.data())
    def test_parse_format(self, data):
        sig = data.draw(signatures(max_n=3))
        a = data.draw(elements(sig))
        assert parse_element(format_element(a), sig) == a

    def test_numeric_round_trip(self, sig2_numeric):
        a = parse_element("(0.1 + 0.2*i) * z1*zb2 - 1e-07 * z2^3 + 3.5", sig2_numeric)
        assert parse_element(format_element(a), sig2_numeric) == a


class TestElementFile:
    def test_parse(self, sig2):
        text = "# inputs\na = z1 + zb1\n\nb = L[2,1]*z2  # twisted\n"
        parsed = parse_element_file(text, sig2)
        assert list(parsed) == ["a", "b"]
        assert parsed["a"] == generator(sig2, "z", 1) + generator(sig2, "zb", 1)

    def test_error_carries_line(self, sig2):
        with pytest.raises(ElementSyntaxError, match="line 2"):
            parse_element_file("a = z1\nb = z9\n", sig2)

    def test_duplicate_name(self, sig2):
        with pytest.raises(ElementSyntaxError, match="duplicate"):
            parse_element_file("a = z1\na = z2\n", sig2)

    def test_missing_assignment(self, sig2):
        with pytest.raises(ElementSyntaxError, match="name = expr"):
            parse_element_file("z1 + z2\n", sig2)

    def test_line_error_keeps_type(self, sig2):
        with pytest.raises(IndexRangeError):
            parse_element_file("a = z3\n", sig2)

    def test_format(self, sig2):
        elements_ = {"a": generator(sig2, "z", 1), "b": Element.zero(sig2)}
        assert format_element_file(elements_) == "a = z1\nb = 0\n"
        assert parse_element_file(format_element_file(elements_), sig2) == elements_
