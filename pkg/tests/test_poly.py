"""Polynomial kernel: ring laws, calculus, grammar."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nambu.errors import ChartMismatchError, ParseError
from nambu.poly import (
    Polynomial,
    Rational,
    format_polynomial,
    jet_exponents,
    parse_polynomial,
)

M = 3


def poly_strategy(m: int = M, max_degree: int = 3):
    exponent = st.tuples(*[st.integers(0, max_degree) for _ in range(m)])
    coeff = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
    return st.dictionaries(exponent, coeff, max_size=5).map(lambda t: Polynomial(m, t))


def x(i: int, m: int = M) -> Polynomial:
    return Polynomial.variable(m, i)


class TestConstruction:
    def test_zero_coefficients_pruned(self):
        p = Polynomial(2, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
        assert (1, 0) not in p.terms
        assert p.terms == {(0, 1): Fraction(2)}

    def test_rational_contract(self):
        # the stdlib rational already satisfies the required invariants
        q = Rational(6, -4)
        assert q.denominator > 0
        assert q == Fraction(-3, 2)
        assert Rational(0, 7) == Rational(0, 1)

    def test_wrong_exponent_length_rejected(self):
        with pytest.raises(ChartMismatchError):
            Polynomial(2, {(1, 0, 0): Fraction(1)})

    def test_immutable(self):
        p = Polynomial.one(2)
        with pytest.raises(AttributeError):
            p.num_vars = 5


class TestArithmetic:
    def test_additive_inverse(self):
        assert (x(1) + 1) + (-x(1)) == Polynomial.one(M)

    def test_additive_identity(self):
        p = x(1) * x(2) - 3
        assert p + Polynomial.zero(M) == p

    def test_like_terms_merge(self):
        p = x(1) * x(2)
        assert p + p == 2 * p

    def test_difference_of_squares(self):
        assert (x(1) + x(2)) * (x(1) - x(2)) == x(1) ** 2 - x(2) ** 2

    def test_multiplicative_identity(self):
        p = x(1) ** 2 - Fraction(1, 2) * x(3)
        assert p * Polynomial.one(M) == p

    def test_absorbing_zero(self):
        p = x(1) ** 2 + 7
        assert (p * Polynomial.zero(M)).is_zero()

    def test_chart_mismatch_raises(self):
        with pytest.raises(ChartMismatchError):
            Polynomial.one(2) + Polynomial.one(3)

    @given(poly_strategy(), poly_strategy(), poly_strategy())
    def test_ring_laws(self, a, b, c):
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @given(poly_strategy(), poly_strategy())
    def test_normalization_is_canonical(self, a, b):
        # equal polynomials have identical stored representations
        if a == b:
            assert a.terms == b.terms
        assert ((a + b) - b).terms == a.terms


class TestCalculus:
    def test_derivative_of_variable(self):
        assert x(3).diff(3) == Polynomial.one(M)

    def test_derivative_power_rule(self):
        assert (x(1) ** 2 * x(2)).diff(1) == 2 * x(1) * x(2)

    def test_derivative_of_absent_variable(self):
        assert x(1).diff(2).is_zero()

    def test_index_out_of_range(self):
        with pytest.raises(ChartMismatchError):
            x(1).diff(4)

    @given(poly_strategy(), poly_strategy(), st.integers(1, M))
    def test_leibniz_rule(self, a, b, i):
        assert (a * b).diff(i) == a * b.diff(i) + b * a.diff(i)

    @given(poly_strategy(), st.integers(1, M), st.integers(1, M))
    def test_mixed_partials_commute(self, a, i, j):
        assert a.diff(i).diff(j) == a.diff(j).diff(i)

    def test_evaluation(self):
        assert x(3).evaluate([0, 0, 5]) == 5
        assert Polynomial.constant(M, 7).evaluate([1, 2, 3]) == 7
        assert (x(1) * x(2)).evaluate([2, 3, 0]) == 6

    def test_evaluation_dimension_mismatch(self):
        with pytest.raises(ChartMismatchError):
            x(1).evaluate([1, 2])

    @given(poly_strategy(), poly_strategy())
    def test_evaluation_is_a_homomorphism(self, a, b):
        point = [Fraction(1, 2), Fraction(-2), Fraction(3)]
        assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)
        assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)


class TestGrammar:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("0", Polynomial.zero(M)),
            ("x1", x(1)),
            ("3/4", Polynomial.constant(M, Fraction(3, 4))),
            ("x1^2*x2 - x3", x(1) ** 2 * x(2) - x(3)),
            ("-x1 + 2", 2 - x(1)),
            ("(x1+1)*(x1-1)", x(1) ** 2 - 1),
            ("(x1+1)/2", Fraction(1, 2) * (x(1) + 1)),
            ("2*x1^10", 2 * x(1) ** 10),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_polynomial(text, M) == expected

    @given(poly_strategy())
    def test_print_parse_roundtrip(self, p):
        assert parse_polynomial(format_polynomial(p), M) == p

    def test_canonical_order_is_graded_lexicographic(self):
        p = 1 + x(1) + x(2) ** 2 + x(1) * x(3)
        assert format_polynomial(p) == "x1*x3 + x2^2 + x1 + 1"

    @pytest.mark.parametrize(
        "text",
        ["", "x0", "x4", "x1 +", "1/0", "(x1", "x1^-2", "x1/x2", "y1", "1..2"],
    )
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_polynomial(text, M)

    def test_parse_error_carries_location(self):
        with pytest.raises(ParseError) as info:
            parse_polynomial("x1 + x9", M)
        assert "column" in str(info.value)


class TestJetBasis:
    def test_order_is_pinned(self):
        assert jet_exponents(2, 2) == [
            (0, 0),
            (1, 0),
            (0, 1),
            (2, 0),
            (1, 1),
            (0, 2),
        ]

    def test_counts(self):
        # degree <= 3 in 5 variables: C(8, 3) monomials of each degree summed
        assert len(jet_exponents(5, 3)) == 56
        assert len(jet_exponents(3, 3)) == 20
