from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eulersum.exact import Polynomial, rational_roots
from eulersum.rfparse import (
    InfiniteSummandError,
    NotConvergentError,
    ParseError,
    RationalFunction,
    check_summable,
    parse_ratfunc,
    require_summable,
)


def test_worked_example_denominator():
    R = parse_ratfunc("1/(2*k-1)^2")
    # normalization may scale P and Q together
    assert R.numerator * Polynomial([1, -4, 4]) == R.denominator * Polynomial([1])


def test_cancellation():
    R = parse_ratfunc("(k+1)/(k+1)^3")
    assert R == RationalFunction(Polynomial([1]), Polynomial([1, 2, 1]))


def test_square_of_irreducible():
    R = parse_ratfunc("1/(k^2+3*k+1)^2")
    assert R == RationalFunction(Polynomial([1]), Polynomial([1, 3, 1]) ** 2)


def test_implicit_multiplication_matches_explicit():
    assert parse_ratfunc("1/(2k+1)^3/(3k+1)^2") == parse_ratfunc("1/((2*k+1)^3*(3*k+1)^2)")


def test_precedence():
    # ^ binds tighter than unary minus, ^ is right-associative
    assert parse_ratfunc("-k^2") == RationalFunction(Polynomial([0, 0, -1]))
    assert parse_ratfunc("2^3^2") == RationalFunction(Polynomial([512]))
    assert parse_ratfunc("1 - 2*k + k/k") == RationalFunction(Polynomial([2, -2]))


def test_nested_fractions_cleared():
    R = parse_ratfunc("1/(1/k + 1)")
    assert R == RationalFunction(Polynomial([0, 1]), Polynomial([1, 1]))


def test_negative_exponent():
    assert parse_ratfunc("k^(-2)") == parse_ratfunc("1/k^2")


@pytest.mark.parametrize(
    "text, column",
    [("1/(k+1", 7), ("1/(k+$)", 6), ("1/(k+1)^k", 9), ("1 +", 4), ("x+1", 1)],
)
def test_syntax_errors_carry_column(text, column):
    with pytest.raises(ParseError) as info:
        parse_ratfunc(text)
    assert info.value.column == column


def test_division_by_zero_polynomial():
    with pytest.raises(ParseError, match="zero"):
        parse_ratfunc("1/(k-k)")


def test_other_variable():
    assert parse_ratfunc("1/(n+1)^2", "n") == parse_ratfunc("1/(k+1)^2")


class TestSummability:
    def test_not_convergent(self):
        rep = check_summable(parse_ratfunc("k/(k^2+1)"))
        assert rep.degree_gap == 1 and not rep.convergent
        with pytest.raises(NotConvergentError, match="sum not convergent"):
            require_summable(parse_ratfunc("k/(k^2+1)"))

    def test_infinite_summand(self):
        rep = check_summable(parse_ratfunc("1/(k-3)^2"))
        assert rep.offending_positive_integer_pole == 3
        with pytest.raises(InfiniteSummandError, match="infinite summand"):
            require_summable(parse_ratfunc("1/(k-3)^2"))

    def test_pole_at_zero_accepted(self):
        rep = check_summable(parse_ratfunc("1/k^3"))
        assert rep.degree_gap == 3 and rep.has_pole_at_zero and rep.summable

    def test_negative_integer_pole_accepted(self):
        assert check_summable(parse_ratfunc("1/(k+1)^5")).summable

    @given(st.integers(-6, 6), st.integers(1, 3))
    def test_positive_pole_iff_root(self, r, m):
        Q = Polynomial([r, -m]) * Polynomial([1, 0, 1])  # root r/m and a rootless factor
        rep = check_summable(RationalFunction(Polynomial([1]), Q))
        root = F(r, m)
        flagged = root.denominator == 1 and root > 0
        assert (rep.offending_positive_integer_pole is not None) == flagged
        assert any(x == root for x, _ in rational_roots(Q))


coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=5)


@given(coeffs, coeffs.filter(lambda c: any(c)))
def test_print_parse_round_trip(p, q):
    R = RationalFunction(Polynomial(p), Polynomial(q))
    again = parse_ratfunc(R.to_text())
    assert again == R
    assert parse_ratfunc(again.to_text()).to_text() == again.to_text()
