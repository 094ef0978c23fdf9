import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulersum.exact import Polynomial
from eulersum.numerics import eval_symexpr
from eulersum.residue import (
    AlgebraicPole,
    T_func,
    closed_form,
    closed_form_fast,
    closed_form_via_theorem3,
    corollary1,
    corollary2,
    partial_fractions,
    pole_contribution,
)
from eulersum.rfparse import InfiniteSummandError, NotConvergentError, RationalFunction, parse_ratfunc
from eulersum.symbolic import (
    Psi,
    RootSum,
    SymbolicExpression,
    gamma,
    psi,
    simplify_special_values,
    zeta,
)

mpf = mpmath.mpf
g = gamma()


def value(e, D=60):
    return eval_symexpr(e, D)


def near(a, b, D=60):
    return abs(a - b) < mpf(10) ** -(D - 10)


class TestPartialFractions:
    def test_worked_example(self):
        pfd = partial_fractions(parse_ratfunc("1/((2k+1)^3*(3k+1)^2)"))
        # c/(k+t)^i with c = C/m^i for the catalog's C/(mk+n)^i
        got = {(t.pole, t.power): t.coefficient for t in pfd.terms}
        assert got == {
            (F(1, 2), 3): F(4, 8),
            (F(1, 2), 2): F(24, 4),
            (F(1, 2), 1): F(108, 2),
            (F(1, 3), 2): F(27, 9),
            (F(1, 3), 1): F(-162, 3),
        }

    def test_telescoping_pair(self):
        pfd = partial_fractions(parse_ratfunc("1/((k+1)(k+2))"))
        assert {(t.pole, t.power, t.coefficient) for t in pfd.terms} == {(1, 1, 1), (2, 1, -1)}

    def test_algebraic_block(self):
        pfd = partial_fractions(parse_ratfunc("1/(k^3+1)"))
        rational = [t for t in pfd.terms if not isinstance(t.pole, AlgebraicPole)]
        blocks = [t for t in pfd.terms if isinstance(t.pole, AlgebraicPole)]
        assert [(t.pole, t.power, t.coefficient) for t in rational] == [(1, 1, F(1, 3))]
        assert blocks[0].pole.q == Polynomial([1, -1, 1])
        assert pfd.simple_coefficient_sum() == 0
        assert pfd.recombine() == parse_ratfunc("1/(k^3+1)")

    @settings(max_examples=1000)
    @given(
        st.lists(st.tuples(st.integers(1, 4), st.integers(-3, 6), st.integers(1, 3)), min_size=1, max_size=3),
        st.lists(st.integers(-9, 9), max_size=4),
    )
    def test_recombination(self, factors, num):
        Q = Polynomial([1])
        for m, n, e in factors:
            Q = Q * Polynomial([n, m]) ** e
        P = Polynomial(num[: max(Q.degree - 1, 0)] or [1])
        R = RationalFunction(P, Q)
        rep_ok = all(not (F(-n, m).denominator == 1 and F(-n, m) > 0) for m, n, _ in factors)
        if not rep_ok or P.is_zero() or R.denominator.degree - R.numerator.degree < 2:
            return
        pfd = partial_fractions(R)
        assert pfd.recombine() == R
        assert pfd.simple_coefficient_sum() == 0


class TestT:
    def test_half_two_against_catalog(self):
        expected = F(1, 2) * (-psi(2, F(1, 2)) + 2 * g * psi(1, F(1, 2)) + 2 * psi(0, F(1, 2)) * psi(1, F(1, 2)))
        assert T_func(F(1, 2), 2) == expected
        assert T_func(F(1, 2), 2) * F(1, 4) == corollary1(2, 1, 2).expression

    def test_one_one(self):
        t = simplify_special_values(T_func(1, 1))
        pi2 = simplify_special_values(psi(1, 1)) * 6
        assert t == F(1, 2) * (pi2 / 6 + g**2)

    def test_one_two_is_zeta3(self):
        with mpmath.workdps(80):
            assert near(value(T_func(1, 2)), mpmath.zeta(3))

    def test_rejects_nonpositive_integer(self):
        with pytest.raises(ValueError):
            T_func(0, 2)
        with pytest.raises(ValueError):
            T_func(-2, 1)


class TestClosedForm:
    def test_two_k_minus_one(self):
        e = simplify_special_values(closed_form(parse_ratfunc("1/(2k-1)^2")).expression)
        with mpmath.workdps(80):
            ref = 7 * mpmath.zeta(3) / 4 + mpmath.pi**2 / 4 - 2 * mpmath.log(2) - mpmath.pi**2 * mpmath.log(2) / 4
            assert near(value(e), ref)

    def test_k_cubed_atom_form(self):
        cf = closed_form(parse_ratfunc("1/k^3"))
        assert cf.expression == F(5, 2) * zeta(4) - F(1, 2) * zeta(2) ** 2
        with mpmath.workdps(80):
            assert near(value(cf.expression), F(5, 4) * mpmath.zeta(4))

    def test_k_cubed_plus_one(self):
        cf = closed_form(parse_ratfunc("1/(k^3+1)"))
        assert any(isinstance(a, RootSum) for a in cf.expression.atoms())
        with mpmath.workdps(40):
            assert mpmath.nstr(value(cf.expression, 30), 21) == "0.828902143400992508742"

    def test_mixed_example_against_displayed_combination(self):
        e = closed_form(parse_ratfunc("1/((2k+1)^3*(3k+1)^2)")).expression
        with mpmath.workdps(90):
            pi, l2, l3, z3, r3 = mpmath.pi, mpmath.log(2), mpmath.log(3), mpmath.zeta(3), mpmath.sqrt(3)
            third = mpf(1) / 3
            ref = (
                pi**4 / 16 + 42 * z3 + 27 * pi**2 / 2 - 7 * l2 * z3 - 6 * l2 * pi**2 - 108 * l2**2
                + 27 * (-pi * r3 / 6 - 3 * l3 / 2) ** 2
                + (-27 - pi * r3 / 2 - 9 * l3 / 2) * mpmath.psi(1, third)
                - mpmath.psi(2, third) * 3 / 2
            )
            assert near(value(e, 70), ref, 70)

    def test_quadratic_squared_against_conjugate_form(self):
        e = closed_form(parse_ratfunc("1/(k^2+3k+1)^2")).expression
        with mpmath.workdps(90):
            s5, gm = mpmath.sqrt(5), +mpmath.euler
            a, b = (3 + s5) / 2, (3 - s5) / 2
            p = lambda n, x: mpmath.psi(n, x)
            ref = (
                -s5 * p(0, a) ** 2 / 25 - 2 * s5 * gm * p(0, a) / 25 + p(1, a) * p(0, a) / 5
                + s5 * p(0, b) ** 2 / 25 + 2 * s5 * gm * p(0, b) / 25 + p(1, b) * p(0, b) / 5
                - p(2, b) / 10 - p(2, a) / 10
                + (-s5 / 25 + gm / 5) * p(1, b) + (s5 / 25 + gm / 5) * p(1, a)
            )
            assert near(value(e, 70), ref, 70)

    def test_guards(self):
        with pytest.raises(InfiniteSummandError):
            closed_form(parse_ratfunc("1/(k-3)^2"))
        with pytest.raises(NotConvergentError):
            closed_form(parse_ratfunc("k/(k^2+1)"))

    def test_provenance(self):
        cf = closed_form(parse_ratfunc("1/(k+1)^2"))
        assert cf.provenance and cf.provenance["path"]


class TestTheorem3:
    def test_first_mixed_entry(self):
        e = closed_form_via_theorem3(parse_ratfunc("1/((2k+1)(3k+1))")).expression
        h, t = F(1, 2), F(1, 3)
        expected = F(1, 2) * (
            -psi(1, h) + 2 * g * psi(0, h) + psi(0, h) ** 2 + psi(1, t) - 2 * g * psi(0, t) - psi(0, t) ** 2
        )
        assert e == expected

    def test_single_term(self):
        assert closed_form_via_theorem3(parse_ratfunc("1/(k+1)^2")).expression == T_func(1, 2)

    def test_mixed_thirds_quarters(self):
        e = closed_form_via_theorem3(parse_ratfunc("1/((3k+2)(4k+3))")).expression
        a, b = F(2, 3), F(3, 4)
        expected = F(1, 2) * (
            psi(1, a) - 2 * g * psi(0, a) - psi(0, a) ** 2 - psi(1, b) + 2 * g * psi(0, b) + psi(0, b) ** 2
        )
        assert e == expected

    def test_rejects_algebraic_poles(self):
        with pytest.raises(ValueError):
            closed_form_via_theorem3(parse_ratfunc("1/(k^3+1)"))


GRID = [(m, n, p) for m in range(1, 5) for n in range(1, 5) if math.gcd(m, n) == 1 for p in range(2, 9)]


@pytest.mark.parametrize("m,n,p", GRID)
def test_path_equivalence_grid(m, n, p):
    R = RationalFunction(Polynomial([1]), Polynomial([n, m]) ** p)
    a = corollary1(m, n, p).expression
    assert a == closed_form(R).expression
    assert a == closed_form_via_theorem3(R).expression
    assert a == closed_form_fast(R).expression


class TestCorollaries:
    def test_corollary1_examples(self):
        h, t = F(1, 2), F(1, 3)
        assert corollary1(2, 1, 2).expression == F(1, 8) * (
            -psi(2, h) + 2 * g * psi(1, h) + 2 * psi(0, h) * psi(1, h)
        )
        assert corollary1(3, 1, 3).expression == F(1, 108) * (
            psi(3, t) - 2 * g * psi(2, t) - 2 * psi(0, t) * psi(2, t) - 2 * psi(1, t) ** 2
        )
        assert corollary1(4, 3, 8).expression.common_prefactor() == F(1, 660602880)

    def test_corollary2_numeric(self):
        e = corollary2(1, 1, 3, 1).expression
        assert e == T_func(1, 2) - T_func(1, 3)
        with mpmath.workdps(20):
            ref = mpmath.nsum(lambda k: k * mpmath.harmonic(k) / (k + 1) ** 3, [1, mpmath.inf], method="euler-maclaurin")
            assert abs(value(e) - ref) < mpf(10) ** -17

    @pytest.mark.parametrize("m,n,p,q,text", [(2, 1, 4, 1, "k/(2k+1)^4"), (3, 2, 5, 2, "k^2/(3k+2)^5")])
    def test_corollary2_paths(self, m, n, p, q, text):
        R = parse_ratfunc(text)
        assert corollary2(m, n, p, q).expression == closed_form(R).expression
        assert closed_form_fast(R).expression == closed_form(R).expression

    def test_constraint_violations(self):
        for bad in [lambda: corollary1(2, 2, 3), lambda: corollary1(1, 1, 1), lambda: corollary2(1, 1, 2, 1)]:
            with pytest.raises(ValueError):
                bad()


@pytest.mark.parametrize("text", ["1/(k+1)^3", "1/((2k+1)(3k+1))", "k/(k+2)^4", "1/(k^2+3k+1)^2"])
def test_no_contribution_from_zero(text):
    assert pole_contribution(parse_ratfunc(text), F(0)).is_zero()


def test_fast_path_falls_back():
    R = parse_ratfunc("1/((2k+1)(3k+1))")
    cf = closed_form_fast(R)
    assert cf.expression == closed_form(R).expression


@pytest.mark.parametrize("text", ["1/(k+1)^2", "1/(2k+1)^3", "(k+3)/((k+1)^2*(2k+5)^2)", "1/(k^4+4)"])
def test_closed_form_against_mpmath_nsum(text):
    R = parse_ratfunc(text)
    e = closed_form(R).expression
    with mpmath.workdps(20):
        ref = mpmath.nsum(lambda k: R(mpf(k)) * mpmath.harmonic(k), [1, mpmath.inf], method="euler-maclaurin")
        assert abs(value(e, 40) - ref) < mpf(10) ** -17
