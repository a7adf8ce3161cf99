from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfkit.poly import D, L1, L2, MultiPoly, unknown, var_name

d = MultiPoly.var(D)
l = MultiPoly.var(L1)
m = MultiPoly.var(L2)

coefficients = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def polys(draw, variables=(D, L1, L2)):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        mono = draw(
            st.dictionaries(st.sampled_from(variables), st.integers(1, 3), max_size=2)
        )
        terms[tuple(sorted(mono.items()))] = draw(coefficients)
    return MultiPoly(terms)


class TestArithmetic:
    def test_cancellation(self):
        assert (d + 2 * l) + (-d) == 2 * l

    def test_product(self):
        assert d * l == MultiPoly({((D, 1), (L1, 1)): Fraction(1)})

    def test_expansion(self):
        assert (d + 2 * l) * (d + 2 * l) == d**2 + 4 * d * l + 4 * l**2

    def test_zero_is_unique(self):
        assert (d - d) == MultiPoly.zero()
        assert not (d - d)

    @given(p=polys(), q=polys(), r=polys())
    @settings(max_examples=60, deadline=None)
    def test_ring_laws(self, p, q, r):
        assert p + q == q + p
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + (-p) == MultiPoly.zero()

    @given(p=polys(), q=polys())
    @settings(max_examples=40, deadline=None)
    def test_addition_is_canonical(self, p, q):
        # identical stored term sets, not just mathematical equality
        left, right = p + q, q + p
        assert list(left.terms()) == list(right.terms())


class TestSubstitution:
    def test_skew_substitution(self):
        assert (d + 2 * l).substitute(L1, -l - d) == -d - 2 * l

    def test_shift(self):
        assert (d + 2 * l).substitute(L1, l + m) == d + 2 * l + 2 * m

    def test_instantiated_action_coefficient(self):
        a, b = Fraction(1), Fraction(0)
        p = (a - 1) * d + a * l - b
        assert p.eval_at(L1, 0) == MultiPoly.zero()

    @given(p=polys(), q=polys(), r=polys(variables=(D, L2)))
    @settings(max_examples=60, deadline=None)
    def test_substitute_is_a_homomorphism(self, p, q, r):
        assert (p * q).substitute(L1, r) == p.substitute(L1, r) * q.substitute(L1, r)
        assert (p + q).substitute(L1, r) == p.substitute(L1, r) + q.substitute(L1, r)

    @given(p=polys(variables=(D, L1)))
    @settings(max_examples=40, deadline=None)
    def test_substitution_composition(self, p):
        assert p.substitute(L1, l + m).eval_at(L2, 0) == p

    def test_eval_at_constants(self):
        assert (d + 2 * l).eval_at(L1, 0) == d
        assert (l * l - 1).eval_at(L1, 1) == MultiPoly.zero()

    def test_constant_difference_vanishes(self):
        k = MultiPoly.const(5)
        expr = 2 * k * (k - k.eval_at(D, 0))
        assert expr == MultiPoly.zero()


class TestCoefficientList:
    def test_linear(self):
        assert (d + 2 * l).coefficient_list(L1) == [d, MultiPoly.const(2)]

    def test_absent_variable(self):
        assert (d**2).coefficient_list(L1) == [d**2]

    def test_scaled(self):
        p = 3 * (d + 2 * l)
        assert p.coefficient_list(L1) == [3 * d, MultiPoly.const(6)]

    def test_zero(self):
        assert MultiPoly.zero().coefficient_list(L1) == []

    @given(p=polys())
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, p):
        rebuilt = MultiPoly.zero()
        for k, coeff in enumerate(p.coefficient_list(L1)):
            assert L1 not in coeff.variables()
            rebuilt = rebuilt + coeff * MultiPoly.var(L1, k)
        assert rebuilt == p


class TestRendering:
    @pytest.mark.parametrize(
        "poly,text",
        [
            (d + 2 * l, "d + 2*l"),
            (-d - 2 * l, "-d - 2*l"),
            (d**2 + 4 * d * l + 4 * l**2, "d^2 + 4*d*l + 4*l^2"),
            (MultiPoly.zero(), "0"),
            (MultiPoly.const(Fraction(-3, 2)), "-3/2"),
            (Fraction(1, 2) * d + MultiPoly.var(unknown(0)), "1/2*d + u0"),
        ],
    )
    def test_text(self, poly, text):
        assert str(poly) == text

    def test_var_names(self):
        assert [var_name(v) for v in (D, L1, L2, unknown(0), unknown(12))] == [
            "d",
            "l",
            "m",
            "u0",
            "u12",
        ]

    def test_terms_order_is_graded_lex(self):
        p = 1 + d + l + d * l + d**2
        monos = [mono for mono, _ in p.terms()]
        assert monos == [
            ((D, 2),),
            ((D, 1), (L1, 1)),
            ((D, 1),),
            ((L1, 1),),
            (),
        ]


class TestEvaluate:
    @given(p=polys())
    @settings(max_examples=40, deadline=None)
    def test_matches_substitution(self, p):
        values = {D: Fraction(2), L1: Fraction(-1, 2), L2: Fraction(3)}
        step = p
        for var, value in values.items():
            step = step.eval_at(var, value)
        assert step.constant_value() == p.evaluate(values)
