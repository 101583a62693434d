from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lacunary.bigpoly import (
    IntPolynomial,
    RationalComplex,
    _karatsuba,
    _schoolbook,
    derivative,
    eval_exact,
    exponent_gcd_split,
    height,
    length,
    mul,
    power,
    primitive_part,
    squarefree_part,
)
from lacunary.errors import PolynomialError

P = IntPolynomial
coeff_lists = st.lists(st.integers(-50, 50), max_size=12)
polys = coeff_lists.map(IntPolynomial)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=20)


def test_mul_examples():
    assert mul(P([1, 1]), P([1, -1])) == P([1, 0, -1])
    assert mul(P([]), P([3, 0, 0, 0, 0, 1])).is_zero()
    assert mul(P([1, 1, 1]), P([-1, 1])) == P([-1, 0, 0, 1])


def test_pow_examples():
    assert power(P([1, 1]), 2) == P([1, 2, 1])
    assert power(P([0, 1]), 3) == P([0, 0, 0, 1])
    assert power(P([-1, 2]), 0) == P([1])


def test_derivative_examples():
    assert derivative(P([0, 0, 0, 1]), 1) == P([0, 0, 3])
    assert derivative(P([1, 2, 1]), 2) == P([2])
    assert derivative(P([0, 0, 1]), 3).is_zero()


def test_length_and_height_examples():
    assert length(P([1, -2, 3])) == 6
    assert length(P([])) == 0
    assert length(P([1, 1]) ** 2) == 4
    assert height(P([1, -2, 3])) == 3
    assert height(P([7])) == 7
    assert height(P([0, 0, 0, 0, 0, 1])) == 1


def test_eval_exact_examples():
    assert eval_exact(P([1, 1]), Fraction(1, 2)) == RationalComplex(Fraction(3, 2))
    assert eval_exact(P([1, 0, 1]), RationalComplex(0, 1)) == RationalComplex(0, 0)
    assert eval_exact(P([1, 1, 1]), Fraction(1, 3)) == RationalComplex(Fraction(13, 9))


def test_exponent_gcd_split_examples():
    assert exponent_gcd_split(P([0, 0, 1, 0, 1])) == (2, P([0, 1, 1]))
    assert exponent_gcd_split(P([0, 0, 0, 1])) == (3, P([0, 1]))
    assert exponent_gcd_split(P([0, 1, 1])) == (1, P([0, 1, 1]))
    with pytest.raises(PolynomialError, match="undefined gcd"):
        exponent_gcd_split(P([]))


def test_primitive_part_examples():
    assert primitive_part(P([2, -4])) == P([1, -2])
    assert primitive_part(P([0, 0, -3])) == P([0, 0, 1])
    assert primitive_part(P([5, 10, -15])) == P([1, 2, -3])
    with pytest.raises(PolynomialError):
        primitive_part(P([]))


def test_zero_polynomial_has_no_degree():
    assert P([0, 0]).degree is None
    assert P([0, 0]).coeffs == ()
    assert P([3, 0, 5, 0, 0]).support() == [0, 2]


def test_string_form():
    assert str(P([1, 0, -1])) == "1 - z^2"
    assert P.from_strings(P([12, -7]).to_strings()) == P([12, -7])


@given(coeff_lists, coeff_lists)
def test_product_matches_sympy(a, b):
    z = sympy.Symbol("z")
    expected = sympy.Poly(sympy.Poly(list(reversed(a)) or [0], z) * sympy.Poly(list(reversed(b)) or [0], z), z)
    got = mul(P(a), P(b))
    assert list(reversed(expected.all_coeffs())) == (list(got.coeffs) or [0])


@given(st.lists(st.integers(-10**30, 10**30), min_size=41, max_size=130),
       st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=130))
def test_karatsuba_equals_schoolbook(a, b):
    assert IntPolynomial(_karatsuba(a, b)) == IntPolynomial(_schoolbook(a, b))


@given(polys, polys)
def test_length_is_subadditive_and_submultiplicative(p, q):
    assert length(p + q) <= length(p) + length(q)
    assert length(p * q) <= length(p) * length(q)


@given(polys)
def test_height_at_most_length(p):
    assert height(p) <= length(p)


@given(polys, rationals, rationals)
def test_value_bounded_by_length_in_disc(p, x, y):
    z = RationalComplex(x, y)
    if z.abs2() > 1:
        return
    assert eval_exact(p, z).abs2() <= length(p) ** 2


@given(polys, polys, rationals, rationals)
def test_evaluation_is_multiplicative(p, q, x, y):
    z = RationalComplex(x, y)
    assert eval_exact(p * q, z) == eval_exact(p, z) * eval_exact(q, z)


@given(polys, polys, st.integers(-5, 5))
def test_derivative_linear_and_leibniz(p, q, c):
    assert derivative(p * c + q, 1) == derivative(p, 1) * c + derivative(q, 1)
    assert derivative(p * q, 1) == derivative(p, 1) * q + p * derivative(q, 1)


@given(rationals, rationals, rationals)
def test_rational_complex_exact(a, b, c):
    x, y = RationalComplex(a, b), RationalComplex(c, a)
    assert (x + y) - y == x


@given(polys.filter(lambda p: not p.is_zero() and p.degree > 0))
def test_squarefree_part_matches_sympy(p):
    z = sympy.Symbol("z")
    sp = sympy.Poly(list(reversed(p.coeffs)), z)
    _, factors = sympy.factor_list(sp.as_expr(), z)
    expected = sympy.Integer(1)
    for f, _ in factors:
        if sympy.Poly(f, z).degree() > 0:
            expected *= f
    got = squarefree_part(p)
    ratio = sympy.cancel(sympy.Poly(list(reversed(got.coeffs)), z).as_expr() / expected)
    assert ratio.is_number


@given(polys.filter(lambda p: not p.is_zero()))
def test_gcd_split_roundtrip(p):
    d, q = exponent_gcd_split(p)
    rebuilt = q.compose(IntPolynomial.monomial(d))
    assert rebuilt == p
