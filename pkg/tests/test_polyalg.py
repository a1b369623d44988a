from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlgram import polyalg
from tlgram.polyalg import (
    ExponentCapError,
    InexactDivisionError,
    Poly,
    chebyshev_t,
    eval_int,
    exact_div,
    substitute_squares,
)

a = Poly.monomial(1, 0)
d = Poly.monomial(0, 1)


def polys(max_terms=8, max_exp=6, max_coeff=20):
    term = st.tuples(st.integers(0, max_exp), st.integers(0, max_exp))
    return st.dictionaries(term, st.integers(-max_coeff, max_coeff), max_size=max_terms).map(Poly)


def nonzero_polys(**kw):
    return polys(**kw).filter(lambda p: not p.is_zero())


# --- examples --------------------------------------------------------------------

def test_add_cancels():
    assert (d + (-d)).is_zero()
    assert d - d == 0


def test_mul_difference_of_squares():
    assert (d - 1) * (d + 1) == d**2 - 1


def test_pow_matches_binomial_expansion():
    # (d^2 - 1)^4 = sum_k C(4,k) (-1)^(4-k) d^(2k)
    expected = Poly({(0, 2 * k): comb(4, k) * (-1) ** (4 - k) for k in range(5)})
    got = (d**2 - 1) ** 4
    assert got == expected
    assert got.leading_term() == ((0, 8), 1)
    assert got.terms[(0, 0)] == 1


@pytest.mark.parametrize("num, den, quot", [
    (d**2 - 1, d - 1, d + 1),
    (a * a * d * d - a**4, a * a, d * d - a * a),
])
def test_exact_div_examples(num, den, quot):
    assert exact_div(num, den) == quot


def test_exact_div_by_one():
    p = 3 * a * d**2 - 7 * d + 5
    assert exact_div(p, Poly.const(1)) == p
    assert exact_div(p, 1) == p


def test_exact_div_rejects_inexact():
    with pytest.raises(InexactDivisionError):
        exact_div(d**2 + 1, d - 1)
    with pytest.raises(InexactDivisionError):
        exact_div(d + 1, Poly.const(2))
    with pytest.raises(ZeroDivisionError):
        exact_div(d, Poly())


def test_eval_examples():
    assert eval_int(d**2 - 1, 1, 3) == 8
    assert eval_int(a**2 * (d**2 - a**2), 2, 3) == 20
    assert eval_int(chebyshev_t(3), 1, 2) == 2


def test_chebyshev_first_terms():
    assert chebyshev_t(0) == 2
    assert chebyshev_t(1) == d
    assert chebyshev_t(2) == d**2 - 2
    assert chebyshev_t(3) == d**3 - 3 * d


@pytest.mark.parametrize("i", range(9))
def test_chebyshev_at_t_plus_inverse(i):
    # T_i(t + 1/t) = t^i + t^-i, evaluated exactly in rationals at t = 2
    x = Fraction(2) + Fraction(1, 2)
    value = sum(Fraction(c) * x**ed for (_, ed), c in chebyshev_t(i).terms.items())
    assert value == Fraction(2) ** i + Fraction(1, 2**i)


def test_substitute_squares():
    assert substitute_squares(d) == d**2
    assert substitute_squares(a * d**3) == a**2 * d**6
    assert substitute_squares(d - 1) == d**2 - 1


def test_exponent_cap():
    big = Poly.monomial(0, polyalg.EXPONENT_CAP)
    with pytest.raises(ExponentCapError):
        big * d
    with pytest.raises(ExponentCapError):
        substitute_squares(big)


# --- serialisation ---------------------------------------------------------------

def test_text_form():
    assert str(chebyshev_t(3)) == "d^3-3*d"
    assert str(a**2 * d**2 - a**4) == "a^2*d^2-a^4"
    assert str(Poly()) == "0"
    assert str(Poly.const(-4)) == "-4"


def test_json_form():
    p = a**2 * d**2 - a**4
    assert p.to_json() == [{"ea": 2, "ed": 2, "c": "1"}, {"ea": 4, "ed": 0, "c": "-1"}]
    assert Poly.from_json(p.to_json()) == p


@given(polys())
def test_text_round_trip(p):
    assert Poly.parse(str(p)) == p


@given(polys(max_coeff=10**30))
def test_json_round_trip(p):
    assert Poly.from_json(p.to_json()) == p


# --- ring properties ---------------------------------------------------------------

@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0


@given(polys(), nonzero_polys())
def test_exact_div_inverts_mul(p, q):
    assert exact_div(p * q, q) == p


@given(polys(), polys(), st.integers(-5, 5), st.integers(-5, 5))
def test_eval_is_homomorphism(p, q, alpha, delta):
    assert eval_int(p * q, alpha, delta) == eval_int(p, alpha, delta) * eval_int(q, alpha, delta)
    assert eval_int(p + q, alpha, delta) == eval_int(p, alpha, delta) + eval_int(q, alpha, delta)


# --- packed kernels against the dictionary kernels ------------------------------------

big = polys(max_terms=60, max_exp=25, max_coeff=10**12)


@settings(max_examples=60, deadline=None)
@given(big, big)
def test_packed_mul_matches_dict(p, q):
    if p.is_zero() or q.is_zero():
        return
    assert polyalg._mul_packed(p, q) == polyalg._mul_dict(p, q)


@settings(max_examples=60, deadline=None)
@given(big, big.filter(lambda p: not p.is_zero()))
def test_packed_div_matches_long_division(p, q):
    if p.is_zero():
        return
    prod = polyalg._mul_dict(p, q)
    assert polyalg._exact_div_packed(prod, q) == p
    assert polyalg._exact_div_long(prod, q) == p


def test_packed_div_detects_inexact():
    p = (d + 1) ** 30 * (a + 2) ** 10 + 1
    with pytest.raises(InexactDivisionError):
        polyalg._exact_div_packed(p, (d + 1) ** 5)


def test_packed_div_with_large_quotient_coefficients():
    # quotient coefficients far larger than the dividend's first guess width
    q = (d + a + 1) ** 20
    b = d - 1
    assert polyalg._exact_div_packed(q * b, b) == q
