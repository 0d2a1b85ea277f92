from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from ltverify.scalars import (INF, FieldParams, NotIntegralError, PiScalar, XPoly,
                              gauss_val, ord_at_one, reduce_mod_pi)

FIELDS = [FieldParams(2), FieldParams(3), FieldParams(5), FieldParams(2, 1, 2), FieldParams(3, 2, 3)]


def padic_val(x: Fraction, p: int) -> int:
    """Independent p-adic valuation of a nonzero rational via sympy."""
    num = sp.multiplicity(p, abs(x.numerator)) if x.numerator else None
    return num - sp.multiplicity(p, x.denominator)


@st.composite
def scalars(draw, fp=None):
    fp = fp or draw(st.sampled_from(FIELDS))
    n = draw(st.integers(0, 4))
    items = [(draw(st.integers(-30, 30)), draw(st.integers(-3, 4)), draw(st.integers(0, 2)))
             for _ in range(n)]
    return fp, PiScalar.from_terms(items, fp)


@st.composite
def polys(draw, fp, max_deg=5, eta=False):
    deg = draw(st.integers(0, max_deg))
    coeffs = {}
    for d in range(deg + 1):
        items = [(draw(st.integers(-20, 20)), draw(st.integers(-2, 3)),
                  draw(st.integers(0, 1)) if eta else 0) for _ in range(draw(st.integers(0, 2)))]
        coeffs[d] = PiScalar.from_terms(items, fp)
    return XPoly.from_coeffs(coeffs, fp)


# ---------------------------------------------------------------------------
# field parameters


def test_field_params_q_and_from_q():
    assert FieldParams(3, 2).q == 9
    assert FieldParams.from_q(8) == FieldParams(2, 3)
    assert FieldParams.from_q(5, e=2) == FieldParams(5, 1, 2)


@pytest.mark.parametrize("bad", [dict(p=4), dict(p=3, f=0), dict(p=3, e=0)])
def test_field_params_reject(bad):
    with pytest.raises(ValueError):
        FieldParams(**bad)


def test_from_q_rejects_non_prime_power():
    with pytest.raises(ValueError):
        FieldParams.from_q(12)


# ---------------------------------------------------------------------------
# scalars


def test_pi_power_relation():
    fp = FieldParams(3, 1, 2)
    assert fp.pi_power(2) == fp.scalar(3)
    assert fp.pi_power(1).val() == 1
    assert fp.scalar(9).val() == 4


def test_zero_valuation_is_inf():
    fp = FieldParams(2)
    assert fp.scalar(0).val() == INF
    assert (fp.scalar(4) - 4).is_zero()


def test_eta_is_a_unit():
    fp = FieldParams(5)
    assert fp.eta().val() == 0
    assert (fp.eta() * 25).val() == 2


def test_canonical_carry():
    fp = FieldParams(2)
    assert fp.scalar(1) + fp.scalar(1) == fp.pi_power(1)
    assert (fp.scalar(3) + fp.scalar(5)).val() == 3


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(st.fractions().filter(lambda x: x != 0))
def test_valuation_matches_rational_oracle(p, x):
    fp = FieldParams(p)
    s = PiScalar.from_terms([(x.numerator, 0, 0)], fp)
    inv_den = PiScalar.from_terms([(1, -sp.multiplicity(p, x.denominator), 0)], fp)
    # only the p-part of the denominator is representable; the rest is a unit
    assert (s * inv_den).val() == padic_val(x, p)


@given(st.data())
def test_valuation_additive(data):
    fp, a = data.draw(scalars())
    _, b = data.draw(scalars(fp))
    if a.is_zero() or b.is_zero():
        assert (a * b).val() == INF
    elif not a.has_eta() and not b.has_eta():
        assert (a * b).val() == a.val() + b.val()
    else:
        assert (a * b).val() >= a.val() + b.val()


@given(st.data())
def test_ultrametric(data):
    fp, a = data.draw(scalars())
    _, b = data.draw(scalars(fp))
    assert (a + b).val() >= min(a.val(), b.val())
    if a.val() != b.val() and not a.has_eta() and not b.has_eta():
        assert (a + b).val() == min(a.val(), b.val())


@given(st.data())
def test_ring_axioms(data):
    fp, a = data.draw(scalars())
    _, b = data.draw(scalars(fp))
    _, c = data.draw(scalars(fp))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == fp.scalar(0)


def test_reduce_mod_pi():
    fp = FieldParams(5)
    assert reduce_mod_pi(fp.scalar(-1)) == 4
    assert reduce_mod_pi(fp.scalar(10)) == 0
    assert reduce_mod_pi(fp.scalar(2) + fp.eta() * 3) == ((0, 2), (1, 3))
    with pytest.raises(NotIntegralError):
        reduce_mod_pi(fp.pi_power(-1))


def test_reduce_mod_pi_ramified():
    fp = FieldParams(3, 1, 2)
    assert reduce_mod_pi(fp.pi_power(1) + 2) == 2


# ---------------------------------------------------------------------------
# polynomials


def _sym(P: XPoly, x):
    """Sympy image of an eta-free polynomial for e = 1."""
    out = 0
    for d, c in P.coeffs().items():
        val = 0
        for (r, t), (a, k) in c.terms.items():
            assert r == 0 and t == 0
            val += sp.Rational(a) * sp.Integer(P.p) ** k
        out += val * x ** d
    return sp.expand(out)


def test_from_ints_and_degree():
    fp = FieldParams(3)
    P = XPoly.from_ints([1, 0, -2], fp)
    assert P.degree() == 2
    assert P.coeff(1).is_zero()
    assert XPoly.zero(fp).degree() == -1


def test_to_str():
    fp = FieldParams(3)
    assert XPoly.from_ints([10, -5, -5], fp).to_str() == "10 + -5*x + -5*x^2"


@given(st.data())
def test_poly_arithmetic_matches_sympy(data):
    fp = FieldParams(3)
    P = data.draw(polys(fp))
    Q = data.draw(polys(fp))
    x = sp.Symbol("x")
    assert _sym(P * Q, x) == sp.expand(_sym(P, x) * _sym(Q, x))
    assert _sym(P + Q, x) == sp.expand(_sym(P, x) + _sym(Q, x))


@given(st.data(), st.sampled_from([1, 2, 3]))
def test_substitute_then_collapse(data, step):
    fp = FieldParams(2, 1, 2)
    P = data.draw(polys(fp, eta=True))
    for offset in (0, 1):
        assert P.substitute_power(step, offset).collapse(step, offset) == P


def test_collapse_rejects():
    fp = FieldParams(2)
    with pytest.raises(ArithmeticError):
        XPoly.from_ints([0, 1, 1], fp).collapse(2, 0)


@given(st.data(), st.integers(-3, 3))
def test_taylor_shift_round_trip(data, c):
    fp = FieldParams(5)
    P = data.draw(polys(fp, eta=True))
    assert P.taylor_shift(c).taylor_shift(-c) == P


@given(st.data(), st.integers(-4, 4))
def test_eval_at_matches_sympy(data, x0):
    fp = FieldParams(3)
    P = data.draw(polys(fp))
    x = sp.Symbol("x")
    got = P.eval_at(x0)
    want = _sym(P, x).subs(x, x0)
    assert _sym(XPoly.monomial(0, got), x) == want


# ---------------------------------------------------------------------------
# Gauss norms and orders


def test_gauss_val_examples():
    fp = FieldParams(3)
    P = XPoly.from_ints([-1, 1], fp)  # x - 1
    assert gauss_val(P, 0, 0) == 0
    assert gauss_val(P, 1, Fraction(1, 2)) == Fraction(1, 2)
    assert gauss_val(XPoly.zero(fp), 1, 1) == INF


def test_gauss_val_bad_args():
    fp = FieldParams(3)
    with pytest.raises(ValueError):
        gauss_val(XPoly.one(fp), 2, 0)
    with pytest.raises(ValueError):
        gauss_val(XPoly.one(fp), 0, -1)


@settings(max_examples=60)
@given(st.data(), st.sampled_from([0, 1]),
       st.fractions(min_value=0, max_value=3, max_denominator=6))
def test_gauss_multiplicative(data, center, c):
    fp = FieldParams(2)
    P = data.draw(polys(fp, max_deg=4))
    Q = data.draw(polys(fp, max_deg=4))
    assert gauss_val(P * Q, center, c) == gauss_val(P, center, c) + gauss_val(Q, center, c)


def test_ord_at_one():
    fp = FieldParams(3)
    y = XPoly.from_ints([-1, 1], fp)
    P = y ** 3 * XPoly.from_ints([2, 1], fp)
    assert ord_at_one(P, "exact") == 3
    # x + 2 = (x - 1) + 3 vanishes at 1 mod 3
    assert ord_at_one(P, "mod_pi") == 4
    with pytest.raises(ValueError):
        ord_at_one(P, "other")
    with pytest.raises(NotIntegralError):
        ord_at_one(XPoly.monomial(0, fp.pi_power(-1)), "mod_pi")


@given(st.data())
def test_exact_order_le_mod_pi_order(data):
    fp = FieldParams(2)
    P = data.draw(polys(fp))
    k = data.draw(st.integers(0, 3))
    P = P * XPoly.from_ints([-1, 1], fp) ** k
    if P.is_zero() or P.min_coeff_val() < 0:
        return
    try:
        m = ord_at_one(P, "mod_pi")
    except ValueError:
        return  # vanishes identically mod pi
    assert ord_at_one(P, "exact") <= m
