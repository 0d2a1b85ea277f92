from fractions import Fraction

import pytest
import sympy as sp

from ltverify.period import rep_enumerate
from ltverify.scalars import FieldParams, XPoly, gauss_val
from ltverify.suite import explicit_display
from ltverify.torus_action import (ActionOracle, ActionTable, check_disc_stability,
                                   check_norm_bound, check_Q_structure, oracle_agreement)

u, E, x = sp.symbols("u E x")


def _sym_coeff(kind, n, q):
    if kind == "c" and n == 0:
        return sp.Integer(1)
    reps = rep_enumerate(n, q)
    if not reps:
        return sp.Integer(0)
    k = reps[0][0]
    if (kind == "c") != (k % 2 == 1):
        return sp.Integer(0)
    return sp.Rational(1, q ** ((k + 1) // 2 if kind == "c" else k // 2))


def sympy_action(q, M):
    """a_1..a_M from E*phi1(u)*phi0(A) = phi0(u)*phi1(A) by truncated sympy series,
    with pi = p (unramified, f = 1)."""
    c = [_sym_coeff("c", n, q) for n in range(M + 1)]
    d = [sp.Integer(0)] + [_sym_coeff("d", n, q) for n in range(1, M + 1)]

    def trunc(expr, n):
        P = sp.Poly(sp.expand(expr), u)
        return sum(cf * u ** m for (m,), cf in P.terms() if m <= n)

    def compose(cs, A, n):
        out, Ap = 0, sp.Integer(1)
        for j in range(n + 1):
            if cs[j]:
                out += cs[j] * Ap
            Ap = trunc(Ap * A, n)
        return out

    a = [sp.Integer(0), E]
    for n in range(2, M + 1):
        A = sum(a[i] * u ** i for i in range(1, n))
        p0 = sum(c[j] * u ** j for j in range(n + 1))
        p1 = sum(d[j] * u ** j for j in range(n + 1))
        expr = E * p1 * compose(c, A, n) - p0 * compose(d, A, n)
        a.append(sp.expand(sp.Poly(sp.expand(expr), u).coeff_monomial(u ** n)))
    return a


def as_sympy(P: XPoly):
    out = 0
    for deg, cf in P.coeffs().items():
        for (r, t), (a, k) in cf.terms.items():
            assert r == 0 and t == 0
            out += sp.Rational(a) * sp.Integer(P.p) ** k * x ** deg
    return sp.expand(out)


FROZEN = {
    (2, 1): [1, -1],
    (2, 2): [1, -4, 3],
    (2, 3): [-5, -10, 21, -6],
    (2, 4): [-7, 4, 84, -60, -21],
    (3, 1): [-1, 1],
    (3, 2): [10, -5, -5],
    (3, 3): [-1, 60, 45, -104],
    (3, 4): [1, -215, -630, 1352, -508],
}


@pytest.mark.parametrize("q,n", sorted(FROZEN))
def test_frozen_Q(q, n):
    fp = FieldParams.from_q(q)
    assert ActionTable(fp).compute(n)[n] == XPoly.from_ints(FROZEN[(q, n)], fp)


@pytest.mark.parametrize("q", [2, 3])
def test_frozen_values_match_sympy_oracle(q):
    N = 3
    a = sympy_action(q, 1 + N * (q + 1))
    for n in range(N + 1):
        b = a[1 + n * (q + 1)]
        Q = sp.expand(sp.expand(b * q ** n / E).subs(E, x ** sp.Rational(1, q + 1)))
        want = sum(cf * x ** i for i, cf in enumerate(FROZEN.get((q, n), [1])))
        assert Q == sp.expand(want)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_low_coefficients(q):
    fp = FieldParams.from_q(q)
    a = ActionOracle(fp).solve(q + 2)
    assert a[0].is_zero()
    assert a[1] == XPoly.monomial(1, fp.scalar(1))
    assert all(a[n].is_zero() for n in range(2, q + 2))


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_first_nonlinear_coefficient(q):
    fp = FieldParams.from_q(q)
    a = ActionOracle(fp).solve(q + 2)
    # pi^{-1} E (E^{q+1} - 1)
    want = XPoly.from_coeffs({q + 2: fp.pi_power(-1), 1: fp.pi_power(-1, -1)}, fp)
    assert a[q + 2] == want


def test_first_nonlinear_coefficient_q2_has_opposite_sign():
    fp = FieldParams(2)
    a = ActionOracle(fp).solve(4)
    want = XPoly.from_coeffs({4: fp.pi_power(-1, -1), 1: fp.pi_power(-1)}, fp)
    assert a[4] == want


@pytest.mark.parametrize("q", [2, 3])
def test_vanishing_off_pattern(q):
    fp = FieldParams.from_q(q)
    a = ActionOracle(fp).solve(30)
    assert all(a[n].is_zero() for n in range(31) if (n - 1) % (q + 1))


@pytest.mark.parametrize("q,N", [(2, 6), (3, 5), (4, 3), (5, 3), (7, 2), (2, 1)])
def test_oracle_agreement(q, N):
    r = oracle_agreement(N, FieldParams.from_q(q))
    assert r.passed, r.details


def test_oracle_agreement_ramified():
    assert oracle_agreement(3, FieldParams(2, 1, 2)).passed
    assert oracle_agreement(2, FieldParams(3, 1, 3)).passed


@pytest.mark.parametrize("q", [7, 8, 9, 11])
def test_closed_low_order_expressions_hold_for_large_q(q):
    fp = FieldParams.from_q(q)
    table = ActionTable(fp)
    for n in range(1, 5):
        assert table.compute(n)[n] == explicit_display(n, q, fp)


def test_closed_low_order_expressions_differ_for_small_q():
    """Small q pick up extra contributions from d_{q^2} and later coefficients."""
    fp = FieldParams(3)
    Q2 = ActionTable(fp).compute(2)[2]
    diff = Q2 - explicit_display(2, 3, fp)
    assert diff == XPoly.from_ints([9, 0, -9], fp)
    with pytest.raises(ValueError):
        explicit_display(5, 3, fp)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_Q_structure(q):
    fp = FieldParams.from_q(q)
    table, oracle = ActionTable(fp), ActionOracle(fp)
    for n in range(7 if q < 5 else 4):
        r = check_Q_structure(n, fp, table, oracle)
        assert r.passed, r.details


@pytest.mark.parametrize("q", [2, 3, 5])
def test_main_bound(q):
    fp = FieldParams.from_q(q)
    table = ActionTable(fp)
    for n in range(11):
        for c in (1, Fraction(1, 2), Fraction(q, q + 1)):
            assert check_norm_bound(n, c, fp, table).passed


def test_main_bound_values():
    fp = FieldParams(3)
    r = check_norm_bound(2, 1, fp)
    # Q_2 = 10 - 5x - 5x^2 = -15y - 5y^2 on |y| <= |3|
    assert r.details["value"] == gauss_val(XPoly.from_ints([10, -5, -5], fp), 1, 1) - 2 == 0
    assert r.details["bound"] == Fraction(-4, 3)
    with pytest.raises(ValueError):
        check_norm_bound(2, Fraction(9, 10), fp)


@pytest.mark.parametrize("q", [2, 3])
def test_disc_stability_equality_at_s0(q):
    fp = FieldParams.from_q(q)
    for n in range(6):
        r = check_disc_stability(n, 0, fp)
        assert r.passed and r.details["value"] == r.details["bound"]


@pytest.mark.parametrize("q", [2, 3])
def test_disc_stability_fails_beyond_s0(q):
    """The termwise inequality reduces to n / q^s >= n, false for s >= 1, n >= 1."""
    fp = FieldParams.from_q(q)
    for s in range(1, 4):
        assert check_disc_stability(0, s, fp).passed
        for n in range(1, 5):
            assert not check_disc_stability(n, s, fp).passed


def test_b_as_E_poly():
    fp = FieldParams(3)
    b1 = ActionTable(fp).b_as_E_poly(1)
    assert b1 == XPoly.from_coeffs({5: fp.pi_power(-1), 1: fp.pi_power(-1, -1)}, fp)
