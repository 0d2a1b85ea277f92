import math
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ltverify import decomposition as dec
from ltverify.decomposition import (DecompTable, MultiIndex2, all_multi_indices,
                                    binom_congruence_check, check_decomposition,
                                    check_prop_ord, check_support_symmetry, ord_bound,
                                    shifted_multinomial, top_power)
from ltverify.multiindex import multinomial, weighted_multisets
from ltverify.rfunc import r_func
from ltverify.scalars import FieldParams, XPoly, ord_at_one


def shifted_by_binomials(n, Q, r00, counts):
    """Same quantity as a product of binomials, peeling parts off one at a time."""
    out, left = 1, n + Q
    for c in counts:
        out *= math.comb(left, c)
        left -= c
    assert left == r00 + Q
    return out


def test_shifted_multinomial_examples():
    assert shifted_multinomial(1, 1, MultiIndex2(1, {}), 2) == 1
    assert shifted_multinomial(0, 1, MultiIndex2(0, {}), 3) == 1
    assert shifted_multinomial(2, 2, MultiIndex2(2, {}), 2) == 1


def test_shifted_ratio_outside_precondition():
    # (2 + 2)! / ((1 + 2)! * 1!) is 4, but n = q^t so the operation refuses it
    assert dec._shifted(2, 2, 1, [1]) == 4
    with pytest.raises(ValueError):
        shifted_multinomial(2, 1, MultiIndex2(1, {(1, 1): 1}), 2)


def test_shifted_multinomial_preconditions():
    with pytest.raises(ValueError):
        shifted_multinomial(2, 1, MultiIndex2(1, {}), 2)        # size mismatch
    with pytest.raises(ValueError):
        shifted_multinomial(2, 1, MultiIndex2(2, {}), 2)        # n >= q^t
    with pytest.raises(ValueError):
        MultiIndex2(0, {(1, 2): 1})
    with pytest.raises(ValueError):
        MultiIndex2(-1, {})


@given(st.integers(0, 6), st.integers(1, 3), st.sampled_from([2, 3, 5]), st.data())
def test_shifted_multinomial_matches_binomials(n, t, q, data):
    if n >= q ** t:
        return
    idx = data.draw(st.sampled_from(all_multi_indices(n, 2)))
    assert shifted_multinomial(n, t, idx, q) == shifted_by_binomials(
        n, q ** t, idx.r00, idx.counts())


@pytest.mark.parametrize("p,n_max", [(2, 8), (3, 6), (5, 5)])
def test_shifted_congruence_exhaustive(p, n_max):
    for n in range(n_max + 1):
        t = 1
        while p ** t <= n:
            t += 1
        for r in all_multi_indices(n, 3):
            assert binom_congruence_check(n, t, r, p, p)


def test_multinomial_and_multisets():
    assert multinomial(4, [2, 1]) == 12      # 4!/(2! 1! 1!)
    got = weighted_multisets(3, [("a", 1), ("b", 2)])
    assert sorted(got) == sorted([(("a", 3),), (("a", 1), ("b", 1))])


def test_top_power():
    assert [top_power(n, 3) for n in (1, 2, 3, 8, 9, 26, 27)] == [1, 1, 3, 3, 9, 9, 27]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_first_pieces(q):
    fp = FieldParams.from_q(q)
    t = DecompTable(fp)
    assert t.get(1, 1) == XPoly.from_ints([-1, 1], fp)
    if q >= 3:
        assert t.get(1, 0).is_zero()
    for n in range(2, q - 1):
        assert t.get(n, 0).is_zero()


def test_first_piece_q2():
    fp = FieldParams(2)
    assert DecompTable(fp).get(1, 0) == XPoly.from_ints([1, -1], fp)


@pytest.mark.parametrize("q,N", [(2, 8), (3, 7), (4, 4), (5, 4), (2, 3)])
def test_decomposition_consistency(q, N):
    fp = FieldParams.from_q(q)
    t = DecompTable(fp)
    for n in range(N + 1):
        r = check_decomposition(n, fp, t)
        assert r.passed, (n, r.details)


def test_decomposition_ramified():
    fp = FieldParams(2, 1, 2)
    t = DecompTable(fp)
    for n in range(5):
        assert check_decomposition(n, fp, t).passed


@pytest.mark.parametrize("q,N", [(2, 8), (3, 7), (5, 4)])
def test_vanishing_order_bound(q, N):
    fp = FieldParams.from_q(q)
    t = DecompTable(fp)
    for n in range(N + 1):
        for s in range(n + 1):
            r = check_prop_ord(n, s, fp, t)
            assert r.passed and r.details["exact_ok"], (n, s, r.details)


def test_vanishing_order_examples():
    fp = FieldParams(3)
    t = DecompTable(fp)
    assert ord_at_one(t.get(2, 1), "mod_pi") >= 1
    # n = s = T_1 = 4: order equals R(4) = q
    r = check_prop_ord(4, 4, fp, t)
    assert r.details["n_is_T"] and r.details["ord_mod_pi"] == 3 == r_func(4, 3)


@pytest.mark.parametrize("q,Ts", [(2, [1, 3, 7]), (3, [1, 4])])
def test_equality_at_T(q, Ts):
    fp = FieldParams.from_q(q)
    t = DecompTable(fp)
    for n in Ts:
        d = check_prop_ord(n, n, fp, t).details
        assert d["equality_mod_pi"] and d["equality_exact"]
        assert d["Q_n_corollary_ok"]


def test_ord_bound():
    assert ord_bound(4, 4, 3) == 3
    assert ord_bound(3, 1, 2) == 0      # R(1 - 4) = 0


def test_support_forward_direction():
    for q in (2, 3, 4, 5):
        assert check_support_symmetry(q).details["forward_ok"]


def test_support_converse_counterexample():
    r = check_support_symmetry(3)
    assert not r.details["converse_ok"]
    assert r.details["converse_witness"] == [6, 7]
    # c_6 d_7 = 0 while c_4 d_9 is nonzero
    from ltverify.period import coeff_val
    assert coeff_val("c", 6, 3) is None
    assert coeff_val("c", 4, 3) is not None and coeff_val("d", 9, 3) is not None
