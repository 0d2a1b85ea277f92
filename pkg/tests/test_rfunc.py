import numpy as np
import pytest
from hypothesis import given, strategies as st

from ltverify import rfunc
from ltverify.rfunc import (is_sigma_shaped, property_suite, p_sum, r_func, r_oracle, r_prime,
                            r_table, sigma, t_sum)


def brute_min_weight(n, q):
    """Min sum of q^l over multisets of T_l summing to n, by plain recursion."""
    ts = []
    l = 0
    while t_sum(l, q) <= n:
        ts.append((t_sum(l, q), q ** l))
        l += 1
    best = {0: 0}
    for m in range(1, n + 1):
        best[m] = min(best[m - t] + w for t, w in ts if t <= m)
    return best[n]


def test_t_sum():
    assert [t_sum(r, 2) for r in range(4)] == [1, 3, 7, 15]
    assert [t_sum(r, 3) for r in range(3)] == [1, 4, 13]
    with pytest.raises(ValueError):
        t_sum(-1, 2)


def test_sigma_examples():
    assert sigma(4, 3) == {1: 1}
    assert sigma(0, 3) == {} and sigma(-5, 2) == {}
    assert sigma(6, 2) == {1: 2}
    assert sigma(10, 2) == {2: 1, 1: 1}


def test_r_examples():
    assert r_func(7, 2) == 4
    assert r_func(13, 3) == 9
    assert r_func(0, 5) == 0
    assert r_oracle(4, 3) == 3


def test_r_oracle_bound():
    with pytest.raises(ValueError):
        r_oracle(10, 2, bound=5)
    with pytest.raises(ValueError):
        r_oracle(-1, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_r_table_matches_scalar_and_brute(q):
    tab = r_table(300, q)
    assert all(tab[n] == r_func(n, q) == brute_min_weight(n, q) for n in range(301))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_oracle_table_matches_brute(q):
    tab = rfunc.r_oracle_table(200, q)
    assert all(int(tab[n]) == brute_min_weight(n, q) for n in range(201))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_sigma_is_shaped_left_inverse(n, q):
    d = sigma(n, q)
    assert p_sum(d, q) == n
    assert is_sigma_shaped(d, q)


@given(st.integers(0, 10 ** 5), st.integers(0, 10 ** 5), st.sampled_from([2, 3, 4, 5]))
def test_r_subadditive(a, b, q):
    assert r_func(a + b, q) <= r_func(a, q) + r_func(b, q)


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4, 5, 8, 9]))
def test_r_steps(n, q):
    step = r_func(n + 1, q) - r_func(n, q)
    assert step in (0, 1)


@given(st.integers(1, 10 ** 6), st.sampled_from([2, 3, 4, 5, 8, 9]))
def test_r_multiplicative_bound_and_lower_bound(n, q):
    assert q * r_func(n, q) >= r_func(q * n + 1, q)
    assert q * r_func(n, q) > (q - 1) * n


def test_is_sigma_shaped_rejects():
    assert not is_sigma_shaped({0: 4}, 3)
    assert not is_sigma_shaped({0: 3, 1: 3}, 3)
    assert not is_sigma_shaped({0: 1, 1: 3}, 3)
    assert is_sigma_shaped({1: 3, 2: 1}, 3)


def test_r_prime_of_non_greedy_is_not_smaller():
    # 8 = 2*T_1 + 2*T_0 for q = 2 is not greedy; greedy is T_2 + T_0
    assert r_prime({1: 2, 0: 2}, 2) >= r_func(8, 2)


def test_property_suite_small():
    res = property_suite(3, n_max=2000, pair_hi=200, mul_max=500, oracle_max=500)
    assert all(v["passed"] for v in res.values()), res
    assert set(res) >= {"R_subadditive", "R_equals_oracle_minimum"}
    assert isinstance(r_table(10, 2), np.ndarray)
