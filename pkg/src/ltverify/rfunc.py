"""Base-q digit combinatorics: T_r, the greedy T-expansion sigma, P, R' and R.

A digit sequence is a dict ``{l: n_l}`` with the zero digits left out.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List

import numpy as np

DigitSeq = Dict[int, int]

ORACLE_BOUND = 20000


def t_sum(r: int, q: int) -> int:
    """T_r = 1 + q + ... + q^r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return (q ** (r + 1) - 1) // (q - 1)


@lru_cache(maxsize=None)
def _t_list(q: int, bound: int) -> tuple:
    """(T_0, ..., T_r) with T_r <= bound < T_{r+1}."""
    out = [1]
    while out[-1] * q + 1 <= bound:
        out.append(out[-1] * q + 1)
    return tuple(out)


def sigma(n: int, q: int) -> DigitSeq:
    """Greedy expansion of n in the T_l; the zero sequence for n <= 0."""
    if n <= 0:
        return {}
    ts = _t_list(q, 1 << n.bit_length())
    digits: DigitSeq = {}
    rest = n
    for l in range(len(ts) - 1, -1, -1):
        if ts[l] <= rest:
            d, rest = divmod(rest, ts[l])
            digits[l] = d
    return digits


def p_sum(d: DigitSeq, q: int) -> int:
    return sum(n * t_sum(l, q) for l, n in d.items())


def r_prime(d: DigitSeq, q: int) -> int:
    return sum(n * q ** l for l, n in d.items())


def r_func(n: int, q: int) -> int:
    """R(n) = R'(sigma(n))."""
    return r_prime(sigma(n, q), q)


def is_sigma_shaped(d: DigitSeq, q: int) -> bool:
    """Digits <= q, at most one digit equal to q, and only zeros below it."""
    if any(v > q or v < 0 for v in d.values()):
        return False
    tops = [l for l, v in d.items() if v == q]
    if len(tops) > 1:
        return False
    if tops:
        l0 = tops[0]
        return all(l > l0 for l, v in d.items() if v and l != l0)
    return True


def r_oracle(n: int, q: int, bound: int = ORACLE_BOUND) -> int:
    """min R'(d) over every digit sequence with P(d) = n, by unbounded-coin DP.

    Independent of :func:`sigma`.  Raises for n beyond ``bound``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > bound:
        raise ValueError(f"n={n} exceeds the oracle bound {bound}")
    return int(r_oracle_table(n, q)[n])


def r_oracle_table(n_max: int, q: int) -> np.ndarray:
    """DP table best[m] = min R' over representations of m, for 0 <= m <= n_max."""
    coins: List[tuple] = []
    l = 0
    while t_sum(l, q) <= max(n_max, 1):
        coins.append((t_sum(l, q), q ** l))
        l += 1
    # T_0 = 1 at cost 1 seeds every entry; larger coins only relax.
    best = list(range(n_max + 1))
    for size, cost in coins[1:]:
        for m in range(size, n_max + 1):
            cand = best[m - size] + cost
            if cand < best[m]:
                best[m] = cand
    return np.array(best, dtype=np.int64)


def r_table(n_max: int, q: int) -> np.ndarray:
    """R(n) for 0 <= n <= n_max, computed digit by digit from sigma."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    ts = []
    l = 0
    while t_sum(l, q) <= max(n_max, 1):
        ts.append(t_sum(l, q))
        l += 1
    pows = [q ** l for l in range(len(ts))]
    for n in range(1, n_max + 1):
        rest = n
        total = 0
        for l in range(len(ts) - 1, -1, -1):
            t = ts[l]
            if t <= rest:
                d, rest = divmod(rest, t)
                total += d * pows[l]
        out[n] = total
    return out


def property_suite(q: int, n_max: int = 100_000, pair_lo: int = -50, pair_hi: int = 2000,
                mul_max: int = 10_000, oracle_max: int = 5000) -> Dict[str, dict]:
    """Checks the four properties of R plus left-inverse, shape and minimality.

    Each entry maps a check name to ``{"passed": bool, "range": ..., "witness": ...}``.
    """
    need = max(n_max, q * mul_max + 1, 2 * pair_hi, oracle_max)
    R = r_table(need, q)
    results: Dict[str, dict] = {}

    def rec(name, ok, rng, witness=None):
        results[name] = {"passed": bool(ok), "range": rng, "witness": witness}

    # left inverse and shape of sigma
    bad = None
    for n in range(n_max + 1):
        d = sigma(n, q)
        if p_sum(d, q) != n or not is_sigma_shaped(d, q) or r_prime(d, q) != R[n]:
            bad = n
            break
    rec("sigma_left_inverse_and_shape", bad is None, [0, n_max], bad)

    Rn = R[: n_max + 1]
    diff = np.diff(Rn)
    bad_idx = np.nonzero((diff < 0) | (diff > 1))[0]
    rec("R_monotone_step_le_1", bad_idx.size == 0, [0, n_max],
        None if bad_idx.size == 0 else int(bad_idx[0]))

    # R(n) = 0 for n < 0
    idx = np.arange(pair_lo, pair_hi + 1)
    Rij = np.where(idx < 0, 0, R[np.clip(idx, 0, None)])
    s = idx[:, None] + idx[None, :]
    Rs = np.where(s < 0, 0, R[np.clip(s, 0, None)])
    viol = np.argwhere(Rs > Rij[:, None] + Rij[None, :])
    rec("R_subadditive", viol.size == 0, [pair_lo, pair_hi],
        None if viol.size == 0 else [int(idx[viol[0][0]]), int(idx[viol[0][1]])])

    ns = np.arange(1, mul_max + 1)
    viol = np.nonzero(q * R[ns] < R[q * ns + 1])[0]
    rec("qR(n)_ge_R(qn+1)", viol.size == 0, [1, mul_max],
        None if viol.size == 0 else int(ns[viol[0]]))

    ns = np.arange(0, n_max + 1)
    # R(n) >= (q-1)n/q  <=>  q R(n) >= (q-1) n, equality only at 0
    lhs = q * R[ns]
    rhs = (q - 1) * ns
    viol = np.nonzero((lhs < rhs) | ((lhs == rhs) & (ns != 0)))[0]
    rec("R_lower_bound_strict", viol.size == 0, [0, n_max],
        None if viol.size == 0 else int(ns[viol[0]]))

    best = r_oracle_table(oracle_max, q)
    viol = np.nonzero(best != R[: oracle_max + 1])[0]
    rec("R_equals_oracle_minimum", viol.size == 0, [0, oracle_max],
        None if viol.size == 0 else int(viol[0]))
    return results
