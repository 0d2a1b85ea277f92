"""Weighted multiset enumeration and multinomial coefficients."""

from __future__ import annotations

from math import factorial
from typing import Hashable, List, Sequence, Tuple

Multiset = Tuple[Tuple[Hashable, int], ...]


def weighted_multisets(total: int, kinds: Sequence[Tuple[Hashable, int]]) -> List[Multiset]:
    """All multisets ((label, count), ...) over ``kinds`` = [(label, weight), ...]
    with sum(count * weight) == total.  Weights must be >= 1."""
    out: List[Multiset] = []
    kinds = list(kinds)

    def rec(idx: int, rest: int, acc: list) -> None:
        if rest == 0:
            out.append(tuple(acc))
            return
        if idx == len(kinds):
            return
        label, w = kinds[idx]
        for c in range(rest // w, -1, -1):
            if c:
                acc.append((label, c))
            rec(idx + 1, rest - c * w, acc)
            if c:
                acc.pop()

    if total >= 0:
        rec(0, total, [])
    return out


def multinomial(n: int, counts: Sequence[int]) -> int:
    """n! / prod(c!) with the remainder n - sum(counts) taken as one more part."""
    rest = n - sum(counts)
    if rest < 0:
        raise ValueError("counts exceed n")
    out = factorial(n) // factorial(rest)
    for c in counts:
        out //= factorial(c)
    return out

