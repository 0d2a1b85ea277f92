"""Splitting b_N into pieces b_{N,s} = pi^{-s} E Q_{N,s}(E^{q+1}) with controlled
vanishing order at x = 1.

Multi-indices run over pairs (k, i) with 0 <= i <= k; the pair (0, 0) stands
for b_{0,0} = E and its count r_{0,0} is whatever is left after the k >= 1
parts are placed.  Every summand of the recursion for b_N is routed to one of
eight groups according to the order of (m, l), the size of r_{0,0} and
whether p divides its multinomial; the group fixes which s it lands in.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Optional, Tuple

from .multiindex import multinomial, weighted_multisets
from .period import coeff_val, support
from .report import Report
from .rfunc import r_func, t_sum
from .scalars import INF, FieldParams, NotIntegralError, XPoly, ord_at_one
from .torus_action import ActionTable

Label = Tuple[int, int]  # (k, i)


class MultiIndex2:
    """Counts r_{k,i} >= 1 for k >= 1 plus the count r_{0,0}."""

    __slots__ = ("r00", "entries")

    def __init__(self, r00: int, entries: Dict[Label, int]):
        for (k, i), c in entries.items():
            if not (0 <= i <= k) or k < 1 or c < 1:
                raise ValueError(f"bad entry r_{k},{i} = {c}")
        if r00 < 0:
            raise ValueError("r_{0,0} must be >= 0")
        self.r00 = r00
        self.entries = dict(entries)

    @classmethod
    def from_multiset(cls, size: int, ms) -> "MultiIndex2":
        entries = dict(ms)
        return cls(size - sum(entries.values()), entries)

    @property
    def size(self) -> int:
        return self.r00 + sum(self.entries.values())

    @property
    def wk(self) -> int:
        return sum(k * c for (k, _), c in self.entries.items())

    @property
    def wi(self) -> int:
        return sum(i * c for (_, i), c in self.entries.items())

    def counts(self) -> List[int]:
        return list(self.entries.values())

    def __repr__(self):
        return f"MultiIndex2(r00={self.r00}, {self.entries})"


def shifted_multinomial(n: int, t: int, r: MultiIndex2, q: int) -> int:
    """(n + q^t)! / ((r_{0,0} + q^t)! * prod_{k>0} r_{k,i}!)."""
    Q = q ** t
    if r.size != n:
        raise ValueError(f"|r| = {r.size} but n = {n}")
    if n >= Q:
        raise ValueError(f"need n < q^t, got n={n}, q^t={Q}")
    return _shifted(n, Q, r.r00, r.counts())


def _shifted(n: int, Q: int, r00: int, counts: Iterable[int]) -> int:
    out = factorial(n + Q) // factorial(r00 + Q)
    for c in counts:
        out //= factorial(c)
    return out


def binom_congruence_check(n: int, t: int, r: MultiIndex2, p: int, q: int) -> bool:
    """p divides the shifted multinomial minus the plain one."""
    return (shifted_multinomial(n, t, r, q) - multinomial(n, r.counts())) % p == 0


def all_multi_indices(n: int, max_k: int) -> List[MultiIndex2]:
    """Every MultiIndex2 of size n with k-parts up to ``max_k`` (for exhaustive checks)."""
    kinds = [((k, i), k) for k in range(1, max_k + 1) for i in range(k + 1)]
    out = []
    for total in range(0, n * max_k + 1):
        for ms in weighted_multisets(total, kinds):
            if sum(c for _, c in ms) <= n:
                out.append(MultiIndex2.from_multiset(n, ms))
    return out


def top_power(n: int, q: int) -> int:
    """q^floor(log_q n), exactly."""
    Q = 1
    while Q * q <= n:
        Q *= q
    return Q


class DecompositionError(ArithmeticError):
    pass


class DecompTable:
    """Q_{n,s} for 0 <= s <= n, built level by level."""

    def __init__(self, fp: FieldParams, action: Optional[ActionTable] = None):
        self.fp = fp
        self.q = fp.q
        self.action = action or ActionTable(fp)
        one = XPoly.one(fp)
        self.Q: Dict[Tuple[int, int], XPoly] = {(0, 0): one}
        self.level = 0
        self.direct_zero: Dict[int, XPoly] = {0: one}
        self.below_zero_terms: Dict[int, int] = {0: 0}
        self.congruence_failures: List[tuple] = []
        self._prod: Dict[tuple, XPoly] = {(): one}
        self._ms: Dict[int, list] = {}

    def get(self, n: int, s: int) -> XPoly:
        self.compute(n)
        if not 0 <= s <= n:
            raise ValueError(f"need 0 <= s <= n, got ({n}, {s})")
        return self.Q.get((n, s), XPoly.zero(self.fp))

    def row(self, n: int) -> List[XPoly]:
        return [self.get(n, s) for s in range(n + 1)]

    # enumeration --------------------------------------------------------

    def _multisets(self, D: int):
        got = self._ms.get(D)
        if got is None:
            kinds = [((k, i), k) for k in range(1, D + 1) for i in range(k + 1)
                     if self.Q.get((k, i)) is not None and self.Q[(k, i)].terms]
            got = []
            for ms in weighted_multisets(D, kinds):
                counts = [c for _, c in ms]
                j = sum(lab[1] * c for lab, c in ms)
                got.append((ms, sum(counts), j, counts))
            self._ms[D] = got
        return got

    def _product(self, ms) -> XPoly:
        got = self._prod.get(ms)
        if got is not None:
            return got
        lab, r = ms[-1]
        rest = ms[:-1] + (((lab, r - 1),) if r > 1 else ())
        got = self._product(rest) * self.Q[lab]
        self._prod[ms] = got
        return got

    # one level ------------------------------------------------------------

    def compute(self, N: int) -> None:
        while self.level < N:
            self._build(self.level + 1)
            self.level += 1

    def _build(self, N: int) -> None:
        q, p, fp = self.q, self.fp.p, self.fp
        step = q + 1
        top = N * step + 1
        # acc[s][a]: x-polynomial multiplying E^a in pi^s b_{N,s}
        acc: Dict[int, Dict[int, XPoly]] = {}
        below = 0

        def add(s: int, a: int, prod: XPoly, coeff: int, nu_j: int) -> None:
            # the summand is coeff * pi^{nu_j} * E^a * prod before scaling by pi^s
            nonlocal below
            if s < 0:
                below += 1
                s = 0
            slot = acc.setdefault(s, {})
            cur = slot.get(a)
            if cur is None:
                cur = slot[a] = XPoly.zero(fp)
            cur.iadd_scaled(prod, coeff, s + nu_j)

        cs = support("c", top, q)
        ds = support("d", top, q)
        for m, vm in cs:
            for l, vl in ds:
                if m + l > top:
                    break
                if m + l <= 1:
                    continue
                if (m + l - 1) % step:
                    raise DecompositionError(f"pair ({m}, {l}) breaks the mod q+1 pattern")
                base = (m + l - 1) // step
                D = N - base
                if D < 0:
                    continue
                nu = vm + vl
                if m < l:
                    Q = top_power(l, q)
                    for ms, nparts, j, counts in self._multisets(D):
                        s1 = j - nu
                        if nparts <= m:
                            prod = self._product(ms)
                            r00 = m - nparts
                            bm = multinomial(m, counts)
                            # group 1: (E - E^Q) binom(m; r)
                            add(s1, m + 1, prod, bm, nu - j)
                            add(s1, m + Q, prod, -bm, nu - j)
                            # group 2: E^Q (binom(m; r) - binom(m+Q; r+Q)), one s lower
                            if m >= Q:
                                raise DecompositionError(
                                    f"shifted multinomial needs m < q^t: (m, l) = ({m}, {l})")
                            diff = bm - _shifted(m, Q, r00, counts)
                            if diff % p:
                                self.congruence_failures.append((N, m, l, ms))
                            add(s1 - 1, m + Q, prod, diff, nu - j)
                        if nparts <= l and l - nparts < Q:
                            prod = self._product(ms)
                            bl = multinomial(l, counts)
                            if bl % p:
                                add(s1, l, prod, -bl, nu - j)          # group 3
                            else:
                                add(s1 - 1, l, prod, -bl, nu - j)  # group 4
                else:
                    Q = top_power(m, q)
                    for ms, nparts, j, counts in self._multisets(D):
                        s1 = j - nu
                        if nparts <= l:
                            prod = self._product(ms)
                            r00 = l - nparts
                            bl = multinomial(l, counts)
                            # group 5: (E^{1+Q} - 1) binom(l; r)
                            add(s1, l + 1 + Q, prod, bl, nu - j)
                            add(s1, l, prod, -bl, nu - j)
                            # group 6: E^{1+Q} (binom(l+Q; r+Q) - binom(l; r)), one s lower
                            if l >= Q:
                                raise DecompositionError(
                                    f"shifted multinomial needs l < q^t: (m, l) = ({m}, {l})")
                            diff = _shifted(l, Q, r00, counts) - bl
                            if diff % p:
                                self.congruence_failures.append((N, m, l, ms))
                            add(s1 - 1, l + 1 + Q, prod, diff, nu - j)
                        if nparts <= m and m - nparts < Q:
                            prod = self._product(ms)
                            bm = multinomial(m, counts)
                            if bm % p:
                                add(s1, m + 1, prod, bm, nu - j)          # group 7
                            else:
                                add(s1 - 1, m + 1, prod, bm, nu - j)  # group 8

        rows: Dict[int, XPoly] = {}
        for s, slot in acc.items():
            raw = XPoly.zero(fp)
            for a, poly in slot.items():
                raw = raw + poly.substitute_power(step, a)
            try:
                rows[s] = raw.collapse(step, 1)
            except ArithmeticError as exc:
                raise DecompositionError(f"level {N}, s = {s}: {exc}") from None
            if s > N:
                if raw.terms:
                    raise DecompositionError(f"level {N}: nonzero piece at s = {s} > N")
        for s in range(1, N + 1):
            poly = rows.get(s)
            if poly is not None and poly.terms:
                self.Q[(N, s)] = poly
        # s = 0 by the remainder definition
        QN = self.action.compute(N)[N]
        rem = XPoly.zero(fp).add_scaled(QN, 1, -N)
        for s in range(1, N + 1):
            poly = self.Q.get((N, s))
            if poly is not None:
                rem = rem.add_scaled(poly, -1, -s)
        if rem.terms:
            self.Q[(N, 0)] = rem
        self.direct_zero[N] = rows.get(0, XPoly.zero(fp))
        self.below_zero_terms[N] = below


# ---------------------------------------------------------------------------
# checks


def check_decomposition(n: int, fp: FieldParams, table: Optional[DecompTable] = None) -> Report:
    """Sum identity, integrality of every piece, and the direct s = 0 sum
    against the remainder definition."""
    table = table or DecompTable(fp)
    row = table.row(n)
    QN = table.action.compute(n)[n]
    total = XPoly.zero(fp)
    for s, poly in enumerate(row):
        total = total.add_scaled(poly, 1, n - s)
    integral = {s: poly.min_coeff_val() >= 0 for s, poly in enumerate(row)}
    parts = {
        "sum_identity": total == QN,
        "integral": all(integral.values()),
        "direct_zero_matches_remainder": table.direct_zero[n] == row[0],
        "binomial_congruence": not any(f[0] <= n for f in table.congruence_failures),
    }
    failed = [k for k, v in parts.items() if not v]
    witness = None
    if not parts["integral"]:
        witness = min(s for s, ok in integral.items() if not ok)
    elif failed:
        witness = failed[0]
    return Report("decomposition", not failed, {"q": fp.q, "n": n}, parts, witness)


def _ord(poly: XPoly, mode: str):
    if not poly.terms:
        return INF
    try:
        return ord_at_one(poly, mode)
    except NotIntegralError:
        raise
    except ValueError:
        # vanishes mod pi
        return INF


def ord_bound(n: int, s: int, q: int) -> int:
    return r_func(s - 2 * ((n - s) // (q - 1)), q)


def check_prop_ord(n: int, s: int, fp: FieldParams, table: Optional[DecompTable] = None) -> Report:
    """Vanishing order of Q_{n,s} at x = 1 against R(s - 2 floor((n-s)/(q-1))),
    in exact and mod-pi modes.  For s = n also the equality case and the
    mod-pi statement for Q_n itself."""
    q = fp.q
    table = table or DecompTable(fp)
    poly = table.get(n, s)
    bound = ord_bound(n, s, q)
    ord_exact = _ord(poly, "exact")
    ord_mod = _ord(poly, "mod_pi")
    details = {
        "bound": bound,
        "ord_exact": ord_exact,
        "ord_mod_pi": ord_mod,
        "exact_ok": ord_exact >= bound,
        "mod_pi_ok": ord_mod >= bound,
    }
    boundary = n > 0 and s == 2 * ((n - s) // (q - 1))
    if boundary:
        details["boundary"] = True
        details["boundary_mod_pi_ok"] = ord_mod >= 1
        details["boundary_exact_ok"] = ord_exact >= 1
    if s == n:
        Rn = r_func(n, q)
        details["R(n)"] = Rn
        is_T = any(t_sum(l, q) == n for l in range(n + 1) if t_sum(l, q) <= n)
        details["n_is_T"] = is_T
        details["equality_exact"] = ord_exact == Rn
        details["equality_mod_pi"] = ord_mod == Rn
        Qn = table.action.compute(n)[n]
        details["Q_n_mod_pi_ord"] = _ord(Qn, "mod_pi")
        details["Q_n_corollary_ok"] = details["Q_n_mod_pi_ord"] >= Rn
    passed = details["mod_pi_ok"] and details.get("boundary_mod_pi_ok", True)
    return Report("vanishing_order", passed, {"q": q, "n": n, "s": s}, details,
                  None if passed else (n, s))


def check_support_symmetry(q: int, limit: Optional[int] = None) -> Report:
    """For all m + l <= limit with m != l: c_m d_l != 0 should hold iff the
    partner product is nonzero, where the partner of (m, l) is
    (l - Q, m + Q) with Q = q^floor(log_q l) when l > m, and
    (l + Q, m - Q) with Q = q^floor(log_q m) when m > l.

    Both directions are reported separately; ``passed`` requires both.
    """
    limit = limit if limit is not None else 2 * q ** 3

    def nz(kind, n):
        if n < 0 or (kind == "d" and n < 1):
            return False
        return coeff_val(kind, n, q) is not None

    forward = converse = None
    for m in range(0, limit + 1):
        for l in range(1, limit + 1 - m):
            if m == l:
                continue
            if l > m:
                Q = top_power(l, q)
                partner = nz("c", l - Q) and nz("d", m + Q)
            else:
                Q = top_power(m, q)
                partner = nz("c", l + Q) and nz("d", m - Q)
            here = nz("c", m) and nz("d", l)
            if here and not partner and forward is None:
                forward = [m, l]
            if partner and not here and converse is None:
                converse = [m, l]
    details = {"forward_ok": forward is None, "converse_ok": converse is None,
               "forward_witness": forward, "converse_witness": converse}
    ok = forward is None and converse is None
    return Report("support_symmetry", ok, {"q": q, "limit": limit}, details,
                  None if ok else (forward or converse))
