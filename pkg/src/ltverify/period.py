"""Coefficients of the period functions phi_0, phi_1 and sup norms on critical discs.

phi_0 = sum c_n u^n and phi_1 = sum d_n u^n where c_n, d_n are pure powers of
pi supported on sums q^{e_0} + ... + q^{e_k} of distinct q-powers whose
exponents alternate in parity starting from even.  Odd k feeds phi_0, even k
feeds phi_1.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .scalars import INF, FieldParams, PiScalar, Val

Rep = Tuple[int, Tuple[int, ...]]

ENUM_BOUND = 10 ** 7


class TruncationError(RuntimeError):
    """The truncation cannot certify the requested norm."""

    def __init__(self, msg: str, suggested_n: int):
        super().__init__(f"{msg} (try N >= {suggested_n})")
        self.suggested_n = suggested_n


def _digits(n: int, q: int) -> List[int]:
    out = []
    while n:
        n, d = divmod(n, q)
        out.append(d)
    return out


def rep_decompose(n: int, q: int) -> Optional[Rep]:
    """(k, exponents) if n = q^{e_0} + ... + q^{e_k} with e_i = i mod 2, else None."""
    if n < 0:
        raise ValueError("n must be >= 0")
    exps = []
    for pos, d in enumerate(_digits(n, q)):
        if d > 1:
            return None
        if d == 1:
            exps.append(pos)
    if not exps:
        return None
    if any((ex - i) % 2 for i, ex in enumerate(exps)):
        return None
    return len(exps) - 1, tuple(exps)


def rep_enumerate(n: int, q: int, bound: int = ENUM_BOUND) -> List[Rep]:
    """Every representation of n, by brute force over exponent tuples.

    Exponents range over 0..log_q(n); any strictly increasing tuple with the
    parity pattern whose q-power sum equals n is reported.
    """
    if n > bound:
        raise ValueError(f"n={n} exceeds enumeration bound {bound}")
    if n <= 0:
        return []
    top = 0
    while q ** (top + 1) <= n:
        top += 1
    found = []
    for size in range(1, top + 2):
        for exps in combinations(range(top + 1), size):
            if any((ex - i) % 2 for i, ex in enumerate(exps)):
                continue
            if sum(q ** ex for ex in exps) == n:
                found.append((size - 1, exps))
    return found


def coeff_val(kind: str, n: int, q: int) -> Optional[int]:
    """pi-exponent of c_n (kind 'c') or d_n (kind 'd'); None when the coefficient is 0."""
    if kind not in ("c", "d"):
        raise ValueError(f"kind must be 'c' or 'd', got {kind!r}")
    if kind == "c" and n == 0:
        return 0
    if kind == "d" and n < 1:
        raise ValueError("d_n needs n >= 1")
    rep = rep_decompose(n, q)
    if rep is None:
        return None
    k = rep[0]
    if kind == "c":
        return -(k + 1) // 2 if k % 2 == 1 else None
    return -k // 2 if k % 2 == 0 else None


@lru_cache(maxsize=None)
def support(kind: str, n_max: int, q: int) -> Tuple[Tuple[int, int], ...]:
    """Sorted ((n, pi_exponent), ...) for the nonzero c_n or d_n with n <= n_max."""
    out = []
    if kind == "c":
        out.append((0, 0))
    if n_max < 1:
        return tuple(out)
    top = 0
    while q ** (top + 1) <= n_max:
        top += 1

    def walk(start: int, idx: int, total: int):
        # next exponent must be >= start and of parity idx
        ex = start + ((start - idx) % 2)
        while ex <= top:
            t = total + q ** ex
            if t > n_max:
                return
            k = idx
            if (kind == "c") == (k % 2 == 1):
                v = -(k + 1) // 2 if kind == "c" else -k // 2
                out.append((t, v))
            walk(ex + 1, idx + 1, t)
            ex += 2

    walk(0, 0, 0)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# truncated series


@dataclass(frozen=True)
class TailBound:
    """Lower bound shift - weight*(floor(log_q(n + offset)) + 1)/2 on the valuation
    of every coefficient beyond the truncation; non-increasing in n."""

    weight: int = 1
    shift: Fraction = Fraction(0)
    offset: int = 0

    def at(self, n: int, q: int) -> Fraction:
        m = n + self.offset
        j = 0
        while q ** (j + 1) <= m:
            j += 1
        return self.shift - Fraction(self.weight * (j + 1), 2)


@dataclass
class USeries:
    """Power series in u truncated at degree N, with a certified tail bound."""

    fp: FieldParams
    trunc: int
    coeffs: Dict[int, PiScalar]
    tail: TailBound = field(default_factory=TailBound)
    name: str = ""

    def __mul__(self, other: "USeries") -> "USeries":
        n = min(self.trunc, other.trunc)
        out: Dict[int, PiScalar] = {}
        for i, a in self.coeffs.items():
            if i > n:
                continue
            for j, b in other.coeffs.items():
                if i + j > n:
                    continue
                prod = a * b
                out[i + j] = out[i + j] + prod if i + j in out else prod
        out = {k: v for k, v in sorted(out.items()) if v}
        tail = TailBound(self.tail.weight + other.tail.weight,
                         self.tail.shift + other.tail.shift,
                         max(self.tail.offset, other.tail.offset))
        return USeries(self.fp, n, out, tail, f"{self.name}*{other.name}")

    def __sub__(self, other: "USeries") -> "USeries":
        n = min(self.trunc, other.trunc)
        out = {k: v for k, v in self.coeffs.items() if k <= n}
        for k, v in other.coeffs.items():
            if k <= n:
                out[k] = out[k] - v if k in out else -v
        out = {k: v for k, v in sorted(out.items()) if v}
        tail = TailBound(max(self.tail.weight, other.tail.weight),
                         min(self.tail.shift, other.tail.shift),
                         max(self.tail.offset, other.tail.offset))
        return USeries(self.fp, n, out, tail, f"({self.name}-{other.name})")

    def derivative(self) -> "USeries":
        out = {}
        for k, v in self.coeffs.items():
            if k >= 1:
                out[k - 1] = v * k
        tail = replace(self.tail, offset=self.tail.offset + 1)
        return USeries(self.fp, self.trunc - 1, out, tail, self.name + "'")

    def scale_pi(self, j: int) -> "USeries":
        pj = self.fp.pi_power(j)
        tail = replace(self.tail, shift=self.tail.shift + j)
        return USeries(self.fp, self.trunc, {k: v * pj for k, v in self.coeffs.items()},
                       tail, f"pi^{j}*{self.name}")


def phi_series(kind: str, N: int, fp: FieldParams) -> USeries:
    if N < 1:
        raise ValueError("truncation N must be >= 1")
    name = "phi0" if kind == "c" else "phi1"
    coeffs = {n: fp.pi_power(v) for n, v in support(kind, N, fp.q)}
    return USeries(fp, N, coeffs, TailBound(), name)


def build_series(which: str, N: int, fp: FieldParams) -> USeries:
    """Truncated series by name: phi0, phi1, phi0', phi1', eps, or a product
    such as ``phi0*phi1`` / ``phi0^2``."""
    which = which.replace(" ", "")
    if "*" in which:
        factors = which.split("*")
        out = build_series(factors[0], N, fp)
        for f in factors[1:]:
            out = out * build_series(f, N, fp)
        out.name = which
        return out
    if "^" in which:
        base, exp = which.split("^")
        return build_series("*".join([base] * int(exp)), N, fp)
    if which == "phi0":
        return phi_series("c", N, fp)
    if which == "phi1":
        return phi_series("d", N, fp)
    if which == "phi0'":
        return phi_series("c", N, fp).derivative()
    if which == "phi1'":
        return phi_series("d", N, fp).derivative()
    if which in ("eps", "epsilon"):
        p0 = phi_series("c", N, fp)
        p1 = phi_series("d", N, fp)
        out = p1.derivative() * p0 - p1 * p0.derivative()
        out.name = "eps"
        return out
    raise ValueError(f"unknown series {which!r}")


@dataclass(frozen=True)
class CriticalDisc:
    """Closed disc |u| <= |pi|^(1/((q+1) q^s))."""

    s: int
    q: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be >= 0")

    @property
    def radius_val(self) -> Fraction:
        return Fraction(1, (self.q + 1) * self.q ** self.s)


def disc_sup_val(series: USeries, disc: CriticalDisc) -> Val:
    """Exact valuation of the sup norm of the full series on the disc.

    The stored terms give a candidate minimum; the tail bound must show that
    no omitted term can reach it, otherwise TruncationError is raised.
    """
    q = series.fp.q
    rho = disc.radius_val
    best: Val = INF
    for n, c in series.coeffs.items():
        v = c.val() + rho * n
        if v < best:
            best = v
    tail = series.tail
    N = series.trunc
    if best == INF:
        raise TruncationError("no stored terms to compare against the tail", (N + 1) * q)
    # on each block floor(log_q(n + offset)) = j the bound is smallest at the left end
    j = 0
    while q ** (j + 1) <= N + 1 + tail.offset:
        j += 1
    while True:
        left = max(N + 1, q ** j - tail.offset)
        lower = rho * left + tail.shift - Fraction(tail.weight * (j + 1), 2)
        if lower <= best:
            raise TruncationError(
                f"tail of {series.name or 'series'} beyond N={N} may reach valuation {best}",
                max(2 * N, q ** (j + 1)))
        # from an unclipped block on, the block minima increase once q-steps outgrow w/2
        if left == q ** j - tail.offset and rho * (q ** (j + 1) - q ** j) * 2 >= tail.weight:
            return best
        j += 1


def sup_val_auto(which: str, disc: CriticalDisc, fp: FieldParams,
                 N: Optional[int] = None, max_rounds: int = 6) -> Tuple[Val, int]:
    """disc_sup_val with the default truncation, raised by factors of q on failure."""
    q = fp.q
    if N is None:
        N = (q + 1) * q ** (disc.s + 2)
    last = None
    for _ in range(max_rounds):
        try:
            return disc_sup_val(build_series(which, N, fp), disc), N
        except TruncationError as exc:
            last = exc
            N = max(N * q, exc.suggested_n)
    raise last


# ---------------------------------------------------------------------------
# closed forms


def sup_closed_form(which: str, s: int, q: int) -> Fraction:
    """Exponent of |pi| in the stated sup norms of phi0, phi1, phi0*phi1 on Delta_s."""
    qs = q ** s
    d = (q * q - 1) * qs
    if which == "phi0":
        if s % 2 == 0:
            return Fraction(-s, 2) + Fraction(qs - 1, d)
        return Fraction(-(s + 1), 2) + Fraction(q * qs - 1, d)
    if which == "phi1":
        if s % 2 == 0:
            return Fraction(-s, 2) + Fraction(q * qs - 1, d)
        return Fraction(-(s - 1), 2) + Fraction(qs - 1, d)
    if which == "phi0*phi1":
        return -s + Fraction(1, q - 1) - Fraction(2, d)
    raise ValueError(f"unknown function {which!r}")


# The three operator numerators, their series and pi-power scaling.
OPERATOR_QUANTITIES = {
    "pi_phi0_sq": ("phi0^2", 1),   # pi^(s+1) phi0^2
    "phi1_sq": ("phi1^2", 0),      # pi^s phi1^2
    "phi0_phi1": ("phi0*phi1", 0),  # pi^s phi0 phi1
}

OPERATOR_ALIASES = {
    "x2": "phi0_phi1",
    "y1-part-0": "pi_phi0_sq",
    "y1-part-1": "phi1_sq",
}


def operator_closed_forms(which: str, s: int, q: int) -> List[Fraction]:
    """All closed exponent forms for one operator quantity (they must agree)."""
    which = OPERATOR_ALIASES.get(which, which)
    qs = q ** s
    d = (q * q - 1) * qs
    rho = Fraction(1, (q + 1) * qs)
    tail = Fraction(1, (q - 1) * qs)
    big = [1 + Fraction(2 * qs - 2, d) - rho,
           1 + Fraction(2, q * q - 1) - tail,
           Fraction(q * q + 1, q * q - 1) - tail]
    small = [Fraction(2 * q * qs - 2, d) - rho,
             Fraction(2 * q, q * q - 1) - tail]
    if which == "pi_phi0_sq":
        return big if s % 2 == 0 else small
    if which == "phi1_sq":
        return small if s % 2 == 0 else big
    if which == "phi0_phi1":
        return [Fraction(1, q - 1) - Fraction(2, d) - rho,
                Fraction(1, q - 1) - tail]
    raise ValueError(f"unknown operator quantity {which!r}")


def operator_s0_value(which: str, q: int) -> Fraction:
    """The simplified s = 0 exponents of the two squared quantities."""
    which = OPERATOR_ALIASES.get(which, which)
    if which == "pi_phi0_sq":
        return Fraction(q, q + 1)
    if which == "phi1_sq":
        return Fraction(1, q + 1)
    raise ValueError(f"no s = 0 specialization for {which!r}")


def operator_estimate(which: str, s: int, fp: FieldParams, N: Optional[int] = None) -> Val:
    """Sup-norm valuation on Delta_s of pi^(s+a) * F * pi^(-1/((q+1)q^s)) for the
    named quantity F (see OPERATOR_QUANTITIES)."""
    which = OPERATOR_ALIASES.get(which, which)
    if which not in OPERATOR_QUANTITIES:
        raise ValueError(f"unknown operator quantity {which!r}")
    series, extra = OPERATOR_QUANTITIES[which]
    disc = CriticalDisc(s, fp.q)
    v, _ = sup_val_auto(series, disc, fp, N)
    return v + s + extra - disc.radius_val
