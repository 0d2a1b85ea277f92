"""Exact arithmetic in Z[pi, 1/pi, eta] and polynomials over it.

Scalars are elements of K = Q_q(pi) with pi^e = p, so that e = 1 gives the
unramified case with pi = p.  The formal unit eta = zeta^2 is kept as a free
symbol.  A scalar is stored canonically as a map

    (r, t) -> (a, k)     meaning   a * p^k * pi^r * eta^t

with 0 <= r < e and a a nonzero integer prime to p.  Canonical storage makes
equality structural and the valuation a plain minimum over the terms.

Valuations are Fractions; the zero element has valuation ``INF``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

from sympy import isprime

INF = math.inf

Val = Union[Fraction, float]  # float only ever holds INF

_Key = Tuple[int, int]
_Terms = Dict[_Key, Tuple[int, int]]


class NotIntegralError(ValueError):
    """Raised when a mod-pi reduction is requested for a non-integral scalar."""


@dataclass(frozen=True)
class FieldParams:
    """Parameters of the base field K: residue field F_q with q = p^f, and
    ramification index e (pi^e = p)."""

    p: int
    f: int = 1
    e: int = 1

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValueError(f"p must be prime, got {self.p!r}")
        if self.f < 1 or self.e < 1:
            raise ValueError(f"f and e must be >= 1, got f={self.f}, e={self.e}")

    @property
    def q(self) -> int:
        return self.p ** self.f

    @classmethod
    def from_q(cls, q: int, e: int = 1) -> "FieldParams":
        for p in range(2, q + 1):
            if q % p == 0:
                f = 0
                n = q
                while n % p == 0:
                    n //= p
                    f += 1
                if n != 1:
                    break
                return cls(p, f, e)
        raise ValueError(f"q must be a prime power, got {q}")

    def scalar(self, n: int = 0) -> "PiScalar":
        return PiScalar.from_int(n, self)

    def pi_power(self, j: int, coeff: int = 1, eta: int = 0) -> "PiScalar":
        return PiScalar.monomial(coeff, j, eta, self)

    def eta(self) -> "PiScalar":
        return PiScalar.monomial(1, 0, 1, self)


def _strip(a: int, p: int) -> Tuple[int, int]:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return a, v


def _acc(terms: dict, key, a: int, k: int, p: int) -> None:
    """Add a * p^k (a prime to p) into ``terms[key]`` keeping canonical form."""
    old = terms.get(key)
    if old is None:
        terms[key] = (a, k)
        return
    a0, k0 = old
    if k0 == k:
        s = a0 + a
        if s == 0:
            del terms[key]
            return
        while s % p == 0:
            s //= p
            k += 1
        terms[key] = (s, k)
    elif k0 < k:
        terms[key] = (a0 + a * p ** (k - k0), k0)
    else:
        terms[key] = (a + a0 * p ** (k0 - k), k)


def _num_str(a: int, k: int, p: int) -> str:
    if k >= 0:
        return str(a * p ** k)
    return f"{a}/{p ** -k}"


class PiScalar:
    """Element of Z[pi, 1/pi, eta] with pi^e = p.  Immutable."""

    __slots__ = ("p", "e", "terms")

    def __init__(self, terms: _Terms, p: int, e: int):
        self.p = p
        self.e = e
        self.terms = terms

    # construction -------------------------------------------------------

    @classmethod
    def monomial(cls, coeff: int, pi_exp: int, eta_exp: int, fp: FieldParams) -> "PiScalar":
        """coeff * pi^pi_exp * eta^eta_exp."""
        p, e = fp.p, fp.e
        if coeff == 0:
            return cls({}, p, e)
        m, r = divmod(pi_exp, e)
        a, v = _strip(coeff, p)
        return cls({(r, eta_exp): (a, m + v)}, p, e)

    @classmethod
    def from_int(cls, n: int, fp: FieldParams) -> "PiScalar":
        return cls.monomial(n, 0, 0, fp)

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[int, int, int]], fp: FieldParams) -> "PiScalar":
        """Build from (coeff, pi_exp, eta_exp) triples."""
        terms: _Terms = {}
        p, e = fp.p, fp.e
        for coeff, j, t in items:
            if coeff == 0:
                continue
            m, r = divmod(j, e)
            a, v = _strip(coeff, p)
            _acc(terms, (r, t), a, m + v, p)
        return cls(terms, p, e)

    def _like(self, terms: _Terms) -> "PiScalar":
        return PiScalar(terms, self.p, self.e)

    def _coerce(self, other) -> "PiScalar":
        if isinstance(other, PiScalar):
            if other.p != self.p or other.e != self.e:
                raise ValueError("scalars from different rings")
            return other
        if isinstance(other, int):
            if other == 0:
                return self._like({})
            a, v = _strip(other, self.p)
            return self._like({(0, 0): (a, v)})
        return NotImplemented

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for key, (a, k) in other.terms.items():
            _acc(terms, key, a, k, self.p)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({key: (-a, k) for key, (a, k) in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p, e = self.p, self.e
        terms: _Terms = {}
        for (r1, t1), (a1, k1) in self.terms.items():
            for (r2, t2), (a2, k2) in other.terms.items():
                r = r1 + r2
                k = k1 + k2
                if r >= e:
                    r -= e
                    k += 1
                _acc(terms, (r, t1 + t2), a1 * a2, k, p)
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self._like({(0, 0): (1, 0)})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        return self.p == other.p and self.e == other.e and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.e, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # valuation ------------------------------------------------------------

    def val(self) -> Val:
        """pi-adic valuation (eta is a unit); INF for zero."""
        if not self.terms:
            return INF
        e = self.e
        return Fraction(min(r + e * k for (r, _), (_, k) in self.terms.items()))

    def has_eta(self) -> bool:
        return any(t != 0 for (_, t) in self.terms)

    # display ----------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (r, t), (a, k) in sorted(self.terms.items()):
            s = _num_str(a, k, self.p)
            if r:
                s += "*pi" + (f"^{r}" if r > 1 else "")
            if t:
                s += "*eta" + (f"^{t}" if t > 1 else "")
            parts.append(s)
        return " + ".join(parts)


def scalar_val(s: PiScalar, fp: FieldParams | None = None) -> Val:
    """Valuation of ``s`` normalised by v(pi) = 1, so v(p) = e."""
    if fp is not None and (fp.p != s.p or fp.e != s.e):
        raise ValueError("scalar does not belong to the given field")
    return s.val()


def reduce_mod_pi(s: PiScalar, fp: FieldParams | None = None):
    """Image of a pi-integral scalar in the residue field.

    Returns an int in [0, p) for eta-free input.  With eta present the
    residue is a polynomial in the residue class of eta, returned as a
    sorted tuple of (eta_exp, coeff) pairs with the zeros removed.
    """
    if fp is not None and (fp.p != s.p or fp.e != s.e):
        raise ValueError("scalar does not belong to the given field")
    v = s.val()
    if v < 0:
        raise NotIntegralError(f"{s!r} has valuation {v} < 0")
    p = s.p
    residues: Dict[int, int] = {}
    for (r, t), (a, k) in s.terms.items():
        if r == 0 and k == 0:
            residues[t] = (residues.get(t, 0) + a) % p
    if not s.has_eta():
        return residues.get(0, 0)
    return tuple(sorted((t, c) for t, c in residues.items() if c))


# ---------------------------------------------------------------------------
# polynomials


_PKey = Tuple[int, int, int]  # (degree, r, eta_exp)


class XPoly:
    """Sparse polynomial in one variable with PiScalar coefficients.

    Stored flat as (degree, r, t) -> (a, k) so products run in a single loop.
    The same class serves for polynomials in x = E^(q+1) and in E itself.
    """

    __slots__ = ("p", "e", "terms")

    def __init__(self, terms: Dict[_PKey, Tuple[int, int]], p: int, e: int):
        self.p = p
        self.e = e
        self.terms = terms

    @classmethod
    def zero(cls, fp: FieldParams) -> "XPoly":
        return cls({}, fp.p, fp.e)

    @classmethod
    def one(cls, fp: FieldParams) -> "XPoly":
        return cls.monomial(0, fp.scalar(1))

    @classmethod
    def monomial(cls, deg: int, coeff: PiScalar | int, fp: FieldParams | None = None) -> "XPoly":
        if isinstance(coeff, int):
            coeff = PiScalar.from_int(coeff, fp)
        return cls({(deg, r, t): v for (r, t), v in coeff.terms.items()}, coeff.p, coeff.e)

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, PiScalar | int], fp: FieldParams) -> "XPoly":
        terms: dict = {}
        for d, c in coeffs.items():
            if isinstance(c, int):
                c = PiScalar.from_int(c, fp)
            for (r, t), (a, k) in c.terms.items():
                _acc(terms, (d, r, t), a, k, fp.p)
        return cls(terms, fp.p, fp.e)

    @classmethod
    def from_ints(cls, coeffs: Iterable[int], fp: FieldParams) -> "XPoly":
        """Dense integer coefficient list, constant term first."""
        return cls.from_coeffs(dict(enumerate(coeffs)), fp)

    def _like(self, terms) -> "XPoly":
        return XPoly(terms, self.p, self.e)

    def _check(self, other: "XPoly") -> None:
        if other.p != self.p or other.e != self.e:
            raise ValueError("polynomials from different rings")

    # structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max((d for d, _, _ in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((d for d, _, _ in self.terms), default=-1)

    def degrees(self):
        return sorted({d for d, _, _ in self.terms})

    def coeff(self, deg: int) -> PiScalar:
        return PiScalar(
            {(r, t): v for (d, r, t), v in self.terms.items() if d == deg}, self.p, self.e
        )

    def coeffs(self) -> Dict[int, PiScalar]:
        out: Dict[int, dict] = {}
        for (d, r, t), v in self.terms.items():
            out.setdefault(d, {})[(r, t)] = v
        return {d: PiScalar(ts, self.p, self.e) for d, ts in sorted(out.items())}

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, PiScalar)):
            other = XPoly.monomial(0, other if isinstance(other, PiScalar)
                                   else PiScalar({}, self.p, self.e) + other)
        self._check(other)
        terms = dict(self.terms)
        p = self.p
        for key, (a, k) in other.terms.items():
            _acc(terms, key, a, k, p)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({key: (-a, k) for key, (a, k) in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PiScalar({}, self.p, self.e) + other
        if isinstance(other, PiScalar):
            other = XPoly.monomial(0, other)
        if not isinstance(other, XPoly):
            return NotImplemented
        self._check(other)
        p, e = self.p, self.e
        terms: dict = {}
        for (d1, r1, t1), (a1, k1) in self.terms.items():
            for (d2, r2, t2), (a2, k2) in other.terms.items():
                r = r1 + r2
                k = k1 + k2
                if r >= e:
                    r -= e
                    k += 1
                _acc(terms, (d1 + d2, r, t1 + t2), a1 * a2, k, p)
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self._like({(0, 0, 0): (1, 0)})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def add_scaled(self, other: "XPoly", coeff: int, pi_exp: int = 0, shift: int = 0) -> "XPoly":
        """self + coeff * pi^pi_exp * x^shift * other."""
        self._check(other)
        if coeff == 0 or not other.terms:
            return self
        p, e = self.p, self.e
        m, rr = divmod(pi_exp, e)
        c, v = _strip(coeff, p)
        terms = dict(self.terms)
        for (d, r, t), (a, k) in other.terms.items():
            r2 = r + rr
            k2 = k + m + v
            if r2 >= e:
                r2 -= e
                k2 += 1
            _acc(terms, (d + shift, r2, t), a * c, k2, p)
        return self._like(terms)

    def iadd_scaled(self, other: "XPoly", coeff: int, pi_exp: int = 0, shift: int = 0) -> None:
        """In-place variant of :meth:`add_scaled`; only for privately owned accumulators."""
        if coeff == 0 or not other.terms:
            return
        p, e = self.p, self.e
        m, rr = divmod(pi_exp, e)
        c, v = _strip(coeff, p)
        terms = self.terms
        for (d, r, t), (a, k) in other.terms.items():
            r2 = r + rr
            k2 = k + m + v
            if r2 >= e:
                r2 -= e
                k2 += 1
            _acc(terms, (d + shift, r2, t), a * c, k2, p)

    def substitute_power(self, step: int, offset: int = 0) -> "XPoly":
        """x^offset * self(x^step)."""
        return self._like({(d * step + offset, r, t): v for (d, r, t), v in self.terms.items()})

    def collapse(self, step: int, offset: int = 0) -> "XPoly":
        """Inverse of :meth:`substitute_power`; raises if self is not of that form."""
        terms = {}
        for (d, r, t), v in self.terms.items():
            dd, rem = divmod(d - offset, step)
            if rem or dd < 0:
                raise ArithmeticError(
                    f"degree {d} is not of the form {offset} + {step}*j")
            terms[(dd, r, t)] = v
        return self._like(terms)

    def taylor_shift(self, center: int) -> "XPoly":
        """Coefficients of self in powers of y = x - center."""
        if center == 0 or not self.terms:
            return self
        p = self.p
        terms: dict = {}
        for (d, r, t), (a, k) in self.terms.items():
            for j in range(d + 1):
                c = math.comb(d, j) * center ** (d - j)
                if c:
                    c, v = _strip(c, p)
                    _acc(terms, (j, r, t), a * c, k + v, p)
        return self._like(terms)

    def eval_at(self, x0: int) -> PiScalar:
        return self.taylor_shift(x0).coeff(0)

    def min_coeff_val(self) -> Val:
        if not self.terms:
            return INF
        e = self.e
        return Fraction(min(r + e * k for (_, r, _), (_, k) in self.terms.items()))

    # comparison / display -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.p == other.p and self.e == other.e and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.e, frozenset(self.terms.items())))

    def to_str(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for d, c in self.coeffs().items():
            cs = repr(c)
            if len(c.terms) > 1:
                cs = f"({cs})"
            if d == 0:
                parts.append(cs)
            else:
                mono = var if d == 1 else f"{var}^{d}"
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"XPoly({self.to_str()})"


def gauss_val(Q: XPoly, center: int, c, fp: FieldParams | None = None) -> Val:
    """Valuation of the sup norm of Q on the closed disc |x - center| <= |pi|^c.

    Returns INF for the zero polynomial.
    """
    if center not in (0, 1):
        raise ValueError("center must be 0 or 1")
    c = Fraction(c)
    if c < 0:
        raise ValueError("disc exponent must be >= 0")
    shifted = Q.taylor_shift(center)
    best: Val = INF
    for j, coeff in shifted.coeffs().items():
        v = coeff.val() + c * j
        if v < best:
            best = v
    return best


def ord_at_one(Q: XPoly, mode: str = "exact", fp: FieldParams | None = None) -> int:
    """Largest m with (x-1)^m dividing Q, exactly or after reduction mod pi."""
    if mode not in ("exact", "mod_pi"):
        raise ValueError(f"unknown mode {mode!r}")
    shifted = Q.taylor_shift(1)
    coeffs = shifted.coeffs()
    if mode == "exact":
        if not coeffs:
            raise ValueError("ord_at_one of the zero polynomial")
        return min(coeffs)
    if shifted.min_coeff_val() < 0:
        raise NotIntegralError("reduction mod pi of a non-integral polynomial")
    for j, coeff in coeffs.items():
        red = reduce_mod_pi(coeff)
        if red:
            return j
    raise ValueError("polynomial vanishes mod pi")
