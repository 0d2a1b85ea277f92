"""Matrix model of the quaternion algebra, its coordinate group law, the Lie
algebra basis, the lattices h_s, h_0', g_s and valuation-level membership
predicates.

Elements of the unramified quadratic extension are pairs (a, b) = a + zeta*b
with zeta^2 = eta kept formal and conjugation (a, b) -> (a, -b).  The pair
class is generic over its coefficient ring, so the same code runs on sympy
expressions (for identities in indeterminates) and on PiScalars.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from .report import Report
from .scalars import INF, Val

A1, A2, B1, B2 = sp.symbols("a1 a2 b1 b2")
A1p, A2p, B1p, B2p = sp.symbols("a1p a2p b1p b2p")
PI, ETA = sp.symbols("pi eta")


class K2Pair:
    """a + zeta*b with zeta^2 = eta."""

    __slots__ = ("a", "b", "eta")

    def __init__(self, a: Any, b: Any, eta: Any = ETA):
        self.a = a
        self.b = b
        self.eta = eta

    def _wrap(self, other) -> "K2Pair":
        if isinstance(other, K2Pair):
            return other
        return K2Pair(other, 0 * self.b, self.eta)

    def __add__(self, other):
        o = self._wrap(other)
        return K2Pair(self.a + o.a, self.b + o.b, self.eta)

    __radd__ = __add__

    def __neg__(self):
        return K2Pair(-self.a, -self.b, self.eta)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        return K2Pair(self.a * o.a + self.eta * self.b * o.b,
                      self.a * o.b + self.b * o.a, self.eta)

    __rmul__ = __mul__

    def conj(self) -> "K2Pair":
        return K2Pair(self.a, -self.b, self.eta)

    def norm(self):
        """alpha * conj(alpha) = a^2 - eta b^2."""
        return self.a * self.a - self.eta * self.b * self.b

    def expand(self) -> "K2Pair":
        return K2Pair(sp.expand(self.a), sp.expand(self.b), self.eta)

    def is_zero(self) -> bool:
        return _is_zero(self.a) and _is_zero(self.b)

    def __eq__(self, other):
        if not isinstance(other, K2Pair):
            other = self._wrap(other)
        return (self - other).is_zero()

    def __repr__(self):
        return f"({self.a}) + zeta*({self.b})"


def _is_zero(x) -> bool:
    if isinstance(x, sp.Basic):
        return sp.expand(x) == 0
    return x == 0


ZETA = K2Pair(0, 1)
ONE = K2Pair(1, 0)
ZERO = K2Pair(0, 0)

Matrix = List[List[K2Pair]]


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return [[x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)] for i in range(2)]


def mat_sub(x: Matrix, y: Matrix) -> Matrix:
    return [[x[i][j] - y[i][j] for j in range(2)] for i in range(2)]


def mat_scale(c: Any, x: Matrix) -> Matrix:
    c = c if isinstance(c, K2Pair) else K2Pair(c, 0)
    return [[c * x[i][j] for j in range(2)] for i in range(2)]


def mat_add(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = [[out[i][j] + m[i][j] for j in range(2)] for i in range(2)]
    return out


def mat_eq(x: Matrix, y: Matrix) -> bool:
    return all(x[i][j] == y[i][j] for i in range(2) for j in range(2))


def mat_det(x: Matrix) -> K2Pair:
    return x[0][0] * x[1][1] - x[0][1] * x[1][0]


def quat_matrix(a1, a2, b1, b2, pi=PI, eta=ETA) -> Matrix:
    """[[alpha, pi*conj(beta)], [beta, conj(alpha)]] with alpha = a1 + zeta a2,
    beta = b1 + zeta b2."""
    alpha = K2Pair(a1, a2, eta)
    beta = K2Pair(b1, b2, eta)
    return [[alpha, beta.conj() * pi], [beta, alpha.conj()]]


def comultiply(g: Sequence, h: Sequence, pi=PI, eta=ETA) -> Tuple:
    """Coordinates of the product g*h in the group law on (a1, a2, b1, b2)."""
    a1, a2, b1, b2 = g
    c1, c2, d1, d2 = h
    return (
        a1 * c1 + eta * a2 * c2 + pi * b1 * d1 - eta * pi * b2 * d2,
        a2 * c1 + a1 * c2 + pi * b1 * d2 - pi * b2 * d1,
        a1 * d1 - eta * a2 * d2 + b1 * c1 + eta * b2 * c2,
        a1 * d2 - a2 * d1 + b1 * c2 + b2 * c1,
    )


def delta(a1, a2, b1, b2, pi=PI, eta=ETA):
    """a1^2 - eta a2^2 - pi (b1^2 - eta b2^2)."""
    return a1 ** 2 - eta * a2 ** 2 - pi * (b1 ** 2 - eta * b2 ** 2)


GENERIC_G = (A1, A2, B1, B2)
GENERIC_H = (A1p, A2p, B1p, B2p)


def comult_check(g: Sequence = GENERIC_G, h: Sequence = GENERIC_H, pi=PI, eta=ETA) -> bool:
    """Matrix of the comultiplied coordinates equals the product of matrices."""
    lhs = mat_mul(quat_matrix(*g, pi=pi, eta=eta), quat_matrix(*h, pi=pi, eta=eta))
    rhs = quat_matrix(*comultiply(g, h, pi, eta), pi=pi, eta=eta)
    return mat_eq(lhs, rhs)


def comult_associativity() -> bool:
    g3 = sp.symbols("a1q a2q b1q b2q")
    left = comultiply(comultiply(GENERIC_G, GENERIC_H), g3)
    right = comultiply(GENERIC_G, comultiply(GENERIC_H, g3))
    return all(sp.expand(x - y) == 0 for x, y in zip(left, right))


def delta_det_check(g: Sequence = GENERIC_G) -> bool:
    """Delta equals the determinant of the matrix model (a pure K-element)."""
    det = mat_det(quat_matrix(*g))
    return sp.expand(det.b) == 0 and sp.expand(det.a - delta(*g)) == 0


def delta_multiplicative() -> bool:
    lhs = delta(*comultiply(GENERIC_G, GENERIC_H))
    return sp.expand(lhs - delta(*GENERIC_G) * delta(*GENERIC_H)) == 0


# ---------------------------------------------------------------------------
# Lie algebra

X1: Matrix = [[ONE, ZERO], [ZERO, ONE]]
X2: Matrix = [[ZETA, ZERO], [ZERO, -ZETA]]
Y1: Matrix = [[ZERO, K2Pair(PI, 0)], [ONE, ZERO]]
Y2: Matrix = [[ZERO, K2Pair(0, -PI)], [ZETA, ZERO]]

BASIS = {"x1": X1, "x2": X2, "y1": Y1, "y2": Y2}


def lie_bracket(z1: Matrix, z2: Matrix) -> Matrix:
    return mat_sub(mat_mul(z1, z2), mat_mul(z2, z1))


def _zero_mat() -> Matrix:
    return [[ZERO, ZERO], [ZERO, ZERO]]


def verify_brackets() -> Report:
    checks = {
        "[x2,y1] = -2 y2": mat_eq(lie_bracket(X2, Y1), mat_scale(-2, Y2)),
        "[x2,y2] = -2 eta y1": mat_eq(lie_bracket(X2, Y2), mat_scale(-2 * ETA, Y1)),
        "[y1,y2] = 2 pi x2": mat_eq(lie_bracket(Y1, Y2), mat_scale(2 * PI, X2)),
    }
    for name, z in BASIS.items():
        checks[f"x1 central vs {name}"] = mat_eq(lie_bracket(X1, z), _zero_mat())
    failed = [k for k, v in checks.items() if not v]
    return Report("lie_brackets", not failed, {}, checks, failed[0] if failed else None)


def generic_element(prefix: str) -> Matrix:
    cs = sp.symbols(f"{prefix}1:5")
    return mat_add(*(mat_scale(c, z) for c, z in zip(cs, BASIS.values())))


def lie_axioms() -> Report:
    """Antisymmetry and Jacobi for generic elements of the basis span."""
    u, v, w = generic_element("u"), generic_element("v"), generic_element("w")
    anti = mat_eq(lie_bracket(u, v), mat_scale(-1, lie_bracket(v, u)))
    jac = mat_add(lie_bracket(u, lie_bracket(v, w)),
                  lie_bracket(v, lie_bracket(w, u)),
                  lie_bracket(w, lie_bracket(u, v)))
    jacobi = mat_eq(jac, _zero_mat())
    return Report("lie_axioms", anti and jacobi, {}, {"antisymmetry": anti, "jacobi": jacobi})


# ---------------------------------------------------------------------------
# valuation-level predicates


def _gt(v: Val, bound: Fraction) -> bool:
    return v == INF or v > bound


def gso_member(v: Sequence[Val], s: int, q: int) -> bool:
    """Strict inequalities on (v(a1-1), v(a2), v(b1), v(b2)) cutting out G_s."""
    va1, va2, vb1, vb2 = v
    sb = Fraction(s) - Fraction(1, q + 1)
    return _gt(va1, Fraction(s)) and _gt(va2, Fraction(s)) and _gt(vb1, sb) and _gt(vb2, sb)


def tso_member(v: Sequence[Val]) -> bool:
    """The open torus around 1: |a1 - 1| < 1, |a2| < 1, b1 = b2 = 0."""
    va1, va2, vb1, vb2 = v
    return _gt(va1, Fraction(0)) and _gt(va2, Fraction(0)) and vb1 == INF and vb2 == INF


def valuation_grid(q: int) -> List[Fraction]:
    """Sample valuations around every threshold used by the predicates."""
    pts = {INF}
    for s in range(0, 4):
        for base in (Fraction(s), Fraction(s) - Fraction(1, q + 1)):
            for d in (Fraction(-1, 2 * (q + 1)), Fraction(0), Fraction(1, 2 * (q + 1))):
                pts.add(base + d)
    return sorted(pts, key=lambda x: (x == INF, x if x != INF else 0))


def torus_predicate_identity(q: int) -> Report:
    grid = valuation_grid(q)
    for v in product(grid, repeat=4):
        lhs = tso_member(v)
        rhs = gso_member(v, 0, q) and v[2] == INF and v[3] == INF
        if lhs != rhs:
            return Report("torus_predicate_identity", False, {"q": q}, {}, list(v))
    return Report("torus_predicate_identity", True, {"q": q}, {"grid_points": len(grid) ** 4})


def injectivity_predicate(v_alpha_diff: Val, v_beta: Val, s: int, q: int) -> bool:
    """|alpha - conj(alpha)| < |pi|^s and |beta| < |pi|^(s - 1/(q+1))."""
    return _gt(v_alpha_diff, Fraction(s)) and _gt(v_beta, Fraction(s) - Fraction(1, q + 1))


def injectivity_consistency(s: int, q: int, p: int) -> Report:
    """Compare the injectivity predicate with G_s membership when a1 = 1.

    alpha - conj(alpha) = 2 zeta a2 has the valuation of a2 only when 2 is a
    unit, so the comparison is skipped for p = 2.
    """
    if p == 2:
        return Report("injectivity_consistency", True, {"s": s, "q": q, "p": p},
                      {"skipped": "2 is not a unit"})
    grid = valuation_grid(q)
    for va2, vb1, vb2 in product(grid, repeat=3):
        v_beta = min(vb1, vb2)
        lhs = injectivity_predicate(va2, v_beta, s, q)
        rhs = gso_member((INF, va2, vb1, vb2), s, q)
        if lhs != rhs:
            return Report("injectivity_consistency", False, {"s": s, "q": q, "p": p}, {},
                          [va2, vb1, vb2])
    return Report("injectivity_consistency", True, {"s": s, "q": q, "p": p})


# ---------------------------------------------------------------------------
# lattices

LATTICE_KINDS = ("h", "h0'", "g")


def lattice_vals(kind: str, s: int, p: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """Valuations of the generators in front of x1, x2, y1, y2."""
    if s < 0:
        raise ValueError("s must be >= 0")
    s = Fraction(s)
    if kind == "h":
        extra = Fraction(1, (p - 1) * p ** int(s))
        y = s - Fraction(1, p + 1) + extra
        return (s, s + extra, y, y)
    if kind == "h0'":
        if s != 0:
            raise ValueError("h0' is only defined for s = 0")
        y = -Fraction(1, p + 1) + Fraction(1, p - 1)
        return (Fraction(0), Fraction(0), y, y)
    if kind == "g":
        y = s - Fraction(1, p + 1)
        return (s, s, y, y)
    raise ValueError(f"unknown lattice kind {kind!r}")


def lattice_subset(kind1: str, kind2: str, s: int, p: int) -> bool:
    """kind1 is contained in kind2 (generator valuations componentwise >=)."""
    v1 = lattice_vals(kind1, s, p)
    v2 = lattice_vals(kind2, s, p)
    return all(a >= b for a, b in zip(v1, v2))


def lattice_report(s_max: int, primes: Sequence[int]) -> Report:
    """h_s strictly inside g_s for all s <= s_max and the given primes."""
    for p in primes:
        for s in range(s_max + 1):
            if not lattice_subset("h", "g", s, p) or lattice_subset("g", "h", s, p):
                return Report("lattice_strict_inclusion", False,
                              {"s_max": s_max, "primes": list(primes)}, {}, [p, s])
    return Report("lattice_strict_inclusion", True, {"s_max": s_max, "primes": list(primes)})
