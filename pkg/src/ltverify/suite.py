"""Catalogue of verification checks, grouped the way the CLI exposes them.

Each check returns a plain dict ``{name, anchor, range, status, witness}``
with status one of ``pass``, ``fail``, ``skipped``.  Timings are collected
separately so the check records stay deterministic.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import decomposition as dec
from . import period, quaternion, rfunc, torus_action
from .report import jsonable
from .scalars import FieldParams, XPoly

PASS, FAIL, SKIP = "pass", "fail", "skipped"


@dataclass
class SuiteConfig:
    fp: FieldParams
    max_n: int = 8
    disc_s: int = 3
    tier: int = 1
    rfunc_n: int = 100_000

    @property
    def q(self) -> int:
        return self.fp.q


def _rec(name: str, anchor: str, rng, ok: Optional[bool], witness=None) -> dict:
    status = SKIP if ok is None else (PASS if ok else FAIL)
    return {"name": name, "anchor": anchor, "range": jsonable(rng), "status": status,
            "witness": jsonable(witness)}


# ---------------------------------------------------------------------------
# shared tables, built lazily once per configuration


class Context:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.action = torus_action.ActionTable(cfg.fp)
        self.oracle = torus_action.ActionOracle(cfg.fp)
        self.decomp = dec.DecompTable(cfg.fp, self.action)

    def decomp_cap(self) -> int:
        q, tier, n = self.cfg.q, self.cfg.tier, self.cfg.max_n
        if tier >= 2:
            return n
        return min(n, 10 if q == 2 else 8)


def explicit_display(n: int, q: int, fp: FieldParams) -> XPoly:
    """The closed expressions for Q_1..Q_4 in powers of (x - 1)."""
    y = XPoly.from_ints([-1, 1], fp)
    table = {
        1: [1],
        2: [q, q + 1],
        3: [q * q, 5 * q * (q + 1) // 2, (q + 1) * (3 * q + 2) // 2],
        4: [q ** 3, 9 * q * q * (q + 1) // 2, q * (q + 1) * (37 * q + 26) // 6,
            (q + 1) * (2 * q + 1) * (4 * q + 3) // 3],
    }
    if n not in table:
        raise ValueError("closed expressions exist for 1 <= n <= 4 only")
    out = XPoly.zero(fp)
    for i, c in enumerate(table[n]):
        out = out + (y ** (i + 1)) * c
    return out


# ---------------------------------------------------------------------------
# groups


def coeff_checks(ctx: Context) -> List[dict]:
    q = ctx.cfg.q
    # brute-force enumeration grows like q^4 log q; larger fields get one power less
    bound = 5 * q ** 4 if q <= 9 else 5 * q ** 3
    bad = None
    for n in range(bound + 1):
        fast = period.rep_decompose(n, q)
        slow = period.rep_enumerate(n, q)
        if (fast is None and slow) or (fast is not None and slow != [fast]):
            bad = n
            break
    out = [_rec("period_coefficient_unique_representation", "period-coefficients:support",
                [0, bound], bad is None, bad)]
    if q <= 9:
        r = dec.check_support_symmetry(q)
        out.append(_rec("support_partner_forward", "decomposition:support-partner",
                        [0, 2 * q ** 3], r.details["forward_ok"], r.details["forward_witness"]))
        out.append(_rec("support_partner_converse", "decomposition:support-partner",
                        [0, 2 * q ** 3], r.details["converse_ok"], r.details["converse_witness"]))
    else:
        out.append(_rec("support_partner_forward", "decomposition:support-partner", None, None))
        out.append(_rec("support_partner_converse", "decomposition:support-partner", None, None))
    return out


def action_checks(ctx: Context) -> List[dict]:
    cfg, fp, q = ctx.cfg, ctx.cfg.fp, ctx.cfg.q
    N = cfg.max_n
    top = N * (q + 1) + 1
    a = ctx.oracle.solve(top)
    off = [n for n in range(top + 1) if (n - 1) % (q + 1) and a[n].terms]
    out = [_rec("oracle_vanishing_off_pattern", "torus-action:vanishing", [0, top],
                not off, off[0] if off else None)]
    mism = [k for k in range(N + 1) if a[1 + k * (q + 1)] != ctx.action.b_as_E_poly(k)]
    out.append(_rec("oracle_recursion_agreement", "torus-action:recursion", [0, N],
                    not mism, mism[0] if mism else None))
    bad = [n for n in range(1, min(N, 4) + 1)
           if ctx.action.compute(n)[n] != explicit_display(n, q, fp)]
    out.append(_rec("explicit_low_order_polynomials", "torus-action:first-terms",
                    [1, min(N, 4)], not bad, bad[0] if bad else None))
    bad = None
    for n in range(N + 1):
        r = torus_action.check_Q_structure(n, fp, ctx.action, ctx.oracle)
        if not r.passed:
            bad = [n, r.witness]
            break
    out.append(_rec("Q_structure", "torus-action:Q-structure", [0, N], bad is None, bad))
    for part, cs in ((1, [Fraction(1)]), (2, [Fraction(1, 2), Fraction(q, q + 1)])):
        bad = None
        for n in range(N + 1):
            for c in cs:
                r = torus_action.check_norm_bound(n, c, fp, ctx.action)
                if not r.passed and bad is None:
                    bad = [n, c, r.details["value"], r.details["bound"]]
        out.append(_rec(f"main_norm_bound_part{part}", f"torus-action:norm-bound-{part}",
                        {"n": [0, N], "c": cs}, bad is None, bad))
    bad = None
    for s in range(cfg.disc_s + 1):
        for n in range(N + 1):
            r = torus_action.check_disc_stability(n, s, fp, ctx.action)
            if not r.passed and bad is None:
                bad = [n, s, r.details["value"], r.details["bound"]]
    out.append(_rec("disc_stability_termwise", "critical-disc:stability",
                    {"n": [0, N], "s": [0, cfg.disc_s]}, bad is None, bad))
    return out


def decomp_checks(ctx: Context) -> List[dict]:
    cfg, fp, q, p = ctx.cfg, ctx.cfg.fp, ctx.cfg.q, ctx.cfg.fp.p
    cap = ctx.decomp_cap()
    out = []
    bad = None
    for n in range(cap + 1):
        r = dec.check_decomposition(n, fp, ctx.decomp)
        if not r.passed:
            bad = [n, r.witness]
            break
    out.append(_rec("decomposition_consistency", "decomposition:sum-and-integrality",
                    [0, cap], bad is None, bad))
    # shifted multinomial congruence, exhaustively on small sizes
    size = 8 if p == 2 else 6
    bad = None
    for n in range(size + 1):
        t = 1
        while q ** t <= n:
            t += 1
        for r in dec.all_multi_indices(n, 3):
            if not dec.binom_congruence_check(n, t, r, p, q):
                bad = [n, t, repr(r)]
                break
        if bad:
            break
    out.append(_rec("shifted_multinomial_congruence", "decomposition:shifted-multinomial",
                    [0, size], bad is None, bad))
    # low-order pieces
    low = {"Q11": ctx.decomp.get(1, 1) == XPoly.from_ints([-1, 1], fp)}
    low["Q10"] = ctx.decomp.get(1, 0).is_zero()
    for n in range(2, min(q - 2, cap) + 1):
        low[f"Q{n}0"] = ctx.decomp.get(n, 0).is_zero()
    failed = [k for k, v in low.items() if not v]
    out.append(_rec("low_order_pieces", "decomposition:first-pieces", [1, max(1, min(q - 2, cap))],
                    not failed, failed or None))
    mod_bad = exact_bad = bnd_bad = cor_bad = None
    eq_checked, eq_bad = [], None
    for n in range(cap + 1):
        for s in range(n + 1):
            r = dec.check_prop_ord(n, s, fp, ctx.decomp)
            d = r.details
            if not d["mod_pi_ok"] and mod_bad is None:
                mod_bad = [n, s, d["ord_mod_pi"], d["bound"]]
            if not d["exact_ok"] and exact_bad is None:
                exact_bad = [n, s, d["ord_exact"], d["bound"]]
            if d.get("boundary") and not d["boundary_mod_pi_ok"] and bnd_bad is None:
                bnd_bad = [n, s]
            if s == n:
                if not d["Q_n_corollary_ok"] and cor_bad is None:
                    cor_bad = [n, d["Q_n_mod_pi_ord"], d["R(n)"]]
                if d["n_is_T"]:
                    eq_checked.append(n)
                    if not d["equality_mod_pi"] and eq_bad is None:
                        eq_bad = [n, d["ord_mod_pi"], d["R(n)"]]
    rng = {"n": [0, cap], "s": "0..n"}
    out.append(_rec("vanishing_order_bound_mod_pi", "vanishing-order:general", rng,
                    mod_bad is None, mod_bad))
    out.append(_rec("vanishing_order_bound_exact", "vanishing-order:general", rng,
                    exact_bad is None, exact_bad))
    out.append(_rec("vanishing_order_boundary", "vanishing-order:boundary", rng,
                    bnd_bad is None, bnd_bad))
    out.append(_rec("vanishing_order_equality_at_T", "vanishing-order:diagonal",
                    {"n": eq_checked}, eq_bad is None, eq_bad))
    out.append(_rec("Q_mod_pi_vanishing", "vanishing-order:diagonal", [0, cap],
                    cor_bad is None, cor_bad))
    return out


def rfunc_checks(ctx: Context) -> List[dict]:
    q, n_max = ctx.cfg.q, ctx.cfg.rfunc_n
    oracle_max = min(5000, n_max)
    res = rfunc.property_suite(q, n_max=n_max, oracle_max=oracle_max,
                            mul_max=min(10_000, n_max), pair_hi=min(2000, n_max))
    return [_rec(name, "digit-function:" + name, v["range"], v["passed"], v["witness"])
            for name, v in res.items()]


def norm_checks(ctx: Context) -> List[dict]:
    cfg, fp, q = ctx.cfg, ctx.cfg.fp, ctx.cfg.q
    out = []
    for which in ("phi0", "phi1", "phi0*phi1"):
        bad = None
        for s in range(cfg.disc_s + 1):
            v, _ = period.sup_val_auto(which, period.CriticalDisc(s, q), fp)
            want = period.sup_closed_form(which, s, q)
            if v != want and bad is None:
                bad = [s, v, want]
        out.append(_rec(f"sup_norm_{which.replace('*', '_')}", "critical-disc:sup-norms",
                        [0, cfg.disc_s], bad is None, bad))
    for which in period.OPERATOR_QUANTITIES:
        bad = None
        for s in range(cfg.disc_s + 1):
            v = period.operator_estimate(which, s, fp)
            forms = period.operator_closed_forms(which, s, q)
            if any(v != f for f in forms) and bad is None:
                bad = [s, v, forms]
        if which != "phi0_phi1":
            v0 = period.operator_estimate(which, 0, fp)
            if v0 != period.operator_s0_value(which, q) and bad is None:
                bad = [0, v0, period.operator_s0_value(which, q)]
        out.append(_rec(f"operator_{which}", "operators:estimates", [0, cfg.disc_s],
                        bad is None, bad))
    return out


def lattice_checks(ctx: Context) -> List[dict]:
    p, q = ctx.cfg.fp.p, ctx.cfg.q
    s_top = max(6, ctx.cfg.disc_s)
    out = [
        _rec("comultiplication_is_matrix_product", "group-law:comultiplication", "symbolic",
             quaternion.comult_check()),
        _rec("comultiplication_associative", "group-law:comultiplication", "symbolic",
             quaternion.comult_associativity()),
        _rec("delta_is_determinant", "group-law:delta", "symbolic", quaternion.delta_det_check()),
        _rec("delta_multiplicative", "group-law:delta", "symbolic", quaternion.delta_multiplicative()),
    ]
    r = quaternion.verify_brackets()
    out.append(_rec("lie_brackets", "lie-algebra:brackets", "symbolic", r.passed, r.witness))
    r = quaternion.lie_axioms()
    out.append(_rec("lie_axioms", "lie-algebra:brackets", "symbolic", r.passed, r.details))
    r = quaternion.torus_predicate_identity(q)
    out.append(_rec("torus_predicate_identity", "group-law:open-torus", "valuation grid",
                    r.passed, r.witness))
    r = quaternion.lattice_report(s_top, [p])
    out.append(_rec("lattice_h_strictly_in_g", "lattices:comparison", [0, s_top], r.passed, r.witness))
    h0 = quaternion.lattice_vals("h", 0, p)
    h0p = quaternion.lattice_vals("h0'", 0, p)
    ok = h0p[1] == 0 and h0[1] == Fraction(1, p - 1) and h0p[2:] == h0[2:]
    out.append(_rec("lattice_h0_prime", "lattices:s0-improvement", [0, 0], ok, [h0, h0p]))
    if p == 2:
        out.append(_rec("injectivity_consistency", "injectivity:predicate", [0, s_top], None,
                        "2 is not a unit"))
    else:
        bad = None
        for s in range(s_top + 1):
            r = quaternion.injectivity_consistency(s, q, p)
            if not r.passed:
                bad = [s, r.witness]
                break
        out.append(_rec("injectivity_consistency", "injectivity:predicate", [0, s_top],
                        bad is None, bad))
    return out


GROUPS: Dict[str, Callable[[Context], List[dict]]] = {
    "coeffs": coeff_checks,
    "action": action_checks,
    "decomp": decomp_checks,
    "rfunc": rfunc_checks,
    "norms": norm_checks,
    "lattices": lattice_checks,
}

# decomp reuses the action tables, so the two share one worker
_ORDER = [("coeffs",), ("action", "decomp"), ("rfunc",), ("norms",), ("lattices",)]


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("LTV_THREADS", "1")))
    except ValueError:
        return 1


def run_groups(names: List[str], cfg: SuiteConfig,
               ctx: Optional[Context] = None) -> Tuple[List[dict], Dict[str, int]]:
    """Run the named groups; returns (checks in catalogue order, runtime_ms per group)."""
    ctx = ctx or Context(cfg)
    batches = [tuple(g for g in batch if g in names) for batch in _ORDER]
    batches = [b for b in batches if b]

    def run(batch):
        res = []
        for g in batch:
            t0 = time.perf_counter()
            checks = GROUPS[g](ctx)
            ms = int((time.perf_counter() - t0) * 1000)
            res.append((g, checks, ms))
        return res

    workers = min(thread_cap(), len(batches)) or 1
    if workers == 1:
        results = [run(b) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, batches))
    checks: List[dict] = []
    timing: Dict[str, int] = {}
    for batch in results:
        for g, cs, ms in batch:
            for c in cs:
                c["group"] = g
            checks.extend(cs)
            timing[g] = ms
    return checks, timing
