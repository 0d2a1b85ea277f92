"""Command-line front end.

    ltv verify --p 3 --max-n 8
    ltv action --q 2 --max-n 4 --format csv

Exit codes: 0 when every check passed or was skipped, 2 when any check
failed, 3 on a configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from typing import Dict, List, Optional, Sequence

from . import decomposition as dec
from . import period, quaternion, rfunc
from .report import jsonable
from .scalars import FieldParams, gauss_val
from .suite import FAIL, Context, SuiteConfig, run_groups

SCHEMA = "ltv-cert/1"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3

COMMANDS = ("coeffs", "action", "decomp", "rfunc", "norms", "lattices", "verify")
TABLE_ROW_CAP = 200


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltv", description="Exact verification of torus-action and "
                     "period-map computations over a p-adic field.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, help="residue characteristic")
        sp.add_argument("--f", type=int, default=1, help="residue degree (q = p^f)")
        sp.add_argument("--e", type=int, default=1, help="ramification index (pi^e = p)")
        sp.add_argument("--q", type=int, help="residue field size, checked against p^f")
        sp.add_argument("--max-n", type=int, dest="max_n")
        sp.add_argument("--disc-s", type=int, dest="disc_s", default=3)
        sp.add_argument("--tier", type=int, choices=(1, 2), default=1)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out")
    return parser


def field_from_args(args) -> FieldParams:
    if args.p is None and args.q is None:
        raise ConfigError("one of --p or --q is required")
    try:
        if args.p is None:
            base = FieldParams.from_q(args.q, args.e)
            fp = FieldParams(base.p, base.f, args.e)
        else:
            fp = FieldParams(args.p, args.f, args.e)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.q is not None and args.q != fp.q:
        raise ConfigError(f"--q {args.q} does not equal p^f = {fp.q}")
    return fp


# ---------------------------------------------------------------------------
# tables


def coeff_table(fp: FieldParams, n_max: int) -> List[dict]:
    q = fp.q
    rows = []
    for n in range(n_max + 1):
        c = period.coeff_val("c", n, q)
        d = period.coeff_val("d", n, q) if n >= 1 else None
        if c is None and d is None:
            continue
        rows.append({"n": n, "c_pi_exp": c, "d_pi_exp": d})
    return rows


def action_table(ctx: Context, n_max: int) -> List[dict]:
    rows = []
    Qs = ctx.action.compute(n_max)
    for n, Q in enumerate(Qs):
        rows.append({"n": n, "Q": Q.to_str("x"), "Q_at_x_minus_1": Q.taylor_shift(1).to_str("y"),
                     "degree": Q.degree(), "gauss_val_unit_disc": gauss_val(Q, 0, 0)})
    return rows


def decomp_table(ctx: Context, n_max: int) -> List[dict]:
    rows = []
    for n in range(n_max + 1):
        for s, poly in enumerate(ctx.decomp.row(n)):
            rows.append({"n": n, "s": s, "Q_ns": poly.to_str("x"),
                         "ord_bound": dec.ord_bound(n, s, ctx.cfg.q)})
    return rows


def rfunc_table(q: int, n_max: int) -> List[dict]:
    rows = []
    for n in range(min(n_max, TABLE_ROW_CAP) + 1):
        sig = rfunc.sigma(n, q)
        rows.append({"n": n, "sigma": {str(k): v for k, v in sorted(sig.items())},
                     "R": rfunc.r_func(n, q)})
    return rows


def norms_table(fp: FieldParams, s_max: int) -> List[dict]:
    q = fp.q
    rows = []
    for s in range(s_max + 1):
        disc = period.CriticalDisc(s, q)
        for which in ("phi0", "phi1", "phi0*phi1"):
            v, N = period.sup_val_auto(which, disc, fp)
            rows.append({"s": s, "quantity": which, "computed": v, "truncation": N,
                         "closed_form": period.sup_closed_form(which, s, q)})
        for which in period.OPERATOR_QUANTITIES:
            rows.append({"s": s, "quantity": which,
                         "computed": period.operator_estimate(which, s, fp),
                         "truncation": None,
                         "closed_form": period.operator_closed_forms(which, s, q)[0]})
    return rows


def lattice_table(p: int, s_max: int) -> List[dict]:
    rows = []
    for s in range(s_max + 1):
        kinds = ["h", "g"] + (["h0'"] if s == 0 else [])
        for kind in kinds:
            x1, x2, y1, y2 = quaternion.lattice_vals(kind, s, p)
            rows.append({"s": s, "lattice": kind, "x1": x1, "x2": x2, "y1": y1, "y2": y2})
    return rows


# ---------------------------------------------------------------------------
# certificate


def canonical(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def build_certificate(command: str, fp: FieldParams, cfg: SuiteConfig,
                      checks: List[dict], tables: Dict[str, list]) -> dict:
    body = {
        "schema": SCHEMA,
        "command": command,
        "params": {"p": fp.p, "f": fp.f, "e": fp.e, "q": fp.q, "max_n": cfg.max_n,
                   "disc_s": cfg.disc_s, "tier": cfg.tier},
        "checks": checks,
        "tables": tables,
        "summary": {
            "total": len(checks),
            "failed": sum(c["status"] == FAIL for c in checks),
            "skipped": sum(c["status"] == "skipped" for c in checks),
        },
    }
    body = json.loads(canonical(body))
    body["digest"] = hashlib.sha256(canonical(body).encode()).hexdigest()
    return body


_LEADING_COLUMNS = ("n", "s", "lattice", "quantity")


def render_csv(command: str, cert: dict) -> str:
    buf = io.StringIO()
    if command == "verify" or not cert["tables"]:
        fields = ["group", "name", "anchor", "status", "range", "witness"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for c in cert["checks"]:
            w.writerow({k: c[k] if isinstance(c.get(k), str) or c.get(k) is None
                        else canonical(c[k]) for k in fields})
        return buf.getvalue()
    (name, rows), = cert["tables"].items()
    if not rows:
        return ""
    lead = [k for k in _LEADING_COLUMNS if k in rows[0]]
    fields = lead + [k for k in rows[0] if k not in lead]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: v if isinstance(v, (str, int)) or v is None else canonical(v)
                    for k, v in r.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# entry point

_DEFAULT_N = {"coeffs": 200, "action": 8, "decomp": 6, "rfunc": 100_000, "norms": 0,
              "lattices": 0, "verify": 8}


def run_command(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise ConfigError("a subcommand is required: " + ", ".join(COMMANDS))
        fp = field_from_args(args)
        max_n = args.max_n if args.max_n is not None else _DEFAULT_N[args.command]
        if max_n < 0 or args.disc_s < 0:
            raise ConfigError("--max-n and --disc-s must be >= 0")
        if args.command in ("action", "decomp", "verify") and max_n < 1:
            raise ConfigError("--max-n must be >= 1")
        cfg = SuiteConfig(fp, max_n=max_n, disc_s=args.disc_s, tier=args.tier)
        if args.command == "rfunc":
            cfg.rfunc_n = max_n
        cmd = args.command
        groups = list(_GROUPS_FOR[cmd])
        ctx = Context(cfg)
        checks, timing = run_groups(groups, cfg, ctx)
        tables: Dict[str, list] = {}
        if cmd == "coeffs":
            tables["coeffs"] = coeff_table(fp, max_n)
        elif cmd == "action":
            tables["action"] = action_table(ctx, max_n)
        elif cmd == "decomp":
            tables["decomp"] = decomp_table(ctx, min(max_n, ctx.decomp_cap()))
        elif cmd == "rfunc":
            tables["rfunc"] = rfunc_table(fp.q, max_n)
        elif cmd == "norms":
            tables["norms"] = norms_table(fp, args.disc_s)
        elif cmd == "lattices":
            tables["lattices"] = lattice_table(fp.p, max(6, args.disc_s))
    except ConfigError as exc:
        print(f"ltv: configuration error: {exc}", file=stderr)
        return EXIT_CONFIG
    except period.TruncationError as exc:
        print(f"ltv: {exc}", file=stderr)
        return EXIT_CONFIG

    cert = build_certificate(cmd, fp, cfg, checks, tables)
    text = render_csv(cmd, cert) if args.format == "csv" else canonical(cert) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.out + ".runtime.json", "w", encoding="utf-8") as fh:
            fh.write(canonical({"digest": cert["digest"], "runtime_ms": timing}) + "\n")
    else:
        stdout.write(text)
    return EXIT_FAIL if cert["summary"]["failed"] else EXIT_OK


_GROUPS_FOR = {
    "coeffs": ["coeffs"],
    "action": ["action"],
    "decomp": ["decomp"],
    "rfunc": ["rfunc"],
    "norms": ["norms"],
    "lattices": ["lattices"],
    "verify": ["coeffs", "action", "decomp", "rfunc", "norms", "lattices"],
}


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
