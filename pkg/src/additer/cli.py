"""Command-line front end: ``additer split|certificate|periodic|factor-stats|verify``.

Machine output (json, csv) keeps numbers exact: integers stay integers and
rationals are written as "a/b" strings.  Table output adds decimal columns
marked with a trailing "~".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .additive import AffinePoly, is_exceptional, lin_inverse
from .dynamics import factor_stats, proportion_scan
from .errors import AdditerError, ExceptionalForm, FormulaNotValid, ParseError, Unsupported
from .splitting import METHODS, _ladder_exponent, companion, linearized_formula, split_degree, split_degree_route
from .textio import format_additive, format_affine, format_poly, parse_affine, parse_field
from .verify import DEFAULT_SEED, SUITES, run_suites

EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_EXCEPTIONAL = 4


@dataclass
class RunConfig:
    command: str
    field: str | None = None
    poly: str | None = None
    ns: tuple[int, ...] = (1,)
    method: str = "auto"
    search_cap: int | None = None
    dense_cap: int | None = None
    orbit_cap: int | None = None
    oracle_cap: int | None = None
    fmt: str = "table"
    out: str | None = None
    seed: int = DEFAULT_SEED
    suites: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("search_cap", "dense_cap", "orbit_cap", "oracle_cap"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ParseError(f"--{name.replace('_', '-')} must be positive")
        if not self.ns:
            raise ParseError("empty n-range")
        if min(self.ns) < 1:
            raise ParseError("n must be >= 1")


def exact(x):
    """JSON-safe exact value: Fraction -> "a/b", dict keys -> str."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return x


@dataclass
class Report:
    """Header lines plus a table of rows; every command produces one."""

    kind: str
    header: dict
    columns: list[str]
    rows: list[dict]
    notes: list[str]

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"report": self.kind, **exact(self.header), "rows": [exact(r) for r in self.rows]}
            if self.notes:
                doc["notes"] = self.notes
            return json.dumps(doc, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([_cell(r.get(c)) for c in self.columns])
            return buf.getvalue()
        lines = [f"{k}: {_cell(v)}" for k, v in self.header.items()]
        lines += self.notes
        if self.rows:
            cols = self.columns + [f"{c}~" for c in self.columns if _has_fraction(self.rows, c)]
            table = [[_cell(r.get(c)) if not c.endswith("~") else _approx(r.get(c[:-1])) for c in cols] for r in self.rows]
            widths = [max(len(c), *(len(row[i]) for row in table)) for i, c in enumerate(cols)]
            if lines:
                lines.append("")
            lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
            for row in table:
                lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
        return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(exact(v), separators=(",", ":"))
    return str(exact(v))


def _has_fraction(rows, c):
    return any(isinstance(r.get(c), Fraction) and r[c].denominator != 1 for r in rows)


def _approx(v) -> str:
    return f"{float(v):.6f}" if isinstance(v, Fraction) else "-"


# -- commands ---------------------------------------------------------------------


def _input(cfg: RunConfig) -> AffinePoly:
    if cfg.field is None or cfg.poly is None:
        raise ParseError("--field and --poly are required")
    return parse_affine(parse_field(cfg.field), cfg.poly)


def cmd_split(cfg: RunConfig) -> Report:
    F = _input(cfg)
    header = {"field": cfg.field, "poly": format_affine(F)}
    cols = ["n", "s", "s_over_n", "ladder", "route"]
    if F.A.is_zero():
        raise ParseError("constant polynomial has no splitting field")
    kind = is_exceptional(F)
    if kind:
        note = f"exceptional form ({kind.kind}): s_F(n) = 1 for every n >= 1"
        rows = [{"n": n, "s": 1, "s_over_n": Fraction(1, n), "ladder": 0, "route": "exceptional"} for n in cfg.ns]
        return Report("split", {**header, "exceptional": True}, cols, rows, [note])
    base = split_degree(F, 1, cfg.method, cfg.search_cap)
    rows = []
    for n in cfg.ns:
        s, route = split_degree_route(F, n, cfg.method, cfg.search_cap)
        rows.append(
            {"n": n, "s": s, "s_over_n": Fraction(s, n), "ladder": _ladder_exponent(s, base, F.ctx.p), "route": route}
        )
    return Report("split", {**header, "exceptional": False}, cols, rows, [])


def _formula_text(p: int, M: int, s0: int) -> str:
    arg = "n" if s0 == 1 else f"n/{s0}"
    lead = "" if M == 1 else f"{M}*"
    return f"s_A(n) = {lead}{p}^ceil(log_{p}({arg})) for n >= {s0 + 1}"


def cmd_certificate(cfg: RunConfig) -> Report:
    F = _input(cfg)
    if F.b:
        raise ParseError("certificate needs an additive polynomial (no constant term)")
    A = F.A
    if A.is_zero() or is_exceptional(A):
        raise ExceptionalForm("no companion certificate for aX^(p^h) or 0")
    cert = companion(A, cfg.method)
    p = A.ctx.p
    h = {
        "field": cfg.field,
        "poly": format_additive(A),
        "M": cert.M,
        "s0": cert.s0,
        "r": cert.r,
        "A_star": format_additive(cert.A_star),
        "Rq_witness": format_additive(cert.Rq_witness),
        "nilpotent": cert.nilpotent,
        "formula_valid": cert.formula_valid,
        "c_A_status": cert.c_A_status,
        "c_A": cert.c_A,
        "c_A_bounds": list(cert.c_A_bounds) if cert.c_A_bounds else None,
        "ladder": cert.ladder or None,
        "formula": _formula_text(p, cert.M, cert.s0) if cert.formula_valid else None,
    }
    if A.is_q_linearized():
        try:
            lf = linearized_formula(lin_inverse(A))
            h.update({"f": format_poly(lf.f), "f0": format_poly(lf.f0), "E": lf.E, "e": lf.e, "c_A_linearized": lf.c_A})
        except (ExceptionalForm, FormulaNotValid):
            pass
    return Report("certificate", h, [], [], [])


def cmd_periodic(cfg: RunConfig) -> Report:
    F = _input(cfg)
    if F.b:
        raise ParseError("periodic points are computed for additive polynomials only")
    scan = proportion_scan(F.A, cfg.ns, verify_cap=cfg.orbit_cap)
    h = {"field": cfg.field, "poly": format_additive(F.A)}
    if scan.M is not None:
        h.update(
            {
                "M": scan.M,
                "N": scan.N,
                "bound": scan.bound,
                "coprime_ns": scan.coprime_ns,
                "coprime_ok": scan.coprime_ok,
                "ladder_ns": scan.ladder_ns,
                "ladder_decreasing": scan.ladder_decreasing,
            }
        )
    cols = ["n", "delta", "pi", "proportion", "verified"]
    rows = [vars(e).copy() for e in scan.entries]
    return Report("periodic", h, cols, rows, [])


def cmd_factor_stats(cfg: RunConfig) -> Report:
    F = _input(cfg)
    method = cfg.method if cfg.method in ("kernel", "oracle", "both") else "kernel"
    reports = [factor_stats(F, n, method, cfg.oracle_cap) for n in cfg.ns]
    ratios = [r.rho_over_n for r in reports]
    h = {"field": cfg.field, "poly": format_affine(F), "method": method, "min_rho_over_n": min(ratios), "max_rho_over_n": max(ratios)}
    cols = ["n", "s", "N", "rho", "rho_over_n", "factor_counts"]
    rows = [
        {"n": r.n, "s": r.s, "N": r.N, "rho": r.rho, "rho_over_n": r.rho_over_n, "factor_counts": r.factor_counts, "exact_counts": r.exact_counts}
        for r in reports
    ]
    return Report("factor-stats", h, cols, rows, [])


def cmd_verify(cfg: RunConfig) -> Report:
    results = run_suites(list(cfg.suites) or None, cfg.seed)
    rows = [{"suite": r.name, "passed": r.passed, "failed": r.failed} for r in results]
    notes = [f"FAIL {r.name}: {m}" for r in results for m in r.messages]
    ok = all(r.failed == 0 for r in results)
    return Report("verify", {"seed": cfg.seed, "ok": ok}, ["suite", "passed", "failed"], rows, notes)


COMMANDS = {
    "split": cmd_split,
    "certificate": cmd_certificate,
    "periodic": cmd_periodic,
    "factor-stats": cmd_factor_stats,
    "verify": cmd_verify,
}


# -- argument handling ------------------------------------------------------------


def _n_range(text: str) -> tuple[int, ...]:
    lo, sep, hi = text.partition(":")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise ParseError(f"bad n-range {text!r}, expected a:b") from None
    if not sep or a > b:
        raise ParseError(f"bad n-range {text!r}, expected a:b with a <= b")
    return tuple(range(a, b + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="additer", description="Splitting fields and dynamics of iterated additive polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "verify":
            sp.add_argument("--field", required=True, help='e.g. "p=2 r=2 mod=1,1,1"')
            sp.add_argument("--poly", required=True, help='e.g. "x^8 + a*x" or "{(0,\'a\'),(3,\'1\')}"')
        if name not in ("verify", "certificate"):
            group = sp.add_mutually_exclusive_group()
            group.add_argument("--n", type=int)
            group.add_argument("--n-range", help="inclusive range a:b")
        methods = ("kernel", "oracle", "both") if name == "factor-stats" else METHODS
        if name != "verify" and name != "periodic":
            sp.add_argument("--method", choices=methods, default=methods[0])
        sp.add_argument("--search-cap", type=int)
        sp.add_argument("--dense-cap", type=int)
        sp.add_argument("--orbit-cap", type=int)
        sp.add_argument("--oracle-cap", type=int)
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if name == "verify":
            sp.add_argument("--suite", action="append", choices=sorted(SUITES), default=[])
    return parser


def config_from_args(args) -> RunConfig:
    ns: tuple[int, ...] = (1,)
    if getattr(args, "n_range", None):
        ns = _n_range(args.n_range)
    elif getattr(args, "n", None) is not None:
        ns = (args.n,)
    return RunConfig(
        command=args.command,
        field=getattr(args, "field", None),
        poly=getattr(args, "poly", None),
        ns=ns,
        method=getattr(args, "method", "auto"),
        search_cap=args.search_cap,
        dense_cap=args.dense_cap,
        orbit_cap=args.orbit_cap,
        oracle_cap=args.oracle_cap,
        fmt=args.format,
        out=args.out,
        seed=args.seed,
        suites=tuple(getattr(args, "suite", ())),
    )


def run(cfg: RunConfig) -> tuple[Report, int]:
    if cfg.dense_cap is not None:
        # the modexp route reads its dense/twisted threshold from the environment
        os.environ["ADDITER_DENSE_CAP"] = str(cfg.dense_cap)
    report = COMMANDS[cfg.command](cfg)
    code = 0
    if cfg.command == "verify" and not report.header["ok"]:
        code = 1
    return report, code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except ExceptionalForm as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXCEPTIONAL
    except Unsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (AdditerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report.render(cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
