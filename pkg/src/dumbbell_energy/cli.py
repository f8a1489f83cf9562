"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 verification FAIL.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .charpoly import char_poly_dumbbell, even_even_coeffs, mixed_coeffs
from .coulson import QuadratureError, coulson_energy_ab
from .graphs import (
    DumbbellParams,
    EigenSolverError,
    GainSpec,
    ParityCase,
    energy_eig,
    gains_from_alpha_beta,
    gains_from_angles,
    normalize_gains,
)
from .matchpoly import mrst_polys
from .search import (
    FAIL,
    SearchConfig,
    SearchError,
    grid_refine_search,
    scan_odd_odd_odd,
    verify_theorem,
)

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_FAIL = 0, 1, 2, 3

# reference counterexamples to 6 decimals: (r, s, l, alpha, beta, E(alpha,beta), E(0,0), delta E)
REFERENCE_ROWS = [
    (3, 3, 1, 0.500000, 0.500000, 7.841619, 7.924777, 0.083158),
    (3, 3, 5, 0.197754, 0.197754, 13.000765, 13.000791, 0.000026),
    (5, 3, 1, 0.676172, 0.369727, 10.437006, 10.505533, 0.068526),
    (3, 7, 3, 0.312500, 0.800000, 15.562485, 15.598262, 0.035776),
    (3, 13, 5, 0.250000, 1.000000, 25.766721, 25.789227, 0.022507),
    (17, 17, 17, 0.500000, 0.500000, 64.068103, 64.073597, 0.005494),
]


class ValidationError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6f}"
    return str(v)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def make_report(command: str, args: argparse.Namespace, payload: dict, fmt: str) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "command": command,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": _jsonable(config),
        "format": fmt,
        "payload": _jsonable(payload),
    }


def emit(report: dict, rows: list[dict], fmt: str, out=None, summary: str | None = None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(_csv(rows))
        if summary:
            out.write(f"# {summary}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _params(args) -> DumbbellParams:
    try:
        return DumbbellParams(args.r, args.s, args.ell)
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


def _gains(args, params: DumbbellParams) -> GainSpec:
    given = [
        name
        for name, vals in (
            ("alpha/beta", (args.alpha, args.beta)),
            ("theta", (args.theta_r, args.theta_s)),
            ("gamma", (args.gamma_r, args.gamma_s)),
        )
        if any(v is not None for v in vals)
    ]
    if len(given) > 1:
        raise ValidationError(f"give gains one way only, got {', '.join(given)}")
    try:
        if given == ["theta"]:
            return gains_from_angles(params, args.theta_r or 0.0, args.theta_s or 0.0)
        if given == ["gamma"]:
            return normalize_gains(params, complex(args.gamma_r or "1"), complex(args.gamma_s or "1"))
        return gains_from_alpha_beta(params, args.alpha or 0.0, args.beta or 0.0)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands


def cmd_energy(args) -> int:
    params = _params(args)
    spec = _gains(args, params)
    payload = {
        "r": spec.params.r,
        "s": spec.params.s,
        "ell": spec.params.ell,
        "swapped": spec.swapped,
        "case": spec.params.case.value,
        "alpha": spec.alpha,
        "beta": spec.beta,
        "a": spec.a,
        "b": spec.b,
    }
    if args.method in ("eig", "both"):
        payload["energy_eig"] = energy_eig(spec.params, spec)
    if args.method in ("coulson", "both"):
        payload["energy_coulson"] = coulson_energy_ab(spec.params, spec.alpha, spec.beta, tol=args.tol)
    if args.method == "both":
        payload["discrepancy"] = abs(payload["energy_eig"] - payload["energy_coulson"])
    emit(make_report("energy", args, payload, args.format), [payload], args.format)
    return EXIT_OK


def cmd_charpoly(args) -> int:
    params = _params(args)
    canon, swapped = params.canonical()
    if not (-1 <= args.a <= 1 and -1 <= args.b <= 1):
        raise ValidationError("a and b must lie in [-1, 1]")
    a, b = (args.b, args.a) if swapped else (args.a, args.b)
    poly = char_poly_dumbbell(canon, a, b)
    payload = {
        "r": canon.r,
        "s": canon.s,
        "ell": canon.ell,
        "swapped": swapped,
        "case": canon.case.value,
        "a": a,
        "b": b,
        "coefficients": poly[::-1].tolist(),
    }
    if swapped:
        payload["note"] = f"canonical orientation ({canon.r},{canon.s},{canon.ell}) with the even cycle first"
    if canon.case is ParityCase.EVEN_EVEN:
        cf = even_even_coeffs(canon)
        payload["tables"] = {"M": list(cf.M), "R": list(cf.R), "S": list(cf.S), "T": list(cf.T)}
    elif canon.case is ParityCase.ODD_ODD:
        m, r_, s_, t = mrst_polys(canon)
        payload["tables"] = {"M": m.to_list(), "R": r_.to_list(), "S": s_.to_list(), "T": t.to_list()}
    else:
        mk, rk, sk, tk = mixed_coeffs(canon)
        payload["tables"] = {"M": list(mk), "R": list(rk), "S": list(sk), "T": list(tk)}
    n = canon.n
    rows = [{"degree": n - i, "coefficient": c} for i, c in enumerate(payload["coefficients"])]
    emit(make_report("charpoly", args, payload, args.format), rows, args.format)
    return EXIT_OK


_CASE_FILTER = {"ee": ParityCase.EVEN_EVEN, "oo": ParityCase.ODD_ODD, "mixed": ParityCase.MIXED}


def verify_triples(case: str, nmax: int) -> list[DumbbellParams]:
    """Triples with ``n <= nmax`` in the requested case, one per isomorphism class."""
    wanted = set(_CASE_FILTER.values()) if case == "all" else {_CASE_FILTER[case]}
    out = []
    for r in range(3, nmax + 1):
        for s in range(3, nmax + 1):
            for ell in range(1, nmax + 1):
                if r + s + ell - 1 > nmax:
                    continue
                p = DumbbellParams(r, s, ell)
                if p.case not in wanted:
                    continue
                if p.case is ParityCase.MIXED and r % 2 == 1:
                    continue
                if p.case is not ParityCase.MIXED and r > s:
                    continue
                out.append(p)
    return out


def cmd_verify(args) -> int:
    if args.nmax < 5:
        raise ValidationError("--nmax must be at least 5 (smallest dumbbell has 5 vertices)")
    rows, reports = [], []
    for p in verify_triples(args.case, args.nmax):
        rep = verify_theorem(p, cross_check=args.cross_check)
        reports.append(rep.to_dict())
        lo, hi = rep.checks
        rows.append({
            "r": p.r, "s": p.s, "ell": p.ell, "case": rep.case,
            "min_alpha": lo.found[0], "min_beta": lo.found[1], "min_energy": lo.energy, "min_verdict": lo.verdict,
            "max_alpha": hi.found[0], "max_beta": hi.found[1], "max_energy": hi.energy, "max_verdict": hi.verdict,
            "verdict": rep.verdict,
        })
    counts = {v: sum(r["verdict"] == v for r in rows) for v in ("PASS", "FAIL", "UNDECIDED")}
    payload = {"rows": reports, "counts": counts}
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    emit(make_report("verify", args, payload, args.format), rows, args.format, summary=summary)
    return EXIT_FAIL if counts["FAIL"] else EXIT_OK


def reference_rows(search: bool = True) -> list[dict]:
    rows = []
    for r, s, ell, al, be, e_ab, e00, de in REFERENCE_ROWS:
        p = DumbbellParams(r, s, ell)
        mine_ab = coulson_energy_ab(p, al, be)
        mine_00 = coulson_energy_ab(p, 0.0, 0.0)
        row = {
            "r": r, "s": s, "ell": ell, "alpha": al, "beta": be,
            "E_ab": mine_ab, "E00": mine_00, "deltaE": mine_00 - mine_ab,
            "ref_E_ab": e_ab, "ref_E00": e00, "ref_deltaE": de,
            "diff_E_ab": abs(mine_ab - e_ab), "diff_E00": abs(mine_00 - e00),
            "diff_deltaE": abs(mine_00 - mine_ab - de),
        }
        if search:
            res = grid_refine_search(p)
            row.update({
                "search_alpha": res.alpha, "search_beta": res.beta,
                "search_E": res.energy, "search_deltaE": res.delta_e,
                "diff_search_E": abs(res.energy - e_ab),
            })
        rows.append(row)
    return rows


def cmd_table1(args) -> int:
    rows = reference_rows(search=not args.no_search)
    emit(make_report("table1", args, {"rows": rows}, args.format), rows, args.format)
    return EXIT_OK


def cmd_scan(args) -> int:
    try:
        rep = scan_odd_odd_odd(args.rset, args.sset, args.lset, workers=args.workers)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    rows = [
        {
            "triple": f"({row.r},{row.s},{row.ell})",
            "alpha": row.alpha,
            "beta": row.beta,
            "E_min": row.e_min,
            "E00": row.e00,
            "deltaE": row.delta_e,
            "counterexample": row.counterexample,
            "alphabeta_product": row.alphabeta,
        }
        for row in rep.rows
    ]
    summary = f"triples={rep.total} counterexamples={rep.counterexamples} near_quarter={rep.near_quarter}"
    report = make_report("scan", args, rep.to_dict(), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            emit(report, rows, args.format, out=fh, summary=summary)
        print(summary)
    else:
        emit(report, rows, args.format, summary=summary)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dumbbell-energy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    def triple(p):
        p.add_argument("r", type=int)
        p.add_argument("s", type=int)
        p.add_argument("ell", type=int)

    p = sub.add_parser("energy", help="energy of one gain dumbbell")
    triple(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--theta-r", type=float, help="gamma_r = exp(i theta_r)")
    p.add_argument("--theta-s", type=float)
    p.add_argument("--gamma-r", help="complex gain, e.g. 0.6+0.8j")
    p.add_argument("--gamma-s")
    p.add_argument("--method", choices=("eig", "coulson", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("charpoly", help="characteristic polynomial (high to low degree)")
    triple(p)
    p.add_argument("--a", type=float, default=0.0, help="Re(gamma_r)")
    p.add_argument("--b", type=float, default=0.0, help="Re(gamma_s)")
    common(p)
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("verify", help="check the predicted extremizers by search")
    p.add_argument("--case", choices=("all", "ee", "oo", "mixed"), default="all")
    p.add_argument("--nmax", type=int, default=16)
    p.add_argument("--cross-check", action="store_true", help="repeat each search on eigenvalue energies")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table1", help="recompute the representative odd-odd counterexamples")
    p.add_argument("--no-search", action="store_true")
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("scan", help="minimum search over odd-odd-odd triples")
    p.add_argument("--rset", type=int, nargs="+", default=list(range(3, 18, 2)))
    p.add_argument("--sset", type=int, nargs="+", default=list(range(3, 18, 2)))
    p.add_argument("--lset", type=int, nargs="+", default=list(range(1, 18, 2)))
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    common(p)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (EigenSolverError, QuadratureError, SearchError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
