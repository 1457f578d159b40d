"""Command-line front end: classify, dual, coeffs, reconstruct, sweep."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Optional

from . import __version__
from .classifier import PhasePairWitness, PhaseWitness, Tri, classify
from .core import ColumnZ, ColumnZ0, GFSError, LebesgueExponent, NotMinimal, Point, WitnessMismatch
from .dual import DualSystem, _form_for, build_dual, verify_biorthogonality
from .gfs import SpanFunction, TabulatedFunction, gfs_coefficients, reconstruction_error
from .quadrature import QuadratureConfig
from .weights import ExampleSum, ExampleX, parse_phase, suggest_phase, weight_from_name

EXIT_OK, EXIT_USAGE, EXIT_BLOCKED, EXIT_INCONCLUSIVE = 0, 2, 3, 4


class UsageError(Exception):
    pass


# --- argument plumbing -----------------------------------------------------


def _weight_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("weight")
    g.add_argument("--weight", default="const1", help="const1 | examplex | examplesum | tabulated")
    g.add_argument("--x0", type=float, default=0.0)
    g.add_argument("--y0", type=float, default=0.0)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--csv-weight", dest="csv_weight", help="CSV table for --weight tabulated")


def _config_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("quadrature")
    d = QuadratureConfig()
    g.add_argument("--grid", type=int, help=f"torus nodes per axis (default {d.n2d}); 1D slices use 4x this")
    g.add_argument("--jmin", type=int, default=d.jmin)
    g.add_argument("--jmax", type=int, default=d.jmax)
    g.add_argument("--tol", type=float, default=d.tol)
    g.add_argument("--rho", type=float, default=d.rho)
    g.add_argument("--order", type=int, default=d.order, help="Gauss-Legendre nodes per graded panel")
    g.add_argument("--no-fast-path", dest="fast_path", action="store_false",
                   help="decide divergence from the exclusion levels alone")


def _output_args(p: argparse.ArgumentParser, csv_help: Optional[str] = None) -> None:
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    if csv_help:
        p.add_argument("--csv", help=csv_help)
    p.add_argument("--no-timings", dest="timings", action="store_false", help="omit wall-clock timings")


def _system_args(p: argparse.ArgumentParser) -> None:
    _weight_args(p)
    p.add_argument("--p", type=float, default=2.0, help="Lebesgue exponent, 1 < p < inf")
    p.add_argument("--pattern", choices=["point", "column", "column0"], default="point")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--mu", type=int, default=0)
    p.add_argument("--P", "--phase", dest="P", help="phase P: 'harmonic' or 'const:<x0>'")
    p.add_argument("--Q", dest="Q", help="second phase Q for the column0 pattern")
    _config_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfs2d", description="Weighted double trigonometric systems on the torus.")
    parser.add_argument("--version", action="version", version=f"gfs2d {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="complete / minimal / M-basis verdict with evidence")
    _system_args(p)
    _output_args(p)

    p = sub.add_parser("dual", help="build the dual system and check biorthogonality on a window")
    _system_args(p)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--force", action="store_true", help="build even when minimality is not certified")
    _output_args(p, "biorthogonality matrix CSV (k,m,j,l,re,im,deviation)")

    for name, hlp in (("coeffs", "coefficients of g against the dual"), ("reconstruct", "square partial-sum errors")):
        p = sub.add_parser(name, help=hlp)
        _system_args(p)
        p.add_argument("--span", default=None,
                       help="g = M * sum c e^{ikx}e^{imy}, as 'k,m,c;k,m,c' (c may be complex, e.g. 1-2j)")
        p.add_argument("--g-csv", dest="g_csv", help="tabulated g on a uniform grid (same layout as weights)")
        p.add_argument("--window", type=int, default=None, help="coefficient window radius")
        p.add_argument("--force", action="store_true")
        if name == "reconstruct":
            p.add_argument("--N", default=None, help="comma-separated truncation radii (default 0..window)")
            p.add_argument("--norm-p", dest="norm_p", type=float, default=2.0, help="exponent of the error norm")
        _output_args(p, "coefficient table CSV (k,m,re,im,flag)" if name == "coeffs" else "error sequence CSV (N,error,flag)")

    p = sub.add_parser("sweep", help="verdict table over alpha and p")
    p.add_argument("--family", default="examplex", help="const1 | examplex | examplesum")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--alphas", default="0.25,0.5,1.0,1.49,1.6")
    p.add_argument("--ps", default="2")
    p.add_argument("--pattern", choices=["point", "column", "column0"], default=None,
                   help="default: point for examplesum, column otherwise")
    _config_args(p)
    p.add_argument("--csv", help="write the table here instead of stdout")
    p.add_argument("--json", help="also write a JSON report")
    p.add_argument("--no-timings", dest="timings", action="store_false")
    return parser


def config_from_args(a) -> QuadratureConfig:
    kw = dict(jmin=a.jmin, jmax=a.jmax, tol=a.tol, rho=a.rho, order=a.order, fast_path=a.fast_path)
    if a.grid:
        kw.update(n2d=a.grid, n=4 * a.grid)
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pattern(a):
    return {"point": lambda: Point(a.nu, a.mu), "column": ColumnZ, "column0": ColumnZ0}[a.pattern]()


def _weight(a):
    return weight_from_name(a.weight, a.x0, a.y0, a.alpha, a.csv_weight)


def _phase(text):
    return None if text is None else parse_phase(text)


def parse_span(text: Optional[str]) -> dict:
    out = {}
    if not text:
        return out
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = [b.strip() for b in part.split(",")]
        if len(bits) != 3:
            raise UsageError(f"span term {part!r} is not 'k,m,c'")
        k, m = int(bits[0]), int(bits[1])
        out[(k, m)] = out.get((k, m), 0) + complex(bits[2].replace(" ", ""))
    return out


# --- reports ---------------------------------------------------------------


def _echo(a) -> dict:
    return {k: v for k, v in sorted(vars(a).items()) if k not in ("json", "csv", "timings")}


def _report(a, cfg, result: dict, timings: dict) -> dict:
    rep = {"schema": 1, "tool": "gfs2d", "version": __version__, "command": _echo(a),
           "config": cfg.to_dict(), "result": result}
    if a.timings:
        rep["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return rep


def _emit(a, rep: dict) -> None:
    text = json.dumps(rep, sort_keys=True, indent=2, default=_json_default) + "\n"
    if a.json:
        with open(a.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


# --- commands --------------------------------------------------------------


def cmd_classify(a) -> int:
    cfg = config_from_args(a)
    t0 = time.perf_counter()
    exp = LebesgueExponent(a.p)
    w = _weight(a)
    P, Q = _phase(a.P), _phase(a.Q)
    pairs = [(P, Q)] if (P is not None and Q is not None) else ()
    v = classify(w, exp, _pattern(a), cfg, P=P, pairs=pairs)
    _emit(a, _report(a, cfg, {"weight": w.to_dict(), "verdict": v.to_dict()},
                     {"classify": time.perf_counter() - t0}))
    return EXIT_INCONCLUSIVE if v.inconclusive else EXIT_OK


def _witness_for(a, verdict, w):
    pattern = verdict.pattern
    P, Q = _phase(a.P), _phase(a.Q)
    if isinstance(pattern, Point):
        return verdict.witness
    if isinstance(pattern, ColumnZ):
        return PhaseWitness(P) if P is not None else verdict.witness
    if P is not None and Q is not None:
        return PhasePairWitness(P, Q)
    return verdict.witness


def _forced_witness(a, pattern, w):
    """Best-effort witness for --force runs."""
    P, Q = _phase(a.P), _phase(a.Q)
    if isinstance(pattern, ColumnZ):
        if P is None:
            try:
                P = suggest_phase(w)
            except GFSError:
                return None
        return PhaseWitness(P)
    if isinstance(pattern, ColumnZ0) and P is not None and Q is not None:
        return PhasePairWitness(P, Q)
    return None


def _dual_or_block(a, cfg, w, exp, timings):
    """(dual, verdict, blocked_result) with blocked_result set when no dual is available."""
    t0 = time.perf_counter()
    pattern = _pattern(a)
    P, Q = _phase(a.P), _phase(a.Q)
    pairs = [(P, Q)] if (P is not None and Q is not None) else ()
    verdict = classify(w, exp, pattern, cfg, P=P, pairs=pairs)
    timings["classify"] = time.perf_counter() - t0
    try:
        dual = build_dual(pattern, w, exp, _witness_for(a, verdict, w), cfg, verdict=verdict)
        return dual, verdict, None
    except (NotMinimal, WitnessMismatch) as exc:
        if not a.force:
            return None, verdict, {"error": type(exc).__name__, "message": str(exc), "verdict": verdict.to_dict()}
        if isinstance(pattern, Point) and verdict.witness is None:
            from .classifier import _point_candidates

            cands = _point_candidates(w)
            wit = cands[0] if cands else None
        else:
            wit = _forced_witness(a, pattern, w)
        dual = DualSystem(pattern, w, _form_for(pattern, wit), exp, verdict, {"forced": True, "reason": str(exc)})
        return dual, verdict, None


def cmd_dual(a) -> int:
    cfg = config_from_args(a)
    timings: dict = {}
    exp = LebesgueExponent(a.p)
    w = _weight(a)
    dual, verdict, blocked = _dual_or_block(a, cfg, w, exp, timings)
    if blocked is not None:
        _emit(a, _report(a, cfg, blocked, timings))
        return EXIT_BLOCKED
    t0 = time.perf_counter()
    rep = verify_biorthogonality(dual, a.window, cfg)
    timings["biorthogonality"] = time.perf_counter() - t0
    if a.csv:
        rep.to_csv(a.csv)
    result = {
        "dual": dual.to_dict(),
        "verdict": verdict.to_dict(),
        "window": a.window,
        "size": len(rep.indices),
        "max_dev": rep.max_dev,
        "unextrapolated_entries": int((~rep.ok).sum()),
    }
    _emit(a, _report(a, cfg, result, timings))
    return EXIT_OK if rep.ok.all() else EXIT_INCONCLUSIVE


def _target(a, w):
    if a.g_csv:
        if a.span:
            raise UsageError("give either --span or --g-csv, not both")
        return TabulatedFunction.from_csv(a.g_csv)
    return SpanFunction(w, parse_span(a.span))


def _coeff_window(a, g) -> int:
    if a.window is not None:
        return a.window
    return g.radius if isinstance(g, SpanFunction) else 4


def cmd_coeffs(a) -> int:
    cfg = config_from_args(a)
    timings: dict = {}
    exp = LebesgueExponent(a.p)
    w = _weight(a)
    g = _target(a, w)
    dual, verdict, blocked = _dual_or_block(a, cfg, w, exp, timings)
    if blocked is not None:
        _emit(a, _report(a, cfg, blocked, timings))
        return EXIT_BLOCKED
    t0 = time.perf_counter()
    if isinstance(g, SpanFunction) and not g.coeffs and a.window is None:
        table = gfs_coefficients(g, dual, [], cfg)
    else:
        table = gfs_coefficients(g, dual, _coeff_window(a, g), cfg)
    timings["coefficients"] = time.perf_counter() - t0
    if a.csv:
        table.to_csv(a.csv)
    _emit(a, _report(a, cfg, {"dual": dual.to_dict(), "coefficients": table.to_dict(),
                              "summation": "square"}, timings))
    return EXIT_INCONCLUSIVE if table.flagged.any() else EXIT_OK


def cmd_reconstruct(a) -> int:
    cfg = config_from_args(a)
    timings: dict = {}
    exp = LebesgueExponent(a.p)
    w = _weight(a)
    g = _target(a, w)
    dual, verdict, blocked = _dual_or_block(a, cfg, w, exp, timings)
    if blocked is not None:
        _emit(a, _report(a, cfg, blocked, timings))
        return EXIT_BLOCKED
    radius = _coeff_window(a, g)
    try:
        Ns = [int(s) for s in a.N.split(",")] if a.N else list(range(radius + 1))
    except ValueError as exc:
        raise UsageError(f"bad --N list: {exc}") from exc
    if Ns and max(Ns) > radius:
        radius = max(Ns)
    t0 = time.perf_counter()
    table = gfs_coefficients(g, dual, radius, cfg)
    res = reconstruction_error(g, dual, a.norm_p, Ns, cfg, table=table)
    timings["reconstruct"] = time.perf_counter() - t0
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["N", "error", "flag"])
            for N, e, bad in zip(res.N, res.errors, res.flagged):
                out.writerow([N, repr(e), "inconclusive" if bad else "ok"])
    _emit(a, _report(a, cfg, {"dual": dual.to_dict(), "reconstruction": res.to_dict(),
                              "coefficients": table.to_dict()}, timings))
    return EXIT_INCONCLUSIVE if any(res.flagged) else EXIT_OK


SWEEP_COLUMNS = [
    "family", "pattern", "p", "alpha", "complete", "minimal", "m_basis",
    "published_lo", "published_hi", "published_in_range", "derived_lo", "derived_hi", "derived_in_range",
    "c0_complete", "claim_verdict", "disagreement", "c0_status", "c0_levels",
]


def sweep_rows(family: str, alphas, ps, pattern_name: Optional[str], cfg: QuadratureConfig,
               x0: float = 0.0, y0: float = 0.0) -> list[dict]:
    """One row per (p, alpha): verdict fields, published and derived bands, c0 level sequence.

    claim_verdict is the conjunction the published band speaks about (complete, minimal
    and M-basis); disagreement marks rows where it differs from the band flag.
    """
    family = family.lower()
    pattern_name = pattern_name or ("point" if family == "examplesum" else "column")
    pattern = {"point": Point(0, 0), "column": ColumnZ(), "column0": ColumnZ0()}[pattern_name]
    rows = []
    for p in ps:
        exp = LebesgueExponent(p)
        pc = exp.p_conj
        for alpha in alphas:
            w = weight_from_name(family, x0, y0, alpha)
            v = classify(w, exp, pattern, cfg)
            c0 = v.find("c0").result
            claim = v.complete & v.minimal & v.m_basis
            row = {
                "family": family, "pattern": pattern_name, "p": repr(float(p)), "alpha": repr(float(alpha)),
                "complete": v.complete.value, "minimal": v.minimal.value, "m_basis": v.m_basis.value,
                "published_lo": "", "published_hi": "", "published_in_range": "",
                "derived_lo": "", "derived_hi": "", "derived_in_range": "",
                "c0_complete": {"divergent": "yes", "convergent": "no"}.get(c0.status.value, "unknown"),
                "claim_verdict": claim.value, "disagreement": "",
                "c0_status": c0.status.value, "c0_levels": ";".join(repr(x) for x in c0.levels),
            }
            if isinstance(w, (ExampleX, ExampleSum)):
                lo, hi = 1.0 / pc, 1.0 + 1.0 / pc
                dlo, dhi = (lo, hi) if isinstance(w, ExampleX) else (2.0 / pc, 1.0 + 2.0 / pc)
                published = lo <= alpha < hi
                row.update(
                    published_lo=repr(lo), published_hi=repr(hi), published_in_range=str(published).lower(),
                    derived_lo=repr(dlo), derived_hi=repr(dhi), derived_in_range=str(dlo <= alpha < dhi).lower(),
                    disagreement=("undecided" if claim is Tri.UNKNOWN
                                  else ("DISAGREE" if (claim is Tri.YES) != published else "agree")),
                )
            rows.append(row)
    return rows


def cmd_sweep(a) -> int:
    cfg = config_from_args(a)
    t0 = time.perf_counter()
    try:
        alphas = [float(s) for s in a.alphas.split(",") if s.strip()]
        ps = [float(s) for s in a.ps.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list: {exc}") from exc
    rows = sweep_rows(a.family, alphas, ps, a.pattern, cfg, a.x0, a.y0)
    buf = io.StringIO()
    out = csv.DictWriter(buf, SWEEP_COLUMNS, lineterminator="\n")
    out.writeheader()
    out.writerows(rows)
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if a.json:
        _emit(a, _report(a, cfg, {"rows": rows, "summation": "square"}, {"sweep": time.perf_counter() - t0}))
    undecided = any(r["complete"] == "unknown" or r["minimal"] == "unknown" for r in rows)
    return EXIT_INCONCLUSIVE if undecided else EXIT_OK


COMMANDS = {"classify": cmd_classify, "dual": cmd_dual, "coeffs": cmd_coeffs,
            "reconstruct": cmd_reconstruct, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return COMMANDS[a.command](a)
    except (UsageError, GFSError, ValueError) as exc:
        parser.error(str(exc))  # exits with status 2
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
