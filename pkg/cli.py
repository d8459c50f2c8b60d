"""
cli.py
------
Single entry point for catalog runs, wall queries and the bound calculators.

Usage
-----
    python cli.py catalog                                # bundled 13-family catalog
    python cli.py catalog --file catalogs/covers.yaml --json
    python cli.py catalog --family "X_{4,6}" --db cy3check.db
    python cli.py walls --geometry delpezzo --m 1 --class=1,0,-2 --window=-5,0
    python cli.py bn --surface k3 --s 4 --m 2
    python cli.py bmt --h3 5 --c2h 50 --epsilon 1/10
    python cli.py reduce --m 5 --chi 5 --bn 3 --smooth
    python cli.py audit --h3 5 --c2h 50 --samples 10000

Negative values after a flag need the `--flag=value` form.
All numbers are exact: "3/7", "-2" and "0.25" are accepted.

Exit codes
----------
    0 : everything checked holds
    1 : usage, input or parse error
    2 : a mathematical outcome that is Inconclusive, Fails or has no certificate
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from pythonjsonlogger.json import JsonFormatter

from config import AUDIT_SAMPLES, AUDIT_SEED, HYPERGEO_CATALOG, LOG_DATEFMT, LOG_FORMAT

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 1, 2


def configure_logging(level: str = "WARNING", as_json: bool = False) -> None:
    """Root logger on stderr, so stdout carries only the report."""
    handler = logging.StreamHandler(sys.stderr)
    if as_json:
        handler.setFormatter(JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))
    logging.basicConfig(level=level.upper(), handlers=[handler], force=True)


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------

def rational(text: str) -> Fraction:
    from surds import parse_rational
    return parse_rational(text)


def rational_list(count: int):
    def parse(text: str) -> list[Fraction]:
        parts = [p for p in text.split(",")]
        if len(parts) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got {text!r}")
        try:
            return [rational(p) for p in parts]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _emit(payload, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _value(value) -> dict:
    """Exact and decimal renderings of a rational or surd."""
    from surds import decimal, render
    return {"exact": render(value), "decimal": decimal(value)}


def _value_text(value) -> str:
    from surds import decimal, is_rational, render
    return render(value) if is_rational(value) else f"{render(value)}  ≈ {decimal(value)}"


# ---------------------------------------------------------------------------
# Commands: each returns an exit code
# ---------------------------------------------------------------------------

def cmd_catalog(args: argparse.Namespace) -> int:
    from bmtchain import Verdict
    from catalog import report_frame, report_records, run_catalog
    from loaders import catalog_frames, load_catalog

    records = load_catalog(args.file)
    reports, errors = run_catalog(records, family=args.family)
    for err in errors:
        print(f"error: {err.name}: {err.message}", file=sys.stderr)

    if args.db is not None:
        from db import Database
        with Database(args.db) as db:
            for section, df in catalog_frames(records).items():
                db.write(f"stg_{section}", df)
            db.write("mart_reports", report_frame(reports))

    if args.json:
        _emit(report_records(reports), True, "")
    else:
        _emit(None, False, report_frame(reports).to_string(index=False))

    if errors:
        return EXIT_INPUT
    return EXIT_OK if all(r.verdict is Verdict.HOLDS for r in reports) else EXIT_MATH


def cmd_walls(args: argparse.Namespace) -> int:
    from invariants import ChernSurface, SurfaceGeometry, SurfaceKind
    from surds import render
    from tiltplane import SlopeWindow, brute_force_walls, enumerate_walls

    kind = SurfaceKind.K3 if args.geometry == "k3" else SurfaceKind.DELPEZZO
    geom = SurfaceGeometry(kind, args.m, picard_rank_one=not args.any_picard)
    r, c1H, ch2 = args.cls
    if r.denominator != 1:
        raise ValueError(f"ch0 must be an integer, got {r}")
    v = ChernSurface(int(r), c1H, ch2)
    if not geom.on_lattice(v):
        raise ValueError(f"{v.as_tuple()} is not on the {kind.value} lattice for m={render(geom.m)}")
    window = SlopeWindow(*args.window)
    found = enumerate_walls(v, window, geom, cap=args.cap, strict_cap=not args.allow_truncation)

    rows = [{
        "slope":     render(c.wall.slope),
        "intercept": render(c.wall.intercept),
        "witness":   [c.u.r, render(c.u.c1H), render(c.u.ch2)],
    } for c in found]
    lines: list[str] = []
    if not found:
        lines.append("no walls")
    elif v.r == 0:
        slopes = sorted({c.wall.slope for c in found})
        for s in slopes:
            lines.append(f"slope {render(s)} ×{sum(1 for c in found if c.wall.slope == s)}")
        lines += [f"  w = {row['slope']}·b + {row['intercept']}" for row in rows]
    else:
        lines += [
            f"w = {row['slope']}·b + {row['intercept']}   witness ({row['witness'][0]}, "
            f"{row['witness'][1]}, {row['witness'][2]})"
            for row in rows
        ]

    status = EXIT_OK
    payload: dict = {"class": [v.r, render(v.c1H), render(v.ch2)], "walls": rows}
    if args.oracle:
        oracle = brute_force_walls(v, window, geom)
        match = [c.wall for c in oracle] == [c.wall for c in found]
        payload["oracle_match"] = match
        lines.append(f"oracle: {'match' if match else 'MISMATCH'}")
        status = EXIT_OK if match else EXIT_MATH
    _emit(payload, args.json, "\n".join(lines))
    return status


def cmd_bn(args: argparse.Namespace) -> int:
    from bnbounds import CurveProfile, bn_lower, bn_upper_classical, bn_upper_delpezzo, bn_upper_k3

    if args.surface is not None:
        if args.s is None or args.m is None:
            raise ValueError("--surface needs --s and --m")
        bound = bn_upper_delpezzo(args.s, args.m) if args.surface == "delpezzo" \
            else bn_upper_k3(args.s, args.m)
        bounds = [bound]
    elif args.g is not None:
        profile = CurveProfile(g=args.g, gonality=args.gonality, very_general=args.very_general)
        bounds = bn_upper_classical(profile) + bn_lower(profile)
    else:
        raise ValueError("bn needs --surface or --g")

    payload = [{"source": b.source.value, "kind": b.kind.value, **_value(b.value)} for b in bounds]
    if len(bounds) == 1:
        text = _value_text(bounds[0].value)
    else:
        text = "\n".join(f"{b.kind.value:<6} {b.source.value:<16} {_value_text(b.value)}"
                         for b in bounds)
    _emit(payload, args.json, text)
    return EXIT_OK


def cmd_bmt(args: argparse.Namespace) -> int:
    from bmtchain import gamma_cycle, q_form, validate_gamma
    from invariants import ChernThreefold, ThreefoldGeometry
    from surds import render

    geom = ThreefoldGeometry("cli", args.h3, args.c2h)
    cert = gamma_cycle(args.epsilon, geom)
    payload = {
        "epsilon": render(cert.epsilon),
        "gamma":   render(cert.gamma),
        "gammaH":  render(cert.gammaH),
        "valid":   validate_gamma(cert, geom),
    }
    lines = [f"ε = {payload['epsilon']}", f"γ = {payload['gamma']}", f"Γ·H = {payload['gammaH']}"]
    if args.cls is not None:
        q = q_form(ChernThreefold(*args.cls), args.b, args.w, cert.gammaH, geom)
        payload["Q"] = render(q)
        lines.append(f"Q = {payload['Q']}")
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK if payload["valid"] else EXIT_MATH


def cmd_reduce(args: argparse.Namespace) -> int:
    from bmtchain import NoCertificate, epsilon_for_surface
    from surds import render

    g = args.g if args.g is not None else int(args.m) + 1
    try:
        cert = epsilon_for_surface(args.bn, args.chi, args.m, g, args.smooth)
    except NoCertificate as exc:
        print(f"no certificate: {exc}", file=sys.stderr)
        return EXIT_MATH
    payload = {
        "A": render(cert.A), "chi": render(cert.chi), "m": render(cert.m),
        "smooth": cert.smooth, "n": cert.n,
        "delta": render(cert.delta), "epsilon": render(cert.epsilon),
    }
    text = "\n".join(f"{key:<8}{value}" for key, value in payload.items())
    _emit(payload, args.json, text)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    from bmtchain import audit_ch2_chain
    from invariants import ThreefoldGeometry
    from surds import render

    geom = ThreefoldGeometry(args.name, args.h3, args.c2h)
    result = audit_ch2_chain(args.samples, args.epsilon, geom, args.seed)
    payload = {
        "geometry": geom.name,
        "samples":  result.samples,
        "seed":     result.seed,
        "checked":  result.checked,
        "skipped":  result.skipped,
        "failures": len(result.failures),
        "point_class_q": render(result.point_class_q),
        "passed":   result.passed,
    }
    text = "\n".join(f"{key:<14}{value}" for key, value in payload.items())
    _emit(payload, args.json, text)
    return EXIT_OK if result.passed else EXIT_MATH


# ---------------------------------------------------------------------------
# Registry: add new commands here
# ---------------------------------------------------------------------------

COMMANDS: dict[str, callable] = {
    "catalog": cmd_catalog,
    "walls":   cmd_walls,
    "bn":      cmd_bn,
    "bmt":     cmd_bmt,
    "reduce":  cmd_reduce,
    "audit":   cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cy3check",
        description="Check the Bogomolov–Gieseker type inequality on Calabi–Yau threefolds.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-json", action="store_true", help="Structured JSON logs on stderr.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("catalog", help="Run the theorem checkers over a catalog file.")
    p.add_argument("--file", type=Path, default=HYPERGEO_CATALOG)
    p.add_argument("--family", help="Check a single family by name.")
    p.add_argument("--db", type=Path, help="Also write staging and report tables to DuckDB.")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("walls", help="Enumerate tilt-stability walls on a surface.")
    p.add_argument("--geometry", choices=["k3", "delpezzo"], required=True)
    p.add_argument("--m", type=rational, required=True)
    p.add_argument("--class", dest="cls", type=rational_list(3), required=True, metavar="R,C1H,CH2")
    p.add_argument("--window", type=rational_list(2), required=True, metavar="BMIN,BMAX")
    p.add_argument("--cap", type=int, help="Maximal |ch0| searched (default CY3CHECK_CAP).")
    p.add_argument("--any-picard", action="store_true", help="Allow any c1H ∈ ℤ.")
    p.add_argument("--allow-truncation", action="store_true",
                   help="List the walls found even if candidates reach the rank cap.")
    p.add_argument("--oracle", action="store_true", help="Compare with the brute-force box search.")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bn", help="Brill–Noether bounds.")
    p.add_argument("--surface", choices=["delpezzo", "k3"])
    p.add_argument("--s", type=int)
    p.add_argument("--m", type=rational)
    p.add_argument("--g", type=int, help="Classical bounds for a curve of genus g.")
    p.add_argument("--gonality", type=int)
    p.add_argument("--very-general", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bmt", help="Γ(ε) and Q^Γ on a Calabi–Yau threefold.")
    p.add_argument("--h3", type=rational, required=True)
    p.add_argument("--c2h", type=rational, required=True)
    p.add_argument("--epsilon", type=rational, required=True)
    p.add_argument("--class", dest="cls", type=rational_list(4), metavar="R,C1H2,CH2H,CH3")
    p.add_argument("--b", type=rational, default=Fraction(0))
    p.add_argument("--w", type=rational, default=Fraction(0))
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reduce", help="ε-certificate from a Brill–Noether bound.")
    p.add_argument("--m", type=rational, required=True)
    p.add_argument("--chi", type=rational, required=True)
    p.add_argument("--bn", type=rational, required=True)
    p.add_argument("--g", type=int, help="Curve genus (default m + 1).")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--smooth", dest="smooth", action="store_true", default=True)
    mode.add_argument("--singular", dest="smooth", action="store_false")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("audit", help="Sampled audit of the ch2 inequality chain.")
    p.add_argument("--h3", type=rational, required=True)
    p.add_argument("--c2h", type=rational, required=True)
    p.add_argument("--name", default="X")
    p.add_argument("--epsilon", type=rational, default=Fraction(1, 10))
    p.add_argument("--samples", type=int, default=AUDIT_SAMPLES)
    p.add_argument("--seed", type=int, default=AUDIT_SEED)
    p.add_argument("--json", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    configure_logging(args.log_level, args.log_json)
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    log.info("'%s' finished in %.2fs with exit code %d",
             args.command, time.perf_counter() - start, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
