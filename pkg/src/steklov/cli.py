"""Command-line entry point.

Exit statuses: 0 success, 2 unreadable input or bad arguments,
3 precondition violated, 4 numerical-consistency failure (including a
failed check in ``verify`` or ``bound``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance, bounds, gauge, geometry, oplab, spectral, wordtrace
from .errors import ConsistencyError, PreconditionError, SearchError
from .io import InputFormatError, dumps, load_series, series_to_obj

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CONSISTENCY = 0, 2, 3, 4
TOL_RANGE = (1e-14, 1e-2)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    knobs: dict = field(default_factory=dict)
    fmt: str = "text"  # json | csv | svg | text


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="steklov", description=(
        "Steklov spectra, zeta-invariants, lower bounds, gauge normalization "
        "and boundary reconstruction for symbols on the unit circle."))
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zeta", help="zeta-invariant Z_m")
    z.add_argument("--input", required=True)
    z.add_argument("--m", type=_positive_int, required=True)
    z.add_argument("--band", type=int, help="truncate the symbol to this band first")
    z.add_argument("--tol", type=float, help="truncate by H^{m+1} tail norm below tol")
    z.add_argument("--n", type=int, help="matrix truncation (default 2mK)")
    z.add_argument("--json", action="store_true")

    s = sub.add_parser("spectrum", help="lowest Steklov eigenvalues")
    s.add_argument("--input", required=True)
    s.add_argument("--n", type=_positive_int, default=256)
    s.add_argument("--count", type=_positive_int, default=20)
    s.add_argument("--csv", action="store_true")
    s.add_argument("--allow-signed", action="store_true")
    s.add_argument("--no-convergence", action="store_true")

    b = sub.add_parser("bound", help="Z_m >= S1 >= S2 lower-bound chain")
    b.add_argument("--input", required=True)
    b.add_argument("--m", type=_positive_int, required=True)
    b.add_argument("--jmax", type=int, default=200)

    n = sub.add_parser("normalize", help="conformal representative with b_1 = 0")
    n.add_argument("--input", required=True)
    n.add_argument("--tol", type=float, default=1e-10)
    n.add_argument("--out-band", type=int)

    r = sub.add_parser("reconstruct", help="boundary map from a positive symbol")
    r.add_argument("--input", required=True)
    r.add_argument("--degree", type=_positive_int, default=64)
    r.add_argument("--points", type=int, default=geometry.BOUNDARY_GRID)
    r.add_argument("--svg")
    r.add_argument("--csv")

    o = sub.add_parser("oplab", help="finite-rank family L_λ with λ = tan(π/m)")
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--jmax", type=int, default=12)
    o.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--only", help="comma-separated check numbers")
    v.add_argument("--json", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    knobs = {k: v for k, v in vars(args).items() if k not in ("command", "input")}
    fmt = "text"
    if knobs.get("json"):
        fmt = "json"
    elif args.command == "spectrum" and knobs.get("csv"):
        fmt = "csv"
    elif args.command in ("bound", "normalize", "spectrum", "reconstruct"):
        fmt = "json"
    return RunConfig(args.command, getattr(args, "input", None), knobs, fmt)


def _check_tol(tol):
    if tol is not None and not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise PreconditionError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")


# --- commands -----------------------------------------------------------------

def _zeta(cfg, out):
    k = cfg.knobs
    _check_tol(k.get("tol"))
    a = load_series(cfg.input)
    m = k["m"]
    exact = True
    if k.get("band") is not None:
        if k["band"] < 0:
            raise PreconditionError("band must be nonnegative")
        exact = not np.any(a.tail(k["band"]).coeffs)
        a = a.truncate(k["band"])
    if k.get("tol") is not None:
        a, ok = wordtrace.truncate_for_tolerance(a, m, k["tol"])
        exact = exact and ok
    rep = wordtrace.zeta_invariant(a, m, k.get("n"), exact=exact)
    res = {"m": rep.m, "value": rep.value, "exact": rep.exact, "truncation": rep.truncation}
    if cfg.fmt == "json":
        out.write(dumps(res))
    else:
        tag = "exact" if rep.exact else "approximation"
        out.write(f"Z_{rep.m} = {rep.value:.17g}  ({tag}, N = {rep.truncation}, band = {rep.band})\n")
    return EXIT_OK


def _spectrum(cfg, out):
    k = cfg.knobs
    a = load_series(cfg.input)
    res = spectral.steklov_spectrum(a, k["n"], k["count"], convergence=not k["no_convergence"],
                                    allow_signed=k["allow_signed"])
    conv = res.convergence if res.convergence is not None else [None] * len(res)
    if cfg.fmt == "csv":
        out.write("k,eigenvalue,convergence\n")
        for i, (lam, c) in enumerate(zip(res.eigenvalues, conv)):
            cs = "" if c is None else f"{c:.17g}"
            out.write(f"{i},{lam:.17g},{cs}\n")
    else:
        out.write(dumps({"truncation": res.truncation, "eigenvalues": list(res.eigenvalues),
                         "convergence": None if res.convergence is None else list(res.convergence)}))
    return EXIT_OK


def _bound(cfg, out):
    k = cfg.knobs
    a = load_series(cfg.input)
    bc = bounds.bound_chain(a, k["m"], k["jmax"])
    out.write(dumps({
        "m": bc.m, "Z": bc.Z, "S1": bc.S1, "S1_tail": bc.S1_tail, "S2": bc.S2,
        "lemma_c": bc.c.lemma_c, "theorem_c": bc.c.theorem_c,
        "argmin_j": bc.c.argmin_j if bc.c.argmin_j == bounds.INF else int(bc.c.argmin_j),
        "monotone": bc.c.monotone, "jmax": bc.c.jmax, "holds": bc.holds,
    }))
    return EXIT_OK if bc.holds else EXIT_CONSISTENCY


def _normalize(cfg, out):
    k = cfg.knobs
    _check_tol(k["tol"])
    a = load_series(cfg.input)
    res = gauge.normalize_gauge(a, k["tol"], k.get("out_band"))
    out.write(dumps({
        "b": series_to_obj(res.b), "r0": res.r0, "alpha0": res.alpha0,
        "residual": res.residual, "b1_abs": abs(res.b.coef(1)), "tail_energy": res.tail_energy,
    }))
    return EXIT_OK


def _reconstruct(cfg, out):
    k = cfg.knobs
    a = load_series(cfg.input)
    mr = geometry.map_from_symbol(a, k["degree"])
    curve = geometry.curve_export(mr.phi, k["points"])
    if k.get("svg"):
        Path(k["svg"]).write_text(curve.to_svg(), encoding="utf-8")
    if k.get("csv"):
        Path(k["csv"]).write_text(curve.to_csv(), encoding="utf-8")
    out.write(dumps({
        "degree": k["degree"],
        "phi": [[float(c.real), float(c.imag)] for c in mr.phi.taylor],
        "last_coefficient": mr.last_coefficient,
        "closing_gap": curve.closing_gap,
        "points": len(curve.points),
    }))
    return EXIT_OK


def _oplab(cfg, out):
    k = cfg.knobs
    rows = oplab.prop11_pattern(k["m"], k["jmax"])
    zeros = [r.j for r in rows if r.is_zero]
    expected = [j for j in range(1, k["jmax"] + 1) if j % k["m"] == 0]
    gcd = oplab.gcd_pattern(k["m"])
    agree = all(r.commutes is None or r.commutes == r.is_zero for r in rows)
    ok = zeros == expected and agree and gcd["both_zero"] and gcd["gcd_commutes"] and gcd["multiples_zero"]
    if cfg.fmt == "json":
        out.write(dumps({
            "m": k["m"], "lambda": float(np.tan(np.pi / k["m"])),
            "rows": [{"j": r.j, "trace": r.trace, "is_zero": r.is_zero, "commutes": r.commutes}
                     for r in rows],
            "zeros": zeros, "gcd": gcd, "pattern_ok": ok,
        }))
    else:
        out.write(f"λ = tan(π/{k['m']}) = {np.tan(np.pi / k['m']):.17g}\n")
        out.write(f"{'j':>3}  {'trace':>24}  zero  commutes\n")
        for r in rows:
            c = "-" if r.commutes is None else str(r.commutes).lower()
            out.write(f"{r.j:>3}  {r.trace:>24.17g}  {'yes ' if r.is_zero else 'no  '}  {c}\n")
        out.write(f"zeros at {{{', '.join(map(str, zeros))}}}\n")
    return EXIT_OK if ok else EXIT_CONSISTENCY


def _verify(cfg, out):
    only = cfg.knobs.get("only")
    numbers = None
    if only:
        try:
            numbers = {int(x) for x in only.split(",") if x.strip()}
        except ValueError as e:
            raise PreconditionError(f"--only expects numbers, got {only!r}") from e
        unknown = numbers - {c.number for c in acceptance.CHECKS}
        if unknown:
            raise PreconditionError(f"unknown check numbers {sorted(unknown)}")
    results = acceptance.run_checks(numbers)
    if cfg.fmt == "json":
        out.write(dumps([{"number": r.number, "name": r.name, "passed": r.passed,
                          "detail": r.detail, "runtime": r.runtime, "budget": r.budget}
                         for r in results]))
    else:
        for r in results:
            out.write(r.line() + "\n")
        n_ok = sum(r.passed for r in results)
        out.write(f"{n_ok}/{len(results)} checks passed\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CONSISTENCY


COMMANDS = {
    "zeta": _zeta, "spectrum": _spectrum, "bound": _bound, "normalize": _normalize,
    "reconstruct": _reconstruct, "oplab": _oplab, "verify": _verify,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except InputFormatError as e:
        err.write(f"error: {e}\n")
        return EXIT_PARSE
    except PreconditionError as e:
        err.write(f"precondition violated: {e}\n")
        return EXIT_PRECONDITION
    except SearchError as e:
        err.write(f"search failed: {e} (best residual {e.best_residual})\n")
        return EXIT_CONSISTENCY
    except ConsistencyError as e:
        err.write(f"consistency failure: {e}\n")
        return EXIT_CONSISTENCY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
