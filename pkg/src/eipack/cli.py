"""Command line front end.

Exit codes: 0 when everything asked for holds, 1 when a verification or a
construction fails, 2 for unusable input (bad flags, unreadable or
malformed files, parameters outside the allowed range).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, corner, fusion, io, rho, subspaces
from .errors import EIPackError, InvalidInput
from .numerics import DEFAULT_TOL, Field, Tolerances

DEFAULT_SEED = 0
KINDS = ("ei3", "trivial", "eitff2r", "hoggar", "naimark", "dsum", "counterexample")
REQUIREMENTS = ("ei", "tight", "eitff", "dimKn")


class UsageError(Exception):
    pass


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _clean(v):
    """inf/nan are not JSON; report them as null."""
    if isinstance(v, float) and not np.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _dump(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, default=_json_default) + "\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _tol(args) -> Tolerances:
    return Tolerances(rank_rel=args.tol_rank, residual_abs=args.tol_res)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("EIPACK_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"EIPACK_SEED must be an integer, got {env!r}")


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.kind} needs {' '.join(missing)}")


def _parse_J(text: str) -> tuple:
    try:
        J = tuple(int(t) - 1 for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--J takes comma-separated 1-based indices, got {text!r}")
    if not J:
        raise UsageError("--J is empty")
    return J


def _corner_summary(S, tol) -> dict | None:
    """dim K_1..K_n with the dim K_n = n test, or None when the sequence is
    not an EI with alpha < 1."""
    alpha = subspaces.is_equi_isoclinic(S, tol)
    if alpha is None or alpha >= 1 - tol.residual_abs or S.n < 2:
        return None
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        kn = corner.certify_dim_Kn_eq_n(S, tol, strict=False)
    out = kn.as_dict()
    out["warnings"] = [str(w.message) for w in caught]
    return out


# bounds ------------------------------------------------------------------

def cmd_bounds(args) -> int:
    d, r, n = args.d, args.r, args.n
    if min(d, r, n) < 1:
        raise UsageError("d, r, n must be positive")
    if r >= d:
        raise UsageError(f"need r < d, got r={r}, d={d}")
    if n < 2:
        raise UsageError("need n >= 2")
    field = Field.parse(args.field)
    t = bounds.ParamTriple(d, r, n)
    report = {"operation": "bounds", "params": {"d": d, "r": r, "n": n, "field": field.value}}
    if d < n * r:
        report.update(bounds.classify_spark_vs_welch(t).as_dict())
    else:
        report.update({"welch": None, "spark": bounds.spark_bound(d, r), "comparison": None, "case": None,
                       "eitff_excluded": False, "status": "welch bound vacuous (d >= nr)"})
    cb = bounds.counting_bounds(d, r, field)
    report["counting"] = {"gerzon": cb.gerzon, "lemmens_seidel": cb.lemmens_seidel, "k3": cb.k3}
    report["radon_hurwitz"] = {"R": bounds.radon_hurwitz(r, Field.REAL), "C": bounds.radon_hurwitz(r, Field.COMPLEX)}
    report["tolerances"] = _tol(args).as_dict()
    _emit(_dump(report), args.out)
    return 0


# table / plotdata --------------------------------------------------------

def cmd_table(args) -> int:
    if args.dmax < 8:
        raise UsageError("--dmax must be at least 8")
    _emit(bounds.table_csv(bounds.nonexistence_table(args.dmax), naimark=args.naimark), args.out)
    return 0


def cmd_plotdata(args) -> int:
    if args.nmax < 2 or args.grid < 2:
        raise UsageError("--nmax and --grid must be at least 2")
    _emit(bounds.figure1_csv(bounds.figure1_data(args.nmax, args.grid), args.nmax), args.out)
    return 0


# construct ---------------------------------------------------------------

def _read(path, tol):
    # an unusable input file is a usage problem, not a failed construction
    try:
        return io.read_sequence(path, tol.residual_abs)
    except InvalidInput as exc:
        raise UsageError(f"{path}: {type(exc).__name__}: {exc}")


def _build(args, tol, seed):
    kind = args.kind
    field = Field.parse(args.field)
    if kind == "ei3":
        _need(args, "d", "r", "alpha")
        return subspaces.construct_ei3(args.d, args.r, args.alpha, field), {
            "d": args.d, "r": args.r, "alpha": args.alpha, "field": field.value}
    if kind == "trivial":
        _need(args, "r", "n")
        return fusion.trivial_eitff(field, args.r, args.n), {"r": args.r, "n": args.n, "field": field.value}
    if kind == "eitff2r":
        _need(args, "r")
        if args.n is not None:
            raise UsageError("eitff2r computes n = rho(r) + 2 itself; do not pass --n")
        R = rho.build_rho(args.r, field)
        B = rho.random_simplex(R, len(R) + 1, np.random.default_rng(seed))
        return rho.eitff_from_simplex(B), {"r": args.r, "field": field.value, "n": len(R) + 2}
    if kind == "counterexample":
        _need(args, "r")
        return rho.counterexample_eitff(args.r, field), {"r": args.r, "field": field.value}
    files = args.inputs or []
    if kind in ("hoggar", "naimark"):
        if len(files) != 1:
            raise UsageError(f"{kind} takes exactly one --in file")
        S = _read(files[0], tol)
        out = fusion.hoggar_c_to_r(S) if kind == "hoggar" else fusion.naimark_complement(S, tol)
        return out, {"in": files}
    if kind == "dsum":
        if len(files) != 2:
            raise UsageError("dsum takes two --in files")
        S1, S2 = (_read(f, tol) for f in files)
        return fusion.direct_sum(S1, S2, tol), {"in": files}
    raise UsageError(f"unknown kind {kind}")


def _certificate(S, tol) -> dict:
    cert = fusion.certify(S, tol).as_dict() if S.n >= 2 else None
    return {"certificate": cert, "corner": _corner_summary(S, tol) if S.n >= 2 else None}


def cmd_construct(args) -> int:
    tol = _tol(args)
    seed = _seed(args)
    try:
        S, params = _build(args, tol, seed)
    except EIPackError as exc:
        print(f"construct {args.kind} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = {"operation": f"construct {args.kind}", "params": params, "seed": seed,
              "tolerances": tol.as_dict(), **_certificate(S, tol)}
    io.write_sequence(args.out, S, {"provenance": _clean(report)})
    sys.stdout.write(_dump(report))
    return 0


# verify / corner ---------------------------------------------------------

def _load(args, tol):
    return io.read_sequence(args.file, tol.residual_abs)


def cmd_verify(args) -> int:
    tol = _tol(args)
    S = _load(args, tol)
    report = {"operation": "verify", "file": str(args.file), "d": S.d, "r": S.r, "n": S.n,
              "field": S.field.value, "tolerances": tol.as_dict(), **_certificate(S, tol)}
    if args.corner_max is not None:
        if not 1 <= args.corner_max <= S.n:
            raise UsageError(f"--corner-max must lie in [1, {S.n}]")
        report["corner_prefix"] = _prefix(S, tol, args.corner_max)
    if args.J is not None:
        K = corner.corner_space(S, _parse_J(args.J), tol)
        report["corner_J"] = {"J": [i + 1 for i in K.J], "dim": K.dim, "gap": K.gap, "certified": K.certified}
    failed = []
    cert, kn = report["certificate"], report["corner"]
    for req in args.require or ():
        if req == "ei" and not (cert and cert["is_ei"]):
            failed.append("is_ei")
        elif req == "tight" and not (cert and cert["is_tight"]):
            failed.append("is_tight")
        elif req == "eitff" and not (cert and cert["is_eitff"]):
            failed.append("is_eitff")
        elif req == "dimKn" and not (kn and kn["satisfied"]):
            failed.append("dim K_n = n")
    stored = _stored_certificate(args.file, tol)
    if stored is not None and stored != _clean(report["certificate"]):
        failed.append("certificate matches construction")
    report["failed"] = failed
    report["verified"] = not failed
    _emit(_dump(report), args.out)
    for name in failed:
        print(f"verification failed: {name}", file=sys.stderr)
    return 1 if failed else 0


def _stored_certificate(path, tol):
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    prov = obj.get("provenance")
    if not isinstance(prov, dict) or "certificate" not in prov:
        return None
    if prov.get("tolerances") is not None and prov["tolerances"] != tol.as_dict():
        return None
    return prov["certificate"]


def _prefix(S, tol, upto) -> dict:
    import warnings

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pre = corner.corner_prefix(S, tol, upto=upto, strict=False)
    return {"dims": list(pre.dims), "gaps": list(pre.gaps), "certified": pre.certified,
            "warnings": [str(w.message) for w in caught]}


def cmd_corner(args) -> int:
    tol = _tol(args)
    S = _load(args, tol)
    report = {"operation": "corner", "file": str(args.file), "tolerances": tol.as_dict()}
    if args.J is not None:
        K = corner.corner_space(S, _parse_J(args.J), tol)
        report["J"] = [i + 1 for i in K.J]
        report["dim"] = K.dim
        report["gap"] = K.gap
        report["certified"] = K.certified
    else:
        upto = S.n if args.corner_max is None else args.corner_max
        if not 1 <= upto <= S.n:
            raise UsageError(f"--corner-max must lie in [1, {S.n}]")
        dims = []
        gaps = []
        for j in range(1, upto + 1):
            K = corner.corner_space(S, range(j), tol)
            dims.append(K.dim)
            gaps.append(K.gap)
        report["dims"] = dims
        report["gaps"] = gaps
        report["certified"] = all(g >= corner.MIN_GAP for g in gaps)
    _emit(_dump(report), args.out)
    return 0


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol-rank", type=float, default=DEFAULT_TOL.rank_rel, help="relative rank cutoff")
    common.add_argument("--tol-res", type=float, default=DEFAULT_TOL.residual_abs, help="absolute residual tolerance")
    common.add_argument("--seed", type=int, help="random seed (default: $EIPACK_SEED or 0)")

    p = argparse.ArgumentParser(prog="eipack", description="Equi-isoclinic subspaces and EITFFs.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="Welch/spark comparison and counting bounds")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--field", choices=["R", "C"], default="R")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser(
        "table",
        parents=[common],
        help="parameters excluded by cases IV and V",
        description="List (d, r, n) with d <= dmax for which the spark bound exceeds the Welch bound "
        "by case IV or V.  r runs over 1..d-1 and n over floor(d/r)+1..floor(d/r)+6, which covers "
        "both cases.",
    )
    t.add_argument("--dmax", type=int, default=29)
    t.add_argument("--naimark", action="store_true", help="add the complement parameters (rn-d, r, n)")
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("construct", parents=[common], help="build a sequence and write it as JSON")
    c.add_argument("kind", choices=KINDS)
    c.add_argument("--d", type=int)
    c.add_argument("--r", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--alpha", type=float)
    c.add_argument("--field", choices=["R", "C"], default="C")
    c.add_argument("--in", dest="inputs", action="append", help="input sequence file (hoggar, naimark, dsum)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="certify a sequence file")
    v.add_argument("file")
    v.add_argument("--corner-max", type=int, help="also report dim K_1..K_j")
    v.add_argument("--J", help="1-based comma-separated index set for dim K_J")
    v.add_argument("--require", action="append", choices=REQUIREMENTS, help="fail with exit 1 unless this holds")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("corner", parents=[common], help="corner space dimensions of a sequence file")
    k.add_argument("file")
    k.add_argument("--corner-max", type=int)
    k.add_argument("--J")
    k.set_defaults(func=cmd_corner)

    pl = sub.add_parser("plotdata", parents=[common], help="CSV of the spark and Welch curves")
    pl.add_argument("--nmax", type=int, default=8)
    pl.add_argument("--grid", type=int, default=400)
    pl.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "construct" and not args.out:
        parser.error("construct needs --out")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eipack {args.command}: {exc}", file=sys.stderr)
        return 2
    except InvalidInput as exc:
        print(f"eipack {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except EIPackError as exc:
        print(f"eipack {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
