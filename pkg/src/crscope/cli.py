"""Command-line front end.

Exit codes: 0 when the analysis completed and every asserted check passed,
1 when a check was violated, 2 on input errors (including malformed JSON).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter

import numpy as np

from . import __version__
from .crlinear import complex_structure, cr_type_of_subspace, grassmannian_dim, stratum_dim
from .errors import CRScopeError, InputError
from .manifold import classify_point, levi_pencil_at, project, sample_points
from .maxmod import partition_domain, psi_region, verify_max_modulus, verify_psi_bound
from .numerics import Tolerance, rank_gap
from .pencil import (
    SphereOptions,
    default_threads,
    min_two_sided_signature,
    span_dim_bound_check,
    weak_pseudoconcavity_order,
)
from .polynomial import ZPolynomial
from .problems import BUILDERS, KINDS, dumps, from_catalog, load_shipped, shipped_names
from .quadric import (
    CATALOG,
    augmented_pencil,
    is_transversal_origin,
    kernel_cr_type,
    sample_quadric,
    singular_locus_scan,
)
from .serialize import (
    dec_array,
    dec_param,
    decode_function,
    decode_patch,
    decode_pencil,
    decode_quadric,
    decode_quadric_of_patch,
    decode_subspace,
    enc_complex,
)

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2
SCAN_BUDGET = 8000  # grid points for the default singular-locus scan
MAX_SCAN_DIM = 8

log = logging.getLogger("crscope")

DEFAULTS = {
    "rank_tol": 1e-9,
    "eig_tol": 1e-8,
    "seed": 0,
    "samples": 4096,
    "restarts": 8,
    "iterations": 50,
    "grid": None,
}


# option handling

def resolve_options(file_opts: dict, args) -> dict:
    """Defaults, then the problem file's options, then command-line flags."""
    opts = dict(DEFAULTS)
    unknown = set(file_opts) - set(DEFAULTS) - {"threads"}
    if unknown:
        raise InputError(f"unknown options {sorted(unknown)}")
    opts.update(file_opts)
    for key, flag in (("rank_tol", "tol"), ("eig_tol", "eig_tol"), ("seed", "seed"),
                      ("samples", "samples"), ("grid", "grid")):
        val = getattr(args, flag, None)
        if val is not None:
            opts[key] = val
    # thread count only affects speed, so it is kept out of the report
    opts["threads"] = args.threads if args.threads is not None else file_opts.get("threads", default_threads())
    return opts


def sphere_options(opts: dict) -> SphereOptions:
    return SphereOptions(samples=int(opts["samples"]), restarts=int(opts["restarts"]),
                         iterations=int(opts["iterations"]), seed=int(opts["seed"]),
                         threads=int(opts["threads"]), tol=tolerance(opts))


def tolerance(opts: dict) -> Tolerance:
    return Tolerance(float(opts["rank_tol"]), float(opts["eig_tol"]))


def reported_options(opts: dict) -> dict:
    return {k: v for k, v in sorted(opts.items()) if k != "threads"}


# input

def read_problem(path: str | None, expected: str) -> dict:
    if path in (None, "-"):
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        source = path
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "kind" not in doc or "payload" not in doc:
        raise InputError(f"{source}: a problem file needs 'kind' and 'payload'")
    if doc["kind"] not in KINDS:
        raise InputError(f"{source}: unknown kind {doc['kind']!r}")
    if doc["kind"] != expected:
        raise InputError(f"{source}: expected a {expected!r} problem, got {doc['kind']!r}")
    options = doc.get("options", {}) or {}
    if not isinstance(options, dict):
        raise InputError("options must be an object")
    return {"kind": doc["kind"], "payload": doc["payload"], "options": options}


def _points(spec, patch, quadric, opts) -> np.ndarray:
    """Point cloud from an explicit list or a sampling recipe."""
    seed = int(opts["seed"])
    if isinstance(spec, list):
        return dec_array(spec, 2, "points").reshape(-1, patch.n)
    if not isinstance(spec, dict):
        raise InputError("points must be a list or a sampling recipe")
    kind = spec.get("kind")
    if kind == "sample":
        return sample_points(patch, int(spec.get("count", 100)), seed)
    if kind == "quadric":
        if quadric is None:
            raise InputError("quadric sampling needs a patch given by a quadric")
        return sample_quadric(quadric, int(spec.get("count", 100)), float(spec.get("radius", 1.0)), seed)
    if kind == "grid":
        axes = spec.get("axes")
        if not isinstance(axes, list) or len(axes) != 2 * patch.n:
            raise InputError(f"grid needs {2 * patch.n} axes [lo, hi, num]")
        lines = [np.linspace(float(lo), float(hi), int(num)) for lo, hi, num in axes]
        X = np.stack(np.meshgrid(*lines, indexing="ij"), axis=-1).reshape(-1, 2 * patch.n)
        Z, ok = project(patch, X[:, :patch.n] + 1j * X[:, patch.n:])
        return Z[ok]
    raise InputError(f"unknown point recipe {kind!r}")


def _predicate(spec: dict, n: int):
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "ball":
        coords = [int(c) for c in spec.get("coords", range(n))]
        r = float(spec.get("radius", 1.0))
        center = dec_array(spec.get("center", [0.0] * len(coords)), 1, "center")
        return lambda Z: (np.abs(Z[:, coords] - center) ** 2).sum(axis=1) - r * r
    if kind == "coordinate":
        i, part, level = int(spec.get("index", 0)), spec.get("part", "re"), float(spec.get("level", 0.0))
        return lambda Z: (Z[:, i].real if part == "re" else Z[:, i].imag) - level
    if kind == "polynomial":
        f = ZPolynomial.from_json(n, spec.get("terms", []))
        return f.eval_real
    raise InputError(f"unknown predicate kind {kind!r}")


# commands

def cmd_crtype(prob, opts):
    S = decode_subspace(prob["payload"])
    tol = tolerance(opts)
    t = cr_type_of_subspace(S, tol)
    T = S.basis
    return {
        "ambient_n": S.ambient_n,
        "real_dim": S.dim,
        "cr_type": {"m": t.m, "h": t.h},
        "stratum_dim": stratum_dim(S.ambient_n, t.m, t.h),
        "grassmannian_dim": grassmannian_dim(S.ambient_n, S.dim),
        "rank_gap": round(rank_gap(np.hstack([T, complex_structure(S.ambient_n) @ T]), tol), 6),
    }, {}


def _default_grid(dim: int, requested) -> int | None:
    if requested is not None:
        return int(requested)
    if dim > MAX_SCAN_DIM:
        return None
    return max(2, min(20, int(round(SCAN_BUDGET ** (1.0 / dim)))))


def cmd_quadric(prob, opts):
    q = decode_quadric(prob["payload"])
    tol = tolerance(opts)
    out = {"quadric": {"name": q.name, "m": q.m, "h": q.h, "p": q.p, "n": q.n}}
    if q.p:
        out["transversality"] = is_transversal_origin(q, tol).as_dict()
        out["kernel_types"] = [list(kernel_cr_type(B, C, tol)) for B, C in zip(q.B, q.C)]
    grid = _default_grid(2 * q.m + q.h, opts.get("grid"))
    if grid is None:
        out["singular_scan"] = None
        out["notes"] = [f"singular scan skipped: {2 * q.m + q.h} parameters exceed the default budget; "
                        "pass --grid to force it"]
    else:
        out["singular_scan"] = singular_locus_scan(q, grid=grid, rtol=tol).as_dict()
    if q.h or q.p:
        P = augmented_pencil(q)
        so = sphere_options(opts)
        q2, cert = min_two_sided_signature(P, so)
        out["augmented_pencil"] = {"dim": P.dim, "k": P.k, "min_two_sided": q2, "certificate": cert.as_dict()}
    return out, {}


def cmd_pencil(prob, opts):
    P = decode_pencil(prob["payload"])
    so = sphere_options(opts)
    q_min, cert = min_two_sided_signature(P, so)
    w, wcert = weak_pseudoconcavity_order(P, so)
    out = {"dim": P.dim, "k": P.k, "q_min": q_min, "certificate": cert.as_dict(),
           "weak_order": w, "weak_certificate": wcert.as_dict()}
    checks = {}
    if P.dim % 2 == 0:
        span = span_dim_bound_check(P, q_min, so)
        out["span_check"] = span
        checks["span_bound"] = bool(span["consistent"])
    return out, checks


def cmd_patch(prob, opts):
    payload = prob["payload"]
    patch = decode_patch(payload)
    spec = payload.get("points", {"kind": "sample", "count": 20}) if isinstance(payload, dict) else None
    pts = _points(spec, patch, decode_quadric_of_patch(payload), opts)
    tol, so = tolerance(opts), sphere_options(opts)
    reports = []
    for z in pts:
        rep = classify_point(patch, z, tol, seed=int(opts["seed"]))
        if rep.regular and rep.cr_type.m > 0:
            pencil = levi_pencil_at(patch, z, tol, seed=int(opts["seed"]))
            rep.weak_order = int(weak_pseudoconcavity_order(pencil, so)[0])
        reports.append(rep.as_dict())
    types = Counter((tuple(r["cr_type"]), r["regular"]) for r in reports)
    summary = [{"cr_type": list(t), "regular": reg, "count": c} for (t, reg), c in sorted(types.items())]
    return {"n": patch.n, "k": patch.k, "points": reports, "summary": summary}, {}


def cmd_maxmod(prob, opts):
    payload = prob["payload"]
    if not isinstance(payload, dict):
        raise InputError("maxmod payload must be an object")
    for key in ("patch", "points", "function", "predicate"):
        if key not in payload:
            raise InputError(f"maxmod payload is missing {key!r}")
    patch = decode_patch(payload["patch"])
    pts = _points(payload["points"], patch, decode_quadric_of_patch(payload["patch"]), opts)
    f = decode_function(payload["function"], patch.n)
    tol = float(payload.get("tol", 1e-6))
    d = partition_domain(patch, pts, _predicate(payload["predicate"], patch.n), float(payload.get("band", 0.0)))
    rep = verify_max_modulus(d, f, tol, threads=int(opts["threads"]))
    out = {"max_modulus": rep.as_dict()}
    checks = {"max_modulus": rep.satisfied}
    if "psi" in payload:
        p = int(payload["psi"])
        region = psi_region(patch, pts, p, sphere_options(opts))
        out["psi_region"] = region.as_dict()
        psi_rep = verify_psi_bound(patch, pts, f, p, tol, region=region)
        out["psi_bound"] = psi_rep.as_dict()
        checks["psi_bound"] = psi_rep.satisfied
    return out, checks


COMMANDS = {
    ("crtype",): ("subspace", cmd_crtype),
    ("quadric", "analyze"): ("quadric", cmd_quadric),
    ("pencil", "certify"): ("pencil", cmd_pencil),
    ("patch", "classify"): ("patch", cmd_patch),
    ("maxmod", "verify"): ("maxmod", cmd_maxmod),
}


# output

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if np.isfinite(v) else str(v)
    if isinstance(x, complex):
        return enc_complex(x)
    return x


def render_markdown(report: dict) -> str:
    """Thin markdown projection of the JSON report."""
    lines = [f"# crscope {report['command']}", "", f"version {report['version']}, status **{report['status']}**", ""]
    if report.get("checks"):
        lines += ["## Checks", "", "| check | passed |", "| --- | --- |"]
        lines += [f"| {k} | {v} |" for k, v in sorted(report["checks"].items())]
        lines.append("")
    lines += ["## Options", "", "| option | value |", "| --- | --- |"]
    lines += [f"| {k} | {v} |" for k, v in sorted(report["options"].items())]
    lines += ["", "## Result", ""]

    def walk(obj, depth):
        pad = "  " * depth
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}- {k}:")
                    walk(v, depth + 1)
                else:
                    lines.append(f"{pad}- {k}: {_short(v)}")
        else:
            for i, v in enumerate(obj[:10]):
                lines.append(f"{pad}- [{i}]" + ("" if isinstance(v, (dict, list)) and not _flat(v)
                                                 else f" {_short(v)}"))
                if isinstance(v, (dict, list)) and not _flat(v):
                    walk(v, depth + 1)
            if len(obj) > 10:
                lines.append(f"{pad}- ... {len(obj) - 10} more")

    walk(report["result"], 0)
    return "\n".join(lines) + "\n"


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or
                                       (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x))
                                       for x in v) and len(v) <= 10


def _short(v) -> str:
    return json.dumps(v, sort_keys=True)


def emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="relative rank tolerance (default 1e-9)")
    common.add_argument("--eig-tol", dest="eig_tol", type=float, help="relative eigenvalue tolerance (default 1e-8)")
    common.add_argument("--seed", type=int, help="seed for all sampling (default 0)")
    common.add_argument("--samples", type=int, help="sphere samples per search (default 4096)")
    common.add_argument("--grid", type=int, help="grid points per axis for singular-locus scans")
    common.add_argument("--threads", type=int, help="worker threads (default: CR_SCOPE_THREADS or 1)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--md", dest="fmt", action="store_const", const="md", help="markdown output")
    common.add_argument("--out", help="write the report to this path instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="crscope", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"crscope {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crtype", parents=[common], help="CR type of a real subspace")
    p.add_argument("input", nargs="?", help="problem file (default: standard input)")
    for group, action, helptext in (("quadric", "analyze", "transversality and singular locus of a quadric"),
                                    ("pencil", "certify", "signature certificates for a Hermitian pencil"),
                                    ("patch", "classify", "CR type and pseudoconcavity at patch points"),
                                    ("maxmod", "verify", "sampled maximum modulus check")):
        g = sub.add_parser(group, help=helptext)
        gs = g.add_subparsers(dest="action", required=True)
        a = gs.add_parser(action, parents=[common], help=helptext)
        a.add_argument("input", nargs="?", help="problem file (default: standard input)")

    e = sub.add_parser("examples", parents=[common], help="print a named example problem file")
    e.add_argument("name", nargs="?", help="example name; omit with --list")
    e.add_argument("--param", action="append", default=[],
                   help="generator parameter as JSON (repeatable), e.g. --param 2 or --param '[0,1]'")
    e.add_argument("--list", action="store_true", help="list known examples")
    return ap


def _example_doc(args) -> dict:
    if args.param:
        try:
            params = [dec_param(json.loads(p)) for p in args.param]
        except json.JSONDecodeError as exc:
            raise InputError(f"--param is not JSON: {exc.msg}") from None
        return from_catalog(args.name, params)
    if args.name in BUILDERS:
        return load_shipped(args.name)
    if args.name in CATALOG:
        return from_catalog(args.name)
    return load_shipped(args.name)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "examples":
            if args.list or not args.name:
                emit("\n".join(sorted(set(shipped_names()) | set(BUILDERS) | set(CATALOG))) + "\n", args.out)
                return EXIT_OK
            emit(dumps(_example_doc(args)), args.out)
            return EXIT_OK
        key = (args.command,) if args.command == "crtype" else (args.command, args.action)
        kind, fn = COMMANDS[key]
        prob = read_problem(args.input, kind)
        opts = resolve_options(prob["options"], args)
        result, checks = fn(prob, opts)
        checks = {k: bool(v) for k, v in checks.items()}
        report = _jsonable({
            "command": " ".join(key),
            "version": __version__,
            "options": reported_options(opts),
            "result": result,
            "checks": checks,
            "status": "ok" if all(checks.values()) else "violated",
        })
        text = render_markdown(report) if args.fmt == "md" else json.dumps(report, indent=2, sort_keys=True) + "\n"
        emit(text, args.out)
        return EXIT_OK if all(checks.values()) else EXIT_VIOLATED
    except InputError as exc:
        print(f"crscope: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CRScopeError as exc:
        print(f"crscope: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
