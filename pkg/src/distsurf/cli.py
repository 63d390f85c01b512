"""Command-line interface with stable JSON output.

Contract: a single JSON document on stdout, diagnostics on stderr, and exit
status 0 for ok, 2 for a hypothesis rejection (the mathematics says no),
1 for invalid input.  Output is byte-identical across runs on the same
input; anything version- or environment-dependent goes to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import BudgetError, DomainError, IntegrityError
from .huff import HuffInstance, emit_rds, generate_points, huff_search, concordant_reduction
from .rds import (
    RationalDistanceSet,
    detect_k,
    invert_set,
    is_rational_set,
    normalize_set,
    set_from_json,
    grid_search_rational_sets,
)
from .scalars import format_rational, parse_rational
from .surface import (
    build_surface,
    factored_form,
    general_type_certificate,
    hypersurface_nd,
    ramification_bookkeeping,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECTED = 2


def _diag(message: str):
    print(message, file=sys.stderr)


def _emit(status: str, payload) -> int:
    doc = {"status": status, "payload": payload}
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if status == "ok":
        return EXIT_OK
    if status == "rejected":
        return EXIT_REJECTED
    return EXIT_ERROR


def _load_set(path: str) -> RationalDistanceSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc
    return set_from_json(doc)


def _file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _parse_anchors(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"--anchors expects 'i,j', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DomainError(f"--anchors expects integers, got {text!r}") from exc


# -- subcommand handlers ------------------------------------------------------


def _cmd_verify(args) -> int:
    s = _load_set(args.file)
    verdict = is_rational_set(s.points)
    payload = {"k": s.k, "size": s.size, "rational": verdict.ok}
    if not verdict.ok:
        i, j = verdict.pair
        payload["counterexample"] = {
            "indices": [i, j],
            "dist2": verdict.dist2.to_json(),
        }
    return _emit("ok", payload)


def _cmd_normalize(args) -> int:
    s = _load_set(args.file)
    verdict = is_rational_set(s.points)
    if not verdict.ok:
        raise DomainError(f"input is not a rational set (pair {verdict.pair})")
    s = RationalDistanceSet(s.points, s.k, True)
    i, j = _parse_anchors(args.anchors)
    out, transform = normalize_set(s, i, j)
    payload = {
        "set": out.to_json(),
        "k": detect_k(out),
        "transform": transform.to_json(),
    }
    return _emit("ok", payload)


def _cmd_invert(args) -> int:
    s = _load_set(args.file)
    verdict = is_rational_set(s.points)
    if not verdict.ok:
        raise DomainError(f"input is not a rational set (pair {verdict.pair})")
    s = RationalDistanceSet(s.points, s.k, True)
    radius = parse_rational(args.radius)
    out = invert_set(s, args.center, radius)
    return _emit("ok", {"set": out.to_json()})


def _cmd_huff(args) -> int:
    inst = HuffInstance(parse_rational(args.a), parse_rational(args.b))
    found = huff_search(inst, args.height)
    curve = concordant_reduction(inst)
    payload = {
        "instance": inst.to_json(),
        "curve": curve.to_json(),
        "points": [hp.to_json() for hp in found],
    }
    if args.generate:
        if not found:
            return _emit("rejected", {**payload, "reason": "no seed found within height bound"})
        seed = max(found, key=lambda hp: hp.x)
        gen = generate_points(inst, seed, args.generate)
        payload["generated"] = {
            "seed": seed.to_json(),
            "points": [hp.to_json() for hp in gen.points],
            "torsion_order": gen.torsion_order,
        }
        payload["set"] = emit_rds(inst, found + list(gen.points)).to_json()
    else:
        payload["set"] = emit_rds(inst, found).to_json()
    return _emit("ok", payload)


def _cmd_surface(args) -> int:
    s = _load_set(args.file)
    surf = build_surface(s.points)
    p_poly, q_poly = factored_form(surf)
    payload = {
        "m": surf.m,
        "k": surf.k,
        "affine": surf.f_affine.render(),
        "projective": surf.f_proj.render(),
        "projective_degree": surf.f_proj.degree(),
        "P": p_poly.render(),
        "Q": q_poly.render(),
    }
    if args.out:
        golden = (
            f"affine: {payload['affine']}\n"
            f"projective: {payload['projective']}\n"
            f"P: {payload['P']}\n"
            f"Q: {payload['Q']}\n"
        )
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(golden)
        _diag(f"wrote golden rendering to {args.out}")
    return _emit("ok", payload)


def _cmd_certify(args) -> int:
    s = _load_set(args.file)
    report = general_type_certificate(s.points)
    if not report.accepted:
        return _emit("rejected", {"reason": report.reason, "input_sha256": _file_sha256(args.file)})
    payload = report.certificate.to_json()
    payload["input_sha256"] = _file_sha256(args.file)
    return _emit("ok", payload)


def _cmd_search(args) -> int:
    sets = grid_search_rational_sets(args.k, args.height, args.size)
    return _emit("ok", {"count": len(sets), "sets": [s.to_json() for s in sets]})


def _cmd_hypersurface(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{args.file} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "points" not in doc:
        raise DomainError("hypersurface input needs a 'points' list of rational-coordinate rows")
    rows = doc["points"]
    if not isinstance(rows, list):
        raise DomainError("'points' must be a list")
    points = []
    for row in rows:
        if not isinstance(row, list):
            raise DomainError(f"each point must be a list of rationals, got {row!r}")
        points.append([parse_rational(c) for c in row])
    if args.dim is not None and any(len(p) != args.dim for p in points):
        raise DomainError(f"--dim {args.dim} does not match the input rows")
    poly = hypersurface_nd(points)
    return _emit(
        "ok",
        {
            "m": len(points),
            "dimension": len(points[0]) if points else 0,
            "variables": list(poly.variables),
            "degree": poly.degree(),
            "polynomial": poly.render(),
        },
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distsurf",
        description="Exact toolkit for rational distance sets and distance surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check all pairwise distances of a point-set file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("normalize", help="move two anchor points to (0,0) and (1,0)")
    p.add_argument("file")
    p.add_argument("--anchors", required=True, help="comma-separated indices i,j")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("invert", help="invert the set about a member point")
    p.add_argument("file")
    p.add_argument("--center", type=int, required=True)
    p.add_argument("--radius", required=True, help="rational radius p/q")
    p.set_defaults(func=_cmd_invert)

    p = sub.add_parser("huff", help="search x-axis points for (0,±a),(0,±b) and extend on the curve")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--generate", type=int, default=0, help="also walk n multiples of the best seed")
    p.set_defaults(func=_cmd_huff)

    p = sub.add_parser("surface", help="build the distance surface of a point-set file")
    p.add_argument("file")
    p.add_argument("--out", help="write the canonical text rendering to this path")
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("certify", help="run the general-type certificate pipeline")
    p.add_argument("file")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("search", help="brute-force grid oracle for rational sets")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("hypersurface", help="n-dimensional distance hypersurface (construction only)")
    p.add_argument("file")
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=_cmd_hypersurface)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage to stderr
        return EXIT_ERROR if exc.code else EXIT_OK
    _diag(f"distsurf {__version__}")
    try:
        return args.func(args)
    except (DomainError, IntegrityError, BudgetError) as exc:
        return _emit("error", {"message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
