"""Command-line interface.

Exit codes: 0 success / verification passed, 1 verification found
violations, 2 usage or validation error, 3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import documents
from .algebra import GF, Subspace, enumerate_subspaces, gaussian_binomial
from .errors import DomainError, ResourceLimitError
from .gallery import build_case, check_case, list_cases
from .opspace import Direction, orthogonal_complement, quotient_space
from .solver import MapClass, QUASI_ANY, RANGE, quasi, solve_compatible_maps
from .verify import parse_strategy, verify_theorem, THEOREM_IDS


def _parse_mode(text, field):
    if text == "range":
        return RANGE
    if text == "quasi-any":
        return QUASI_ANY
    if text.startswith("quasi:"):
        coords = [int(v) for v in text.split(":", 1)[1].split(",")]
        return quasi(Direction(field, np.array(coords, dtype=np.uint8)))
    raise DomainError(f"mode must be range, quasi:COORDS or quasi-any, got {text!r}")


def _parse_vectors(text):
    return [[int(v) for v in part.split(",")] for part in text.split(";") if part]


def _load_space(path):
    with open(path, "r", encoding="utf-8") as fh:
        return documents.space_from_doc(json.load(fh))


def _emit(doc, fmt, text_lines):
    if fmt == "json":
        sys.stdout.write(documents.canonical_json(doc))
    else:
        for line in text_lines:
            print(line)


def _solution_doc(sol):
    return {
        "mode": sol.mode.describe(),
        "class": sol.map_class.value,
        "solution_dim": sol.dim,
        "local_dim": sol.local_dim,
        "all_local": sol.all_local,
        "witness": documents.map_to_doc(sol.witness) if sol.witness is not None else None,
    }


def _cmd_solve(args):
    space, stored_direction = _load_space(args.space_file)
    if args.mode == "quasi" and stored_direction is not None:
        mode = quasi(stored_direction)
    else:
        mode = _parse_mode(args.mode, space.field)
    cls = MapClass.parse(args.map_class)
    sols = solve_compatible_maps(space, mode, cls)
    sols = sols if isinstance(sols, list) else [sols]
    doc = {"space": documents.space_to_doc(space), "results": [_solution_doc(s) for s in sols]}
    lines = [f"space: {space.field.name} {space.n}x{space.p} dim={space.dim} "
             f"codim={space.codim} {'linear' if space.is_linear else 'affine'}"]
    for s in sols:
        lines.append(f"mode={s.mode.describe()} class={s.map_class.value} "
                     f"solution_dim={s.dim} local_dim={s.local_dim} all_local={s.all_local}")
        if s.witness is not None:
            lines.append(f"  witness: {documents.map_to_doc(s.witness)}")
    _emit(doc, args.format, lines)
    return 0


def _cmd_verify(args):
    report = verify_theorem(
        args.theorem, args.n, args.p, args.field,
        strategy=parse_strategy(args.strategy), max_codim=args.max_codim,
        map_class=MapClass.parse(args.map_class) if args.map_class else None,
    )
    lines = [f"theorem {report.theorem} on {args.field} {args.n}x{args.p} "
             f"[{report.strategy}]",
             f"{report.spaces_checked} space{'s' if report.spaces_checked != 1 else ''} "
             f"checked in {report.elapsed:.2f}s; {len(report.violations)} violations"]
    for key in sorted(report.side_stats):
        lines.append(f"  {key}: {report.side_stats[key]}")
    for v in report.violations:
        lines.append(f"  VIOLATION: {json.dumps(v, sort_keys=True)}")
    _emit(report.to_doc(), args.format, lines)
    return 0 if report.passed else 1


def _cmd_gallery(args):
    if args.action == "list":
        doc = list_cases()
        lines = [f"{c['name']:12s} {c['constraints']}  (minimal: "
                 f"n={c['minimal']['n']} p={c['minimal']['p']} {c['minimal']['field']})"
                 for c in doc]
        _emit({"cases": doc}, args.format, lines)
        return 0
    case = build_case(args.name, args.n, args.p, args.field)
    if args.action == "export":
        doc = documents.space_to_doc(case.space, case.direction)
        out = documents.canonical_json(doc)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return 0
    report = check_case(case)
    doc = {
        "case": report.case, "params": report.params,
        "nonlocal": any(e.check == "nonlocal" and e.passed for e in report.entries),
        "checks": [{"check": e.check, "passed": e.passed, "detail": e.detail}
                   for e in report.entries],
        "passed": report.passed,
    }
    lines = [f"case {report.case} n={case.n} p={case.p} field={case.field.name} "
             f"codim={case.codim} (= {case.bound_theorem} bound {case.bound} + 1)"]
    for e in report.entries:
        lines.append(f"  {e.check}: {'ok' if e.passed else 'FAIL'}  {e.detail}")
    lines.append(f"non-local: {doc['nonlocal']}")
    _emit(doc, args.format, lines)
    return 0 if report.passed else 1


def _cmd_enumerate(args):
    field = GF(args.field)
    count = gaussian_binomial(args.d, args.k, field.q)
    lines = [str(count)]
    bases = None
    if args.print_bases:
        bases = [[list(map(int, row)) for row in s.basis]
                 for s in enumerate_subspaces(field, args.d, args.k)]
        lines += [json.dumps(b) for b in bases]
    doc = {"d": args.d, "k": args.k, "field": field.name, "count": count}
    if bases is not None:
        doc["bases"] = bases
    _emit(doc, args.format, lines)
    return 0


def _cmd_orth(args):
    space, _ = _load_space(args.space_file)
    perp = orthogonal_complement(space if space.is_linear else space.translation_space())
    sys.stdout.write(documents.canonical_json(documents.space_to_doc(perp)))
    return 0


def _cmd_quotient(args):
    space, _ = _load_space(args.space_file)
    vecs = _parse_vectors(args.v0)
    v0 = Subspace.from_vectors(space.field, np.array(vecs, dtype=np.uint8),
                               ambient_dim=space.n)
    sys.stdout.write(documents.canonical_json(
        documents.space_to_doc(quotient_space(space, v0))))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="rangecompat",
        description="Decide locality of (quasi-)range-compatible maps on matrix "
                    "spaces over small finite fields, and verify the governing "
                    "theorems exhaustively at desk scale.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("solve", help="solve for all compatible maps on a space")
    p.add_argument("space_file")
    p.add_argument("--mode", default="range",
                   help="range | quasi:1,0,0 | quasi-any")
    p.add_argument("--class", dest="map_class", default="linear",
                   choices=[m.value for m in MapClass])
    add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="verify a theorem over all spaces in hypothesis")
    p.add_argument("theorem", choices=THEOREM_IDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--max-codim", type=int, default=None)
    p.add_argument("--strategy", default="exhaustive",
                   help="exhaustive | sample:COUNT:SEED")
    p.add_argument("--class", dest="map_class", default=None,
                   help="override map class (AFF_GEN semi-affine variant)")
    add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gallery", help="list, check or export the example gallery")
    p.add_argument("action", choices=("list", "check", "export"))
    p.add_argument("name", nargs="?")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--field", default=None)
    p.add_argument("-o", "--output", default=None)
    add_format(p)
    p.set_defaults(func=_cmd_gallery)

    p = sub.add_parser("enumerate", help="count (and optionally list) subspaces")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--print-bases", action="store_true")
    add_format(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("orth", help="trace-form orthogonal complement of a space")
    p.add_argument("space_file")
    p.set_defaults(func=_cmd_orth)

    p = sub.add_parser("quotient", help="quotient a space by a codomain subspace")
    p.add_argument("space_file")
    p.add_argument("--v0", required=True, help="semicolon-separated vectors, e.g. 1,0,0;0,1,0")
    p.set_defaults(func=_cmd_quotient)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "gallery" and args.action in ("check", "export"):
        missing = [k for k in ("name", "n", "p", "field") if getattr(args, k) in (None,)]
        if missing:
            ap.error(f"gallery {args.action} needs {', '.join(missing)}")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
