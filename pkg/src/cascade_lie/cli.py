"""``cascade-lie``: reports, golden-data checks and JSON export.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .appendix import DEFAULT_LABELS, compare_fixture, fixture, fixture_diff
from .cascade import compute_layers, kostant_cascade
from .liealg import NilpotentAlgebra, build_split_nilradical, build_upper_triangular
from .plancherel import (
    LatticeSpec,
    find_nondegenerate_lambda,
    layer_pfaffian,
    multiplicity_table,
    plancherel_constant,
)
from .rootsys import format_root
from .verify import SUITES, parse_system, restricted_algebra, restricted_slnh, verify_all


class UsageError(Exception):
    pass


def _dump(data, path: str | None) -> None:
    if path is None:
        return
    text = json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _system(args):
    try:
        return parse_system(args.type, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _digits(alpha) -> str:
    return "".join(str(c) for c in alpha)


# subcommands --------------------------------------------------------------------------


def cmd_cascade(args) -> int:
    rs = _system(args)
    cascade = kostant_cascade(rs)
    print(f"{rs.label}: {len(cascade)} betas in {len(cascade.generations)} generations")
    for k, gen in enumerate(cascade.generations, start=1):
        for r in gen:
            print(f"  generation {k}  β{r + 1} = {format_root(cascade.betas[r])}")
    try:
        fx = fixture(rs.label)
    except ValueError:
        fx = None
    if fx is not None:
        same = [set(g) for g in cascade.generation_sets()] == [set(g) for g in fx.generations]
        print(f"golden data: {'match' if same else 'MISMATCH'}")
    _dump(
        {
            "system": rs.label,
            "betas": [_digits(b) for b in cascade.betas],
            "generations": [[r + 1 for r in g] for g in cascade.generations],
        },
        args.json,
    )
    return 0


def cmd_layers(args) -> int:
    rs = _system(args)
    dec = compute_layers(rs)
    print(f"{rs.label}: layer sizes {list(dec.sizes())}")
    for r, (beta, prs) in enumerate(zip(dec.betas, dec.pairs), start=1):
        print(f"  Δ⁺_{r}  β = {format_root(beta)}  ({len(prs)} pairs)")
        for p in prs:
            print("    " + " | ".join(format_root(a) for a in p))
    _dump(
        {
            "system": rs.label,
            "layers": [
                {"beta": _digits(b), "pairs": [[_digits(a) for a in p] for p in prs]}
                for b, prs in zip(dec.betas, dec.pairs)
            ],
        },
        args.json,
    )
    return 0


def _algebra(args) -> NilpotentAlgebra:
    try:
        if args.upper is not None:
            return build_upper_triangular(args.upper)
        if args.split is not None:
            return build_split_nilradical(parse_system(args.split, args.rank))
        kind, *rest = args.restricted
        kind = kind.lower()
        if kind == "e6f4" and not rest:
            return restricted_algebra("e6F4")
        if kind == "slnh" and len(rest) == 1 and rest[0].isdigit():
            return restricted_slnh(int(rest[0]))
        raise ValueError("--restricted takes 'slnh N' or 'e6f4'")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_algebra(args) -> int:
    alg = _algebra(args)
    print(f"{alg.name}: dimension {alg.dim}, {len(alg.layers)} layers")
    for r in range(1, len(alg.layers) + 1):
        print(f"  m_{r}: dim v = {len(alg.complements[r - 1])}, dim z = {len(alg.centers[r - 1])}")
    _dump(alg.to_json(), args.json)
    return 0


def cmd_pfaffian(args) -> int:
    alg = _algebra(args)
    out = {"algebra": alg.name, "layers": []}
    print(alg.name)
    for r in range(1, len(alg.layers) + 1):
        try:
            poly = layer_pfaffian(alg, r)
        except ValueError:
            w = find_nondegenerate_lambda(alg, r)
            shown = "no witness found" if w is None else f"witness {[str(x) for x in w.lam]} gives Pf = {w.pfaffian}"
            print(f"  Pf_{r}: over the symbolic budget; {shown}")
            out["layers"].append({"layer": r, "witness": None if w is None else w.to_json()})
            continue
        print(f"  Pf_{r} = {poly}")
        out["layers"].append({"layer": r, "pfaffian": poly.to_json()})
    if all("pfaffian" in row for row in out["layers"]):
        c = plancherel_constant(alg)
        print(f"  constant c = {c}")
        out["constant"] = c
    _dump(out, args.json)
    return 0


def cmd_multiplicity(args) -> int:
    if args.box < 0:
        raise UsageError("--box must be nonnegative")
    try:
        alg = build_upper_triangular(args.upper)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = multiplicity_table(alg, LatticeSpec.standard(alg), args.box)
    print(f"{alg.name}, standard lattice, box {args.box}: {len(table.entries)} nonzero multiplicities")
    for lam, m in table.entries:
        print(f"  λ = ({', '.join(str(x) for x in lam)})  multiplicity {m}")
    for flag in table.flags:
        print(f"  note: {flag}")
    _dump(table.to_json(), args.json)
    return 0


def cmd_verify(args) -> int:
    system = _system(args) if args.type else None
    if args.target == "appendix":
        if system is not None:
            try:
                labels = [fixture(system.label).label]
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            labels = list(DEFAULT_LABELS)
        reports = [compare_fixture(fixture(l)) for l in labels]
        for rep in reports:
            tag = "PASS" if rep.ok else "FAIL"
            print(f"{tag}  appendix {rep.title.split()[-1]:<4} {len(rep.checks)} checks")
            for c in rep.checks:
                if args.verbose or not c.passed:
                    print("      " + c.line())
        ok = all(r.ok for r in reports)
        _dump(
            {
                "ok": ok,
                "fixtures": [
                    {"report": rep.to_json(), "diff": fixture_diff(fixture(l))} for l, rep in zip(labels, reports)
                ],
            },
            args.json,
        )
        return 0 if ok else 1
    only = args.only if args.target == "all" else args.target
    try:
        matrix = verify_all(system, only=only, numeric=args.numeric)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print("\n".join(matrix.lines(args.verbose)))
    _dump(matrix.to_json(), args.json)
    return 0 if matrix.ok else 1


# parser -------------------------------------------------------------------------------


def _add_type(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--type", required=required, help="root-system type, e.g. E7, or E with --rank")
    p.add_argument("--rank", type=int, help="rank when --type names only the family")


def _add_selector(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--upper", type=int, metavar="ELL", help="strictly upper-triangular ℓ×ℓ matrices")
    group.add_argument("--split", metavar="T", help="nilradical of the split real form of type T")
    group.add_argument("--restricted", nargs="+", metavar="KIND", help="'slnh N' or 'e6f4'")
    p.add_argument("--rank", type=int, help="rank for --split when T names only the family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cascade-lie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cascade", help="Kostant cascade of a root system")
    _add_type(p)
    p.add_argument("--json", metavar="PATH", help="write JSON ('-' for stdout)")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("layers", help="layer decomposition Δ⁺_r with its pairs")
    _add_type(p)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("algebra", help="layered nilpotent algebra")
    _add_selector(p)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("pfaffian", help="layer Pfaffians and Plancherel polynomial")
    _add_selector(p)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_pfaffian)

    p = sub.add_parser("multiplicity", help="lattice multiplicities for the upper-triangular group")
    p.add_argument("--upper", type=int, required=True, metavar="ELL")
    p.add_argument("--box", type=int, required=True, help="sup-norm bound on dual-lattice points")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_multiplicity)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("target", choices=("appendix", "jacobi", "setup", "all"))
    _add_type(p, required=False)
    p.add_argument("--only", choices=SUITES, help="restrict 'all' to one suite")
    p.add_argument("--numeric", action="store_true", help="include floating-point checks")
    p.add_argument("--json", metavar="PATH")
    p.add_argument("-v", "--verbose", action="store_true", help="list every check")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cascade-lie: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
