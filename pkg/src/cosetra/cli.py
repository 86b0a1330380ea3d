"""Command line front end.

Every command writes JSON lines to stdout.  The first line is a header
``{"format": "cosetra-report/1", "command": ...}``; ``build`` and ``lyndon``
instead write a single atom-structure record (``cosetra-atoms/1``) that the
other commands accept as input.  Exit status: 0 success, 1 a check failed,
2 bad usage or unreadable input.

Algebra arguments (``axioms``, ``measure``, ``simple``, ``embed``) may be a
triple description file, an atom-structure record file (``.json``),
``lyndon:N``, ``group:CONSTRUCTOR`` (complex algebra of a group) or
``identity`` (the two-element algebra).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, TextIO

from .algebra import (
    AtomStructure,
    FiniteRelationAlgebra,
    build_full_algebra,
    check_ra_axioms,
    complex_algebra,
    identity_only_algebra,
    is_simple_ra,
    measurability,
)
from .analysis import (
    Embedding,
    InvariantViolation,
    check_lyndon_embedding,
    compare_compositions,
    find_embedding,
    search_shift_systems,
    triviality_analysis,
    verify_coset_consequences,
    verify_embedding,
)
from .lyndon import InvalidSize, lyndon_algebra
from .pair import GroupTriple, is_simple_triple, validate_pair, validate_shifts, validate_triple
from .relations import check_coherence, check_cra1, check_cra2, check_partition
from .specfile import SpecError, load_spec, parse_group

REPORT_FORMAT = "cosetra-report/1"
MAX_GROUP_ORDER = 64
MAX_ATOMS = 4096

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj: Any, out: TextIO) -> None:
    out.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


class _Out:
    def __init__(self, command: str, stream: TextIO, header: bool = True):
        self.stream = stream
        if header:
            _dump({"format": REPORT_FORMAT, "command": command}, stream)

    def record(self, kind: str, **fields: Any) -> None:
        _dump({"record": kind, **fields}, self.stream)


# ---------------------------------------------------------------- inputs

def _triple(path: str, args):
    try:
        spec = load_spec(path, max_order=args.max_order)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except SpecError as exc:
        raise UsageError(f"{path}: {exc}") from None
    P = spec.pair
    atoms = sum(P.kappa(x, y) for x, y in P.pairs)
    if atoms > args.max_atoms:
        raise UsageError(f"{path}: {atoms} atoms exceeds the limit {args.max_atoms}")
    return spec.triple


def _algebra(source: str, args) -> FiniteRelationAlgebra:
    """Resolve an algebra argument.  Raises :class:`UsageError` or returns
    an algebra; triples that fail validation raise ``InvalidTriple``."""
    if source == "identity":
        return identity_only_algebra()
    if source.startswith("lyndon:"):
        try:
            n = int(source.split(":", 1)[1])
            if n + 1 > args.max_atoms:
                raise UsageError(f"lyndon:{n} exceeds the atom limit")
            return lyndon_algebra(n)
        except (ValueError, InvalidSize) as exc:
            raise UsageError(f"bad Lyndon size in {source!r}: {exc}") from None
    if source.startswith("group:"):
        try:
            G = parse_group(source.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if G.order > args.max_order:
            raise UsageError(f"group order {G.order} exceeds {args.max_order}")
        return complex_algebra(G)
    if source.endswith(".json"):
        try:
            with open(source, encoding="utf-8") as fh:
                return FiniteRelationAlgebra(AtomStructure.from_record(json.load(fh)))
        except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
            raise UsageError(f"cannot load atom record {source}: {exc}") from None
    return build_full_algebra(_triple(source, args))


# -------------------------------------------------------------- commands

def cmd_validate(args, out: _Out) -> int:
    T = _triple(args.spec, args)
    C, rep = validate_pair(T.pair)
    out.record("pair", **rep.to_record())
    ok = rep.ok
    if C is not None and rep.ok:
        srep = validate_shifts(GroupTriple(C, T.shifts))
        out.record("shifts", **srep.to_record())
        ok = srep.ok
        if args.relations:
            prep = check_partition(C)
            crep = check_coherence(C, seed=args.seed)
            out.record("partition", **prep.to_record())
            out.record("coherence", **crep.to_record())
            ok = ok and prep.ok and crep.ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_build(args, out: _Out) -> int:
    T = _triple(args.spec, args)
    _, rep = validate_triple(T)
    if not rep.ok:
        _dump({"format": REPORT_FORMAT, "command": "build"}, out.stream)
        out.record("validation", **rep.to_record())
        return EXIT_FAIL
    _dump(build_full_algebra(T).structure.to_record(), out.stream)
    return EXIT_OK


def cmd_lyndon(args, out: _Out) -> int:
    if args.n < 1:
        raise UsageError("a line needs at least one point")
    if args.n + 1 > args.max_atoms:
        raise UsageError("too many atoms")
    _dump(lyndon_algebra(args.n).structure.to_record(), out.stream)
    return EXIT_OK


def cmd_axioms(args, out: _Out) -> int:
    A = _algebra(args.source, args)
    rep = check_ra_axioms(A)
    out.record("axioms", atoms=A.n, **rep.to_record())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_measure(args, out: _Out) -> int:
    A = _algebra(args.source, args)
    m = measurability(A)
    out.record("measurability", **m.to_record())
    return EXIT_OK if m.measurable else EXIT_FAIL


def cmd_simple(args, out: _Out) -> int:
    A = _algebra(args.source, args)
    simple = is_simple_ra(A)
    fields: dict[str, Any] = {"simple": simple}
    if A.triple is not None:
        fields["simple_triple"] = is_simple_triple(A.triple)
    out.record("simplicity", **fields)
    return EXIT_OK if simple else EXIT_FAIL


def cmd_embed(args, out: _Out) -> int:
    B = _algebra(args.source, args)
    A = _algebra(args.target, args)
    res = find_embedding(B, A, budget=args.budget, preserve_unit=not args.partial)
    out.record("embedding", **res.to_record())
    if not isinstance(res, Embedding):
        return EXIT_FAIL
    rep = verify_embedding(res)
    out.record("verification", **rep.to_record())
    if args.source.startswith("lyndon:") and A.triple is not None and res.preserves_unit:
        out.record("lyndon-invariants", **check_lyndon_embedding(res).to_record())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_compare(args, out: _Out) -> int:
    T = _triple(args.spec, args)
    diffs = compare_compositions(T)
    out.record("compare", differing=[[list(a), list(b)] for a, b in diffs], count=len(diffs))
    return EXIT_OK


def cmd_search(args, out: _Out) -> int:
    T = _triple(args.spec, args)
    res = search_shift_systems(T.pair, budget=args.budget)
    out.record("shift-search", **res.to_record())
    return EXIT_OK


def cmd_analyze(args, out: _Out) -> int:
    T = _triple(args.spec, args)
    A = build_full_algebra(T)
    C = A.triple
    ok = True
    try:
        triv = triviality_analysis(T)
        out.record("triviality", **triv.to_record())
    except InvariantViolation as exc:
        out.record("triviality", violation=str(exc))
        ok = False
    axioms = check_ra_axioms(A)
    out.record("axioms", **axioms.to_record())
    for name, rep in (("cra1", check_cra1(C)), ("cra2", check_cra2(C))):
        out.record(name, **rep.to_record())
        ok = ok and rep.ok
    if axioms.ok:
        rep = verify_coset_consequences(C)
        out.record("coset-consequences", **rep.to_record())
        ok = ok and rep.ok
    out.record("measurability", **measurability(A).to_record())
    out.record("simplicity", simple=is_simple_ra(A), simple_triple=is_simple_triple(C))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosetra", description=__doc__.split("\n\n")[0])
    p.add_argument("--seed", type=int, default=0, help="seed for sampled coherence checks")
    p.add_argument("--max-order", type=int, default=MAX_GROUP_ORDER)
    p.add_argument("--max-atoms", type=int, default=MAX_ATOMS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the pair conditions and the shift system")
    s.add_argument("spec")
    s.add_argument("--relations", action="store_true",
                   help="also check the partition property and oracle coherence")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("build", help="write the atom structure record")
    s.add_argument("spec")
    s.set_defaults(func=cmd_build, header=False)

    s = sub.add_parser("lyndon", help="write the atom structure of a Lyndon algebra")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_lyndon, header=False)

    for name, func, text in (("axioms", cmd_axioms, "check the relation algebra axioms"),
                             ("measure", cmd_measure, "measurability of the subidentity atoms"),
                             ("simple", cmd_simple, "simplicity test")):
        s = sub.add_parser(name, help=text)
        s.add_argument("source")
        s.set_defaults(func=func)

    s = sub.add_parser("embed", help="search for an embedding of SOURCE into TARGET")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--partial", action="store_true",
                   help="do not require the unit to be preserved")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("compare-comp", help="atom pairs where shifted and plain products differ")
    s.add_argument("spec")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("search-shifts", help="enumerate shift systems that satisfy the axioms")
    s.add_argument("spec")
    s.add_argument("--budget", type=int, default=10_000)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("analyze", help="structural analysis of a triple")
    s.add_argument("spec")
    s.set_defaults(func=cmd_analyze)
    return p


def run(argv: list[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    out = _Out(args.command, stdout, header=getattr(args, "header", True))
    try:
        return args.func(args, out)
    except UsageError as exc:
        stderr.write(f"cosetra: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        # InvalidTriple and friends: the input failed validation
        report = getattr(exc, "report", None)
        if report is not None:
            out.record("validation", **report.to_record())
        else:
            stderr.write(f"cosetra: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
