"""Reading group-triple description files.

A description is a YAML document::

    format: cosetra-spec/1
    groups:
      0: cyclic:4
      1: product:[cyclic:2,cyclic:2]
      2: {table: [[0, 1], [1, 0]]}
    E: universal              # or a list of [x, y] pairs
    close_E: false            # true: use the equivalence relation they generate
    isos:
      - {x: 0, y: 1, H: [2], K: [2]}            # no map: phi(gH) = gK on labels
      - {x: 0, y: 2, H: [], K: [], map: [[1, 1]]}
    shifts:
      - {x: 0, y: 1, z: 2, rep: 1}              # C[0,1,2] = 1 * (H_01 H_02)

``H`` and ``K`` list generators.  ``map`` lists representative pairs
``[g, h]`` meaning ``phi(gH) = hK``; generators of the quotient suffice.
Missing diagonal isomorphisms are the identity, a missing ``(y, x)`` is the
inverse of ``(x, y)``, and missing shifts are identity cosets.  Group
constructors are ``cyclic:n``, ``symmetric:n``, ``dihedral:n`` and
``product:[...]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

import yaml

from .groups import (
    FiniteGroup,
    NotASubgroup,
    NotNormal,
    cyclic,
    dihedral,
    direct_product,
    make_group,
    subgroup_generated,
    symmetric,
    complex_product,
)
from .pair import GroupPair, GroupTriple, InvalidIso, InvalidPair, identity_iso, make_iso, make_triple

SPEC_FORMAT = "cosetra-spec/1"


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ParseError(SpecError):
    pass


class ResolutionError(SpecError):
    pass


@dataclass
class TripleSpec:
    groups: dict[int, FiniteGroup]
    group_specs: dict[int, Any]
    E: frozenset
    triple: GroupTriple
    document: dict

    @property
    def pair(self) -> GroupPair:
        return self.triple.pair


# ------------------------------------------------------------ group names

_SIMPLE = {"cyclic": cyclic, "symmetric": symmetric, "dihedral": dihedral}


def parse_group(text: str) -> FiniteGroup:
    """Parse a constructor such as ``product:[cyclic:2,symmetric:3]``."""
    s = re.sub(r"\s+", "", text)
    G, rest = _parse_group(s, 0)
    if rest != len(s):
        raise ValueError(f"trailing text in group constructor {text!r}")
    return G


def _parse_group(s: str, i: int) -> tuple[FiniteGroup, int]:
    m = re.compile(r"(cyclic|symmetric|dihedral):(\d+)").match(s, i)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise ValueError("group parameter must be positive")
        return _SIMPLE[m.group(1)](n), m.end()
    if s.startswith("product:[", i):
        i += len("product:[")
        factors = []
        while True:
            G, i = _parse_group(s, i)
            factors.append(G)
            if i < len(s) and s[i] == ",":
                i += 1
                continue
            if i < len(s) and s[i] == "]":
                return direct_product(*factors), i + 1
            raise ValueError("unterminated product")
    raise ValueError(f"unknown group constructor at {s[i:]!r}")


# ------------------------------------------------------------ locations

def _locate(node: yaml.Node | None, path: tuple) -> tuple[int | None, int | None]:
    """Line and column (1-based) of the node at ``path`` in a composed tree."""
    cur = node
    for key in path:
        if isinstance(cur, yaml.MappingNode):
            nxt = None
            for k, v in cur.value:
                if str(k.value) == str(key):
                    nxt = v
                    break
            if nxt is None:
                break
            cur = nxt
        elif isinstance(cur, yaml.SequenceNode) and isinstance(key, int) and key < len(cur.value):
            cur = cur.value[key]
        else:
            break
    if cur is None:
        return None, None
    return cur.start_mark.line + 1, cur.start_mark.column + 1


# ------------------------------------------------------------ parsing

def parse_spec(text: str, max_order: int | None = None) -> TripleSpec:
    """Parse and resolve a triple description.

    Raises :class:`ParseError` for malformed documents and
    :class:`ResolutionError` for references that do not resolve (unknown
    indices, elements outside a group, invalid isomorphisms, ...).
    """
    try:
        doc = yaml.safe_load(text)
        tree = yaml.compose(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        raise ParseError(str(exc.problem), mark.line + 1 if mark else None,
                         mark.column + 1 if mark else None) from None

    def fail(cls, msg, *path):
        line, col = _locate(tree, path)
        raise cls(msg, line, col)

    if not isinstance(doc, dict):
        fail(ParseError, "document must be a mapping")
    if doc.get("format", SPEC_FORMAT) != SPEC_FORMAT:
        fail(ParseError, f"unsupported format {doc.get('format')!r}", "format")
    if not isinstance(doc.get("groups"), dict) or not doc["groups"]:
        fail(ParseError, "'groups' must be a non-empty mapping", "groups")

    groups: dict[int, FiniteGroup] = {}
    for key, g in doc["groups"].items():
        if not isinstance(key, int):
            fail(ParseError, f"group index {key!r} is not an integer", "groups")
        try:
            if isinstance(g, str):
                G = parse_group(g)
            elif isinstance(g, dict) and "table" in g:
                G = make_group(g["table"], name=f"table:{key}")
            else:
                fail(ParseError, "group must be a constructor string or {table: ...}", "groups", key)
        except (ValueError, TypeError) as exc:
            fail(ResolutionError, f"group {key}: {exc}", "groups", key)
        if max_order is not None and G.order > max_order:
            fail(ResolutionError, f"group {key} has order {G.order} > {max_order}", "groups", key)
        groups[key] = G
    I = sorted(groups)

    Eraw = doc.get("E", "universal")
    if Eraw == "universal":
        E = {(x, y) for x in I for y in I}
    elif isinstance(Eraw, list):
        E = set()
        for n, item in enumerate(Eraw):
            if not (isinstance(item, list) and len(item) == 2 and all(v in groups for v in item)):
                fail(ResolutionError, f"E entry {item!r} is not a pair of group indices", "E", n)
            E.add(tuple(item))
        if doc.get("close_E", False):
            E = _equivalence_closure(I, E)
    else:
        fail(ParseError, "'E' must be 'universal' or a list of pairs", "E")

    isos = {}
    for n, entry in enumerate(doc.get("isos") or []):
        if not isinstance(entry, dict) or not {"x", "y"} <= set(entry):
            fail(ParseError, "iso entries need x and y", "isos", n)
        x, y = entry["x"], entry["y"]
        if (x, y) not in E:
            fail(ResolutionError, f"iso ({x},{y}) is not indexed by E", "isos", n)
        try:
            Gx, Gy = groups[x], groups[y]
            H = subgroup_generated(Gx, entry.get("H", []))
            K = subgroup_generated(Gy, entry.get("K", []))
            mp = entry.get("map")
            mapping = None if mp is None else [tuple(p) for p in mp]
            isos[x, y] = make_iso(Gx, Gy, x, y, H, K, mapping)
        except (InvalidIso, NotNormal, NotASubgroup, ValueError, TypeError) as exc:
            fail(ResolutionError, f"iso ({x},{y}): {exc}", "isos", n)
    for x, y in sorted(E):
        if (x, y) in isos:
            continue
        if x == y:
            isos[x, y] = identity_iso(groups[x], x)
        elif (y, x) in isos:
            isos[x, y] = isos[y, x].inverse()
        else:
            fail(ResolutionError, f"no isomorphism given for ({x},{y})", "isos")

    try:
        P = GroupPair(groups, frozenset(E), isos)
    except InvalidPair as exc:
        fail(ResolutionError, str(exc), "E")

    shifts = {}
    E3 = set(P.E3)
    for n, entry in enumerate(doc.get("shifts") or []):
        if not isinstance(entry, dict) or not {"x", "y", "z", "rep"} <= set(entry):
            fail(ParseError, "shift entries need x, y, z and rep", "shifts", n)
        key = (entry["x"], entry["y"], entry["z"])
        if key not in E3:
            fail(ResolutionError, f"shift {key} is not in E3", "shifts", n)
        rep = entry["rep"]
        Gx = groups[key[0]]
        if not isinstance(rep, int) or not 0 <= rep < Gx.order:
            fail(ResolutionError, f"shift representative {rep!r} is not an element of G_{key[0]}",
                 "shifts", n, "rep")
        shifts[key] = complex_product(Gx, {rep}, P.composite(*key))
    return TripleSpec(groups, dict(doc["groups"]), frozenset(E), make_triple(P, shifts), doc)


def _equivalence_closure(I: list[int], E: set) -> set:
    parent = {x: x for x in I}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in E:
        parent[find(x)] = find(y)
    return {(x, y) for x in I for y in I if find(x) == find(y)}


def load_spec(path: str, max_order: int | None = None) -> TripleSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), max_order)
