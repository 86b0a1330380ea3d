"""Group pairs and group triples.

A group pair is a family of groups indexed by ``I`` together with quotient
isomorphisms ``phi[x, y]: G_x/H_xy -> G_y/K_xy`` for every ``(x, y)`` in an
equivalence relation ``E`` on ``I``.  A group triple adds a shift coset
``C[x, y, z]`` of ``H_xy * H_xz`` in ``G_x`` for every ``(x, y, z)`` with
``(x, y)`` and ``(y, z)`` in ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    NotNormal,
    complex_product,
    cosets,
    is_normal,
    quotient,
)
from .report import ConditionReport


class InvalidIso(ValueError):
    pass


class InvalidPair(ValueError):
    pass


class ConventionUnsatisfiable(ValueError):
    def __init__(self, x: int, y: int, message: str):
        super().__init__(message)
        self.x, self.y = x, y


def _fmt(s: Iterable[int]) -> str:
    return "{" + ",".join(str(a) for a in sorted(s)) + "}"


@dataclass(frozen=True, eq=False)
class QuotientIso:
    """``phi: G_source/H -> G_target/K`` stored as a permutation of coset indices.

    ``map[i]`` is the canonical index of the ``K``-coset that the ``i``-th
    canonical ``H``-coset goes to.  ``order`` is the enumeration in use:
    ``H_{gamma} = h_canon[order[gamma]]`` and ``K_{gamma} = phi(H_{gamma})``.
    """

    source: int
    target: int
    H: frozenset
    K: frozenset
    map: tuple[int, ...]
    h_canon: tuple[frozenset, ...] = field(repr=False)
    k_canon: tuple[frozenset, ...] = field(repr=False)
    order: tuple[int, ...] = field(repr=False, default=())

    def __post_init__(self):
        if not self.order:
            object.__setattr__(self, "order", tuple(range(len(self.map))))

    @property
    def kappa(self) -> int:
        return len(self.map)

    @cached_property
    def h_cosets(self) -> tuple[frozenset, ...]:
        return tuple(self.h_canon[i] for i in self.order)

    @cached_property
    def k_cosets(self) -> tuple[frozenset, ...]:
        return tuple(self.k_canon[self.map[i]] for i in self.order)

    @cached_property
    def _h_lookup(self) -> dict[int, int]:
        return {g: gm for gm, c in enumerate(self.h_cosets) for g in c}

    @cached_property
    def _k_lookup(self) -> dict[int, int]:
        return {g: gm for gm, c in enumerate(self.k_cosets) for g in c}

    def h_index(self, g: int) -> int:
        """Enumeration index of the ``H``-coset containing ``g``."""
        return self._h_lookup[g]

    def k_index(self, g: int) -> int:
        return self._k_lookup[g]

    def image(self, S: Iterable[int]) -> frozenset:
        """``phi[S]`` for ``S`` a union of ``H``-cosets."""
        S = frozenset(S)
        out: set[int] = set()
        for h, k in zip(self.h_cosets, self.k_cosets):
            if h <= S:
                out |= k
            elif h & S:
                raise ValueError(f"{_fmt(S)} is not a union of cosets of {_fmt(self.H)}")
        return frozenset(out)

    def preimage(self, T: Iterable[int]) -> frozenset:
        """``phi^-1[T]`` for ``T`` a union of ``K``-cosets."""
        T = frozenset(T)
        out: set[int] = set()
        for h, k in zip(self.h_cosets, self.k_cosets):
            if k <= T:
                out |= h
            elif k & T:
                raise ValueError(f"{_fmt(T)} is not a union of cosets of {_fmt(self.K)}")
        return frozenset(out)

    def with_order(self, order: Sequence[int]) -> QuotientIso:
        q = replace(self, order=tuple(order))
        if sorted(q.order) != list(range(self.kappa)) or q.order[0] != 0:
            raise InvalidIso("enumeration must be a permutation starting at the subgroup")
        return q

    def inverse(self) -> QuotientIso:
        inv = [0] * self.kappa
        for i, j in enumerate(self.map):
            inv[j] = i
        return QuotientIso(self.target, self.source, self.K, self.H, tuple(inv),
                           self.k_canon, self.h_canon)


def make_iso(
    Gx: FiniteGroup,
    Gy: FiniteGroup,
    x: int,
    y: int,
    H: Iterable[int],
    K: Iterable[int],
    mapping: Mapping[int, int] | Iterable[tuple[int, int]] | None = None,
) -> QuotientIso:
    """Build and validate a quotient isomorphism.

    ``mapping`` pairs representatives ``g -> h`` meaning ``phi(gH) = hK``.  It
    only needs to cover a generating set of ``G_x/H``; the rest is filled in
    multiplicatively.  ``None`` means ``phi(gH) = gK`` on element labels.
    """
    H, K = frozenset(H), frozenset(K)
    for G, S, side in ((Gx, H, "H"), (Gy, K, "K")):
        if not is_normal(G, S):
            raise NotNormal(f"{side}={_fmt(S)} is not a normal subgroup")
    Qx, px = quotient(Gx, H)
    Qy, py = quotient(Gy, K)
    if Qx.order != Qy.order:
        raise InvalidIso(f"quotients have different orders {Qx.order} and {Qy.order}")
    if mapping is None:
        if Gx.order != Gy.order:
            raise InvalidIso("label-identity map needs groups of equal order")
        gens = [(int(px[g]), int(py[g])) for g in Gx.elements]
    else:
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        gens = []
        for g, h in items:
            if not (0 <= g < Gx.order and 0 <= h < Gy.order):
                raise InvalidIso(f"representative pair ({g}, {h}) out of range")
            gens.append((int(px[g]), int(py[h])))
    m = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for a, b in gens:
                cc, dd = Qx.mul(c, a), Qy.mul(m[c], b)
                if cc in m:
                    if m[cc] != dd:
                        raise InvalidIso("coset map is not a well-defined homomorphism")
                else:
                    m[cc] = dd
                    nxt.append(cc)
        frontier = nxt
    if len(m) != Qx.order:
        raise InvalidIso("given representatives do not generate the quotient")
    table = tuple(m[i] for i in range(Qx.order))
    if sorted(table) != list(range(Qy.order)):
        raise InvalidIso("coset map is not a bijection")
    mt = np.array(table)
    if not np.array_equal(mt[Qx.table], Qy.table[np.ix_(mt, mt)]):
        raise InvalidIso("coset map is not multiplicative")
    return QuotientIso(x, y, H, K, table, cosets(Gx, H), cosets(Gy, K))


def identity_iso(G: FiniteGroup, x: int) -> QuotientIso:
    return make_iso(G, G, x, x, {0}, {0}, None)


def _is_equivalence(I: Sequence[int], E: frozenset) -> str | None:
    Iset = set(I)
    for x, y in E:
        if x not in Iset or y not in Iset:
            return f"pair ({x},{y}) outside the index set"
        if (y, x) not in E:
            return f"not symmetric at ({x},{y})"
    for x in I:
        if (x, x) not in E:
            return f"not reflexive at {x}"
    succ: dict[int, set[int]] = {x: set() for x in I}
    for x, y in E:
        succ[x].add(y)
    for x, y in E:
        for z in succ[y]:
            if (x, z) not in E:
                return f"not transitive at ({x},{y},{z})"
    return None


@dataclass(frozen=True, eq=False)
class GroupPair:
    groups: Mapping[int, FiniteGroup]
    E: frozenset
    isos: Mapping[tuple[int, int], QuotientIso]

    def __post_init__(self):
        object.__setattr__(self, "E", frozenset((int(x), int(y)) for x, y in self.E))
        problem = _is_equivalence(self.index_set, self.E)
        if problem:
            raise InvalidPair(f"E is not an equivalence relation: {problem}")
        if set(self.isos) != set(self.E):
            missing = sorted(set(self.E) - set(self.isos))
            extra = sorted(set(self.isos) - set(self.E))
            raise InvalidPair(f"isos must be indexed by E (missing {missing}, extra {extra})")
        for (x, y), iso in self.isos.items():
            if (iso.source, iso.target) != (x, y):
                raise InvalidPair(f"iso at ({x},{y}) is labelled ({iso.source},{iso.target})")
            if len(iso.h_canon) and sum(map(len, iso.h_canon)) != self.groups[x].order:
                raise InvalidPair(f"iso at ({x},{y}) does not match the order of G_{x}")
            if sum(map(len, iso.k_canon)) != self.groups[y].order:
                raise InvalidPair(f"iso at ({x},{y}) does not match the order of G_{y}")

    @property
    def index_set(self) -> list[int]:
        return sorted(self.groups)

    @cached_property
    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.E)

    @cached_property
    def E3(self) -> list[tuple[int, int, int]]:
        return [(x, y, z) for x, y in self.pairs for (w, z) in self.pairs if w == y]

    def iso(self, x: int, y: int) -> QuotientIso:
        return self.isos[x, y]

    def H(self, x: int, y: int) -> frozenset:
        return self.isos[x, y].H

    def K(self, x: int, y: int) -> frozenset:
        return self.isos[x, y].K

    def kappa(self, x: int, y: int) -> int:
        return self.isos[x, y].kappa

    def composite(self, x: int, y: int, z: int) -> frozenset:
        """``H_xy * H_xz``, the subgroup the shift ``C[x, y, z]`` is a coset of."""
        return complex_product(self.groups[x], self.H(x, y), self.H(x, z))


@dataclass(frozen=True, eq=False)
class GroupTriple:
    pair: GroupPair
    shifts: Mapping[tuple[int, int, int], frozenset]

    def __post_init__(self):
        keys = set(self.pair.E3)
        if set(self.shifts) != keys:
            raise InvalidPair("shifts must be indexed by E3")

    @property
    def groups(self) -> Mapping[int, FiniteGroup]:
        return self.pair.groups

    @property
    def index_set(self) -> list[int]:
        return self.pair.index_set

    def C(self, x: int, y: int, z: int) -> frozenset:
        return self.shifts[x, y, z]


def identity_shifts(P: GroupPair) -> dict[tuple[int, int, int], frozenset]:
    return {t: P.composite(*t) for t in P.E3}


def make_triple(P: GroupPair, shifts: Mapping[tuple[int, int, int], Iterable[int]] | None = None) -> GroupTriple:
    """Triple over ``P``; triples missing from ``shifts`` get the identity coset."""
    C = identity_shifts(P)
    for key, val in (shifts or {}).items():
        if key not in C:
            raise InvalidPair(f"shift index {key} is not in E3")
        C[key] = frozenset(val)
    return GroupTriple(P, C)


def single_group_pair(G: FiniteGroup) -> GroupPair:
    return GroupPair({0: G}, frozenset({(0, 0)}), {(0, 0): identity_iso(G, 0)})


# -------------------------------------------------------------- conventions

def canonicalize(P: GroupPair) -> GroupPair:
    """Fix the coset enumerations so that ``H_{yx,g} = K_{xy,g}``.

    For each unordered pair ``{x, y}`` with ``x < y`` the ``(x, y)`` enumeration
    is the canonical one and the ``(y, x)`` enumeration is derived from it.
    Diagonal pairs keep canonical order (singleton cosets in element order
    once the identity condition holds).
    """
    isos = dict(P.isos)
    for x, y in P.pairs:
        if x == y:
            isos[x, y] = isos[x, y].with_order(range(isos[x, y].kappa))
        elif x < y:
            master = isos[x, y].with_order(range(isos[x, y].kappa))
            slave = isos[y, x]
            if slave.H != master.K:
                raise ConventionUnsatisfiable(
                    x, y, f"H_{y}{x}={_fmt(slave.H)} differs from K_{x}{y}={_fmt(master.K)}")
            order = [slave.h_canon.index(k) for k in master.k_cosets]
            isos[x, y] = master
            isos[y, x] = slave.with_order(order)
    return GroupPair(P.groups, P.E, isos)


def canonicalize_triple(T: GroupTriple) -> GroupTriple:
    return GroupTriple(canonicalize(T.pair), T.shifts)


# --------------------------------------------------------------- conditions

def check_identity_condition(P: GroupPair) -> ConditionReport:
    rep = ConditionReport()
    for x in P.index_set:
        iso = P.iso(x, x)
        if iso.H != {0}:
            rep.fail("identity", (x,), f"H_{x}{x}={_fmt(iso.H)} is not trivial")
        elif iso.K != {0}:
            rep.fail("identity", (x,), f"K_{x}{x}={_fmt(iso.K)} is not trivial")
        elif any(iso.map[i] != i for i in range(iso.kappa)):
            moved = next(i for i in range(iso.kappa) if iso.map[i] != i)
            rep.fail("identity", (x,), f"phi_{x}{x} sends {moved} to {iso.map[moved]}")
    return rep


def check_converse_condition(P: GroupPair) -> ConditionReport:
    rep = ConditionReport()
    for x, y in P.pairs:
        if (y, x) not in P.E:
            rep.fail("converse", (x, y), f"({y},{x}) missing from E")
            continue
        f, g = P.iso(x, y), P.iso(y, x)
        if g.H != f.K or g.K != f.H:
            rep.fail("converse", (x, y),
                     f"phi_{y}{x} is not defined on the range of phi_{x}{y}")
            continue
        for c in f.h_canon:
            back = g.image(f.image(c))
            if back != c:
                rep.fail("converse", (x, y),
                         f"phi_{y}{x}(phi_{x}{y}({_fmt(c)})) = {_fmt(back)}")
                break
    return rep


def check_composition_condition(P: GroupPair) -> ConditionReport:
    """Subset condition ``H_xz <= phi_xy^-1[K_xy * H_yz]`` and agreement of the
    induced maps, checked coset by coset modulo that preimage."""
    rep = ConditionReport()
    for x, y, z in P.E3:
        fxy, fyz, fxz = P.iso(x, y), P.iso(y, z), P.iso(x, z)
        Ny = complex_product(P.groups[y], fxy.K, fyz.H)
        Nx = fxy.preimage(Ny)
        if not fxz.H <= Nx:
            rep.fail("composition-subset", (x, y, z),
                     f"H_{x}{z}={_fmt(fxz.H)} not contained in {_fmt(Nx)}")
            continue
        for c in cosets(P.groups[x], Nx):
            lhs = fyz.image(fxy.image(c))
            rhs = fxz.image(c)
            if lhs != rhs:
                rep.fail("composition-induced", (x, y, z),
                         f"coset {_fmt(c)}: via {y} gives {_fmt(lhs)}, direct gives {_fmt(rhs)}")
                break
    return rep


def check_image_theorem(P: GroupPair) -> ConditionReport:
    rep = ConditionReport()
    for x, y, z in P.E3:
        fxy, fyz, fxz = P.iso(x, y), P.iso(y, z), P.iso(x, z)
        Gx, Gy, Gz = P.groups[x], P.groups[y], P.groups[z]
        hxy_hxz = complex_product(Gx, fxy.H, fxz.H)
        kxy_hyz = complex_product(Gy, fxy.K, fyz.H)
        kxz_kyz = complex_product(Gz, fxz.K, fyz.K)
        checks = (
            ("phi_xy[H_xy H_xz] = K_xy H_yz", fxy, hxy_hxz, kxy_hyz),
            ("phi_yz[K_xy H_yz] = K_xz K_yz", fyz, kxy_hyz, kxz_kyz),
            ("phi_xz[H_xy H_xz] = K_xz K_yz", fxz, hxy_hxz, kxz_kyz),
        )
        for label, f, src, dst in checks:
            try:
                img = f.image(src)
            except ValueError as exc:
                rep.fail("image", (x, y, z), f"{label}: {exc} (implementation bug)")
                continue
            if img != dst:
                rep.fail("image", (x, y, z),
                         f"{label}: got {_fmt(img)}, expected {_fmt(dst)} (implementation bug)")
    return rep


def validate_pair(P: GroupPair) -> tuple[GroupPair | None, ConditionReport]:
    """Canonicalize and run identity, converse and composition checks.

    Returns the canonical pair (``None`` if the enumeration convention cannot
    be met) together with the combined report.
    """
    rep = ConditionReport()
    try:
        C = canonicalize(P)
    except ConventionUnsatisfiable as exc:
        rep.fail("converse", (exc.x, exc.y), str(exc))
        return None, rep
    rep.extend(check_identity_condition(C))
    rep.extend(check_converse_condition(C))
    rep.extend(check_composition_condition(C))
    return C, rep


def validate_shifts(T: GroupTriple) -> ConditionReport:
    rep = ConditionReport()
    P = T.pair
    for x, y, z in P.E3:
        N = P.composite(x, y, z)
        C = T.C(x, y, z)
        if C not in cosets(P.groups[x], N):
            rep.fail("shift", (x, y, z), f"C={_fmt(C)} is not a coset of {_fmt(N)}")
        elif C != N:
            rep.note("nontrivial-shift", (x, y, z), f"C={_fmt(C)} differs from {_fmt(N)}")
    return rep


def validate_triple(T: GroupTriple) -> tuple[GroupTriple | None, ConditionReport]:
    P, rep = validate_pair(T.pair)
    if P is None:
        return None, rep
    T = GroupTriple(P, T.shifts)
    rep.extend(validate_shifts(T))
    return T, rep


# ------------------------------------------------------------ constructions

def direct_product(T1: GroupTriple, T2: GroupTriple) -> GroupTriple:
    """Disjoint union; indices of ``T2`` are shifted past those of ``T1``."""
    offset = max(T1.index_set, default=-1) + 1
    relab = {x: offset + i for i, x in enumerate(T2.index_set)}
    groups = dict(T1.groups)
    groups.update({relab[x]: G for x, G in T2.groups.items()})
    E = set(T1.pair.E) | {(relab[x], relab[y]) for x, y in T2.pair.E}
    isos = dict(T1.pair.isos)
    for (x, y), iso in T2.pair.isos.items():
        isos[relab[x], relab[y]] = replace(iso, source=relab[x], target=relab[y])
    shifts = dict(T1.shifts)
    shifts.update({(relab[x], relab[y], relab[z]): C for (x, y, z), C in T2.shifts.items()})
    return GroupTriple(GroupPair(groups, frozenset(E), isos), shifts)


def empty_triple() -> GroupTriple:
    return GroupTriple(GroupPair({}, frozenset(), {}), {})


def is_simple_triple(T: GroupTriple) -> bool:
    I = T.index_set
    return T.pair.E == {(x, y) for x in I for y in I}


def restrict(T: GroupTriple, J: Iterable[int]) -> GroupTriple:
    """Restriction of ``T`` to an ``E``-closed set of indices."""
    J = set(J)
    groups = {x: G for x, G in T.groups.items() if x in J}
    E = frozenset(p for p in T.pair.E if p[0] in J)
    if any(p[1] not in J for p in E):
        raise InvalidPair("index set is not a union of E-classes")
    isos = {p: f for p, f in T.pair.isos.items() if p in E}
    shifts = {t: C for t, C in T.shifts.items() if t[0] in J}
    return GroupTriple(GroupPair(groups, E, isos), shifts)


def components(P: GroupPair) -> list[list[int]]:
    """The ``E``-classes, each sorted, in order of least member."""
    seen: set[int] = set()
    out = []
    for x in P.index_set:
        if x not in seen:
            cls = sorted(y for (w, y) in P.E if w == x)
            seen |= set(cls)
            out.append(cls)
    return out
