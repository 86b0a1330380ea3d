"""Embedding search, shifted-versus-plain comparisons, the point partitions
induced by an embedded Lyndon algebra, and bounded searches over shift
systems."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .algebra import (
    AtomStructure,
    FiniteRelationAlgebra,
    InvalidTriple,
    bits,
    build_full_algebra,
    check_ra_axioms,
    is_functional,
    mask,
)
from .groups import complex_product, cosets
from .pair import GroupPair, GroupTriple, make_triple, validate_pair, validate_triple
from .relations import AtomIndex, atom_compose, atom_converse, atom_shifted_compose, atoms_of
from .report import ConditionReport


class InvariantViolation(AssertionError):
    """A property that must hold for every valid triple failed; indicates a bug."""


# ------------------------------------------------------------- embeddings

@dataclass(frozen=True, eq=False)
class Embedding:
    source: FiniteRelationAlgebra
    target: FiniteRelationAlgebra
    map: tuple[int, ...]   # source atom -> target element
    preserves_unit: bool = True

    def __call__(self, e: int) -> int:
        out = 0
        for a in bits(e):
            out |= self.map[a]
        return out

    def to_record(self) -> dict[str, Any]:
        return {"found": True,
                "map": {self.source.structure.labels[a]: sorted(bits(m)) for a, m in enumerate(self.map)}}


@dataclass(frozen=True)
class NoEmbedding:
    nodes: int

    def to_record(self) -> dict[str, Any]:
        return {"found": False, "exhausted": True, "nodes": self.nodes}


@dataclass(frozen=True)
class NotFoundWithinBudget:
    nodes: int

    def to_record(self) -> dict[str, Any]:
        return {"found": False, "exhausted": False, "nodes": self.nodes}


class _Budget(Exception):
    pass


UNUSED = -1


def find_embedding(B: FiniteRelationAlgebra, A: FiniteRelationAlgebra,
                   budget: int = 100_000, preserve_unit: bool = True,
                   ) -> Embedding | NoEmbedding | NotFoundWithinBudget:
    """Search for an embedding of ``B`` into ``A``.

    An embedding of finite atomic algebras is the same thing as a surjection
    ``f`` from the atoms of ``A`` onto the atoms of ``B`` whose fibres
    ``theta(b) = f^-1(b)`` preserve identity, converse and composition.  The
    search assigns target atoms one at a time (fewest remaining options
    first, ties by index), fixes the converse atom alongside, and forward
    checks ``t1;t2 <= theta(f(t1);f(t2))`` for every assigned pair.
    ``budget`` bounds the number of assignments tried.

    With ``preserve_unit=False`` the images need not cover the unit of ``A``
    (target atoms may stay outside every image); identity, converse and
    composition are still preserved.
    """
    SB, SA = B.structure, A.structure
    nA, nB = SA.n, SB.n
    idB = SB.identity_atoms
    convA, convB = SA.converse, SB.converse
    prodB = [[SB.compose(s, t) for t in range(nB)] for s in range(nB)]
    prodA = [[SA.compose(s, t) for t in range(nA)] for s in range(nA)]

    domains: list[set[int]] = []
    for t in range(nA):
        allowed = set(idB) if t in SA.identity_atoms else set(range(nB)) - idB
        if convA[t] == t:
            allowed = {s for s in allowed if convB[s] == s}
        if not preserve_unit and t not in SA.identity_atoms:
            allowed.add(UNUSED)
        domains.append(allowed)

    nodes = 0

    def assign(f: dict[int, int], doms: list[set[int]], t: int, s: int) -> bool:
        pending = [(t, s)]
        while pending:
            u, v = pending.pop()
            if u in f:
                if f[u] != v:
                    return False
                continue
            if v not in doms[u]:
                return False
            f[u] = v
            doms[u] = {v}
            pending.append((convA[u], UNUSED if v == UNUSED else convB[v]))
            if v == UNUSED:
                continue
            for w in list(f):
                if f[w] == UNUSED:
                    continue
                for t1, t2 in ((u, w), (w, u)):
                    allowed = prodB[f[t1]][f[t2]]
                    for c in prodA[t1][t2]:
                        if c in f:
                            if f[c] not in allowed:
                                return False
                        else:
                            doms[c] &= allowed
                            if not doms[c]:
                                return False
                            if len(doms[c]) == 1:
                                pending.append((c, next(iter(doms[c]))))
        return True

    def complete(f: dict[int, int]) -> bool:
        theta = [0] * nB
        for t, s in f.items():
            if s != UNUSED:
                theta[s] |= 1 << t
        if any(m == 0 for m in theta):
            return False
        for s1 in range(nB):
            for s2 in range(nB):
                if A.compose(theta[s1], theta[s2]) != mask(t for t, s in f.items() if s in prodB[s1][s2]):
                    return False
        return True

    def search(f: dict[int, int], doms: list[set[int]]) -> dict[int, int] | None:
        nonlocal nodes
        free = [t for t in range(nA) if t not in f]
        if not free:
            return dict(f) if complete(f) else None
        hit = set(f.values())
        reachable = set().union(*(doms[t] for t in free))
        if not set(range(nB)) <= hit | reachable:
            return None
        t = min(free, key=lambda u: (len(doms[u]), u))
        for s in sorted(doms[t]):
            nodes += 1
            if nodes > budget:
                raise _Budget
            f2, d2 = dict(f), [set(d) for d in doms]
            if assign(f2, d2, t, s):
                found = search(f2, d2)
                if found is not None:
                    return found
        return None

    try:
        f: dict[int, int] = {}
        doms = [set(d) for d in domains]
        if any(not d for d in doms):
            return NoEmbedding(0)
        result = search(f, doms)
    except _Budget:
        return NotFoundWithinBudget(nodes)
    if result is None:
        return NoEmbedding(nodes)
    theta = [0] * nB
    for t, s in result.items():
        if s != UNUSED:
            theta[s] |= 1 << t
    return Embedding(B, A, tuple(theta), preserve_unit)


def verify_embedding(emb: Embedding, exhaustive_limit: int = 12) -> ConditionReport:
    """Check that ``emb`` is a monomorphism.

    Atom-level conditions are always checked.  When the source has at most
    ``exhaustive_limit`` atoms, every element (and every pair of elements)
    of the source is also pushed through the lifted map; this costs
    ``4**n`` products.  Complements are taken relative to the image of the
    unit, which is the unit of the target when ``emb.preserves_unit``.
    """
    rep = ConditionReport()
    B, A, th = emb.source, emb.target, emb.map
    labels = B.structure.labels
    seen = 0
    for a, m in enumerate(th):
        if m == 0:
            rep.fail("nonzero", (a,), f"{labels[a]} maps to 0")
        if seen & m:
            rep.fail("disjoint", (a,), f"{labels[a]} overlaps an earlier image")
        seen |= m
    if emb.preserves_unit and seen != A.one:
        rep.fail("unit", (), "images do not cover the unit")
    top = seen
    if emb(B.identity) != A.identity:
        rep.fail("identity", (), "1' is not preserved")
    for a in range(B.n):
        if emb(B.converse(B.atom(a))) != A.converse(th[a]):
            rep.fail("converse", (a,), f"converse of {labels[a]} not preserved")
        for b in range(B.n):
            if emb(B.compose(B.atom(a), B.atom(b))) != A.compose(th[a], th[b]):
                rep.fail("compose", (a, b), f"{labels[a]};{labels[b]} not preserved")
    if B.n <= exhaustive_limit and rep.ok:
        size = 1 << B.n
        img = [0] * size
        for e in range(1, size):
            low = e & -e
            img[e] = img[e ^ low] | th[low.bit_length() - 1]
        for e in range(size):
            if img[B.converse(e)] != A.converse(img[e]) or img[B.complement(e)] != top & ~img[e]:
                rep.fail("element-unary", (e,), f"element {B.label(e)}")
                break
        for e in range(size):
            for f in range(size):
                if (img[B.compose(e, f)] != A.compose(img[e], img[f])
                        or img[e | f] != img[e] | img[f] or img[e & f] != img[e] & img[f]):
                    rep.fail("element-binary", (e, f), f"elements {B.label(e)}, {B.label(f)}")
                    return rep
    return rep


# -------------------------------------------------- shifted vs relational

def compare_compositions(T: GroupTriple) -> list[tuple[AtomIndex, AtomIndex]]:
    """Atom pairs whose coset-shifted product differs from their relational
    composition."""
    C, rep = validate_triple(T)
    if not rep.ok:
        raise InvalidTriple(rep)
    P = C.pair
    out = []
    for x, y, z in P.E3:
        for a in range(P.kappa(x, y)):
            for b in range(P.kappa(y, z)):
                ai, bi = AtomIndex(x, y, a), AtomIndex(y, z, b)
                if atom_shifted_compose(C, ai, bi) != atom_compose(P, ai, bi):
                    out.append((ai, bi))
    return out


# ----------------------------------------------- Lyndon embedding analysis

@dataclass
class PointPartition:
    point: int
    related: frozenset          # pairs (x, y) with G_x x G_y <= theta(p + 1')
    classes: list[list[int]]
    problems: list[str] = field(default_factory=list)

    @property
    def domain(self) -> list[int]:
        return sorted({x for x, _ in self.related})

    @property
    def consistent(self) -> bool:
        return not self.problems


def _lyndon_points(B: FiniteRelationAlgebra) -> list[int]:
    return [a for a in range(B.n) if a not in B.structure.identity_atoms]


def point_partition(emb: Embedding, p: int) -> PointPartition:
    """Classes of ``x ~p y  iff  G_x x G_y <= theta(p + 1')`` on its domain.

    ``p`` is a point atom of the embedded Lyndon algebra; the target must
    have been built from a triple.  Violations of reflexivity on the domain,
    symmetry or transitivity are recorded in ``problems``.
    """
    A, B = emb.target, emb.source
    if A.triple is None:
        raise ValueError("target algebra was not built from a group triple")
    I = A.triple.index_set
    e_p = emb(B.atom(p) | B.identity)
    rel = frozenset((x, y) for x in I for y in I
                    if (x, y) in A.triple.pair.E and A.leq(A.block(x, y), e_p))
    part = PointPartition(p, rel, [])
    dom = part.domain
    for x in dom:
        if (x, x) not in rel:
            part.problems.append(f"not reflexive at {x}")
    for x, y in rel:
        if (y, x) not in rel:
            part.problems.append(f"not symmetric at ({x},{y})")
        for w, z in rel:
            if w == y and (x, z) not in rel:
                part.problems.append(f"not transitive at ({x},{y},{z})")
    seen: set[int] = set()
    for x in dom:
        if x not in seen:
            cls = sorted(y for (w, y) in rel if w == x)
            seen |= set(cls)
            part.classes.append(cls)
    return part


def check_lyndon_embedding(emb: Embedding) -> ConditionReport:
    """Consequences of a Lyndon algebra (at least two points) sitting inside
    an algebra built from a simple triple.

    * each ``x ~p y`` relation is an equivalence on its domain;
    * for each ``p`` and each ``x`` some ``y`` has ``x`` not related to ``y``;
    * whenever ``H_xy`` is non-trivial exactly one point meets ``G_x x G_y``,
      and it then covers both blocks and its equivalence element covers the
      square on ``G_x u G_y``;
    * finally every ``H_xy`` is trivial.
    """
    rep = ConditionReport()
    A, B = emb.target, emb.source
    T = A.triple
    if T is None:
        raise ValueError("target algebra was not built from a group triple")
    P = T.pair
    points = _lyndon_points(B)
    for p in points:
        part = point_partition(emb, p)
        for msg in part.problems:
            rep.fail("point-equivalence", (p,), msg)
        if len(points) >= 2:
            for x in P.index_set:
                if all((x, y) in part.related for y in P.index_set):
                    rep.fail("point-covers-all", (p, x), f"x={x} is related to every index")
    for x, y in P.pairs:
        if len(P.H(x, y)) == 1:
            continue
        blk = A.block(x, y)
        hits = [p for p in points if blk & emb.map[p]]
        if len(hits) != 1:
            rep.fail("unique-point", (x, y), f"points meeting G_{x} x G_{y}: {hits}")
            continue
        p = hits[0]
        if not A.leq(blk | A.block(y, x), emb.map[p]):
            rep.fail("point-covers-block", (x, y), f"theta(p{p}) misses part of the blocks")
        square = A.block(x, x) | blk | A.block(y, x) | A.block(y, y)
        if not A.leq(square, emb(B.atom(p) | B.identity)):
            rep.fail("square-in-equivalence", (x, y), f"theta(p{p}+1') misses the square")
    for x, y in P.pairs:
        if len(P.H(x, y)) != 1:
            rep.fail("subgroup-trivial", (x, y), f"H_{x}{y} has order {len(P.H(x, y))}")
    return rep


@dataclass
class TrivialityReport:
    axioms_ok: bool
    all_subgroups_trivial: bool
    all_atoms_functional: bool
    shifts_trivial: bool
    nonfunctional_atoms: list[AtomIndex] = field(default_factory=list)

    @property
    def group_algebra(self) -> bool:
        """All the hypotheses under which the algebra is a full group relation algebra."""
        return self.axioms_ok and self.all_subgroups_trivial and self.shifts_trivial

    def to_record(self) -> dict[str, Any]:
        return {"axioms_ok": self.axioms_ok,
                "all_subgroups_trivial": self.all_subgroups_trivial,
                "all_atoms_functional": self.all_atoms_functional,
                "shifts_trivial": self.shifts_trivial,
                "group_algebra": self.group_algebra,
                "nonfunctional_atoms": [list(a) for a in self.nonfunctional_atoms]}


def triviality_analysis(T: GroupTriple) -> TrivialityReport:
    """Trivial subgroups versus functional atoms.

    Raises :class:`InvariantViolation` if the algebra satisfies the axioms,
    every ``H_xy`` is trivial and yet some atom is not functional.
    """
    A = build_full_algebra(T)
    P = A.triple.pair
    axioms_ok = check_ra_axioms(A).ok
    trivial = all(len(P.H(x, y)) == 1 for x, y in P.pairs)
    nonfunc = [A.atom_indices[i] for i in range(A.n) if not is_functional(A, A.atom(i))]
    rep = TrivialityReport(axioms_ok, trivial, not nonfunc,
                           not compare_compositions(A.triple), nonfunc)
    if axioms_ok and trivial and nonfunc:
        raise InvariantViolation(f"trivial subgroups but non-functional atoms {nonfunc}")
    return rep


# ------------------------------------------------------------ shift search

class _ShiftBuilder:
    """Rebuilds the composition tensor of a pair for many shift systems.

    For every ``(x, y, z)`` the unshifted product cosets are precomputed; a
    shift only permutes which coset of ``H_xy H_xz`` each atom pair lands in.
    """

    def __init__(self, P: GroupPair):
        self.P = P
        self.atoms = atoms_of(P)
        self.ids = {a: i for i, a in enumerate(self.atoms)}
        n = len(self.atoms)
        self.n = n
        self.converse = tuple(self.ids[atom_converse(P, a)] for a in self.atoms)
        self.identity = frozenset(self.ids[AtomIndex(x, x, 0)] for x in P.index_set)
        self.labels = tuple(a.label() for a in self.atoms)
        self.triples = P.E3
        self.candidates: dict[tuple, tuple[frozenset, ...]] = {}
        self.plan: dict[tuple, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        self.landing: dict[tuple, dict[int, dict[int, list[int]]]] = {}
        for x, y, z in self.triples:
            G = P.groups[x]
            cs = cosets(G, P.composite(x, y, z))
            self.candidates[x, y, z] = cs
            fxy, fyz = P.iso(x, y), P.iso(y, z)
            ia, ib, si = [], [], []
            for a in range(fxy.kappa):
                for b in range(fyz.kappa):
                    mid = complex_product(P.groups[y], fxy.k_cosets[a], fyz.h_cosets[b])
                    S = fxy.preimage(mid)
                    ia.append(self.ids[AtomIndex(x, y, a)])
                    ib.append(self.ids[AtomIndex(y, z, b)])
                    si.append(cs.index(S))
            self.plan[x, y, z] = (np.array(ia), np.array(ib), np.array(si))
            land: dict[int, dict[int, list[int]]] = {}
            hxz = P.iso(x, z).h_cosets
            for ci, C in enumerate(cs):
                land[ci] = {}
                for s, S in enumerate(cs):
                    prod = complex_product(G, S, C)
                    land[ci][s] = [self.ids[AtomIndex(x, z, g)] for g, h in enumerate(hxz) if h <= prod]
            self.landing[x, y, z] = land

    def space_size(self) -> int:
        size = 1
        for t in self.triples:
            size *= len(self.candidates[t])
        return size

    def assignments(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(len(self.candidates[t])) for t in self.triples))

    def shifts(self, choice: tuple[int, ...]) -> dict[tuple, frozenset]:
        return {t: self.candidates[t][c] for t, c in zip(self.triples, choice)}

    def algebra(self, choice: tuple[int, ...]) -> FiniteRelationAlgebra:
        table = np.zeros((self.n, self.n, self.n), dtype=bool)
        for t, ci in zip(self.triples, choice):
            ia, ib, si = self.plan[t]
            land = self.landing[t][ci]
            for a, b, s in zip(ia, ib, si):
                table[a, b, land[s]] = True
        S = AtomStructure(self.n, self.identity, self.converse, table, self.labels)
        return FiniteRelationAlgebra(S, None, self.atoms)


@dataclass
class ShiftAssignment:
    shifts: dict[tuple[int, int, int], frozenset]
    trivial: bool

    def to_record(self) -> dict[str, Any]:
        return {"trivial": self.trivial,
                "shifts": [[*k, sorted(v)] for k, v in sorted(self.shifts.items())]}


@dataclass
class ShiftSearchResult:
    passing: list[ShiftAssignment]
    nodes: int          # partial assignments tried
    space: int          # number of complete shift systems
    complete: bool      # the whole space was decided

    def to_record(self) -> dict[str, Any]:
        return {"complete": self.complete, "nodes": self.nodes, "space": self.space,
                "passing": [a.to_record() for a in self.passing]}


class _LocalTables:
    """Per-triple product tables in block-local atom numbering, and the
    atom-level axiom instances that each group of triples decides."""

    def __init__(self, b: _ShiftBuilder):
        P = b.P
        self.b = b
        self.conv = {}
        for x, y in P.pairs:
            self.conv[x, y] = np.array([atom_converse(P, AtomIndex(x, y, a)).alpha
                                        for a in range(P.kappa(x, y))])
        self.tables: dict[tuple, list[np.ndarray]] = {}
        for t in b.triples:
            x, y, z = t
            ia, ib, si = b.plan[t]
            offs_a = b.ids[AtomIndex(x, y, 0)]
            offs_b = b.ids[AtomIndex(y, z, 0)]
            offs_c = b.ids[AtomIndex(x, z, 0)]
            shape = (P.kappa(x, y), P.kappa(y, z), P.kappa(x, z))
            per_choice = []
            for ci in range(len(b.candidates[t])):
                T = np.zeros(shape, dtype=bool)
                land = b.landing[t][ci]
                for a, bb, s in zip(ia, ib, si):
                    T[a - offs_a, bb - offs_b, [c - offs_c for c in land[s]]] = True
                per_choice.append(T)
            self.tables[t] = per_choice

    def identity_ok(self, t: tuple, T: np.ndarray) -> bool:
        x, y, z = t
        if x == y and not np.array_equal(T[0], np.eye(T.shape[1], dtype=bool)):
            return False
        if y == z and not np.array_equal(T[:, 0, :], np.eye(T.shape[0], dtype=bool)):
            return False
        return True

    def constraints(self, order: list[tuple]) -> list[list[tuple]]:
        """For position ``i`` of ``order``, the axiom instances whose triples
        are all assigned once ``order[i]`` is: ``("cycle1", t, u)``,
        ``("cycle2", t, u)``, ``("conv", t, u)`` and ``("assoc", xyz, xzw, yzw, xyw)``."""
        pos = {t: i for i, t in enumerate(order)}
        by_pos: list[list[tuple]] = [[] for _ in order]
        for x, y, z in order:
            t = (x, y, z)
            for kind, u in (("cycle1", (y, x, z)), ("cycle2", (x, z, y)), ("conv", (z, y, x))):
                by_pos[max(pos[t], pos[u])].append((kind, t, u))
        P = self.b.P
        for x, y, z in order:
            for w in P.index_set:
                if (z, w) not in P.E:
                    continue
                q = ((x, y, z), (x, z, w), (y, z, w), (x, y, w))
                by_pos[max(pos[t] for t in q)].append(("assoc", *q))
        return by_pos

    def holds(self, c: tuple, chosen: dict[tuple, np.ndarray]) -> bool:
        kind = c[0]
        if kind == "assoc":
            xyz, xzw, yzw, xyw = (chosen[t].astype(np.int32) for t in c[1:])
            left = np.einsum("abd,dce->abce", xyz, xzw) > 0
            right = np.einsum("bce,aef->abcf", yzw, xyw) > 0
            return np.array_equal(left, right)
        t, u = c[1], c[2]
        x, y, z = t
        T, U = chosen[t], chosen[u]
        if kind == "cycle1":        # c in a;b  iff  b in a^;c
            return np.array_equal(T, U[self.conv[x, y]].transpose(0, 2, 1))
        if kind == "cycle2":        # c in a;b  iff  a in c;b^
            return np.array_equal(T, U[:, self.conv[y, z], :].transpose(2, 1, 0))
        # c^ in b^;a^  iff  c in a;b
        V = U[self.conv[y, z]][:, self.conv[x, y]][:, :, self.conv[x, z]]
        return np.array_equal(T, V.transpose(1, 0, 2))


def search_shift_systems(P: GroupPair, budget: int = 10_000) -> ShiftSearchResult:
    """All shift systems on ``P`` whose algebra satisfies the axioms.

    Depth-first over the triples of ``E3`` (sorted by largest index, then
    lexicographically), cosets in canonical order.  A partial assignment is
    abandoned as soon as an atom-level axiom instance whose triples are all
    assigned fails; complete assignments are confirmed with
    :func:`check_ra_axioms`.  ``budget`` bounds the number of partial
    assignments tried; ``complete`` is false if it ran out.
    """
    C, rep = validate_pair(P)
    if C is None or not rep.ok:
        raise InvalidTriple(rep)
    builder = _ShiftBuilder(C)
    local = _LocalTables(builder)
    order = sorted(builder.triples, key=lambda t: (max(t), t))
    checks = local.constraints(order)
    index_in_builder = {t: i for i, t in enumerate(builder.triples)}
    passing: list[ShiftAssignment] = []
    nodes = 0
    choice: dict[tuple, int] = {}
    chosen: dict[tuple, np.ndarray] = {}

    def descend(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            full = [0] * len(order)
            for t, ci in choice.items():
                full[index_in_builder[t]] = ci
            if check_ra_axioms(builder.algebra(tuple(full))).ok:
                passing.append(ShiftAssignment(builder.shifts(tuple(full)), not any(full)))
            return True
        t = order[i]
        for ci, T in enumerate(local.tables[t]):
            if nodes >= budget:
                return False
            nodes += 1
            if not local.identity_ok(t, T):
                continue
            choice[t], chosen[t] = ci, T
            if all(local.holds(c, chosen) for c in checks[i]):
                if not descend(i + 1):
                    return False
        choice.pop(t, None)
        chosen.pop(t, None)
        return True

    complete = descend(0)
    return ShiftSearchResult(passing, nodes, builder.space_size(), complete)


def verify_coset_consequences(T: GroupTriple) -> ConditionReport:
    """``C[x, y, x] = H_xy`` for every ``(x, y)`` in ``E``."""
    rep = ConditionReport()
    P = T.pair
    for x, y in P.pairs:
        C = T.C(x, y, x)
        if C != P.H(x, y):
            rep.fail("coset-consequence", (x, y),
                     f"C[{x},{y},{x}]={sorted(C)} but H_{x}{y}={sorted(P.H(x, y))}")
    return rep


def triple_from_assignment(P: GroupPair, a: ShiftAssignment) -> GroupTriple:
    C, _ = validate_pair(P)
    return make_triple(C, a.shifts)
