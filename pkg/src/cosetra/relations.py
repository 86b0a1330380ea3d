"""Concrete relations over the disjoint union of the groups of a pair.

A point is ``(x, g)``: element ``g`` of the group with index ``x``.  Relations
are frozensets of point pairs.  The brute-force ``rel_converse`` and
``rel_compose`` are the oracle every atom-level map is checked against.
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Iterable, NamedTuple

from .groups import complex_product, inverse_set
from .pair import GroupPair, GroupTriple
from .report import ConditionReport

Point = tuple  # (group index, element)
ConcreteRelation = frozenset  # frozenset[tuple[Point, Point]]

MATERIALIZE_LIMIT = 10**6


class AtomIndex(NamedTuple):
    x: int
    y: int
    alpha: int

    def label(self) -> str:
        return f"R[{self.x},{self.y},{self.alpha}]"


class IndexOutOfRange(IndexError):
    pass


def atoms_of(P: GroupPair) -> list[AtomIndex]:
    """All atom indices in lexicographic order."""
    return [AtomIndex(x, y, a) for x, y in P.pairs for a in range(P.kappa(x, y))]


def block_atoms(P: GroupPair, x: int, y: int) -> list[AtomIndex]:
    return [AtomIndex(x, y, a) for a in range(P.kappa(x, y))]


def _check_atom(P: GroupPair, a: AtomIndex) -> None:
    if (a.x, a.y) not in P.E or not 0 <= a.alpha < P.kappa(a.x, a.y):
        raise IndexOutOfRange(f"{tuple(a)} is not an atom index of this pair")


def atom_relation(P: GroupPair, a: AtomIndex) -> ConcreteRelation:
    """``R_{xy,alpha}``: the union over ``gamma`` of ``H_gamma x (K_gamma K_alpha)``."""
    a = AtomIndex(*a)
    _check_atom(P, a)
    f = P.iso(a.x, a.y)
    Gy = P.groups[a.y]
    k_alpha = f.k_cosets[a.alpha]
    out = set()
    for h, k in zip(f.h_cosets, f.k_cosets):
        right = complex_product(Gy, k, k_alpha)
        out.update(((a.x, u), (a.y, v)) for u in h for v in right)
    return frozenset(out)


def atom_contains(P: GroupPair, a: AtomIndex, u: int, v: int) -> bool:
    """Membership of ``((x, u), (y, v))`` in ``R_{xy,alpha}`` without building it."""
    f = P.iso(a.x, a.y)
    gamma = f.h_index(u)
    return v in complex_product(P.groups[a.y], f.k_cosets[gamma], f.k_cosets[a.alpha])


def block(P: GroupPair, x: int, y: int) -> ConcreteRelation:
    """``G_x x G_y`` as a relation."""
    return frozenset(((x, u), (y, v)) for u in P.groups[x].elements for v in P.groups[y].elements)


def identity_relation(P: GroupPair, x: int) -> ConcreteRelation:
    return frozenset(((x, u), (x, u)) for u in P.groups[x].elements)


def rel_converse(R: Iterable) -> ConcreteRelation:
    return frozenset((v, u) for u, v in R)


def rel_compose(R: Iterable, S: Iterable) -> ConcreteRelation:
    succ = defaultdict(list)
    for v, w in S:
        succ[v].append(w)
    return frozenset((u, w) for u, v in R for w in succ.get(v, ()))


def union_of(P: GroupPair, atoms: Iterable[AtomIndex]) -> ConcreteRelation:
    out: set = set()
    for a in atoms:
        out |= atom_relation(P, a)
    return frozenset(out)


# ------------------------------------------------------------ atom level

def atom_converse(P: GroupPair, a: AtomIndex) -> AtomIndex:
    """``R_{xy,alpha}^-1 = R_{yx,beta}`` with ``H_{xy,beta} = H_{xy,alpha}^-1``."""
    a = AtomIndex(*a)
    _check_atom(P, a)
    f = P.iso(a.x, a.y)
    target = inverse_set(P.groups[a.x], f.h_cosets[a.alpha])
    return AtomIndex(a.y, a.x, f.h_cosets.index(target))


def _product_coset(P: GroupPair, a: AtomIndex, b: AtomIndex) -> frozenset:
    """``phi_xy^-1[K_{xy,alpha} H_{yz,beta}]``, a coset of ``H_xy H_xz`` in ``G_x``."""
    fxy, fyz = P.iso(a.x, a.y), P.iso(b.x, b.y)
    mid = complex_product(P.groups[a.y], fxy.k_cosets[a.alpha], fyz.h_cosets[b.alpha])
    return fxy.preimage(mid)


def _atoms_inside(P: GroupPair, x: int, z: int, S: frozenset) -> list[AtomIndex]:
    return [AtomIndex(x, z, g) for g, h in enumerate(P.iso(x, z).h_cosets) if h <= S]


def atom_compose(P: GroupPair, a: AtomIndex, b: AtomIndex) -> list[AtomIndex]:
    a, b = AtomIndex(*a), AtomIndex(*b)
    _check_atom(P, a)
    _check_atom(P, b)
    if a.y != b.x:
        return []
    return _atoms_inside(P, a.x, b.y, _product_coset(P, a, b))


def atom_shifted_compose(T: GroupTriple, a: AtomIndex, b: AtomIndex) -> list[AtomIndex]:
    """The coset-shifted product: as :func:`atom_compose` but with the product
    coset multiplied on the right by ``C[x, y, z]``."""
    P = T.pair
    a, b = AtomIndex(*a), AtomIndex(*b)
    _check_atom(P, a)
    _check_atom(P, b)
    if a.y != b.x:
        return []
    S = complex_product(P.groups[a.x], _product_coset(P, a, b), T.C(a.x, a.y, b.y))
    return _atoms_inside(P, a.x, b.y, S)


# ------------------------------------------------------- law checks (oracle)

def check_partition(P: GroupPair) -> ConditionReport:
    """Each block ``G_x x G_y`` is partitioned by its non-empty atoms."""
    rep = ConditionReport()
    for x, y in P.pairs:
        seen: set = set()
        for a in block_atoms(P, x, y):
            R = atom_relation(P, a)
            if not R:
                rep.fail("partition", tuple(a), "empty atom")
            if seen & R:
                rep.fail("partition", tuple(a), "overlaps an earlier atom of the block")
            seen |= R
        if seen != block(P, x, y):
            rep.fail("partition", (x, y), f"atoms cover {len(seen)} of {len(block(P, x, y))} pairs")
    return rep


def check_coherence(
    P: GroupPair,
    exhaustive_limit: int = 10**4,
    samples: int = 1000,
    seed: int = 0,
) -> ConditionReport:
    """Atom converse and composition against the brute-force oracle.

    Blocks of at most ``exhaustive_limit`` point pairs are compared as whole
    relations.  Larger ones are checked on ``samples`` random point pairs
    drawn with ``random.Random(seed)``.
    """
    rep = ConditionReport()
    rng = random.Random(seed)
    size = {x: G.order for x, G in P.groups.items()}
    rel_cache: dict[AtomIndex, ConcreteRelation] = {}

    def rel(a):
        if a not in rel_cache:
            rel_cache[a] = atom_relation(P, a)
        return rel_cache[a]

    for a in atoms_of(P):
        c = atom_converse(P, a)
        if size[a.x] * size[a.y] <= exhaustive_limit:
            if rel(c) != rel_converse(rel(a)):
                rep.fail("converse-coherence", tuple(a), f"converse atom {tuple(c)} disagrees")
        else:
            for _ in range(samples):
                u, v = rng.randrange(size[a.x]), rng.randrange(size[a.y])
                if atom_contains(P, a, u, v) != atom_contains(P, c, v, u):
                    rep.fail("converse-coherence", tuple(a), f"sampled pair ({u},{v})")
                    break

    for x, y, z in P.E3:
        exhaustive = max(size[x] * size[y], size[y] * size[z], size[x] * size[z]) <= exhaustive_limit
        for a in block_atoms(P, x, y):
            for b in block_atoms(P, y, z):
                got = atom_compose(P, a, b)
                if exhaustive:
                    if union_of(P, got) != rel_compose(rel(a), rel(b)):
                        rep.fail("composition-coherence", (tuple(a), tuple(b)),
                                 f"atom product {[tuple(g) for g in got]} disagrees")
                    continue
                for _ in range(max(1, samples // (P.kappa(x, y) * P.kappa(y, z)))):
                    u, w = rng.randrange(size[x]), rng.randrange(size[z])
                    oracle = any(atom_contains(P, a, u, v) and atom_contains(P, b, v, w)
                                 for v in range(size[y]))
                    pred = any(atom_contains(P, g, u, w) for g in got)
                    if oracle != pred:
                        rep.fail("composition-coherence", (tuple(a), tuple(b)),
                                 f"sampled pair ({u},{w})")
                        break
    return rep


def check_cra1(T: GroupTriple) -> ConditionReport:
    """``a (x) a^-1 = a ; a^-1 = {R_xx,g : g in H_xy}`` on atom sets."""
    rep = ConditionReport()
    P = T.pair
    for a in atoms_of(P):
        c = atom_converse(P, a)
        expected = sorted(AtomIndex(a.x, a.x, g) for g in P.H(a.x, a.y))
        shifted = atom_shifted_compose(T, a, c)
        plain = atom_compose(P, a, c)
        if shifted != expected:
            rep.fail("cra1-shifted", tuple(a), f"got {[tuple(g) for g in shifted]}")
        if plain != expected:
            rep.fail("cra1-plain", tuple(a), f"got {[tuple(g) for g in plain]}")
    return rep


def check_cra2(T: GroupTriple) -> ConditionReport:
    """Full rows: ``(G_x x G_y) (x) (G_y x G_z) = G_x x G_z``, likewise for ``;``."""
    rep = ConditionReport()
    P = T.pair
    for x, y, z in P.E3:
        full = set(block_atoms(P, x, z))
        shifted: set = set()
        plain: set = set()
        for a in block_atoms(P, x, y):
            for b in block_atoms(P, y, z):
                shifted.update(atom_shifted_compose(T, a, b))
                plain.update(atom_compose(P, a, b))
        if shifted != full:
            rep.fail("cra2-shifted", (x, y, z), f"{len(shifted)} of {len(full)} atoms")
        if plain != full:
            rep.fail("cra2-plain", (x, y, z), f"{len(plain)} of {len(full)} atoms")
    return rep


def check_identity_atoms(P: GroupPair) -> ConditionReport:
    """``R_{xx,e}`` is the identity relation on ``G_x``."""
    rep = ConditionReport()
    for x in P.index_set:
        if atom_relation(P, AtomIndex(x, x, 0)) != identity_relation(P, x):
            rep.fail("identity-atom", (x,), f"R[{x},{x},0] is not id on G_{x}")
    return rep
