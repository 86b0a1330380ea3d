"""Finite groups given by multiplication tables.

Elements are dense indices ``0..n-1`` and the identity is always index 0.
Subsets of a group (subgroups, cosets, complexes) are plain frozensets of
element indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Subset = frozenset  # frozenset[int]


class NotAGroup(ValueError):
    pass


class NotASubgroup(ValueError):
    pass


class NotNormal(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as a Cayley table, ``table[a, b] = a*b``."""

    table: np.ndarray
    inverse: np.ndarray
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def same_table(self, other: FiniteGroup) -> bool:
        return np.array_equal(self.table, other.table)

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"FiniteGroup({label}, order={self.order})"


def make_group(table: Sequence[Sequence[int]] | np.ndarray, name: str = "") -> FiniteGroup:
    """Validate a Cayley table and return it as a group with identity at index 0.

    If the identity is some other index ``e``, the labels ``0`` and ``e`` are
    swapped throughout the table.
    """
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup("table must be a non-empty square array")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise NotAGroup("table entries out of range")
    idx = np.arange(n)
    candidates = [e for e in range(n)
                  if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
    if not candidates:
        raise NotAGroup("no two-sided identity")
    e = candidates[0]
    if e != 0:
        perm = idx.copy()
        perm[0], perm[e] = e, 0
        # relabel: new label of old element k is perm[k] (perm is an involution)
        t = perm[t[np.ix_(perm, perm)]]
    # t[t][a, b, c] = (ab)c and t[:, t][a, b, c] = a(bc)
    if not np.array_equal(t[t], t[:, t]):
        raise NotAGroup("operation is not associative")
    inverse = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero(t[a] == 0)
        if len(hits) == 0 or t[hits[0], a] != 0:
            raise NotAGroup(f"element {a} has no two-sided inverse")
        inverse[a] = hits[0]
    t.setflags(write=False)
    inverse.setflags(write=False)
    return FiniteGroup(t, inverse, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    i = np.arange(n)
    return make_group((i[:, None] + i[None, :]) % n, name=f"cyclic:{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Direct product; element index is the mixed-radix number of the coordinates
    (first factor most significant)."""
    if not factors:
        return cyclic(1)
    orders = [g.order for g in factors]
    coords = list(itertools.product(*(range(k) for k in orders)))
    index = {c: i for i, c in enumerate(coords)}
    n = len(coords)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(coords):
        for j, b in enumerate(coords):
            table[i, j] = index[tuple(g.mul(x, y) for g, x, y in zip(factors, a, b))]
    name = "product:[" + ",".join(g.name for g in factors) + "]"
    return make_group(table, name=name)


def from_permutations(perms: Iterable[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group of permutations closed under composition; the identity permutation
    is element 0 and the rest are sorted lexicographically."""
    gens = [tuple(p) for p in perms]
    degree = len(gens[0]) if gens else 1
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = [ident] + sorted(seen - {ident})
    index = {p: i for i, p in enumerate(elems)}
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            # apply p first, then q
            table[i, j] = index[tuple(q[k] for k in p)]
    return make_group(table, name=name)


def symmetric(n: int) -> FiniteGroup:
    return from_permutations(itertools.permutations(range(n)), name=f"symmetric:{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon (order 2n)."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return from_permutations([rot, ref], name=f"dihedral:{n}")


def relabel(G: FiniteGroup, perm: Sequence[int]) -> FiniteGroup:
    """Isomorphic copy of ``G`` in which old element ``k`` is called ``perm[k]``.

    ``perm[0]`` must be 0 so the identity stays canonical.
    """
    p = np.asarray(perm, dtype=np.int64)
    if p[0] != 0 or sorted(p.tolist()) != list(range(G.order)):
        raise ValueError("relabeling must be a permutation fixing 0")
    inv = np.argsort(p)
    table = p[G.table[np.ix_(inv, inv)]]
    return make_group(table, name=G.name)


# ---------------------------------------------------------------- subsets

def _check_members(G: FiniteGroup, S: Iterable[int]) -> frozenset:
    s = frozenset(int(a) for a in S)
    if any(a < 0 or a >= G.order for a in s):
        raise ValueError(f"subset {sorted(s)} not contained in group of order {G.order}")
    return s


def complex_product(G: FiniteGroup, S: Iterable[int], T: Iterable[int]) -> frozenset:
    S = _check_members(G, S)
    T = _check_members(G, T)
    if not S or not T:
        return frozenset()
    return frozenset(G.table[np.ix_(sorted(S), sorted(T))].ravel().tolist())


def inverse_set(G: FiniteGroup, S: Iterable[int]) -> frozenset:
    return frozenset(G.inv(a) for a in S)


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> frozenset:
    H = {0} | set(_check_members(G, gens))
    while True:
        grown = set(complex_product(G, H, H))
        if grown <= H:
            return frozenset(H)
        H |= grown


def is_subgroup(G: FiniteGroup, S: Iterable[int]) -> bool:
    S = _check_members(G, S)
    return 0 in S and complex_product(G, S, S) <= S


def _require_subgroup(G: FiniteGroup, H: Iterable[int]) -> frozenset:
    H = _check_members(G, H)
    if not is_subgroup(G, H):
        raise NotASubgroup(f"{sorted(H)} is not a subgroup")
    return H


def is_normal(G: FiniteGroup, H: Iterable[int]) -> bool:
    H = _require_subgroup(G, H)
    for g in G.elements:
        conj = {G.mul(G.mul(g, h), G.inv(g)) for h in H}
        if conj != H:
            return False
    return True


def cosets(G: FiniteGroup, H: Iterable[int]) -> tuple[frozenset, ...]:
    """Left cosets of ``H``: ``H`` first, the rest by ascending least member."""
    H = _require_subgroup(G, H)
    seen: set[int] = set(H)
    out = [H]
    for g in G.elements:
        if g not in seen:
            c = frozenset(G.mul(g, h) for h in H)
            seen |= c
            out.append(c)
    return tuple(out)


def coset_index(cosets_: Sequence[frozenset], g: int) -> int:
    for i, c in enumerate(cosets_):
        if g in c:
            return i
    raise ValueError(f"element {g} lies in no listed coset")


def quotient(G: FiniteGroup, H: Iterable[int]) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient ``G/H`` with elements numbered as in :func:`cosets`, and the
    projection array ``g -> coset index``."""
    H = _require_subgroup(G, H)
    if not is_normal(G, H):
        raise NotNormal(f"{sorted(H)} is not normal")
    cs = cosets(G, H)
    proj = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(cs):
        proj[sorted(c)] = i
    reps = [min(c) for c in cs]
    k = len(cs)
    table = np.array([[proj[G.mul(reps[i], reps[j])] for j in range(k)] for i in range(k)])
    label = f"{G.name}/{sorted(H)}" if G.name else ""
    return make_group(table, name=label), proj


def subgroups(G: FiniteGroup) -> list[frozenset]:
    """All subgroups, by repeatedly joining a known subgroup with one element."""
    found = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        nxt = []
        for H in frontier:
            for g in G.elements:
                if g not in H:
                    J = subgroup_generated(G, H | {g})
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def normal_subgroups(G: FiniteGroup) -> list[frozenset]:
    return [H for H in subgroups(G) if is_normal(G, H)]
