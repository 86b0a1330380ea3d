"""Small named group pairs/triples and a generated corpus of valid pairs.

``F1``  one copy of Z2, identity isomorphism.
``F2``  one copy of Z4, identity isomorphism.
``T1``  three copies of Z4, E universal, H_01 = H_12 = {0,2}, H_02 = {0},
        every isomorphism induced by the identity on labels (28 atoms).
``B1``  like T1 but H_01 = {0,2}, H_12 = {0}, H_02 = Z4; fails the
        composition condition at (0, 1, 2).
"""

from __future__ import annotations

import itertools
import random
from typing import Mapping

from .groups import (
    FiniteGroup,
    cyclic,
    dihedral,
    direct_product,
    normal_subgroups,
    relabel,
    symmetric,
)
from .pair import (
    GroupPair,
    GroupTriple,
    InvalidIso,
    identity_iso,
    make_iso,
    make_triple,
    single_group_pair,
    validate_pair,
)


def F1() -> GroupPair:
    return single_group_pair(cyclic(2))


def F2() -> GroupPair:
    return single_group_pair(cyclic(4))


def same_group_pair(G: FiniteGroup, N: Mapping[tuple[int, int], frozenset], n: int) -> GroupPair:
    """``n`` copies of ``G``, E universal, ``H_xy = K_xy = N[x, y]`` (diagonal
    trivial) and every isomorphism induced by the identity on labels."""
    groups = {x: G for x in range(n)}
    isos = {}
    for x in range(n):
        for y in range(n):
            if x == y:
                isos[x, y] = identity_iso(G, x)
            else:
                S = N[min(x, y), max(x, y)]
                isos[x, y] = make_iso(G, G, x, y, S, S, None)
    return GroupPair(groups, frozenset(isos), isos)


def T1() -> GroupPair:
    return same_group_pair(cyclic(4), {(0, 1): {0, 2}, (1, 2): {0, 2}, (0, 2): {0}}, 3)


def B1() -> GroupPair:
    return same_group_pair(cyclic(4), {(0, 1): {0, 2}, (1, 2): {0}, (0, 2): {0, 1, 2, 3}}, 3)


def T1_triple(**shifts) -> GroupTriple:
    return make_triple(T1(), shifts or None)


# ------------------------------------------------------------------ corpus

def _groups_small() -> list[FiniteGroup]:
    return [
        cyclic(1), cyclic(2), cyclic(3), cyclic(4), cyclic(6), cyclic(8),
        direct_product(cyclic(2), cyclic(2)), symmetric(3), dihedral(4),
        direct_product(cyclic(2), cyclic(4)), cyclic(16),
        direct_product(cyclic(4), cyclic(4)),
    ]


def quotient_family_pair(Gs: list[FiniteGroup], projections: list[dict[int, int]],
                         Q: FiniteGroup) -> GroupPair:
    """Groups ``G_x`` with surjections ``f_x: G_x -> Q``; off-diagonal
    ``H_xy = ker f_x`` and ``phi_xy(g ker f_x) = f_y^-1(f_x(g))``."""
    n = len(Gs)
    isos = {}
    for x in range(n):
        isos[x, x] = identity_iso(Gs[x], x)
    for x, y in itertools.permutations(range(n), 2):
        fx, fy = projections[x], projections[y]
        Hx = frozenset(g for g, q in fx.items() if q == 0)
        Ky = frozenset(g for g, q in fy.items() if q == 0)
        rep_y = {}
        for g, q in sorted(fy.items()):
            rep_y.setdefault(q, g)
        mapping = [(g, rep_y[q]) for g, q in fx.items()]
        isos[x, y] = make_iso(Gs[x], Gs[y], x, y, Hx, Ky, mapping)
    return GroupPair({x: G for x, G in enumerate(Gs)}, frozenset(isos), isos)


def _homs_onto(G: FiniteGroup, Q: FiniteGroup, rng: random.Random) -> dict[int, int] | None:
    """A random surjection ``G -> Q`` found through ``G/N ~ Q``, or ``None``."""
    from .groups import quotient
    options = []
    for N in normal_subgroups(G):
        if G.order // len(N) != Q.order:
            continue
        QN, proj = quotient(G, N)
        # brute-force isomorphisms QN -> Q for tiny Q
        for perm in itertools.permutations(range(1, Q.order)):
            m = (0,) + perm
            if all(m[QN.mul(i, j)] == Q.mul(m[i], m[j]) for i in range(Q.order) for j in range(Q.order)):
                options.append({g: m[int(proj[g])] for g in G.elements})
        if len(options) > 8:
            break
    return rng.choice(options) if options else None


def corpus(seed: int = 0, size: int = 24) -> list[tuple[str, GroupPair]]:
    """Named valid group pairs: groups of order <= 16, at most three indices.

    Mixes the fixtures above, same-group systems with randomly chosen normal
    subgroups (kept only when the closure conditions hold, and with random
    relabelings of the copies), quotient families over a common quotient, and
    non-simple pairs with two E-classes.
    """
    rng = random.Random(seed)
    out: list[tuple[str, GroupPair]] = [
        ("F1", F1()), ("F2", F2()), ("T1", T1()),
        ("S3", single_group_pair(symmetric(3))),
    ]
    groups = _groups_small()

    attempts = 0
    while len(out) < size // 2 and attempts < 500:
        attempts += 1
        G = rng.choice(groups)
        n = rng.choice([2, 3])
        normals = normal_subgroups(G)
        N = {(x, y): rng.choice(normals) for x, y in itertools.combinations(range(n), 2)}
        P = same_group_pair(G, N, n)
        P = _relabel_copies(P, rng)
        _, rep = validate_pair(P)
        if rep.ok:
            out.append((f"same:{G.name}:{n}:{attempts}", P))

    families = [
        ([cyclic(4), cyclic(2)], cyclic(2)),
        ([cyclic(4), direct_product(cyclic(2), cyclic(2)), symmetric(3)], cyclic(2)),
        ([cyclic(3), symmetric(3)], cyclic(1)),
        ([dihedral(4), direct_product(cyclic(2), cyclic(2))], direct_product(cyclic(2), cyclic(2))),
        ([cyclic(8), cyclic(4), cyclic(2)], cyclic(2)),
        ([cyclic(6), cyclic(3)], cyclic(3)),
        ([cyclic(16), cyclic(8)], cyclic(4)),
        ([symmetric(3), cyclic(6), cyclic(2)], cyclic(2)),
    ]
    for Gs, Q in families:
        projs = [_homs_onto(G, Q, rng) for G in Gs]
        if any(p is None for p in projs):
            continue
        try:
            P = quotient_family_pair(Gs, projs, Q)
        except InvalidIso:
            continue
        out.append((f"family:{'+'.join(G.name for G in Gs)}", P))

    from .pair import direct_product as triple_product
    pairs = [(name, P) for name, P in out if len(P.index_set) <= 2]
    k = 0
    while len(out) < size and pairs:
        (n1, P1), (n2, P2) = rng.sample(pairs, 2) if len(pairs) > 1 else (pairs[0], pairs[0])
        if len(P1.index_set) + len(P2.index_set) <= 3:
            T = triple_product(make_triple(P1), make_triple(P2))
            out.append((f"sum:{n1}|{n2}", T.pair))
        k += 1
        if k > 200:
            break
    return out


def _relabel_copies(P: GroupPair, rng: random.Random) -> GroupPair:
    """Give every copy its own random labelling, transporting H, K and phi."""
    perms = {}
    groups = {}
    for x, G in P.groups.items():
        p = [0] + rng.sample(range(1, G.order), G.order - 1)
        perms[x] = p
        groups[x] = relabel(G, p)
    isos = {}
    for (x, y), f in P.isos.items():
        px, py = perms[x], perms[y]
        H = {px[g] for g in f.H}
        K = {py[g] for g in f.K}
        # f is label-identity on the original copies
        mapping = [(px[g], py[g]) for g in P.groups[x].elements]
        isos[x, y] = make_iso(groups[x], groups[y], x, y, H, K, mapping)
    return GroupPair(groups, P.E, isos)
