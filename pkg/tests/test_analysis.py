import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetra.algebra import (
    AtomStructure,
    FiniteRelationAlgebra,
    build_full_algebra,
    check_ra_axioms,
    complex_algebra,
    identity_only_algebra,
)
from cosetra.analysis import (
    Embedding,
    InvariantViolation,
    NoEmbedding,
    NotFoundWithinBudget,
    _ShiftBuilder,
    check_lyndon_embedding,
    compare_compositions,
    find_embedding,
    point_partition,
    search_shift_systems,
    triple_from_assignment,
    triviality_analysis,
    verify_coset_consequences,
    verify_embedding,
)
from cosetra.fixtures import F1, F2, T1, same_group_pair
from cosetra.groups import cyclic, direct_product
from cosetra.lyndon import lyndon_algebra
from cosetra.pair import make_triple, validate_pair
import cosetra.analysis as analysis_mod


def z3_cube():
    return build_full_algebra(make_triple(
        same_group_pair(cyclic(3), {(0, 1): {0}, (1, 2): {0}, (0, 2): {0}}, 3)))


# ----------------------------------------------------------- embeddings

def brute_embeds(B, A, preserve_unit=True):
    """Try every map from target atoms to source atoms (or to nothing)."""
    SA, SB = A.structure, B.structure
    options = []
    for t in range(SA.n):
        if t in SA.identity_atoms:
            options.append(sorted(SB.identity_atoms))
        else:
            opts = [s for s in range(SB.n) if s not in SB.identity_atoms]
            options.append(opts + ([] if preserve_unit else [None]))
    for f in itertools.product(*options):
        theta = [0] * SB.n
        for t, s in enumerate(f):
            if s is not None:
                theta[s] |= 1 << t
        if any(m == 0 for m in theta):
            continue
        emb = Embedding(B, A, tuple(theta), preserve_unit)
        ok = emb(B.identity) == A.identity and all(
            emb(B.converse(B.atom(a))) == A.converse(theta[a]) for a in range(SB.n))
        ok = ok and all(emb(B.compose(B.atom(a), B.atom(b))) == A.compose(theta[a], theta[b])
                        for a in range(SB.n) for b in range(SB.n))
        if ok:
            return True
    return False


SMALL = {
    "Z2": lambda: complex_algebra(cyclic(2)),
    "Z3": lambda: complex_algebra(cyclic(3)),
    "Z4": lambda: complex_algebra(cyclic(4)),
    "Z2xZ2": lambda: complex_algebra(direct_product(cyclic(2), cyclic(2))),
    "Z5": lambda: complex_algebra(cyclic(5)),
    "L1": lambda: lyndon_algebra(1),
    "L2": lambda: lyndon_algebra(2),
    "L3": lambda: lyndon_algebra(3),
    "F2": lambda: build_full_algebra(make_triple(F2())),
    "I": identity_only_algebra,
}


@pytest.mark.parametrize("src,tgt", [(s, t) for s in SMALL for t in SMALL
                                     if SMALL[s]().n <= SMALL[t]().n])
def test_find_embedding_agrees_with_brute_force(src, tgt):
    B, A = SMALL[src](), SMALL[tgt]()
    res = find_embedding(B, A)
    assert isinstance(res, (Embedding, NoEmbedding))
    assert isinstance(res, Embedding) == brute_embeds(B, A)
    if isinstance(res, Embedding):
        assert verify_embedding(res).ok


@pytest.mark.parametrize("tgt", ["Z2", "Z3", "Z4", "F2"])
def test_partial_embeddings_agree_with_brute_force(tgt):
    for src in ("I", "L1", "Z2"):
        B, A = SMALL[src](), SMALL[tgt]()
        res = find_embedding(B, A, preserve_unit=False)
        assert isinstance(res, Embedding) == brute_embeds(B, A, preserve_unit=False), src
        if isinstance(res, Embedding):
            assert verify_embedding(res).ok


def permuted(A, perm):
    """Copy of ``A`` with atom ``i`` renamed ``perm[i]``."""
    S = A.structure
    inv = np.argsort(perm)
    table = S.table[np.ix_(inv, inv, inv)]
    conv = tuple(int(perm[S.converse[inv[i]]]) for i in range(S.n))
    ids = frozenset(int(perm[i]) for i in S.identity_atoms)
    return FiniteRelationAlgebra(AtomStructure(S.n, ids, conv, table))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["Z4", "Z2xZ2", "Z5", "F2", "L1"]), st.randoms(use_true_random=False))
def test_isomorphic_copies_embed(name, rnd):
    A = SMALL[name]()
    perm = list(range(A.n))
    rnd.shuffle(perm)
    B = permuted(A, perm)
    assert check_ra_axioms(B).ok == check_ra_axioms(A).ok
    emb = find_embedding(B, A)
    assert isinstance(emb, Embedding) and verify_embedding(emb).ok
    assert all(bin(m).count("1") == 1 for m in emb.map)


def test_lyndon_one_point_in_z3_but_not_z2():
    assert isinstance(find_embedding(lyndon_algebra(1), complex_algebra(cyclic(3))), Embedding)
    assert isinstance(find_embedding(lyndon_algebra(1), complex_algebra(cyclic(2))), NoEmbedding)


def test_identity_algebra_into_t1_only_without_unit():
    A = build_full_algebra(make_triple(T1()))
    assert isinstance(find_embedding(identity_only_algebra(), A), NoEmbedding)
    emb = find_embedding(identity_only_algebra(), A, preserve_unit=False)
    assert isinstance(emb, Embedding) and verify_embedding(emb).ok


def test_budget_exhaustion():
    res = find_embedding(lyndon_algebra(4), z3_cube(), budget=3)
    assert isinstance(res, NotFoundWithinBudget)


def test_verify_embedding_catches_tampering():
    emb = find_embedding(lyndon_algebra(4), complex_algebra(direct_product(cyclic(3), cyclic(3))))
    assert isinstance(emb, Embedding) and verify_embedding(emb).ok
    m = list(emb.map)
    m[1], m[2] = m[1] | m[2], 0
    assert not verify_embedding(Embedding(emb.source, emb.target, tuple(m))).ok
    m = list(emb.map)
    low = m[1] & -m[1]
    m[1] ^= low
    m[2] |= low
    rep = verify_embedding(Embedding(emb.source, emb.target, tuple(m)))
    assert "compose" in rep.conditions() or "converse" in rep.conditions()


# ------------------------------------------- Lyndon inside a group triple

def test_lyndon_four_in_z3_cube():
    A = z3_cube()
    emb = find_embedding(lyndon_algebra(4), A)
    assert isinstance(emb, Embedding)
    assert verify_embedding(emb).ok
    assert check_lyndon_embedding(emb).ok
    parts = [point_partition(emb, p) for p in range(1, 5)]
    assert all(p.consistent for p in parts)
    nonempty = [p for p in parts if p.domain]
    assert len(nonempty) == 1 and nonempty[0].classes == [[0], [1], [2]]


@pytest.mark.parametrize("n", [3, 4])
def test_lyndon_does_not_embed_in_t1(n):
    A = build_full_algebra(make_triple(T1()))
    assert isinstance(find_embedding(lyndon_algebra(n), A), NoEmbedding)


def test_point_partition_requires_triple():
    bare = FiniteRelationAlgebra(complex_algebra(cyclic(3)).structure)
    emb = find_embedding(lyndon_algebra(1), bare)
    with pytest.raises(ValueError):
        point_partition(emb, 1)


# ------------------------------------------------- comparisons and census

def test_compare_compositions():
    P = validate_pair(T1())[0]
    assert compare_compositions(make_triple(P)) == []
    diffs = compare_compositions(make_triple(P, {(0, 1, 2): {1, 3}}))
    assert len(diffs) == 4
    assert all(a.x == 0 and a.y == 1 and b.y == 2 for a, b in diffs)
    assert len(compare_compositions(make_triple(F1(), {(0, 0, 0): {1}}))) == 4


def test_triviality_analysis():
    rep = triviality_analysis(make_triple(same_group_pair(cyclic(3), {(0, 1): {0}}, 2)))
    assert rep.axioms_ok and rep.all_subgroups_trivial and rep.all_atoms_functional
    assert rep.group_algebra
    rep = triviality_analysis(make_triple(T1()))
    assert not rep.all_subgroups_trivial and not rep.all_atoms_functional
    assert len(rep.nonfunctional_atoms) == 8


def test_triviality_violation_is_raised(monkeypatch):
    monkeypatch.setattr(analysis_mod, "is_functional", lambda A, f: False)
    with pytest.raises(InvariantViolation):
        triviality_analysis(make_triple(F1()))


def test_shift_search_f1_and_f2():
    for P in (F1(), F2()):
        r = search_shift_systems(P)
        assert r.complete
        assert [a.shifts for a in r.passing] == [{(0, 0, 0): frozenset({0})}]


def test_shift_search_budget():
    r = search_shift_systems(T1(), budget=5)
    assert not r.complete and r.nodes == 5


@pytest.mark.parametrize("P", [
    F1(), F2(), same_group_pair(cyclic(3), {(0, 1): {0}}, 2),
    same_group_pair(cyclic(4), {(0, 1): {0, 2}}, 2),
], ids=["F1", "F2", "Z3x2", "Z4x2"])
def test_shift_search_matches_exhaustive_enumeration(P):
    C = validate_pair(P)[0]
    b = _ShiftBuilder(C)
    brute = []
    for choice in b.assignments():
        if check_ra_axioms(b.algebra(choice)).ok:
            brute.append(b.shifts(choice))
    r = search_shift_systems(P, budget=10 ** 6)
    assert r.complete
    key = lambda s: sorted((k, sorted(v)) for k, v in s.items())
    assert sorted(map(key, brute)) == sorted(key(a.shifts) for a in r.passing)


@pytest.mark.parametrize("G,N", [
    (cyclic(2), {(0, 1): {0}, (1, 2): {0}, (0, 2): {0}}),
    (cyclic(3), {(0, 1): {0}, (1, 2): {0}, (0, 2): {0}}),
    (cyclic(4), {(0, 1): {0, 2}, (1, 2): {0, 2}, (0, 2): {0}}),
], ids=["Z2", "Z3", "T1"])
def test_shift_search_on_distinct_index_subspace(G, N):
    """Enumerate systems that vary only on triples of distinct indices,
    built through the ordinary constructor, and compare with the search."""
    P = validate_pair(same_group_pair(G, N, 3))[0]
    distinct = [t for t in P.E3 if len(set(t)) == 3]
    b = _ShiftBuilder(P)
    options = [b.candidates[t] for t in distinct]
    brute = set()
    for pick in itertools.product(*options):
        T = make_triple(P, dict(zip(distinct, pick)))
        if check_ra_axioms(build_full_algebra(T)).ok:
            brute.add(tuple(sorted((t, tuple(sorted(T.C(*t)))) for t in P.E3)))
    r = search_shift_systems(P, budget=10 ** 6)
    assert r.complete
    found = {tuple(sorted((t, tuple(sorted(v))) for t, v in a.shifts.items())) for a in r.passing}
    assert found == brute
    assert any(not a.trivial for a in r.passing)
    for a in r.passing:
        T = triple_from_assignment(P, a)
        assert check_ra_axioms(build_full_algebra(T)).ok
        assert verify_coset_consequences(T).ok


def test_builder_tables_match_constructor():
    P = validate_pair(same_group_pair(cyclic(4), {(0, 1): {0, 2}}, 2))[0]
    b = _ShiftBuilder(P)
    for k, choice in enumerate(b.assignments()):
        if k % 7:
            continue
        A1 = b.algebra(choice)
        A2 = build_full_algebra(make_triple(P, b.shifts(choice)))
        assert np.array_equal(A1.structure.table, A2.structure.table)


def test_coset_consequence_detects_violation():
    P = validate_pair(same_group_pair(cyclic(4), {(0, 1): {0, 2}}, 2))[0]
    T = make_triple(P, {(0, 1, 0): {1, 3}})
    assert not verify_coset_consequences(T).ok
    assert not check_ra_axioms(build_full_algebra(T)).ok
