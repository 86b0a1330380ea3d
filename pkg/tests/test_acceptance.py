"""Acceptance criteria 1-9.  Each test appends one PASS/FAIL line to the
log printed in the terminal summary, then asserts."""

import time

import pytest

from cosetra.algebra import (
    InvalidTriple,
    build_full_algebra,
    check_ra_axioms,
    complex_algebra,
    is_simple_ra,
    measurability,
)
from cosetra.analysis import (
    Embedding,
    NoEmbedding,
    find_embedding,
    search_shift_systems,
    triple_from_assignment,
    triviality_analysis,
    verify_coset_consequences,
    verify_embedding,
)
from cosetra.fixtures import B1, F1, corpus
from cosetra.groups import cyclic
from cosetra.lyndon import lyndon_algebra
from cosetra.pair import direct_product, is_simple_triple, make_triple, validate_pair
from cosetra.relations import check_coherence, check_cra1, check_cra2, check_partition

ELAPSED: dict[int, float] = {}


def report(log, k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    log.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def pairs():
    return corpus()


@pytest.fixture(scope="module")
def canonical(pairs):
    out = []
    for name, P in pairs:
        C, rep = validate_pair(P)
        assert rep.ok, name
        out.append((name, C))
    return out


@pytest.fixture(scope="module")
def built(canonical):
    return [(name, C, build_full_algebra(make_triple(C))) for name, C in canonical]


def test_criterion_1_partition(criterion_log):
    t0 = time.perf_counter()
    ps = corpus()
    bad = []
    for name, P in ps:
        C, _ = validate_pair(P)
        if not check_partition(C).ok:
            bad.append(name)
    dt = ELAPSED[1] = time.perf_counter() - t0
    orders_ok = all(G.order <= 16 for _, P in ps for G in P.groups.values())
    sizes_ok = all(len(P.index_set) <= 3 for _, P in ps)
    ok = len(ps) >= 20 and not bad and dt < 10 and orders_ok and sizes_ok
    assert report(criterion_log, 1, ok,
                  f"{len(ps)} pairs, {len(bad)} partition failures, {dt:.2f}s")


def test_criterion_2_oracle_coherence(canonical, criterion_log):
    t0 = time.perf_counter()
    bad = [name for name, C in canonical if not check_coherence(C, exhaustive_limit=10**4,
                                                                samples=1000, seed=0).ok]
    ELAPSED[2] = time.perf_counter() - t0
    assert report(criterion_log, 2, not bad,
                  f"{len(canonical)} pairs, disagreements in {bad or 'none'}")


def test_criterion_3_cra_identities(canonical, criterion_log):
    t0 = time.perf_counter()
    bad = []
    for name, C in canonical:
        T = make_triple(C)
        if not (check_cra1(T).ok and check_cra2(T).ok):
            bad.append(name)
    ELAPSED[3] = time.perf_counter() - t0
    assert report(criterion_log, 3, not bad, f"{len(canonical)} triples, exceptions: {bad or 'none'}")


def test_criterion_4_axiom_gate(built, criterion_log):
    t0 = time.perf_counter()
    bad = [name for name, _, A in built if not check_ra_axioms(A).ok]
    try:
        build_full_algebra(make_triple(B1()))
        b1_where = None
    except InvalidTriple as exc:
        b1_where = {f.where for f in exc.report.failures if f.condition == "composition-subset"}
    f1 = check_ra_axioms(build_full_algebra(make_triple(F1(), {(0, 0, 0): {1}})))
    ELAPSED[4] = time.perf_counter() - t0
    b1_ok = b1_where is not None and (0, 1, 2) in b1_where
    f1_ok = {"identity-left", "identity-right"} <= f1.conditions()
    ok = not bad and b1_ok and f1_ok
    assert report(criterion_log, 4, ok,
                  f"{len(built) - len(bad)}/{len(built)} pass; B1 rejected at (0,1,2): {b1_ok}; "
                  f"F1 with C_000={{1}} rejected by identity law: {f1_ok}")


def test_criterion_5_measurability(built, criterion_log):
    t0 = time.perf_counter()
    bad = []
    for name, C, A in built:
        if not check_ra_axioms(A).ok:
            continue
        m = measurability(A)
        expected = [C.groups[A.atom_indices[x].x].order for x in sorted(A.structure.identity_atoms)]
        if not m.measurable or m.measures() != expected:
            bad.append(name)
    lyndon_measurable = [n for n in range(1, 8) if measurability(lyndon_algebra(n)).measurable]
    ELAPSED[5] = time.perf_counter() - t0
    ok = not bad and not lyndon_measurable
    assert report(criterion_log, 5, ok,
                  f"corpus mismatches: {bad or 'none'}; measurable Lyndon sizes: "
                  f"{lyndon_measurable or 'none'}")


def _lyndon_expected(n, p, q):
    if p == 0:
        return {q}
    if q == 0:
        return {p}
    if p == q:
        return {p, 0}
    return set(range(1, n + 1)) - {p, q}


def test_criterion_6_lyndon_suite(criterion_log):
    t0 = time.perf_counter()
    axiom_failures, not_simple, table_mismatch = {}, [], []
    for n in range(1, 8):
        B = lyndon_algebra(n)
        rep = check_ra_axioms(B)
        if not rep.ok:
            axiom_failures[n] = sorted(rep.conditions())
        if not is_simple_ra(B):
            not_simple.append(n)
        if any(set(B.structure.compose(p, q)) != _lyndon_expected(n, p, q)
               for p in range(n + 1) for q in range(n + 1)):
            table_mismatch.append(n)
    ELAPSED[6] = time.perf_counter() - t0
    ok = not axiom_failures and not not_simple and not table_mismatch
    assert report(criterion_log, 6, ok,
                  f"axiom failures: {axiom_failures or 'none'}; non-simple: {not_simple or 'none'}; "
                  f"table mismatches: {table_mismatch or 'none'}")


def test_criterion_7_simplicity(built, criterion_log):
    t0 = time.perf_counter()
    bad = [name for name, C, A in built
           if check_ra_axioms(A).ok and is_simple_ra(A) != is_simple_triple(A.triple)]
    sums = []
    for (n1, C1, _), (n2, C2, _) in zip(built[:8], built[8:16]):
        A = build_full_algebra(direct_product(make_triple(C1), make_triple(C2)))
        sums.append(is_simple_ra(A))
    ELAPSED[7] = time.perf_counter() - t0
    ok = not bad and sums and not any(sums)
    assert report(criterion_log, 7, ok,
                  f"disagreements: {bad or 'none'}; {len(sums)} products, "
                  f"{sum(sums)} reported simple")


def test_criterion_8_lyndon_pipeline(canonical, criterion_log):
    t0 = time.perf_counter()
    analysed = 0
    for name, C in canonical:
        triviality_analysis(make_triple(C))      # raises on violation
        analysed += 1
    outcomes = {}
    sound = True
    for k in (2, 3, 4):
        res = find_embedding(lyndon_algebra(2), complex_algebra(cyclic(k)))
        outcomes[f"Z{k}"] = type(res).__name__
        if isinstance(res, Embedding):
            sound = sound and verify_embedding(res, exhaustive_limit=12).ok
        elif not isinstance(res, NoEmbedding):
            sound = False
    ELAPSED[8] = time.perf_counter() - t0
    ok = analysed == len(canonical) and sound
    assert report(criterion_log, 8, ok,
                  f"triviality implication held on {analysed}/{len(canonical)}; "
                  f"Lyndon(2) embeddings: {outcomes}")


def test_criterion_9_shift_census(pairs, criterion_log):
    t0 = time.perf_counter()
    f1 = search_shift_systems(F1())
    f1_ok = f1.complete and [a.shifts for a in f1.passing] == [{(0, 0, 0): frozenset({0})}]
    found = nontrivial = 0
    bad = []
    incomplete = []
    for name, P in pairs:
        res = search_shift_systems(P, budget=100_000)
        if not res.complete:
            incomplete.append(name)
        for a in res.passing:
            found += 1
            nontrivial += not a.trivial
            if not verify_coset_consequences(triple_from_assignment(P, a)).ok:
                bad.append(name)
    ELAPSED[9] = time.perf_counter() - t0
    ok = f1_ok and not bad
    assert report(criterion_log, 9, ok,
                  f"F1 exactly {{C_000={{0}}}}: {f1_ok}; {found} passing systems "
                  f"({nontrivial} nontrivial) across {len(pairs)} pairs, "
                  f"incomplete searches: {incomplete or 'none'}, coset-consequence failures: "
                  f"{bad or 'none'}")


def test_total_runtime(criterion_log):
    total = sum(ELAPSED.values())
    assert report(criterion_log, "all", total < 120,
                  f"combined criterion runtime {total:.1f}s over {len(ELAPSED)} criteria")
