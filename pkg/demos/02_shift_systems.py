# %% [markdown]
# # Shift systems
#
# A shift C[x,y,z] moves the product of an (x,y) atom and a (y,z) atom to
# another coset.  Not every choice of cosets gives a relation algebra, so
# each candidate has to be checked against the axioms.

# %%
from cosetra.algebra import build_full_algebra, check_ra_axioms
from cosetra.analysis import compare_compositions, search_shift_systems, triple_from_assignment
from cosetra.fixtures import F1, T1
from cosetra.pair import make_triple, validate_pair

# %% [markdown]
# On a single copy of Z2, shifting C[0,0,0] to {1} breaks the identity law.

# %%
print(check_ra_axioms(build_full_algebra(make_triple(F1(), {(0, 0, 0): {1}}))))

# %% [markdown]
# On T1, shifting a single triple breaks the cycle law.

# %%
P = validate_pair(T1())[0]
lone = make_triple(P, {(0, 1, 2): {1, 3}})
print(sorted(check_ra_axioms(build_full_algebra(lone)).conditions()))
print(len(compare_compositions(lone)), "atom pairs change")

# %% [markdown]
# The backtracking search settles every shift system on T1.  It finds a
# second passing system next to the trivial one.

# %%
result = search_shift_systems(T1())
print(f"space {result.space}, nodes visited {result.nodes}, complete {result.complete}")
for a in result.passing:
    moved = {t: sorted(c) for t, c in a.shifts.items() if c != P.composite(*t)}
    print("trivial" if a.trivial else f"shifted on {moved}")

# %%
twisted = next(a for a in result.passing if not a.trivial)
T = triple_from_assignment(T1(), twisted)
print(len(compare_compositions(T)), "atom pairs differ from plain composition")
