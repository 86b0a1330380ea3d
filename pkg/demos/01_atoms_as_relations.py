# %% [markdown]
# # Atoms of a group pair, seen as concrete relations
#
# Three copies of Z4 with H_01 = H_12 = {0,2} and H_02 = {0}.  Each atom
# R[x,y,a] is a set of pairs of points; the algebra's composition table is
# computed from cosets, and here we check it against plain relational
# composition.

# %%
from cosetra.algebra import build_full_algebra, check_ra_axioms
from cosetra.fixtures import T1
from cosetra.pair import make_triple, validate_pair
from cosetra.relations import AtomIndex, atom_compose, atom_relation, rel_compose, union_of

P, report = validate_pair(T1())
print("pair conditions:", report)

# %%
a, b = AtomIndex(0, 1, 0), AtomIndex(1, 2, 0)
Ra, Rb = atom_relation(P, a), atom_relation(P, b)
print(f"{a.label()} has {len(Ra)} pairs, for example {sorted(Ra)[:3]}")

# %% [markdown]
# Composing through the coset formula and through the relations gives the
# same atoms.

# %%
via_cosets = atom_compose(P, a, b)
via_relations = rel_compose(Ra, Rb)
print("coset formula:", [g.label() for g in via_cosets])
print("agrees with relations:", union_of(P, via_cosets) == via_relations)

# %%
A = build_full_algebra(make_triple(P))
print(f"{A.n} atoms; axioms: {check_ra_axioms(A)}")
