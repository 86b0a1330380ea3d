# %% [markdown]
# # Lyndon algebras and where they fit
#
# The Lyndon algebra of a line with n points has the identity plus one atom
# per point.  Its product table is associative for one point and for four
# or more, but not for two or three.

# %%
from cosetra.algebra import build_full_algebra, check_ra_axioms, complex_algebra
from cosetra.analysis import check_lyndon_embedding, find_embedding, point_partition
from cosetra.fixtures import same_group_pair
from cosetra.groups import cyclic, direct_product
from cosetra.lyndon import lyndon_algebra
from cosetra.pair import make_triple

for n in range(1, 8):
    rep = check_ra_axioms(lyndon_algebra(n))
    print(n, "ok" if rep.ok else [str(f.witness) for f in rep.failures])

# %% [markdown]
# The four-point line sits inside the complex algebra of Z3 x Z3: each point
# becomes the non-zero elements of one of the four subgroups of order three.

# %%
B = lyndon_algebra(4)
emb = find_embedding(B, complex_algebra(direct_product(cyclic(3), cyclic(3))))
for p in range(1, B.n):
    print(B.structure.labels[p], "->", emb.target.label(emb.map[p]))

# %% [markdown]
# Inside a full group relation algebra on three copies of Z3 we can read
# off how each point splits the index set.

# %%
A = build_full_algebra(make_triple(
    same_group_pair(cyclic(3), {(0, 1): {0}, (1, 2): {0}, (0, 2): {0}}, 3)))
emb = find_embedding(B, A)
print(check_lyndon_embedding(emb))
for p in range(1, B.n):
    part = point_partition(emb, p)
    print(B.structure.labels[p], "classes", part.classes)
