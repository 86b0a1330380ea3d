# %% [markdown]
# # Measurability
#
# A subidentity atom is measurable when the square above it is covered by
# functional elements.  For an algebra built from groups, the number of
# such elements under the square on G_x is the order of G_x.

# %%
from cosetra.algebra import build_full_algebra, measurability
from cosetra.fixtures import corpus
from cosetra.lyndon import lyndon_algebra
from cosetra.pair import make_triple

for name, P in corpus()[:8]:
    A = build_full_algebra(make_triple(P))
    m = measurability(A)
    orders = [P.groups[x].order for x in P.index_set]
    print(f"{name:28s} measures {m.measures()}  group orders {orders}")

# %% [markdown]
# Lyndon algebras are never measurable: the square of 1' is the unit and the
# only functional element below it is 1' itself.

# %%
print([measurability(lyndon_algebra(n)).measurable for n in range(1, 8)])
