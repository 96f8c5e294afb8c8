# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Homology, covers and grouping
#
# The one-dodecahedron closed tessellations of type {5,3,5}: nine of them up
# to duality.  Profiles (H1 plus the homology of small covers) split them
# into eight groups.

# %%
from platonic_census import (
    SchlafliType, SearchConfig, search, dual_classes, first_homology,
    triangulation_from_sig, group_by_profile, provisional_names,
)

# %%
rep = search(SearchConfig(SchlafliType(5, 3, 5), 1, True))
nine = [r for r, _ in dual_classes(rep.signatures)]
for s in nine:
    print(first_homology(triangulation_from_sig(s)))

# %%
groups, profiles = group_by_profile(nine)
names = provisional_names(groups, profiles)
for g in groups:
    print([names[s] for s in g], profiles[g[0]].h1)

# %% [markdown]
# The three tessellations with H1 = (Z/5)^3 have no covers of degree 2 or 3;
# their cyclic 5-fold covers tell one of them apart.

# %%
for s in nine:
    p = profiles[s]
    if p.h1.torsion == (5, 5, 5):
        print(names[s], p.cover_summary())
