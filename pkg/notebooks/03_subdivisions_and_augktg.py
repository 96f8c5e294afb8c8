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
# # Cubes to tetrahedra, and AugKTG diagrams
#
# Each cusped cubical tessellation can be cut into tetrahedra by orienting
# its face cycles (6 tetrahedra per cube).  When the 1-skeleton is
# bipartite, the two colour classes give 5-tetrahedra splits instead.

# %%
from platonic_census import (
    SchlafliType, SearchConfig, search, triangulation_from_sig, CubeComplex,
    subdivide_appendix, validate_general, first_homology, two_coloring_signatures,
)

# %%
cubes = sorted(search(SearchConfig(SchlafliType(4, 3, 6), 1, True)).signatures)
for sig in cubes:
    t = triangulation_from_sig(sig)
    gt = subdivide_appendix(CubeComplex.from_triangulation(t))
    check = validate_general(gt)
    print(len(gt), check.valid, check.closed, first_homology(gt) == first_homology(t),
          len(two_coloring_signatures(t)))

# %% [markdown]
# AugKTG diagrams with 2 octahedra: start from K4, unzip twice, strip kinks
# and deduplicate by the fat-graph signature.

# %%
from platonic_census import pd_export
from platonic_census.augktg import augktg_diagrams

found = augktg_diagrams(0)
print(len(found), "diagrams")
print(pd_export(found[0][1]))
