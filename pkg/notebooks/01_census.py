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
# # Enumerating Platonic tessellations
#
# A tessellation is stored through its barycentric subdivision: one simplex
# per flag, faces 0, 1, 2 glued inside a solid and face 3 glued across.
# The search starts from one solid and glues open faces until nothing is
# open.

# %%
from platonic_census import (
    SchlafliType, SearchConfig, search, specialized_iso_sig, triangulation_from_sig,
    automorphisms, dual_classes,
)

# %%
octahedral = SchlafliType(3, 4, 4)
rep = search(SearchConfig(octahedral, max_solids=2, orientable=True))
print(rep.tallies, "signatures seen:", rep.seen_count, f"{rep.seconds:.1f}s")

# %% [markdown]
# Signatures are canonical, so relabelling the simplices gives the same one.

# %%
import numpy as np

sig = sorted(rep.signatures)[0]
t = triangulation_from_sig(sig)
perm = np.random.default_rng(0).permutation(t.num_simplices)
assert specialized_iso_sig(t.relabeled(perm)) == sig
print(sig)
print("automorphisms:", automorphisms(t).order)

# %% [markdown]
# Closed self-dual types are tabulated up to duality.

# %%
icosahedral = search(SearchConfig(SchlafliType(3, 5, 3), 1, True))
merged = dual_classes(icosahedral.signatures)
print(len(icosahedral.signatures), "signatures,", len(merged), "up to duality")
