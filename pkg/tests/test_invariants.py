import re

import numpy as np
import pytest
from scipy.cluster.hierarchy import DisjointSet

from platonic_census import (
    AbelianGroup, group_by_profile, is_homology_link, num_cusps, profile,
    provisional_names, triangulation_from_sig,
)
from platonic_census.invariants import partition_text

NAME = re.compile(r"^~[on](tet|oct|cube|ico|dode)(cld)?\d{2}_\d{5}(#\d+)?$")


def cusp_count(t):
    # label-0 vertex classes: simplices joined across faces 1, 2, 3
    ds = DisjointSet(range(t.num_simplices))
    for s in range(t.num_simplices):
        for f in (1, 2, 3):
            ds.merge(s, int(t.data[s, f]))
    return len(ds.subsets())


def test_cusp_count(census):
    for case in [((3, 3, 6), 4, True), ((3, 4, 4), 1, False), ((4, 3, 6), 1, True)]:
        for sig in census(*case):
            t = triangulation_from_sig(sig)
            assert num_cusps(t) == cusp_count(t)
    t = triangulation_from_sig(census((3, 5, 3), 1, True)[0])
    assert num_cusps(t) == 0


def test_profile_invariant_under_relabeling(census):
    rng = np.random.default_rng(7)
    for sig in census((3, 4, 4), 1, True):
        t = triangulation_from_sig(sig)
        assert profile(t.relabeled(rng.permutation(t.num_simplices))) == profile(sig)


def test_homology_link(census):
    for sig in census((3, 4, 4), 1, True):
        t = triangulation_from_sig(sig)
        h1 = profile(sig).h1
        assert is_homology_link(t) == (h1 == AbelianGroup(num_cusps(t), ()))
    with pytest.raises(ValueError):
        is_homology_link(triangulation_from_sig(census((3, 5, 3), 1, True)[0]))


def test_grouping_is_a_partition(census):
    sigs = census((4, 3, 6), 1, False) + census((4, 3, 6), 1, True)
    groups, profiles = group_by_profile(sigs)
    members = [s for g in groups for s in g]
    assert sorted(members) == sorted(sigs)
    for g in groups:
        assert len({profiles[s] for s in g}) == 1
    keys = [profiles[g[0]] for g in groups]
    assert len(set(keys)) == len(keys)


def test_grouping_threads_agree(census):
    sigs = census((3, 4, 4), 1, True) + census((3, 4, 4), 1, False)
    assert group_by_profile(sigs, threads=3) == group_by_profile(sigs)


def test_custom_escalation_is_applied(census):
    sig = census((3, 4, 4), 1, True)[0]
    calls = []

    def rule(base):
        calls.append(base)
        return [(4, True)]

    prof = profile(sig, escalation=rule)
    assert calls
    assert any(c.degree == 4 for c in prof.covers)
    assert not any(c.degree == 4 for c in profile(sig).covers)


def test_provisional_names(census):
    sigs = census((4, 3, 6), 1, True) + census((4, 3, 6), 1, False)
    groups, profiles = group_by_profile(sigs)
    names = provisional_names(groups, profiles)
    assert set(names) == set(sigs)
    assert all(NAME.match(n) for n in names.values())
    assert len(set(names.values())) == len(sigs)
    closed = census((3, 5, 3), 1, True)
    g2, p2 = group_by_profile(closed)
    assert all("icocld01_" in n for n in provisional_names(g2, p2).values())
    text = partition_text(groups, profiles)
    assert text.count("ptsig1:") == len(sigs)
