import numpy as np
import pytest

from platonic_census import (
    MemoryBudgetExceeded, SchlafliType, SearchConfig, Triangulation, add_platonic_solid,
    fix_edges, is_orientable, read_census, search, specialized_iso_sig, tally,
    triangulation_from_sig, vertex_links, write_census,
)
from platonic_census.search import census_text
from platonic_census.triangulation import glue_faces


def reference_search(triple, max_solids):
    """Plain recursive search: glue the lowest open face every possible way,
    complete with the global ``fix_edges``, deduplicate by signature."""
    s = SchlafliType(*triple)
    p, q = s.p, s.q
    seen = set()
    found = set()
    start = Triangulation(s, orientable_mode=False)
    add_platonic_solid(start, p, q)
    stack = [start]
    while stack:
        t = stack.pop()
        if fix_edges(t) == "invalid":
            continue
        sig = specialized_iso_sig(t)
        if sig in seen:
            continue
        seen.add(sig)
        opens = t.open_faces()
        if len(opens) == 0:
            found.add(sig)
            continue
        simp0 = int(opens[0])
        targets = [int(x) for x in opens[1:]]
        if t.num_solids < max_solids:
            targets.append(t.num_simplices)
            targets.append(t.num_simplices + 1)
        for target in targets:
            child = t.copy()
            if target >= t.num_simplices:
                add_platonic_solid(child, p, q)
            if glue_faces(child, simp0, target, p):
                stack.append(child)
    return found


def is_manifold(t):
    if t.schlafli.cusped:
        return True
    return all(lk.kind == "sphere" for lk in vertex_links(t))


@pytest.mark.parametrize("triple,m", [((3, 3, 6), 6), ((3, 4, 4), 2), ((4, 3, 6), 2), ((3, 5, 3), 1)])
def test_engine_matches_reference(triple, m, census):
    ref = {x for x in reference_search(triple, m) if is_manifold(triangulation_from_sig(x))}
    ref_o = {x for x in ref if is_orientable(triangulation_from_sig(x))}
    assert set(census(triple, m, True)) == ref_o
    assert set(census(triple, m, False)) == ref - ref_o


def test_small_counts(census):
    assert tally(census((3, 3, 6), 4, True)) == {2: 2, 4: 4}
    assert tally(census((3, 3, 6), 3, False)) == {1: 1, 2: 2, 3: 1}
    assert tally(census((3, 4, 4), 1, True)) == {1: 2}
    assert tally(census((4, 3, 6), 1, False)) == {1: 8}


def test_outputs_are_complete_tessellations(census):
    for triple, m in [((3, 3, 6), 4), ((3, 4, 4), 1), ((4, 3, 6), 1)]:
        for orientable in (True, False):
            for sig in census(triple, m, orientable):
                t = triangulation_from_sig(sig)
                t.check()
                assert t.is_closed()
                assert is_orientable(t) == orientable
                kinds = {lk.label: lk.kind for lk in vertex_links(t)}
                for lk in vertex_links(t):
                    if lk.label > 0:
                        assert lk.kind == "sphere"
                    elif orientable:
                        assert lk.kind == "torus"
                assert kinds


def test_fix_edges_closes_full_edges():
    # two tetrahedra glued along one face: nothing reaches order 2r yet
    t = Triangulation((3, 3, 6), orientable_mode=False)
    add_platonic_solid(t, 3, 3)
    add_platonic_solid(t, 3, 3)
    assert glue_faces(t, 1, 24, 3)
    before = t.data.copy()
    assert fix_edges(t) == "valid"
    assert np.array_equal(before, t.data)


def test_fix_edges_rejects_overfull_edge():
    # r = 1 would need every 01-edge to have order 2: one face gluing exceeds that
    t = Triangulation((3, 3, 6), orientable_mode=False)
    add_platonic_solid(t, 3, 3)
    add_platonic_solid(t, 3, 3)
    assert glue_faces(t, 1, 24, 3)
    assert fix_edges(t, r=1) == "invalid"


def test_thread_count_invariance():
    config = SearchConfig(SchlafliType(3, 4, 4), 2, True, 1)
    base = search(config).signatures
    for threads in (2, 3):
        again = search(SearchConfig(SchlafliType(3, 4, 4), 2, True, threads)).signatures
        assert again == base


def test_memory_budget():
    with pytest.raises(MemoryBudgetExceeded) as info:
        search(SearchConfig(SchlafliType(3, 4, 4), 2, True, memory_budget=2000))
    assert info.value.seen_count > 0


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(SchlafliType(3, 3, 6), 0)
    with pytest.raises(ValueError):
        SearchConfig(SchlafliType(3, 3, 6), 1, threads=0)


def test_census_file_round_trip(tmp_path, census):
    sigs = census((3, 3, 6), 4, True)
    path = tmp_path / "336.census"
    write_census(path, sigs, SchlafliType(3, 3, 6), 4, True)
    header, back = read_census(path)
    assert header["count"] == str(len(sigs))
    assert sorted(back) == sorted(sigs)
    text = path.read_text()
    assert text == census_text(set(sigs), SchlafliType(3, 3, 6), 4, True)
    path.write_text(text.replace("# count 6", "# count 7"))
    with pytest.raises(ValueError):
        read_census(path)
