import numpy as np
import pytest

from platonic_census import CENSUS_TYPES, SchlafliType, Triangulation, add_platonic_solid
from platonic_census.solids import canonical_order, polyhedron, solid_template
from platonic_census.triangulation import (
    glue_faces, is_orientable, parse_triangulation, serialize_triangulation, vertex_links,
)

SOLIDS = [(3, 3), (3, 4), (4, 3), (3, 5), (5, 3)]


@pytest.mark.parametrize("pq,size", list(zip(SOLIDS, [24, 48, 48, 120, 120])))
def test_flag_count(pq, size):
    poly = polyhedron(*pq)
    p, q = pq
    # every face has 2p flags
    assert len(poly.faces) * 2 * p == size
    assert solid_template(*pq).size == size
    # Euler characteristic of the boundary sphere
    assert poly.num_vertices - len(poly.edges) + len(poly.faces) == 2
    assert all(sum(v in f for f in poly.faces) == q for v in range(poly.num_vertices))


@pytest.mark.parametrize("pq", SOLIDS)
def test_template_is_flag_complex(pq):
    tmpl = solid_template(*pq)
    nb = tmpl.nbrs
    n = tmpl.size
    idx = np.arange(n)
    for lab in range(3):
        assert np.array_equal(nb[nb[:, lab], lab], idx)
        assert not np.any(nb[:, lab] == idx)
        # crossing face i changes exactly the i-th entry of the flag
        for j in range(n):
            a, b = tmpl.flags[j], tmpl.flags[nb[j, lab]]
            assert [a[m] != b[m] for m in range(3)] == [m == lab for m in range(3)]
    # neighbours have opposite parity
    assert np.all((nb + idx[:, None]) % 2 == 1)
    # faces 0 and 2 commute, so 02-cycles have length 4
    assert np.array_equal(nb[nb[nb[nb[:, 0], 2], 0], 2], idx)


@pytest.mark.parametrize("pq", SOLIDS)
def test_traversal_independent_of_start(pq):
    tmpl = solid_template(*pq)
    rows = tmpl.nbrs.tolist()
    for start in range(0, tmpl.size, 7):
        _, parents, labels = canonical_order(rows, start)
        assert parents == tmpl.tree_parent.tolist()
        assert labels == tmpl.tree_label.tolist()


def test_schlafli_parsing():
    assert SchlafliType.parse("{5,3,6}") == SchlafliType(5, 3, 6)
    assert len(CENSUS_TYPES) == 7
    for text in ["3,3", "3,3,3", "4,4,4", "a,b,c"]:
        with pytest.raises(ValueError):
            SchlafliType.parse(text)
    assert SchlafliType(3, 5, 3).dual() == SchlafliType(3, 5, 3)
    with pytest.raises(ValueError):
        SchlafliType(4, 3, 6).dual()


def test_single_solid_links():
    t = Triangulation((4, 3, 6))
    add_platonic_solid(t, 4, 3)
    t.check()
    assert len(t.open_faces()) == 48
    kinds = {lk.label: lk.kind for lk in vertex_links(t)}
    # every vertex of an unglued cube has a bounded link
    assert kinds[0] == "bounded" and kinds[3] == "sphere"
    assert is_orientable(t)


def test_glue_same_face_rejected():
    t = Triangulation((4, 3, 6))
    add_platonic_solid(t, 4, 3)
    tmpl = solid_template(4, 3)
    # flag 0 and its face-0 neighbour lie on the same face
    assert not glue_faces(t, 0, int(tmpl.nbrs[0, 0]), 4)


def test_serialization_round_trip():
    t = Triangulation((3, 3, 6))
    add_platonic_solid(t, 3, 3)
    add_platonic_solid(t, 3, 3)
    assert glue_faces(t, 0, 25, 3)
    t.check()
    back = parse_triangulation(serialize_triangulation(t))
    assert back == t
    bad = serialize_triangulation(t).replace("ptrig v1", "ptrig v2")
    with pytest.raises(ValueError):
        parse_triangulation(bad)
