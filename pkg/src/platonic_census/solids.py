"""Platonic solids, Schläfli types and the barycentric-subdivision template.

A simplex of the barycentric subdivision of a solid is a *flag*
``(vertex, edge, face)``; its four vertices are labelled

    0 -- a vertex of the solid (possibly ideal)
    1 -- an edge midpoint
    2 -- a face center
    3 -- the solid center

Face ``i`` of a simplex is opposite vertex ``i``, so crossing face 0, 1, 2
changes the vertex, edge, face of the flag respectively while keeping the
other two.  Face 3 lies on the boundary of the solid and is what gets glued
to other solids.

The template of a solid (which flag gets which local index) is fixed here
once.  Even local indices are the flags of one handedness, odd indices the
other, so that neighbouring simplices always have indices of opposite
parity.  Flag indices are assigned by walking the flags in canonical order
from the first flag and dealing out even and odd numbers separately.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import ConvexHull

__all__ = [
    "SchlafliType",
    "Polyhedron",
    "SolidTemplate",
    "CENSUS_TYPES",
    "polyhedron",
    "solid_template",
    "solid_size",
    "canonical_order",
]

_PHI = (1 + 5 ** 0.5) / 2

_SOLID_NAMES = {
    (3, 3): "tet",
    (3, 4): "oct",
    (4, 3): "cube",
    (3, 5): "ico",
    (5, 3): "dode",
}

# Hyperbolic types: solids with ideal vertices (cusped) or compact ones (closed).
_CUSPED = {(3, 3, 6), (3, 4, 4), (4, 3, 6), (5, 3, 6)}
_CLOSED = {(4, 3, 5), (3, 5, 3), (5, 3, 5)}
CENSUS_TYPES = tuple(sorted(_CUSPED | _CLOSED))


def solid_size(p, q):
    """Number of flags (= simplices of the barycentric subdivision) of {p,q}."""
    if (p, q) not in _SOLID_NAMES:
        raise ValueError(f"{{{p},{q}}} is not a Platonic solid")
    return 8 * p * q // (2 * p + 2 * q - p * q)


@dataclass(frozen=True, order=True)
class SchlafliType:
    """Schläfli symbol {p,q,r} of a hyperbolic Platonic tessellation."""

    p: int
    q: int
    r: int

    def __post_init__(self):
        if (self.p, self.q) not in _SOLID_NAMES:
            raise ValueError(f"{{{self.p},{self.q}}} is not a Platonic solid")
        if self.triple not in _CUSPED and self.triple not in _CLOSED:
            raise ValueError(
                f"{{{self.p},{self.q},{self.r}}} is not a hyperbolic census type"
            )

    @classmethod
    def parse(cls, text):
        parts = text.replace("{", "").replace("}", "").split(",")
        if len(parts) != 3:
            raise ValueError(f"expected 'p,q,r', got {text!r}")
        try:
            p, q, r = (int(x) for x in parts)
        except ValueError:
            raise ValueError(f"expected 'p,q,r', got {text!r}") from None
        return cls(p, q, r)

    @property
    def triple(self):
        return (self.p, self.q, self.r)

    @property
    def cusped(self):
        """Vertex link {q,r} is Euclidean."""
        return self.triple in _CUSPED

    @property
    def solid(self):
        return _SOLID_NAMES[(self.p, self.q)]

    @property
    def solid_size(self):
        return solid_size(self.p, self.q)

    @property
    def self_dual(self):
        return self.p == self.r

    def dual(self):
        """The reversed symbol {r,q,p}; raises if that is not a census type."""
        return SchlafliType(self.r, self.q, self.p)

    def __str__(self):
        return f"{self.p},{self.q},{self.r}"


@dataclass(frozen=True)
class Polyhedron:
    """Combinatorial Platonic solid with coordinates for its vertices.

    ``faces`` are vertex cycles, counter-clockwise seen from outside.
    """

    p: int
    q: int
    coords: np.ndarray
    faces: tuple
    edges: tuple

    @property
    def num_vertices(self):
        return len(self.coords)


def _raw_coords(p, q):
    if (p, q) == (3, 3):
        return [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    if (p, q) == (3, 4):
        return [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    if (p, q) == (4, 3):
        return [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    pts = []
    if (p, q) == (3, 5):
        for a in (-1, 1):
            for b in (-_PHI, _PHI):
                pts += [(0, a, b), (a, b, 0), (b, 0, a)]
        return pts
    if (p, q) == (5, 3):
        pts = [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
        for a in (-1 / _PHI, 1 / _PHI):
            for b in (-_PHI, _PHI):
                pts += [(0, a, b), (a, b, 0), (b, 0, a)]
        return pts
    raise ValueError(f"{{{p},{q}}} is not a Platonic solid")


@lru_cache(maxsize=None)
def polyhedron(p, q):
    """Build {p,q} from coordinates; faces are merged coplanar hull facets.

    The cube uses 0/1 coordinates so that vertex ``i`` has binary digits
    ``(x, y, z)``; the cubulation code relies on that.
    """
    coords = np.array(_raw_coords(p, q), dtype=float)
    hull = ConvexHull(coords)
    groups = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq, 6))
        groups.setdefault(key, set()).update(int(v) for v in simplex)
    faces = []
    for key, verts in groups.items():
        normal = np.array(key[:3])
        verts = sorted(verts)
        fc = coords[verts].mean(axis=0)
        u = coords[verts[0]] - fc
        w = np.cross(normal, u)
        angles = [np.arctan2(np.dot(coords[v] - fc, w), np.dot(coords[v] - fc, u))
                  for v in verts]
        cyc = [v for _, v in sorted(zip(angles, verts))]
        # rotate so the smallest vertex comes first
        i = cyc.index(min(cyc))
        faces.append(tuple(cyc[i:] + cyc[:i]))
    assert all(len(f) == p for f in faces), (p, q)
    faces.sort()
    edges = sorted({tuple(sorted((f[i], f[(i + 1) % p]))) for f in faces for i in range(p)})
    return Polyhedron(p, q, coords, tuple(faces), tuple(edges))


def canonical_order(nbrs, start):
    """Order the nodes of a face-labelled graph from ``start``.

    Repeatedly follow, among all edges from ordered to unordered nodes, one
    with the lowest label, breaking ties by the earliest ordered endpoint.
    Returns ``(order, parents, labels)`` where node ``order[j]`` (j >= 1) was
    reached from ``order[parents[j]]`` across face ``labels[j]``.  Nodes not
    connected to ``start`` are left out.

    This is the reference (pure Python) implementation; the search uses a
    compiled version specialised to barycentric subdivisions.
    """
    k = len(nbrs)
    nlab = len(nbrs[0]) if k else 0
    pos = [-1] * k
    order = [start]
    parents = [-1]
    labels = [-1]
    pos[start] = 0
    ptr = [0] * nlab
    while True:
        for lab in range(nlab):
            while ptr[lab] < len(order):
                nb = nbrs[order[ptr[lab]]][lab]
                if nb != -1 and pos[nb] == -1:
                    break
                ptr[lab] += 1
            if ptr[lab] < len(order):
                nb = nbrs[order[ptr[lab]]][lab]
                pos[nb] = len(order)
                order.append(nb)
                parents.append(ptr[lab])
                labels.append(lab)
                break
        else:
            return order, parents, labels


@dataclass(frozen=True)
class SolidTemplate:
    """Barycentric subdivision of one solid with fixed local indices.

    ``nbrs[j]`` are the face 0, 1, 2 neighbours (face 3 is unglued);
    ``flags[j]`` is ``(vertex, edge, face)`` as indices into the polyhedron.
    ``tree_parent``/``tree_label`` describe the canonical traversal of a solid
    from any of its flags: the j-th simplex is the ``tree_label[j]``-neighbour
    of the ``tree_parent[j]``-th.  Because the solid's symmetry group acts
    simply transitively on flags, this path description is the same for
    every start flag.
    """

    p: int
    q: int
    poly: Polyhedron
    flags: tuple
    nbrs: np.ndarray
    tree_parent: np.ndarray
    tree_label: np.ndarray
    canonical_nbrs: np.ndarray

    @property
    def size(self):
        return len(self.flags)


@lru_cache(maxsize=None)
def solid_template(p, q):
    poly = polyhedron(p, q)
    faces_of_edge = {e: [] for e in poly.edges}
    for fi, f in enumerate(poly.faces):
        for i in range(p):
            faces_of_edge[tuple(sorted((f[i], f[(i + 1) % p])))].append(fi)
    edge_index = {e: i for i, e in enumerate(poly.edges)}
    raw = []
    for fi, f in enumerate(poly.faces):
        for i in range(p):
            e = edge_index[tuple(sorted((f[i], f[(i + 1) % p])))]
            raw.append((f[i], e, fi))
            raw.append((f[(i + 1) % p], e, fi))
    raw.sort()
    assert len(raw) == solid_size(p, q)
    where = {fl: i for i, fl in enumerate(raw)}

    def neighbour(fl, lab):
        v, e, f = fl
        a, b = poly.edges[e]
        if lab == 0:
            return (b if v == a else a, e, f)
        if lab == 1:
            face = poly.faces[f]
            i = face.index(v)
            for w in (face[(i + 1) % p], face[(i - 1) % p]):
                e2 = edge_index[tuple(sorted((v, w)))]
                if e2 != e:
                    return (v, e2, f)
        f0, f1 = faces_of_edge[poly.edges[e]]
        return (v, e, f1 if f == f0 else f0)

    raw_nbrs = [[where[neighbour(fl, lab)] for lab in range(3)] for fl in raw]

    # two-colour the flags by handedness
    color = [-1] * len(raw)
    color[0] = 0
    stack = [0]
    while stack:
        s = stack.pop()
        for nb in raw_nbrs[s]:
            if color[nb] == -1:
                color[nb] = 1 - color[s]
                stack.append(nb)
            assert color[nb] != color[s]

    order, parents, labels = canonical_order(raw_nbrs, 0)
    local = [0] * len(raw)
    counters = [0, 1]
    for s in order:
        local[s] = counters[color[s]]
        counters[color[s]] += 2
    flags = [None] * len(raw)
    nbrs = np.full((len(raw), 3), -1, dtype=np.int32)
    for s, fl in enumerate(raw):
        flags[local[s]] = fl
        nbrs[local[s]] = [local[nb] for nb in raw_nbrs[s]]

    tree_order, parents, labels = canonical_order(nbrs.tolist(), 0)
    pos = {s: j for j, s in enumerate(tree_order)}
    canonical_nbrs = np.array(
        [[pos[int(nbrs[s, lab])] for lab in range(3)] for s in tree_order],
        dtype=np.int32,
    )
    return SolidTemplate(
        p, q, poly, tuple(flags), nbrs,
        np.array(parents, dtype=np.int32),
        np.array(labels, dtype=np.int32),
        canonical_nbrs,
    )
