"""Barycentric subdivisions of Platonic complexes.

A :class:`Triangulation` is an array of simplices, each a quadruple of
neighbour indices.  Gluings always pair face ``i`` with face ``i`` and
preserve vertex labels, so no permutations are stored.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .solids import SchlafliType, solid_template

__all__ = [
    "Triangulation",
    "LinkSurface",
    "add_platonic_solid",
    "glue_faces",
    "vertex_links",
    "edge_classes",
    "is_orientable",
    "serialize_triangulation",
    "parse_triangulation",
]


class Triangulation:
    """Barycentric subdivision of a (partial) Platonic complex.

    ``data[s, i]`` is the simplex glued to face ``i`` of simplex ``s`` or
    -1.  In ``orientable_mode`` neighbouring simplices have indices of
    opposite parity.
    """

    def __init__(self, schlafli, data=None, orientable_mode=True):
        if not isinstance(schlafli, SchlafliType):
            schlafli = SchlafliType(*schlafli)
        self.schlafli = schlafli
        if data is None:
            data = np.empty((0, 4), dtype=np.int32)
        self.data = np.ascontiguousarray(data, dtype=np.int32)
        self.orientable_mode = orientable_mode

    @property
    def num_simplices(self):
        return self.data.shape[0]

    def __len__(self):
        return self.data.shape[0]

    @property
    def num_solids(self):
        return self.num_simplices // self.schlafli.solid_size

    def copy(self):
        return Triangulation(self.schlafli, self.data.copy(), self.orientable_mode)

    def open_faces(self):
        """Simplices whose face 3 is unglued."""
        return np.flatnonzero(self.data[:, 3] == -1)

    def is_closed(self):
        return not np.any(self.data == -1)

    def check(self):
        """Raise ValueError unless gluings are symmetric (and parity-respecting)."""
        d = self.data
        k = len(d)
        for i in range(4):
            glued = np.flatnonzero(d[:, i] != -1)
            nb = d[glued, i]
            if np.any((nb < 0) | (nb >= k)):
                raise ValueError(f"face {i}: neighbour index out of range")
            if np.any(d[nb, i] != glued):
                raise ValueError(f"face {i}: gluing is not symmetric")
            if self.orientable_mode and np.any((glued + nb) % 2 == 0):
                raise ValueError(f"face {i}: neighbours of equal parity")

    def relabeled(self, perm):
        """Copy with simplex ``s`` renamed ``perm[s]``."""
        perm = np.asarray(perm, dtype=np.int32)
        out = np.empty_like(self.data)
        mapped = np.where(self.data == -1, -1, perm[np.maximum(self.data, 0)])
        out[perm] = mapped
        return Triangulation(self.schlafli, out, orientable_mode=False)

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self.schlafli == other.schlafli
                and np.array_equal(self.data, other.data))

    def __repr__(self):
        return (f"Triangulation({{{self.schlafli}}}, {self.num_simplices} simplices, "
                f"{len(self.open_faces())} open)")


def add_platonic_solid(t, p, q):
    """Append the barycentric subdivision of {p,q}; face 3 stays unglued.

    Returns the index of the first added simplex.
    """
    if (p, q) != (t.schlafli.p, t.schlafli.q):
        raise ValueError(f"{{{p},{q}}} does not match {{{t.schlafli}}}")
    tmpl = solid_template(p, q)
    base = t.num_simplices
    block = np.full((tmpl.size, 4), -1, dtype=np.int32)
    block[:, :3] = tmpl.nbrs + base
    t.data = np.concatenate([t.data, block])
    return base


def glue_faces(t, simp0, simp1, p):
    """Pair face 3 of the polygon through ``simp0`` with that through ``simp1``.

    Walks both polygons in lockstep about their 23-edges.  Returns False if
    the two simplices lie on the same face of the same solid; gluings made
    before that is detected are not undone.
    """
    return bool(_kernels.glue_faces(t.data, int(simp0), int(simp1), int(p)))


def _components(k, src, dst):
    if k == 0:
        return 0, np.empty(0, dtype=np.int64)
    g = coo_matrix((np.ones(len(src)), (src, dst)), shape=(k, k))
    return connected_components(g, directed=False)


@dataclass(frozen=True)
class LinkSurface:
    """Link of one vertex class of a barycentric triangulation."""

    label: int
    index: int
    num_triangles: int
    euler_characteristic: int
    orientable: bool
    closed: bool

    @property
    def kind(self):
        if not self.closed:
            return "bounded"
        chi, o = self.euler_characteristic, self.orientable
        if o and chi == 2:
            return "sphere"
        if o and chi == 0:
            return "torus"
        if not o and chi == 1:
            return "projective plane"
        if not o and chi == 0:
            return "klein bottle"
        return f"{'orientable' if o else 'non-orientable'} chi={chi}"


def edge_classes(data, a, b):
    """Classes of the edge between vertex labels ``a`` and ``b``.

    Returns ``(n, cls)`` with ``cls[s]`` the class of edge ab of simplex s.
    """
    k = len(data)
    c, d = (x for x in range(4) if x not in (a, b))
    src, dst = [], []
    for f in (c, d):
        glued = np.flatnonzero(data[:, f] != -1)
        src.append(glued)
        dst.append(data[glued, f])
    return _components(k, np.concatenate(src), np.concatenate(dst))


def vertex_links(t):
    """Link surface of every vertex class, for labels 0, 1, 2, 3."""
    data = t.data if isinstance(t, Triangulation) else np.asarray(t)
    k = len(data)
    result = []
    for a in range(4):
        others = [f for f in range(4) if f != a]
        src, dst = [], []
        for f in others:
            glued = np.flatnonzero(data[:, f] != -1)
            src.append(glued)
            dst.append(data[glued, f])
        n, vcls = _components(k, np.concatenate(src), np.concatenate(dst))
        tri = np.bincount(vcls, minlength=n)
        glued_half = np.zeros(n, dtype=np.int64)
        unglued = np.zeros(n, dtype=np.int64)
        for f in others:
            free = data[:, f] == -1
            unglued += np.bincount(vcls[free], minlength=n)
            glued_half += np.bincount(vcls[~free], minlength=n)
        link_vertices = np.zeros(n, dtype=np.int64)
        for b in others:
            ne, ecls = edge_classes(data, a, b)
            # each edge class ab lies in exactly one vertex class of label a
            owner = np.full(ne, -1)
            owner[ecls] = vcls
            link_vertices += np.bincount(owner, minlength=n)
        # link orientable iff its triangles can be 2-coloured across glued edges
        color = np.full(k, -1)
        orientable = np.ones(n, dtype=bool)
        adj = [[] for _ in range(k)]
        for s_arr, d_arr in zip(src, dst):
            for s, d in zip(s_arr.tolist(), d_arr.tolist()):
                adj[s].append(d)
        for root in range(k):
            if color[root] != -1:
                continue
            color[root] = 0
            stack = [root]
            while stack:
                s = stack.pop()
                for nb in adj[s]:
                    if color[nb] == -1:
                        color[nb] = 1 - color[s]
                        stack.append(nb)
                    elif color[nb] == color[s]:
                        orientable[vcls[s]] = False
        edges = glued_half // 2 + unglued
        chi = link_vertices - edges + tri
        for i in range(n):
            result.append(LinkSurface(a, i, int(tri[i]), int(chi[i]),
                                      bool(orientable[i]), bool(unglued[i] == 0)))
    return result


def is_orientable(t):
    data = t.data if isinstance(t, Triangulation) else np.asarray(t, dtype=np.int32)
    color = np.empty(len(data), dtype=np.int32)
    return bool(_kernels.two_coloring(data, color))


def serialize_triangulation(t):
    s = t.schlafli
    lines = [f"ptrig v1 {s.p} {s.q} {s.r} {t.num_simplices}"]
    lines += [" ".join(str(int(x)) for x in row) for row in t.data]
    return "\n".join(lines) + "\n"


def parse_triangulation(text):
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty input")
    head = lines[0].split()
    if len(head) != 6 or head[:2] != ["ptrig", "v1"]:
        raise ValueError(f"line 1: bad header {lines[0]!r}")
    p, q, r, k = (int(x) for x in head[2:])
    if len(lines) != k + 1:
        raise ValueError(f"expected {k} simplex lines, got {len(lines) - 1}")
    rows = []
    for n, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 4:
            raise ValueError(f"line {n}: expected 4 integers")
        rows.append([int(x) for x in parts])
    t = Triangulation(SchlafliType(p, q, r), np.array(rows, dtype=np.int32).reshape(k, 4),
                      orientable_mode=False)
    t.check()
    return t
