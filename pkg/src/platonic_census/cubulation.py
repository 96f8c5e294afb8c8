"""Cube complexes and their subdivisions into tetrahedra.

Cube vertices are numbered ``4x + 2y + z`` for the corner ``(x, y, z)`` of
the unit cube and the six faces are the vertex cycles of
``polyhedron(4, 3).faces``.  A *side* ``(c, F)`` is face ``F`` of cube
``c``; the face pairing is an involution on sides together with a vertex
correspondence for each side.

Two subdivisions are offered:

* ``subdivide_appendix``: orient the face cycles, pick in every cube the
  three faces leaving it in the positive direction, draw their diagonals
  through the common vertex ``v`` and cone the three far faces to ``v``
  (6 tetrahedra per cube).
* ``subdivide_two_coloring``: for a cusped cubical tessellation whose
  1-skeleton is bipartite, every color class gives diagonals between
  vertices of that color and each cube splits into 5 tetrahedra.
"""

from dataclasses import dataclass

from scipy.cluster.hierarchy import DisjointSet

from .canonical import canonical_reindex, specialized_iso_sig, triangulation_from_sig
from .general import GeneralTriangulation, barycentric_subdivision, validate_general
from .solids import SchlafliType, canonical_order, polyhedron, solid_template
from .triangulation import Triangulation

__all__ = [
    "CUBE_FACES",
    "OPPOSITE",
    "CubeComplex",
    "FaceCycleDecomposition",
    "DiagonalChoice",
    "face_cycles",
    "choose_diagonals",
    "subdivide_appendix",
    "subdivide_two_coloring",
    "two_coloring_signatures",
    "tetrahedra_from_cubes",
]

CUBE_FACES = polyhedron(4, 3).faces
OPPOSITE = tuple(
    next(g for g in range(6) if not set(CUBE_FACES[f]) & set(CUBE_FACES[g]))
    for f in range(6)
)
CUBE_EDGES = polyhedron(4, 3).edges
_FLAGS = 48


def _common_vertex(faces):
    common = set(range(8))
    for f in faces:
        common &= set(CUBE_FACES[f])
    (v,) = common
    return v


class CubeComplex:
    """Cubes with a face pairing.

    ``pairing[c][F] = (c2, F2, vmap)`` where ``vmap[x]`` is the vertex of
    cube ``c2`` identified with vertex ``x`` of cube ``c`` (``-1`` for the
    vertices not on ``F``).  Every side is paired.
    """

    def __init__(self, pairing):
        self.pairing = [list(row) for row in pairing]
        self._check()

    @property
    def num_cubes(self):
        return len(self.pairing)

    def sides(self):
        return [(c, f) for c in range(self.num_cubes) for f in range(6)]

    def partner(self, side):
        c, f = side
        c2, f2, _ = self.pairing[c][f]
        return (c2, f2)

    def face_classes(self):
        """Unordered pairs of sides, each listed from its smaller side."""
        return sorted({min(s, self.partner(s)) for s in self.sides()})

    def _check(self):
        for c, f in self.sides():
            entry = self.pairing[c][f]
            if entry is None:
                raise ValueError(f"face {f} of cube {c} is not glued")
            c2, f2, vmap = entry
            if (c2, f2) == (c, f):
                raise ValueError(f"face {f} of cube {c} is glued to itself")
            back = self.pairing[c2][f2]
            if back is None or back[:2] != (c, f):
                raise ValueError(f"face pairing is not an involution at ({c}, {f})")
            if sorted(vmap[x] for x in CUBE_FACES[f]) != sorted(CUBE_FACES[f2]):
                raise ValueError(f"vertex map of ({c}, {f}) does not hit face {f2}")
            for x in CUBE_FACES[f]:
                if back[2][vmap[x]] != x:
                    raise ValueError(f"vertex maps of ({c}, {f}) are not inverse")

    @classmethod
    def from_triangulation(cls, t):
        """Contract the solids of a fully glued cubical triangulation."""
        if (t.schlafli.p, t.schlafli.q) != (4, 3):
            raise ValueError(f"{{{t.schlafli}}} is not a cubical type")
        if not t.is_closed():
            raise ValueError("triangulation has unglued faces")
        t = canonical_reindex(t, 0)
        tmpl = solid_template(4, 3)
        order, _, _ = canonical_order(tmpl.nbrs.tolist(), 0)
        flag = [tmpl.flags[j] for j in order]
        ncubes = t.num_simplices // _FLAGS
        where = {}
        for s in range(t.num_simplices):
            v, _, f = flag[s % _FLAGS]
            where.setdefault((s // _FLAGS, f), []).append((s, v))
        pairing = [[None] * 6 for _ in range(ncubes)]
        for (c, f), items in where.items():
            vmap = [-1] * 8
            c2 = f2 = None
            for s, v in items:
                s2 = int(t.data[s, 3])
                v2, _, g = flag[s2 % _FLAGS]
                c2, f2 = s2 // _FLAGS, g
                vmap[v] = v2
            pairing[c][f] = (c2, f2, tuple(vmap))
        return cls(pairing)

    def to_triangulation(self, r=6):
        """Barycentric triangulation of the complex (type {4,3,r})."""
        tmpl = solid_template(4, 3)
        index = {fl: i for i, fl in enumerate(tmpl.flags)}
        edge_index = {e: i for i, e in enumerate(CUBE_EDGES)}
        data = []
        for c in range(self.num_cubes):
            for j, (v, e, f) in enumerate(tmpl.flags):
                c2, f2, vmap = self.pairing[c][f]
                a, b = CUBE_EDGES[e]
                e2 = edge_index[tuple(sorted((vmap[a], vmap[b])))]
                row = [int(x) + _FLAGS * c for x in tmpl.nbrs[j]]
                row.append(_FLAGS * c2 + index[(vmap[v], e2, f2)])
                data.append(row)
        return Triangulation(SchlafliType(4, 3, r), data, orientable_mode=False)

    def _classes(self, items, image):
        ds = DisjointSet(items)
        for c, f in self.sides():
            c2, _, vmap = self.pairing[c][f]
            for x in image(c, f, vmap):
                ds.merge(x[0], x[1])
        return sorted((sorted(s) for s in ds.subsets()), key=lambda s: s[0])

    def vertex_classes(self):
        """Classes of cube corners ``(c, x)`` (the cusps, for ideal cubes)."""
        return self._classes(
            [(c, x) for c in range(self.num_cubes) for x in range(8)],
            lambda c, f, vmap: [((c, x), (self.pairing[c][f][0], vmap[x]))
                                for x in CUBE_FACES[f]])

    def edge_classes(self):
        """Classes of cube edges ``(c, (a, b))`` with ``a < b``."""
        def image(c, f, vmap):
            c2 = self.pairing[c][f][0]
            face = CUBE_FACES[f]
            out = []
            for i in range(4):
                a, b = face[i], face[(i + 1) % 4]
                out.append(((c, tuple(sorted((a, b)))),
                            (c2, tuple(sorted((vmap[a], vmap[b]))))))
            return out
        return self._classes([(c, e) for c in range(self.num_cubes) for e in CUBE_EDGES],
                             image)

    def __repr__(self):
        return f"CubeComplex({self.num_cubes} cubes)"


@dataclass(frozen=True)
class FaceCycleDecomposition:
    """Oriented face cycles as sequences of sides.

    Consecutive sides ``(c, F)``, ``(c', F')`` satisfy ``(c', F') =
    partner((c, opposite F))``; the class of every side is listed once.
    """

    cycles: tuple

    @property
    def lengths(self):
        return tuple(len(c) for c in self.cycles)

    def unoriented(self, complex_):
        """Cycles as sets of face classes (orientation forgotten)."""
        return sorted(sorted(min(s, complex_.partner(s)) for s in cyc) for cyc in self.cycles)

    def reversed(self, complex_):
        """The same cycles traversed backwards (through the other sides)."""
        out = []
        for cyc in self.cycles:
            out.append(tuple(complex_.partner(s) for s in reversed(cyc)))
        return FaceCycleDecomposition(tuple(out))


@dataclass(frozen=True)
class DiagonalChoice:
    """Picked sides, the apex vertex per cube and a diagonal per side."""

    picked: frozenset
    apex: tuple
    diagonals: dict

    def diagonal(self, side):
        return self.diagonals[side]


def face_cycles(cx):
    """Partition the face classes into face cycles.

    The map ``side -> partner(opposite(side))`` is a permutation of the
    sides; its orbits come in pairs exchanged by the pairing (an orbit
    never meets both sides of a face class, since the pairing and the
    opposite-face map have no fixed points).  From each pair we keep the
    orbit containing the smaller side, starting at that side.
    """
    if not isinstance(cx, CubeComplex):
        raise TypeError("expected a CubeComplex")

    def step(side):
        c, f = side
        return cx.partner((c, OPPOSITE[f]))

    done = set()
    cycles = []
    for side in cx.sides():
        if side in done:
            continue
        cyc = [side]
        nxt = step(side)
        while nxt != side:
            cyc.append(nxt)
            nxt = step(nxt)
        done.update(cyc)
        done.update(cx.partner(s) for s in cyc)
        cycles.append(tuple(cyc))
    return FaceCycleDecomposition(tuple(cycles))


def choose_diagonals(cx, fcd=None):
    """Diagonals from oriented face cycles.

    The sides on the oriented cycles are picked; per cube this is one side
    out of each opposite pair, so the three picked faces meet in a vertex.
    Their diagonals run through that vertex and the partner sides get the
    image diagonal.
    """
    if fcd is None:
        fcd = face_cycles(cx)
    picked = frozenset(s for cyc in fcd.cycles for s in cyc)
    apex = []
    diagonals = {}
    for c in range(cx.num_cubes):
        faces = [f for f in range(6) if (c, f) in picked]
        if len(faces) != 3 or any(OPPOSITE[f] in faces for f in faces):
            raise ValueError(f"cube {c}: picked faces {faces} are not one per opposite pair")
        v = _common_vertex(faces)
        apex.append(v)
        for f in faces:
            face = CUBE_FACES[f]
            i = face.index(v)
            diag = tuple(sorted((v, face[(i + 2) % 4])))
            diagonals[(c, f)] = diag
            c2, f2, vmap = cx.pairing[c][f]
            diagonals[(c2, f2)] = tuple(sorted((vmap[diag[0]], vmap[diag[1]])))
    return DiagonalChoice(picked, tuple(apex), diagonals)


def _face_triangles(f, diag):
    face = CUBE_FACES[f]
    a, b = diag
    rest = [x for x in face if x not in diag]
    return [(a, b, rest[0]), (a, b, rest[1])]


def tetrahedra_from_cubes(cx, tets):
    """Assemble a :class:`GeneralTriangulation` from per-cube tetrahedra.

    ``tets[c]`` lists tetrahedra of cube ``c`` as 4-tuples of cube
    vertices.  Faces inside a cube are matched by vertex set, faces on a
    cube face are matched across the pairing; any face left over is an
    error.
    """
    gt = GeneralTriangulation()
    first = []
    for c in range(cx.num_cubes):
        first.append(gt.add_tetrahedra(len(tets[c])))
    slots = {}
    for c in range(cx.num_cubes):
        for i, tet in enumerate(tets[c]):
            for f in range(4):
                key = (c, frozenset(x for j, x in enumerate(tet) if j != f))
                slots.setdefault(key, []).append((first[c] + i, f, tet))
    def side_of(verts):
        for f in range(6):
            if verts <= set(CUBE_FACES[f]):
                return f
        return None

    for (c, verts), items in slots.items():
        if len(items) == 2:
            (s, f, tet), (s2, f2, tet2) = items
            perm = [0] * 4
            for j, x in enumerate(tet):
                perm[j] = f2 if j == f else tet2.index(x)
            gt.glue(s, f, s2, perm)
            continue
        if len(items) != 1:
            raise ValueError(f"cube {c}: face {sorted(verts)} in {len(items)} tetrahedra")
        s, f, tet = items[0]
        if gt.gluings[s][f] is not None:
            continue
        face = side_of(verts)
        if face is None:
            raise ValueError(f"cube {c}: interior face {sorted(verts)} is unmatched")
        c2, _, vmap = cx.pairing[c][face]
        target = frozenset(vmap[x] for x in verts)
        other = slots.get((c2, target))
        if not other or len(other) != 1:
            raise ValueError(f"cube {c}: face {sorted(verts)} has no partner in cube {c2}")
        s2, f2, tet2 = other[0]
        perm = [0] * 4
        for j, x in enumerate(tet):
            perm[j] = f2 if j == f else tet2.index(vmap[x])
        gt.glue(s, f, s2, perm)
    return gt


def subdivide_appendix(cx, choice=None):
    """Cone every cube from its apex over the triangulated far faces.

    Accepts a :class:`CubeComplex` or a cubical triangulation.  Returns a
    :class:`GeneralTriangulation` with 6 tetrahedra per cube.
    """
    if not isinstance(cx, CubeComplex):
        cx = CubeComplex.from_triangulation(cx)
    if choice is None:
        choice = choose_diagonals(cx)
    tets = []
    for c in range(cx.num_cubes):
        v = choice.apex[c]
        cube = []
        for f in range(6):
            if v in CUBE_FACES[f]:
                continue
            for tri in _face_triangles(f, choice.diagonals[(c, f)]):
                cube.append((v,) + tri)
        tets.append(cube)
    return tetrahedra_from_cubes(cx, tets)


def _bipartition(cx):
    """Color of every vertex class, or None if the 1-skeleton is not bipartite."""
    classes = cx.vertex_classes()
    cls = {}
    for i, members in enumerate(classes):
        for m in members:
            cls[m] = i
    color = [-1] * len(classes)
    adj = [set() for _ in classes]
    for c in range(cx.num_cubes):
        for a, b in CUBE_EDGES:
            x, y = cls[(c, a)], cls[(c, b)]
            if x == y:
                return None
            adj[x].add(y)
            adj[y].add(x)
    color[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if color[y] == -1:
                color[y] = 1 - color[x]
                stack.append(y)
            elif color[y] == color[x]:
                return None
    return {m: color[cls[m]] for m in cls}


def _five_tetrahedra(inner):
    inner = sorted(inner)
    tets = [tuple(inner)]
    for x in range(8):
        if x in inner:
            continue
        # the three cube neighbours of x differ from it in one bit
        tets.append((x, x ^ 4, x ^ 2, x ^ 1))
    return tets


def two_coloring_signatures(t):
    """Signatures of the tetrahedral tessellations obtained from the
    two-colorings of a cusped cubical tessellation (sorted, deduplicated)."""
    s = t.schlafli
    if (s.p, s.q, s.r) != (4, 3, 6):
        raise ValueError(f"two-coloring subdivision needs a {{4,3,6}} tessellation, got {{{s}}}")
    cx = CubeComplex.from_triangulation(t)
    color = _bipartition(cx)
    if color is None:
        return []
    sigs = set()
    for keep in (0, 1):
        tets = [_five_tetrahedra([x for x in range(8) if color[(c, x)] == keep])
                for c in range(cx.num_cubes)]
        gt = tetrahedra_from_cubes(cx, tets)
        report = validate_general(gt)
        if not report.valid or not report.closed:
            raise AssertionError("two-coloring subdivision is not a closed triangulation")
        sigs.add(specialized_iso_sig(barycentric_subdivision(gt, (3, 3, 6))))
    return sorted(sigs)


def subdivide_two_coloring(t):
    """Tetrahedral tessellations (as canonical triangulations) subdividing a
    cusped cubical tessellation; empty if its 1-skeleton is not bipartite."""
    return [triangulation_from_sig(sig) for sig in two_coloring_signatures(t)]

