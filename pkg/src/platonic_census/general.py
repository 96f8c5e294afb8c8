"""Triangulations with arbitrary face gluings.

Face ``i`` of a tetrahedron is the face opposite vertex ``i``.  A gluing of
face ``f`` of tetrahedron ``s`` is ``(t, perm)``: vertex ``j`` of ``s`` is
identified with vertex ``perm[j]`` of ``t``, so face ``f`` goes to face
``perm[f]`` of ``t``.  The two tetrahedra induce the same orientation on
the common face iff ``perm`` is odd.
"""

from dataclasses import dataclass, field
from itertools import permutations

from scipy.cluster.hierarchy import DisjointSet

from .solids import SchlafliType
from .triangulation import LinkSurface, Triangulation

__all__ = [
    "GeneralTriangulation",
    "ValidityReport",
    "validate_general",
    "serialize_general",
    "parse_general",
    "barycentric_subdivision",
    "perm_sign",
]

_PERMS = list(permutations(range(4)))
_PERM_INDEX = {p: i for i, p in enumerate(_PERMS)}


def perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _inverse(perm):
    inv = [0] * 4
    for i, x in enumerate(perm):
        inv[x] = i
    return tuple(inv)


class GeneralTriangulation:
    """Tetrahedra with full face-pairing permutations."""

    def __init__(self, n=0):
        self.gluings = [[None] * 4 for _ in range(n)]

    @property
    def num_tetrahedra(self):
        return len(self.gluings)

    def __len__(self):
        return len(self.gluings)

    def add_tetrahedra(self, n):
        first = len(self.gluings)
        self.gluings.extend([None] * 4 for _ in range(n))
        return first

    def glue(self, s, f, t, perm):
        """Glue face ``f`` of ``s`` to face ``perm[f]`` of ``t`` (both ways)."""
        perm = tuple(int(x) for x in perm)
        if sorted(perm) != [0, 1, 2, 3]:
            raise ValueError(f"{perm} is not a permutation of 0..3")
        g = perm[f]
        if self.gluings[s][f] is not None or self.gluings[t][g] is not None:
            if self.gluings[s][f] == (t, perm):
                return
            raise ValueError(f"face {f} of {s} or face {g} of {t} already glued")
        if s == t and f == g:
            raise ValueError("a face cannot be glued to itself")
        self.gluings[s][f] = (t, perm)
        self.gluings[t][g] = (s, _inverse(perm))

    def num_free_faces(self):
        return sum(1 for row in self.gluings for g in row if g is None)

    def __eq__(self, other):
        return isinstance(other, GeneralTriangulation) and self.gluings == other.gluings

    def __repr__(self):
        return f"GeneralTriangulation({self.num_tetrahedra} tetrahedra)"


@dataclass
class ValidityReport:
    involutive: bool
    bad_gluings: list
    free_faces: int
    edge_orders: list
    reversed_edges: int
    vertex_links: list
    euler_characteristic: int
    orientable: bool
    problems: list = field(default_factory=list)

    @property
    def valid(self):
        return self.involutive and not self.reversed_edges and not self.problems

    @property
    def closed(self):
        return self.free_faces == 0

    @property
    def euler_defect(self):
        """chi(|T|) - sum over vertices of (1 - chi(link)/2); 0 for a manifold
        (with the vertices allowed to be ideal).  None if not closed."""
        if not self.closed:
            return None
        total = sum(2 - lk.euler_characteristic for lk in self.vertex_links)
        return 2 * self.euler_characteristic - total


def validate_general(gt):
    """Check involutivity and report edges, vertex links and Euler data."""
    k = gt.num_tetrahedra
    bad = []
    problems = []
    for s in range(k):
        for f in range(4):
            g = gt.gluings[s][f]
            if g is None:
                continue
            t, perm = g
            if not (0 <= t < k) or sorted(perm) != [0, 1, 2, 3]:
                bad.append((s, f))
                continue
            back = gt.gluings[t][perm[f]]
            if back is None or back[0] != s or tuple(back[1][perm[j]] for j in range(4)) != (0, 1, 2, 3):
                bad.append((s, f))
    involutive = not bad
    if not involutive:
        return ValidityReport(False, bad, gt.num_free_faces(), [], 0, [], 0, False,
                              ["gluings are not involutive"])

    # edges: ordered (s, a, b) identified across faces containing a and b
    edges = DisjointSet((s, a, b) for s in range(k) for a in range(4) for b in range(4) if a != b)
    boundary_edge = set()
    for s in range(k):
        for f in range(4):
            g = gt.gluings[s][f]
            for a in range(4):
                for b in range(4):
                    if a == b or f in (a, b):
                        continue
                    if g is None:
                        boundary_edge.add((s, a, b))
                    else:
                        t, perm = g
                        edges.merge((s, a, b), (t, perm[a], perm[b]))
    reversed_edges = 0
    orders = []
    seen = set()
    for s in range(k):
        for a in range(4):
            for b in range(a + 1, 4):
                key = frozenset((edges[(s, a, b)], edges[(s, b, a)]))
                if key in seen:
                    continue
                seen.add(key)
                if len(key) == 1:
                    reversed_edges += 1
                members = edges.subset((s, a, b))
                order = len(members)
                closed = not any(m in boundary_edge for m in members)
                orders.append((order, closed))
    if reversed_edges:
        problems.append(f"{reversed_edges} edge(s) identified with themselves in reverse")
    num_edges = len(orders)

    # vertices
    corners = DisjointSet((s, v) for s in range(k) for v in range(4))
    for s in range(k):
        for f in range(4):
            g = gt.gluings[s][f]
            if g is None:
                continue
            t, perm = g
            for v in range(4):
                if v != f:
                    corners.merge((s, v), (t, perm[v]))
    links = []
    for idx, cls in enumerate(sorted(corners.subsets(), key=min)):
        cls = set(cls)
        tri = len(cls)
        glued = free = 0
        ends = set()
        for (s, v) in cls:
            for f in range(4):
                if f == v:
                    continue
                if gt.gluings[s][f] is None:
                    free += 1
                else:
                    glued += 1
            for w in range(4):
                if w != v:
                    ends.add(edges[(s, v, w)])
        chi = len(ends) - (glued // 2 + free) + tri
        links.append(LinkSurface(0, idx, tri, chi, _link_orientable(gt, cls), free == 0))
    faces = sum(1 for row in gt.gluings for g in row if g is not None) // 2 + gt.num_free_faces()
    chi = len(links) - num_edges + faces - k
    return ValidityReport(True, [], gt.num_free_faces(), orders, reversed_edges, links, chi,
                          _orientable(gt), problems)


def _link_orientable(gt, cls):
    sign = {}
    for root in sorted(cls):
        if root in sign:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            s, v = stack.pop()
            for f in range(4):
                g = gt.gluings[s][f]
                if f == v or g is None:
                    continue
                t, perm = g
                want = sign[(s, v)] * (1 if perm_sign(perm) < 0 else -1)
                key = (t, perm[v])
                if key not in sign:
                    sign[key] = want
                    stack.append(key)
                elif sign[key] != want:
                    return False
    return True


def _orientable(gt):
    sign = {}
    for root in range(gt.num_tetrahedra):
        if root in sign:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            s = stack.pop()
            for g in gt.gluings[s]:
                if g is None:
                    continue
                t, perm = g
                want = sign[s] * (1 if perm_sign(perm) < 0 else -1)
                if t not in sign:
                    sign[t] = want
                    stack.append(t)
                elif sign[t] != want:
                    return False
    return True


def serialize_general(gt):
    lines = [f"gtrig v1 {gt.num_tetrahedra}"]
    for row in gt.gluings:
        items = ["-" if g is None else f"{g[0]}:{''.join(str(x) for x in g[1])}" for g in row]
        lines.append(" ".join(items))
    return "\n".join(lines) + "\n"


def parse_general(text):
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty input")
    head = lines[0].split()
    if len(head) != 3 or head[:2] != ["gtrig", "v1"] or not head[2].isdigit():
        raise ValueError(f"line 1: bad header {lines[0]!r}")
    n = int(head[2])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} tetrahedron lines, got {len(lines) - 1}")
    gt = GeneralTriangulation(n)
    for s, line in enumerate(lines[1:]):
        items = line.split(" ")
        if len(items) != 4:
            raise ValueError(f"line {s + 2}: expected 4 entries")
        for f, item in enumerate(items):
            if item == "-":
                continue
            tgt, _, perm = item.partition(":")
            if not tgt.isdigit() or len(perm) != 4 or not perm.isdigit():
                raise ValueError(f"line {s + 2}: bad entry {item!r}")
            gt.gluings[s][f] = (int(tgt), tuple(int(c) for c in perm))
    return gt


def barycentric_subdivision(gt, schlafli=(3, 3, 6)):
    """Barycentric subdivision of a tetrahedral complex as a :class:`Triangulation`.

    The flag ``(v, w, x, y)`` of tetrahedron ``T`` (vertex v, edge vw, face
    vwx) becomes simplex ``24 T + index``.
    """
    k = gt.num_tetrahedra
    data = []
    for T in range(k):
        for (v, w, x, y) in _PERMS:
            row = [
                24 * T + _PERM_INDEX[(w, v, x, y)],
                24 * T + _PERM_INDEX[(v, x, w, y)],
                24 * T + _PERM_INDEX[(v, w, y, x)],
            ]
            g = gt.gluings[T][y]
            if g is None:
                row.append(-1)
            else:
                t, perm = g
                row.append(24 * t + _PERM_INDEX[(perm[v], perm[w], perm[x], perm[y])])
            data.append(row)
    s = schlafli if isinstance(schlafli, SchlafliType) else SchlafliType(*schlafli)
    return Triangulation(s, data, orientable_mode=False)
