"""Finite covers: low-index subgroups and the homology of the covers.

Covers of degree ``n`` up to equivalence correspond to conjugacy classes of
index-``n`` subgroups, i.e. to transitive actions of the fundamental group
on ``n`` points up to relabelling.  They are enumerated with coset tables in
standard form (cosets numbered in order of first appearance), which gives
every subgroup exactly once; conjugate subgroups are merged by
re-standardizing from every base coset.

The homology of a cover is read off the lifted presentation complex: one
vertex per coset, one edge per (coset, generator), one 2-cell per
(coset, relator).
"""

from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np

from . import _kernels

from .homology import (
    AbelianGroup,
    Presentation,
    fundamental_group_presentation,
    relation_matrix,
    simplify_presentation,
    smith_form,
    _divisor_chain,
)

__all__ = [
    "CoverRecord",
    "transitive_actions",
    "cyclic_actions",
    "cover_homology",
    "classify_action",
    "covers",
    "lift_triangulation",
    "MAX_DEGREE",
]

MAX_DEGREE = 6
COVER_TYPES = ("cyclic", "regular", "irregular")


@dataclass(frozen=True, order=True)
class CoverRecord:
    degree: int
    cover_type: str
    homology: AbelianGroup

    def __post_init__(self):
        if self.cover_type not in COVER_TYPES:
            raise ValueError(f"unknown cover type {self.cover_type!r}")

    def __str__(self):
        return f"{self.degree}{self.cover_type[0]}:{self.homology.compact()}"


def _columns(word):
    # generator i (1-based) -> column 2(i-1), inverse -> 2(i-1)+1
    return [2 * (abs(x) - 1) + (x < 0) for x in word]


def _coset_tables(pres, n):
    """All standard coset tables of index ``n`` (compiled backtracking with
    relator deductions; every relator rotation starting with column ``x``
    is rescanned when an ``x`` entry gets defined)."""
    cols = 2 * pres.num_generators
    rots = [set() for _ in range(cols)]
    for rel in (_columns(r) for r in pres.relators):
        inv = [x ^ 1 for x in reversed(rel)]
        for w in (rel, inv):
            for i in range(len(w)):
                rot = tuple(w[i:] + w[:i])
                rots[rot[0]].add(rot)
    ptr = [0]
    starts, lens, letters = [], [], []
    for x in range(cols):
        for rot in sorted(rots[x]):
            starts.append(len(letters))
            lens.append(len(rot))
            letters.extend(rot)
        ptr.append(len(starts))
    args = [np.array(a, dtype=np.int32) for a in (ptr, starts, lens, letters)]
    if not len(args[3]):
        args[3] = np.zeros(1, dtype=np.int32)
    cap = 256
    while True:
        out = np.empty((cap, n, cols), dtype=np.int32)
        found = _kernels.low_index_tables(n, cols, *args, out)
        if found <= cap:
            return [tuple(map(tuple, tab)) for tab in out[:found].tolist()]
        cap = found


def _standardize(table, base, cols):
    n = len(table)
    label = {base: 0}
    order = [base]
    i = 0
    while i < len(order):
        row = table[order[i]]
        for x in range(cols):
            d = row[x]
            if d not in label:
                label[d] = len(order)
                order.append(d)
        i += 1
    if len(order) != n:
        return None
    return tuple(tuple(label[table[c][x]] for x in range(cols)) for c in order)


def transitive_actions(pres, n):
    """One permutation action per conjugacy class of index-``n`` subgroups.

    Each action is a tuple of generator permutations (tuples of images).
    """
    if n < 1:
        raise ValueError("degree must be positive")
    if pres.num_generators == 0:
        return [()] if n == 1 else []
    tables = _coset_tables(pres, n)
    cols = 2 * pres.num_generators
    classes = {}
    for tab in tables:
        key = min(_standardize(tab, b, cols) for b in range(n))
        classes.setdefault(key, key)
    out = []
    for key in sorted(classes):
        out.append(tuple(tuple(key[c][2 * i] for c in range(n)) for i in range(pres.num_generators)))
    return out


def _abelianization_map(pres):
    """Cyclic factors of H1 and the image of every generator in them."""
    rows = relation_matrix(pres)
    g = pres.num_generators
    diag, q = smith_form(rows, g, transform=True)
    orders = list(diag) + [0] * (g - len(diag))
    keep = [i for i, d in enumerate(orders) if d != 1]
    factors = [orders[i] for i in keep]
    images = [[q[j][i] for i in keep] for j in range(g)]
    return factors, images


def _units(d):
    return [u for u in range(1, d) if gcd(u, d) == 1]


def cyclic_actions(pres, n):
    """Actions of the cyclic covers of degree ``n`` (epimorphisms onto Z/n
    up to automorphisms of Z/n), as rotations of ``0..n-1``."""
    factors, images = _abelianization_map(pres)
    ranges = []
    for d in factors:
        if d == 0:
            ranges.append(range(n))
        else:
            step = n // gcd(n, d)
            ranges.append(range(0, n, step))
    seen = set()
    units = _units(n)
    out = []
    for a in product(*ranges):
        vals = tuple(sum(c * x for c, x in zip(row, a)) % n for row in images)
        if not vals or gcd(n, *vals) != 1:
            continue
        key = min(tuple(u * v % n for v in vals) for u in units)
        if key in seen:
            continue
        seen.add(key)
        out.append(tuple(tuple((c + v) % n for c in range(n)) for v in key))
    out.sort()
    return out


def _group_closure(gens, n):
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = tuple(g[a[i]] for i in range(n))
                if b not in elems:
                    elems.add(b)
                    new.append(b)
        frontier = new
    return elems


def _perm_order(p):
    n = len(p)
    seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        order = order * length // gcd(order, length)
    return order


def classify_action(action, n):
    """'cyclic', 'regular' or 'irregular' for a transitive action."""
    group = _group_closure(action, n)
    if len(group) != n:
        return "irregular"
    if any(_perm_order(p) == n for p in group):
        return "cyclic"
    return "regular"


def cover_homology(pres, action):
    """H1 of the cover of the presentation complex given by ``action``."""
    g = pres.num_generators
    n = len(action[0]) if action else 1
    inv = [[0] * n for _ in range(g)]
    for i, p in enumerate(action):
        for c, d in enumerate(p):
            inv[i][d] = c
    rows = []
    for rel in pres.relators:
        for c0 in range(n):
            row = [0] * (n * g)
            c = c0
            for x in rel:
                i = abs(x) - 1
                if x > 0:
                    row[c * g + i] += 1
                    c = action[i][c]
                else:
                    c = inv[i][c]
                    row[c * g + i] -= 1
            rows.append(row)
    diag = smith_form(rows, n * g)
    torsion = _divisor_chain(diag)
    rank = n * g - (n - 1) - len(diag)
    return AbelianGroup(rank, tuple(torsion))


def covers(t, degree, cyclic_only=False, presentation=None):
    """Sorted list of :class:`CoverRecord` for the covers of ``t`` of ``degree``.

    ``t`` may be a triangulation or a :class:`Presentation`.
    """
    if not 2 <= degree <= MAX_DEGREE:
        raise ValueError(f"degree {degree} outside the supported range 2..{MAX_DEGREE}")
    if presentation is None:
        pres = t if isinstance(t, Presentation) else fundamental_group_presentation(t)
        pres, _ = simplify_presentation(pres)
    else:
        pres = presentation
    if cyclic_only:
        actions = cyclic_actions(pres, degree)
    else:
        actions = transitive_actions(pres, degree)
    out = [CoverRecord(degree, classify_action(a, degree), cover_homology(pres, a))
           for a in actions]
    return sorted(out)


def lift_triangulation(t, action, images):
    """Lift a barycentric triangulation to the cover given by ``action``.

    ``action`` acts on the generators of a simplified presentation and
    ``images`` expresses the original dual-spine generators in those (as
    returned by :func:`simplify_presentation`).  Simplex ``(s, c)`` of the
    cover gets index ``s * n + c``.
    """
    from .homology import _tree_generators
    from .triangulation import Triangulation

    d = t.data
    k = len(d)
    n = len(action[0]) if action else 1
    g = len(action)
    inv = [[0] * n for _ in range(g)]
    for i, p in enumerate(action):
        for c, e in enumerate(p):
            inv[i][e] = c
    edges = {(s, f): ((int(d[s, f]), f), int(d[s, f])) for s in range(k) for f in range(4)}
    gen, _ = _tree_generators(edges, k)

    def apply(word, c):
        for x in word:
            c = action[x - 1][c] if x > 0 else inv[-x - 1][c]
        return c

    out = np.empty((k * n, 4), dtype=np.int32)
    for s in range(k):
        for f in range(4):
            s2 = int(d[s, f])
            h = gen[(s, f)]
            if h == 0:
                word = []
            elif h > 0:
                word = images[h - 1]
            else:
                word = [-x for x in reversed(images[-h - 1])]
            for c in range(n):
                out[s * n + c, f] = s2 * n + apply(word, c)
    return Triangulation(t.schlafli, out, orientable_mode=False)
