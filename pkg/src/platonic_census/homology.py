"""Fundamental group presentations, Smith normal form and first homology.

The presentation is read off the dual 2-skeleton: one generator for every
face gluing outside a spanning tree of the dual graph and one relator for
every edge class, read by walking around the edge.  Removing finitely many
(or ideal) vertices does not change the fundamental group of a 3-manifold,
so the same recipe works for closed and for cusped tessellations.

Words are lists of non-zero integers, ``+i`` for generator ``i`` (1-based)
and ``-i`` for its inverse.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .general import GeneralTriangulation
from .triangulation import Triangulation

__all__ = [
    "AbelianGroup",
    "Presentation",
    "fundamental_group_presentation",
    "simplify_presentation",
    "relation_matrix",
    "smith_form",
    "invariant_factors",
    "abelian_group_from_matrix",
    "first_homology",
]


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """Z^rank plus Z/d1 + ... + Z/dn with d1 | d2 | ... | dn."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"torsion coefficients must be >= 2: {t}")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_factors(cls, rank, factors):
        """Normalize an arbitrary list of cyclic orders (0 meaning Z)."""
        fs = [abs(int(f)) for f in factors]
        rank += sum(1 for f in fs if f == 0)
        return cls(rank, tuple(_divisor_chain([f for f in fs if f > 1])))

    @classmethod
    def parse(cls, text):
        """Inverse of :meth:`compact`, e.g. ``'1;2,4'``."""
        r, _, t = text.partition(";")
        return cls(int(r), tuple(int(x) for x in t.split(",") if x))

    def compact(self):
        return f"{self.rank};{','.join(str(d) for d in self.torsion)}"

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Order of the group, None if infinite."""
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        i = 0
        t = self.torsion
        while i < len(t):
            j = i
            while j < len(t) and t[j] == t[i]:
                j += 1
            n = j - i
            parts.append(f"Z/{t[i]}" if n == 1 else f"(Z/{t[i]})^{n}")
            i = j
        return " + ".join(parts) if parts else "0"


def _divisor_chain(ds):
    ds = sorted(ds)
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            ds[i], ds[j] = g, a // g * b
    return [d for d in ds if d > 1]


@dataclass
class Presentation:
    num_generators: int
    relators: list = field(default_factory=list)

    def __str__(self):
        def word(w):
            return " ".join(f"x{abs(x)}" + ("^-1" if x < 0 else "") for x in w) or "1"
        rels = ", ".join(word(r) for r in self.relators)
        return f"<{self.num_generators} generators | {rels}>"


# -- presentations -----------------------------------------------------------

def _tree_generators(edges, k):
    """Number the non-tree edges of the dual graph.

    ``edges`` maps a directed crossing key to ``(other key, target)``;
    returns a dict crossing-key -> signed generator (0 for tree edges).
    """
    seen = [False] * k
    gen = {}
    seen[0] = True
    stack = [0]
    adj = {}
    for key, (okey, target) in edges.items():
        adj.setdefault(key[0], []).append((key, okey, target))
    while stack:
        s = stack.pop()
        for key, okey, target in adj.get(s, ()):
            if key in gen:
                continue
            if not seen[target]:
                seen[target] = True
                gen[key] = gen[okey] = 0
                stack.append(target)
    if not all(seen):
        raise ValueError("triangulation is not connected")
    n = 0
    for key in sorted(edges):
        if key in gen:
            continue
        okey = edges[key][0]
        n += 1
        # the direction from the smaller key is positive
        gen[key] = n
        gen[okey] = -n
    return gen, n


def _barycentric_presentation(t):
    d = t.data
    k = len(d)
    if np.any(d == -1):
        raise ValueError("presentation needs a fully glued triangulation")
    edges = {}
    for s in range(k):
        for f in range(4):
            edges[(s, f)] = ((int(d[s, f]), f), int(d[s, f]))
    gen, n = _tree_generators(edges, k)
    relators = []
    for a in range(4):
        for b in range(a + 1, 4):
            c, e = (x for x in range(4) if x not in (a, b))
            done = np.zeros(k, dtype=bool)
            for s in range(k):
                if done[s]:
                    continue
                word = []
                cur, lab = s, c
                while True:
                    done[cur] = True
                    g = gen[(cur, lab)]
                    if g:
                        word.append(g)
                    cur = int(d[cur, lab])
                    lab = e if lab == c else c
                    if cur == s and lab == c:
                        break
                relators.append(word)
    return Presentation(n, relators)


def _general_presentation(gt):
    k = gt.num_tetrahedra
    if gt.num_free_faces():
        raise ValueError("presentation needs a fully glued triangulation")
    edges = {}
    for s in range(k):
        for f in range(4):
            tgt, perm = gt.gluings[s][f]
            edges[(s, f)] = ((tgt, perm[f]), tgt)
    gen, n = _tree_generators(edges, k)
    relators = []
    done = set()
    for s in range(k):
        for a in range(4):
            for b in range(a + 1, 4):
                if (s, a, b) in done:
                    continue
                c, e = (x for x in range(4) if x not in (a, b))
                word = []
                state = (s, a, b, c, e)
                start = state
                while True:
                    cs, ca, cb, cc, ce = state
                    done.add((cs, min(ca, cb), max(ca, cb)))
                    # leave through the face opposite ce
                    g = gen[(cs, ce)]
                    if g:
                        word.append(g)
                    tgt, perm = gt.gluings[cs][ce]
                    state = (tgt, perm[ca], perm[cb], perm[ce], perm[cc])
                    if state == start:
                        break
                relators.append(word)
    return Presentation(n, relators)


def fundamental_group_presentation(t):
    """Dual-spine presentation of a fully glued triangulation."""
    if isinstance(t, Triangulation):
        return _barycentric_presentation(t)
    if isinstance(t, GeneralTriangulation):
        return _general_presentation(t)
    raise TypeError(f"unsupported triangulation type {type(t).__name__}")


def _reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    # cyclic reduction
    i, j = 0, len(out) - 1
    while i < j and out[i] == -out[j]:
        i += 1
        j -= 1
    return out[i:j + 1]


def _inverse(word):
    return [-x for x in reversed(word)]


def _substitute(word, g, image):
    inv = _inverse(image)
    out = []
    for x in word:
        if x == g:
            out.extend(image)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return out


def simplify_presentation(pres, max_length=200000):
    """Tietze-simplify ``pres``.

    Returns ``(simplified, images)`` where ``images[i]`` is the word in the
    new generators representing original generator ``i + 1``.  Generators
    occurring exactly once in some relator are eliminated, smallest growth
    of the total relator length first, as long as the total relator length stays below ``max_length``.
    """
    n = pres.num_generators
    rels = [_reduce(r) for r in pres.relators]
    rels = [r for r in rels if r]
    images = {g: [g] for g in range(1, n + 1)}
    alive = set(range(1, n + 1))

    def eliminate(g, image):
        nonlocal rels
        for h in images:
            images[h] = _reduce_free(_substitute(images[h], g, image))
        rels = [_reduce(_substitute(r, g, image)) for r in rels]
        rels = [r for r in rels if r]
        alive.discard(g)

    while True:
        occ = {}
        for w in rels:
            for y in w:
                occ[abs(y)] = occ.get(abs(y), 0) + 1
        total = sum(occ.values())
        best = None
        for idx, r in enumerate(rels):
            counts = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for i, x in enumerate(r):
                if counts[abs(x)] == 1:
                    # every other occurrence grows by len(r) - 2
                    growth = (occ[abs(x)] - 1) * (len(r) - 2) - len(r)
                    cand = (growth, len(r), idx, i)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            break
        growth, length, idx, i = best
        if growth > 0 and total + growth > max_length:
            break
        r = rels[idx]
        x = r[i]
        rest = r[i + 1:] + r[:i]
        # x * rest = 1
        image = _inverse(rest) if x > 0 else rest
        g = abs(x)
        del rels[idx]
        eliminate(g, image)
    # drop duplicate relators (up to cyclic permutation and inversion)
    unique = {}
    for r in rels:
        key = _cyclic_key(r)
        unique.setdefault(key, r)
    rels = list(unique.values())
    rename = {g: i + 1 for i, g in enumerate(sorted(alive))}

    def rn(w):
        return [rename[abs(x)] * (1 if x > 0 else -1) for x in w]

    new = Presentation(len(rename), sorted((rn(r) for r in rels), key=lambda w: (len(w), w)))
    return new, [rn(images[g]) for g in range(1, n + 1)]


def _reduce_free(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _cyclic_key(w):
    cands = []
    for v in (w, _inverse(w)):
        for i in range(len(v)):
            cands.append(tuple(v[i:] + v[:i]))
    return min(cands)


# -- Smith normal form -------------------------------------------------------

def relation_matrix(pres):
    """Exponent-sum matrix (one row per relator) as lists of ints."""
    rows = []
    for r in pres.relators:
        row = [0] * pres.num_generators
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def smith_form(rows, ncols, transform=False):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns the list of non-zero diagonal entries (not yet a divisor chain).
    With ``transform=True`` also returns the column transform ``Q`` (as a
    list of rows) with ``P A Q = D``.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    m = len(a)
    n = ncols
    q = [[int(i == j) for j in range(n)] for i in range(n)] if transform else None
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest non-zero absolute value in the remaining block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            if transform:
                for row in q:
                    row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            # clear the column
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    f = v // p
                    if f:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= f * rt[j]
                    if a[i][t]:
                        done = False
            # clear the row
            rt = a[t]
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    f = v // p
                    if f:
                        for row in a:
                            if row[t]:
                                row[j] -= f * row[t]
                        if transform:
                            for row in q:
                                if row[t]:
                                    row[j] -= f * row[t]
                    if rt[j]:
                        done = False
            if done:
                break
            # move a smaller remainder into the pivot position
            best = None
            for i in range(t, m):
                v = a[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, t)
            for j in range(t, n):
                v = a[t][j]
                if v and abs(v) < best[0]:
                    best = (abs(v), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
                if transform:
                    for row in q:
                        row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    if transform:
        return diag, q
    return diag


def invariant_factors(rows, ncols):
    """Divisor chain of the cokernel's torsion, plus the rank of the matrix."""
    diag = smith_form(rows, ncols)
    return _divisor_chain(diag), len(diag)


def abelian_group_from_matrix(rows, ncols):
    """Cokernel of the row space of ``rows`` in Z^ncols."""
    torsion, rank = invariant_factors(rows, ncols)
    return AbelianGroup(ncols - rank, tuple(torsion))


def first_homology(t):
    """H1 of a triangulation (or of a :class:`Presentation`)."""
    pres = t if isinstance(t, Presentation) else fundamental_group_presentation(t)
    pres, _ = simplify_presentation(pres)
    return abelian_group_from_matrix(relation_matrix(pres), pres.num_generators)
