"""Planar projections of augmented knotted trivalent graphs as fat graphs.

A diagram is stored by half-edges.  Half-edge ``h`` has

* ``other[h]``: the half-edge forming an edge with ``h``
* ``nxt[h]``: the next half-edge counter-clockwise at the same vertex
* ``under[h]``: set on the two opposite half-edges of a crossing that pass
  below the other two
* ``belt[h]``: id of the belt the half-edge lies on, or -1

Vertices are the ``nxt``-orbits: trivalent vertices of the graph and
4-valent crossings.  The belt ids are bookkeeping for the normalisation
of the signature (swapping all crossings of one belt); they are part of the
signature so that it stays a complete invariant of what is stored.

Moves follow the usual description.  An A-move replaces a trivalent
vertex by a triangle.  A U-move unzips an edge ``u -- w`` of the graph
(a path through crossings between two distinct trivalent vertices): the
path is doubled, ``u`` and ``w`` disappear, and a belt is added around the
doubled strands next to ``u``, its first arc passing over both strands and
its second arc under them.  An X-move also puts a half-twist between the
two strands just after the belt.  Crossings the path runs through turn
into 2 (or 4, if the path runs through twice) crossings.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

__all__ = [
    "FatGraph",
    "FatGraphSig",
    "k4",
    "a_move",
    "u_move",
    "x_move",
    "graph_edges",
    "simplify_r1",
    "fatgraph_sig",
    "canonical_form",
    "mirror",
    "swap_belt",
    "pd_export",
    "enumerate_augktg",
    "augktg_diagrams",
    "augktg_text",
    "parse_fatgraph_sig",
]

# directions inside a crossing gadget, counter-clockwise
_W, _S, _E, _N = range(4)
_SINGLE, _LEFT, _RIGHT = 0, 1, 2


class FatGraph:
    def __init__(self, other, nxt, under=None, belt=None):
        n = len(other)
        self.other = list(other)
        self.nxt = list(nxt)
        self.under = list(under) if under is not None else [0] * n
        self.belt = list(belt) if belt is not None else [-1] * n

    @classmethod
    def from_rotation(cls, rotation, under=None, belt=None):
        """Build from a rotation system: ``rotation[v]`` lists the edge
        labels at vertex ``v`` counter-clockwise; each label occurs twice.
        ``under``/``belt`` are optional per-vertex lists aligned with it."""
        other, nxt, fl, bl = [], [], [], []
        seen = {}
        for v, labels in enumerate(rotation):
            first = len(nxt)
            for i, lab in enumerate(labels):
                h = first + i
                nxt.append(first + (i + 1) % len(labels))
                other.append(-1)
                fl.append(under[v][i] if under is not None else 0)
                bl.append(belt[v][i] if belt is not None else -1)
                if lab in seen:
                    g = seen.pop(lab)
                    other[h] = g
                    other[g] = h
                else:
                    seen[lab] = h
        if seen:
            raise ValueError(f"edge labels used once: {sorted(seen)}")
        return cls(other, nxt, fl, bl)

    @classmethod
    def from_pd(cls, pd):
        """Diagram of a PD code (counter-clockwise from the incoming under strand)."""
        return cls.from_rotation([list(x) for x in pd],
                                 under=[[1, 0, 1, 0] for _ in pd])

    @property
    def num_half_edges(self):
        return len(self.other)

    def copy(self):
        return FatGraph(self.other, self.nxt, self.under, self.belt)

    def vertices(self):
        """``nxt``-orbits, each starting at its smallest half-edge."""
        seen = [False] * len(self.nxt)
        out = []
        for h in range(len(self.nxt)):
            if seen[h]:
                continue
            orbit = []
            x = h
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = self.nxt[x]
            out.append(orbit)
        return out

    def valence(self, h):
        n = 1
        x = self.nxt[h]
        while x != h:
            x = self.nxt[x]
            n += 1
        return n

    def faces(self):
        seen = [False] * len(self.nxt)
        count = 0
        for h in range(len(self.nxt)):
            if seen[h]:
                continue
            count += 1
            x = h
            while not seen[x]:
                seen[x] = True
                x = self.nxt[self.other[x]]
        return count

    def num_trivalent(self):
        return sum(1 for v in self.vertices() if len(v) == 3)

    def num_crossings(self):
        return sum(1 for v in self.vertices() if len(v) == 4)

    def belts(self):
        return sorted({b for b in self.belt if b >= 0})

    def euler_characteristic(self):
        return len(self.vertices()) - len(self.other) // 2 + self.faces()

    def is_connected(self):
        n = len(self.other)
        if n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            h = stack.pop()
            for x in (self.other[h], self.nxt[h]):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == n

    def check(self):
        """Raise ValueError unless the structural invariants hold."""
        n = len(self.other)
        if sorted(self.nxt) != list(range(n)):
            raise ValueError("nxt is not a permutation")
        for h in range(n):
            g = self.other[h]
            if not 0 <= g < n or g == h or self.other[g] != h:
                raise ValueError(f"other is not a fixed-point-free involution at {h}")
        for v in self.vertices():
            flags = [self.under[h] for h in v]
            if len(v) == 3:
                if any(flags):
                    raise ValueError(f"under flag at trivalent vertex {v}")
            elif len(v) == 4:
                if flags not in ([1, 0, 1, 0], [0, 1, 0, 1]):
                    raise ValueError(f"crossing {v} has flags {flags}")
            else:
                raise ValueError(f"vertex {v} has valence {len(v)}")
        return True

    def __eq__(self, other):
        return (isinstance(other, FatGraph) and self.other == other.other
                and self.nxt == other.nxt and self.under == other.under
                and self.belt == other.belt)

    def __repr__(self):
        return (f"FatGraph({self.num_trivalent()} trivalent, {self.num_crossings()} crossings, "
                f"{len(self.belts())} belts)")


def k4():
    """Planar K4: a center joined to the corners of a triangle."""
    # edges 0,1,2: center to corners A,B,C; 3: AB, 4: BC, 5: CA
    return FatGraph.from_rotation([[0, 1, 2], [3, 0, 5], [4, 1, 3], [5, 2, 4]])


def _vertex_of(g, h):
    orbit = [h]
    x = g.nxt[h]
    while x != h:
        orbit.append(x)
        x = g.nxt[x]
    return orbit


def a_move(g, h):
    """Replace the trivalent vertex containing half-edge ``h`` by a triangle."""
    v = _vertex_of(g, h)
    if len(v) != 3:
        raise ValueError("A-move needs a trivalent vertex")
    out = g.copy()
    base = len(out.other)
    # new half-edges: p_i (towards corner i+1) = base + 2i, m_i = base + 2i + 1
    out.other += [0] * 6
    out.nxt += [0] * 6
    out.under += [0] * 6
    out.belt += [-1] * 6
    for i in range(3):
        p, m = base + 2 * i, base + 2 * i + 1
        out.nxt[v[i]] = p
        out.nxt[p] = m
        out.nxt[m] = v[i]
        m_next = base + 2 * ((i + 1) % 3) + 1
        out.other[p] = m_next
        out.other[m_next] = p
    return out


def graph_edges(g):
    """Edges of the underlying graph as directed paths ``(h0, hw)``: leave
    the trivalent vertex of ``h0`` along ``h0``, go straight through
    crossings and arrive at the trivalent vertex of ``hw`` via ``hw``.

    Both directions of every edge are listed; loops are included.
    """
    out = []
    for v in g.vertices():
        if len(v) != 3:
            continue
        for h0 in v:
            x = h0
            while True:
                y = g.other[x]
                if g.valence(y) == 3:
                    out.append((h0, y))
                    break
                x = g.nxt[g.nxt[y]]
    return out


def _path(g, h0):
    half = []
    x = h0
    while True:
        half.append(x)
        y = g.other[x]
        half.append(y)
        if g.valence(y) == 3:
            return half, y
        x = g.nxt[g.nxt[y]]


class _Builder:
    """New half-edges plus ports standing for old half-edge sides."""

    def __init__(self):
        self.nxt = []
        self.under = []
        self.belt = []
        self.partner = {}
        self.ports = {}

    def crossing(self, flags, belts):
        first = len(self.nxt)
        for i in range(4):
            self.nxt.append(first + (i + 1) % 4)
            self.under.append(flags[i])
            self.belt.append(belts[i])
        return [first + i for i in range(4)]

    def join(self, a, b):
        self.partner[a] = b
        self.partner[b] = a

    def port(self, key, half):
        self.ports[key] = ("r", half)

    def wire(self, k1, k2):
        self.ports[k1] = ("w", k2)
        self.ports[k2] = ("w", k1)


def _unzip(g, h0, twist):
    half, hw = _path(g, h0)
    u = _vertex_of(g, h0)
    w = _vertex_of(g, hw)
    if len(u) != 3 or len(w) != 3:
        raise ValueError("unzip needs an edge between trivalent vertices")
    if set(u) == set(w):
        raise ValueError("unzip needs an edge between distinct vertices")
    doubled = set(half)
    b = _Builder()
    new_belt = max(g.belt, default=-1) + 1
    for v in g.vertices():
        if set(v) == set(u) or set(v) == set(w):
            continue
        if len(v) == 4 and any(h in doubled for h in v):
            c = v if v[0] in doubled else v[1:] + v[:1]
            _grid(g, b, c, c[1] in doubled)
            continue
        first = len(b.nxt)
        for i, h in enumerate(v):
            b.nxt.append(first + (i + 1) % len(v))
            b.under.append(g.under[h])
            b.belt.append(g.belt[h])
            b.port((h, _SINGLE), first + i)

    # start vertex: belt, then optionally the half-twist
    a1, a2 = g.nxt[h0], g.nxt[g.nxt[h0]]
    strand = (1, 0, 1, 0)
    belt_side = (0, 1, 0, 1)
    tags_top = (g.belt[a1], new_belt, g.belt[a1], new_belt)
    tags_bot = (g.belt[a2], new_belt, g.belt[a2], new_belt)
    tw = b.crossing(strand, tags_top)
    bw = b.crossing(strand, tags_bot)
    te = b.crossing(belt_side, tags_top)
    be = b.crossing(belt_side, tags_bot)
    b.port((a1, _SINGLE), tw[_W])
    b.port((a2, _SINGLE), bw[_W])
    b.join(tw[_S], bw[_N])
    b.join(tw[_E], te[_W])
    b.join(tw[_N], te[_N])
    b.join(bw[_E], be[_W])
    b.join(bw[_S], be[_S])
    b.join(te[_S], be[_N])
    if twist:
        # counter-clockwise: NE, NW, SW, SE; the strand from the top goes over
        x = b.crossing((1, 0, 1, 0), (-1, -1, -1, -1))
        ne, nw, sw, se = x
        b.join(nw, te[_E])
        b.join(sw, be[_E])
        b.port((h0, _LEFT), ne)
        b.port((h0, _RIGHT), se)
    else:
        b.port((h0, _LEFT), te[_E])
        b.port((h0, _RIGHT), be[_E])

    # end vertex disappears: its sides continue into the other two edges
    b1, b2 = g.nxt[hw], g.nxt[g.nxt[hw]]
    b.wire((hw, _LEFT), (b1, _SINGLE))
    b.wire((hw, _RIGHT), (b2, _SINGLE))

    conn = {}
    for x in range(len(g.other)):
        y = g.other[x]
        if x in doubled:
            # the left side of x is the right side of its partner
            conn[(x, _LEFT)] = (y, _RIGHT)
            conn[(x, _RIGHT)] = (y, _LEFT)
        else:
            conn[(x, _SINGLE)] = (y, _SINGLE)

    n = len(b.nxt)
    other = [-1] * n
    for h, p in b.partner.items():
        other[h] = p
    for key, (kind, h) in b.ports.items():
        if kind != "r":
            continue
        q = conn[key]
        for _ in range(len(conn) + 1):
            kind2, val = b.ports[q]
            if kind2 == "r":
                break
            q = conn[val]
        else:
            raise AssertionError("closed wire loop while unzipping")
        other[h] = val
    out = FatGraph(other, b.nxt, b.under, b.belt)
    return simplify_r1(out)


def _grid(g, b, c, both):
    """Replace crossing ``c`` (counter-clockwise, ``c[0]`` doubled) by
    2 or 4 crossings."""
    fa, fb = g.under[c[0]], g.under[c[1]]
    ta, tb = g.belt[c[0]], g.belt[c[1]]
    flags = (fa, fb, fa, fb)
    tags = (ta, tb, ta, tb)
    if not both:
        x1 = b.crossing(flags, tags)
        x2 = b.crossing(flags, tags)
        b.port((c[0], _LEFT), x1[_W])
        b.port((c[1], _SINGLE), x1[_S])
        b.port((c[2], _RIGHT), x1[_E])
        b.join(x1[_N], x2[_S])
        b.port((c[0], _RIGHT), x2[_W])
        b.port((c[2], _LEFT), x2[_E])
        b.port((c[3], _SINGLE), x2[_N])
        return
    q00, q01, q10, q11 = (b.crossing(flags, tags) for _ in range(4))
    b.port((c[0], _LEFT), q00[_W])
    b.port((c[1], _RIGHT), q00[_S])
    b.join(q00[_E], q01[_W])
    b.join(q00[_N], q10[_S])
    b.port((c[1], _LEFT), q01[_S])
    b.port((c[2], _RIGHT), q01[_E])
    b.join(q01[_N], q11[_S])
    b.port((c[0], _RIGHT), q10[_W])
    b.join(q10[_E], q11[_W])
    b.port((c[3], _LEFT), q10[_N])
    b.port((c[2], _LEFT), q11[_E])
    b.port((c[3], _RIGHT), q11[_N])


def u_move(g, h0):
    """Unzip the edge leaving along ``h0``, adding a belt next to its start."""
    return _unzip(g, h0, False)


def x_move(g, h0):
    """Like :func:`u_move` with a half-twist between the two strands."""
    return _unzip(g, h0, True)


def _compact(g, keep):
    index = {h: i for i, h in enumerate(keep)}
    return FatGraph([index[g.other[h]] for h in keep], [index[g.nxt[h]] for h in keep],
                    [g.under[h] for h in keep], [g.belt[h] for h in keep])


def simplify_r1(g):
    """Remove all kinks (crossings with two neighbouring half-edges forming
    an edge) until none is left."""
    g = g.copy()
    alive = [True] * len(g.other)
    changed = True
    while changed:
        changed = False
        for h in range(len(g.other)):
            if not alive[h] or g.valence(h) != 4 or g.other[h] != g.nxt[h]:
                continue
            p = g.nxt[g.nxt[h]]
            q = g.nxt[p]
            if g.other[p] == q:
                raise ValueError("diagram is a single kinked circle")
            op, oq = g.other[p], g.other[q]
            g.other[op] = oq
            g.other[oq] = op
            for x in (h, g.nxt[h], p, q):
                alive[x] = False
            changed = True
    return _compact(g, [h for h in range(len(alive)) if alive[h]])


def mirror(g):
    """Flip every crossing."""
    out = g.copy()
    for v in g.vertices():
        if len(v) == 4:
            for h in v:
                out.under[h] ^= 1
    return out


def swap_belt(g, belt):
    """Flip every crossing on the given belt."""
    out = g.copy()
    for v in g.vertices():
        if len(v) == 4 and any(g.belt[h] == belt for h in v):
            for h in v:
                out.under[h] ^= 1
    return out


@dataclass(frozen=True, order=True)
class FatGraphSig:
    """``entries[i]``: traversal index of the next half-edge of ``h_i``;
    ``flags[i]``: under flag plus 2 if ``h_i`` is on a belt."""

    entries: tuple
    flags: tuple

    def __str__(self):
        return "aug1:" + ".".join(str(x) for x in self.entries) + ":" + "".join(
            str(x) for x in self.flags)


def parse_fatgraph_sig(text):
    head, _, rest = text.partition(":")
    body, _, flags = rest.partition(":")
    if head != "aug1" or not body or not flags:
        raise ValueError(f"not a fat graph signature: {text!r}")
    try:
        entries = tuple(int(x) for x in body.split("."))
        fl = tuple(int(c) for c in flags)
    except ValueError:
        raise ValueError(f"not a fat graph signature: {text!r}") from None
    if len(entries) != len(fl):
        raise ValueError("entry and flag counts differ")
    return FatGraphSig(entries, fl)


def _traversal(g, start):
    n = len(g.other)
    idx = [-1] * n
    order = [start, g.other[start]]
    idx[start] = 0
    idx[order[1]] = 1
    ptr = 0
    while ptr < len(order):
        x = g.nxt[order[ptr]]
        if idx[x] == -1:
            idx[x] = len(order)
            order.append(x)
            y = g.other[x]
            idx[y] = len(order)
            order.append(y)
        ptr += 1
    return order, idx


def _group_of(g):
    """Crossing group of every half-edge: None at trivalent vertices, the
    belt id for belt crossings, 'm' for the others."""
    group = [None] * len(g.other)
    for v in g.vertices():
        if len(v) != 4:
            continue
        tags = [g.belt[h] for h in v if g.belt[h] >= 0]
        key = tags[0] if tags else "m"
        for h in v:
            group[h] = key
    return group


def _candidate(g, start, group):
    order, idx = _traversal(g, start)
    if len(order) != len(g.other):
        raise ValueError("diagram is not connected")
    entries = tuple(idx[g.nxt[h]] for h in order)
    flip = {}
    flags = []
    for h in order:
        key = group[h]
        f = g.under[h]
        if key is not None:
            if key not in flip:
                flip[key] = f
            f ^= flip[key]
        flags.append(f + 2 * (g.belt[h] >= 0))
    return entries, tuple(flags), order, flip


def canonical_form(g):
    """``(signature, canonical diagram)``: the diagram relabelled in the
    minimising traversal order with the crossing flips applied."""
    group = _group_of(g)
    best = None
    for start in range(len(g.other)):
        entries, flags, order, flip = _candidate(g, start, group)
        key = (entries, flags)
        if best is None or key < best[0]:
            best = (key, order, flip)
    (entries, flags), order, flip = best
    idx = {h: i for i, h in enumerate(order)}
    belt_ids = {}
    out = FatGraph([idx[g.other[h]] for h in order], [idx[g.nxt[h]] for h in order])
    for i, h in enumerate(order):
        key = group[h]
        out.under[i] = g.under[h] ^ (flip[key] if key is not None else 0)
        if g.belt[h] >= 0:
            out.belt[i] = belt_ids.setdefault(g.belt[h], len(belt_ids))
    return FatGraphSig(entries, flags), out


def fatgraph_sig(g):
    """Isomorphism signature, normalised under mirroring and belt swaps."""
    return canonical_form(g)[0]


def pd_export(g):
    """PD code: per crossing the strand labels counter-clockwise from the
    incoming under strand.  Components are oriented and labelled in the
    order of their smallest half-edge."""
    if any(len(v) != 4 for v in g.vertices()):
        raise ValueError("PD export needs a link diagram (no trivalent vertices)")
    n = len(g.other)
    label = [0] * n
    incoming = [False] * n
    done = [False] * n
    nxt_label = 1
    for h in range(n):
        if done[h]:
            continue
        x = h
        while not done[x]:
            y = g.other[x]
            done[x] = done[y] = True
            label[x] = label[y] = nxt_label
            incoming[y] = True
            nxt_label += 1
            x = g.nxt[g.nxt[y]]
        if x != h:
            raise AssertionError("component traversal did not close")
    pd = []
    for v in g.vertices():
        start = next(h for h in v if incoming[h] and g.under[h])
        x = start
        quad = []
        for _ in range(4):
            quad.append(label[x])
            x = g.nxt[x]
        pd.append(tuple(quad))
    return pd


def _children(g, phase_a):
    if phase_a:
        return [a_move(g, v[0]) for v in g.vertices()]
    out = []
    for h0, hw in graph_edges(g):
        if set(_vertex_of(g, h0)) == set(_vertex_of(g, hw)):
            continue
        out.append(u_move(g, h0))
        out.append(x_move(g, h0))
    return out


class _Seen:
    def __init__(self):
        self._keys = set()
        self._lock = threading.Lock()

    def add(self, key):
        with self._lock:
            if key in self._keys:
                return False
            self._keys.add(key)
            return True

    def __len__(self):
        return len(self._keys)


def _unzip_all(g, seen, results, lock):
    stack = [g]
    while stack:
        d = stack.pop()
        if d.num_trivalent() == 0:
            sig, canon = canonical_form(d)
            with lock:
                results[sig] = canon
            continue
        for child in _children(d, False):
            sig = fatgraph_sig(child)
            if seen.add(sig):
                stack.append(child)


def augktg_diagrams(num_a_moves, threads=1):
    """Diagrams from ``num_a_moves`` A-moves on K4 followed by unzips until
    no trivalent vertex is left, deduplicated by signature.  Returns a
    sorted list of ``(FatGraphSig, canonical FatGraph)``.

    With ``threads > 1`` the unzip phase runs one task per graph from the
    A-move phase; the seen-set is shared.
    """
    if num_a_moves < 0:
        raise ValueError("number of A-moves must be non-negative")
    level = {fatgraph_sig(k4()): k4()}
    for _ in range(num_a_moves):
        nxt_level = {}
        for g in level.values():
            for child in _children(g, True):
                nxt_level.setdefault(fatgraph_sig(child), child)
        level = nxt_level
    seen = _Seen()
    results = {}
    lock = threading.Lock()
    roots = [level[s] for s in sorted(level)]
    for r in roots:
        seen.add(fatgraph_sig(r))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(lambda r: _unzip_all(r, seen, results, lock), roots))
    else:
        for r in roots:
            _unzip_all(r, seen, results, lock)
    return [(sig, results[sig]) for sig in sorted(results)]


def enumerate_augktg(num_a_moves, threads=1):
    """Sorted list of ``(FatGraphSig, PD code)`` of the diagrams of
    :func:`augktg_diagrams`."""
    return [(sig, pd_export(g)) for sig, g in augktg_diagrams(num_a_moves, threads)]


def augktg_text(num_a_moves, entries):
    lines = [f"{sig} {pd}" for sig, pd in entries]
    lines.append(f"# a_moves {num_a_moves} unzips {num_a_moves + 2} "
                 f"octahedra {2 * (num_a_moves + 1)} diagrams {len(entries)}")
    return "\n".join(lines) + "\n"
