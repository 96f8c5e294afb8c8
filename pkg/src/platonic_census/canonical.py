"""Canonical reindexing, specialized isomorphism signatures and symmetries.

Starting from any simplex, the simplices of a barycentric Platonic
triangulation can be ordered deterministically: repeatedly take, among the
edges of the labelled dual 1-skeleton leaving the already ordered set, those
of lowest face label and of those the one at the earliest ordered simplex.
This ordering exhausts one solid before moving to the next and traverses
every solid the same way, so after reindexing the face 0, 1, 2 gluings are
fixed and only the face-3 column carries information.  The lexicographically
smallest face-3 column over all start simplices is the signature.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .solids import SchlafliType, solid_template
from .triangulation import Triangulation

__all__ = [
    "SpecializedIsoSig",
    "AutomorphismReport",
    "canonical_reindex",
    "specialized_iso_sig",
    "automorphisms",
    "dual",
    "is_self_dual",
    "serialize_sig",
    "parse_sig",
    "triangulation_from_sig",
    "SignatureError",
    "dual_classes",
]


class SignatureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SpecializedIsoSig:
    schlafli: SchlafliType
    entries: tuple

    def __post_init__(self):
        n = self.schlafli.solid_size
        if len(self.entries) % n:
            raise SignatureError(
                f"length {len(self.entries)} is not a multiple of the solid size {n}")

    @property
    def num_simplices(self):
        return len(self.entries)

    @property
    def num_solids(self):
        return len(self.entries) // self.schlafli.solid_size

    def __str__(self):
        return serialize_sig(self)


@dataclass(frozen=True)
class AutomorphismReport:
    """Combinatorial symmetries of a closed tessellation.

    ``orientation_reversing_exists`` is None for non-orientable input.
    """

    order: int
    orientation_reversing_exists: object
    flag_transitive: bool
    flag_transitive_oriented: bool
    num_flags: int

    @property
    def chiral(self):
        return self.orientation_reversing_exists is False

    @property
    def regular(self):
        """Flag-transitive, on right-handed flags when orientable."""
        if self.orientation_reversing_exists is None:
            return self.flag_transitive
        return self.flag_transitive_oriented


def _tree(t):
    tmpl = solid_template(t.schlafli.p, t.schlafli.q)
    return tmpl.tree_parent, tmpl.tree_label


def canonical_reindex(t, start):
    """Copy of ``t`` reindexed by the canonical ordering seeded at ``start``."""
    k = t.num_simplices
    if not 0 <= start < k:
        raise IndexError(f"start {start} out of range")
    par, lab = _tree(t)
    out = np.empty((k, 4), dtype=np.int32)
    if _kernels.reindex(t.data, par, lab, int(start), out) != k:
        raise ValueError("triangulation is not connected")
    return Triangulation(t.schlafli, out, orientable_mode=False)


def _sig_arrays(t):
    k = t.num_simplices
    par, lab = _tree(t)
    best = np.empty(k, dtype=np.int32)
    witnesses = np.empty(k, dtype=np.int32)
    n = _kernels.iso_sig(t.data, par, lab, best, witnesses)
    if n < 0:
        raise ValueError("triangulation is not connected")
    return best, witnesses[:n]


def specialized_iso_sig(t):
    best, _ = _sig_arrays(t)
    return SpecializedIsoSig(t.schlafli, tuple(best.tolist()))


def automorphisms(t):
    """Order and handedness of the combinatorial automorphism group.

    Every start simplex attaining the minimal tuple corresponds to exactly
    one label-preserving automorphism (the one taking the first witness to
    it).
    """
    if not t.is_closed():
        raise ValueError("automorphisms need a fully glued triangulation")
    k = t.num_simplices
    _, witnesses = _sig_arrays(t)
    color = np.empty(k, dtype=np.int32)
    orientable = _kernels.two_coloring(t.data, color)
    order = len(witnesses)
    if orientable:
        c0 = color[witnesses[0]]
        same = int(np.sum(color[witnesses] == c0))
        reversing = same != order
        oriented = same == k // 2
    else:
        reversing = None
        oriented = False
    return AutomorphismReport(order, reversing, order == k, oriented, k)


def dual(t):
    """Barycentric subdivision of the dual tessellation.

    Swaps the vertex roles 0<->3 and 1<->2.  Raises ValueError when the
    reversed symbol is not a census type (e.g. the dual of a cusped
    cubical tessellation would be {6,3,4}).
    """
    if not t.is_closed():
        raise ValueError("dual needs a fully glued triangulation")
    return Triangulation(t.schlafli.dual(), t.data[:, ::-1].copy(), orientable_mode=False)


def is_self_dual(t):
    return specialized_iso_sig(dual(t)).entries == specialized_iso_sig(t).entries


_PREFIX = "ptsig1"


def serialize_sig(sig):
    body = ",".join(str(e) for e in sig.entries)
    return f"{_PREFIX}:{sig.schlafli}:{len(sig.entries)}:{body}"


def parse_sig(text):
    """Inverse of :func:`serialize_sig`; errors report the character offset."""
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != _PREFIX:
        raise SignatureError(f"position 0: expected '{_PREFIX}:p,q,r:k:entries'")
    offset = len(parts[0]) + 1
    try:
        schlafli = SchlafliType.parse(parts[1])
    except ValueError as exc:
        raise SignatureError(f"position {offset}: {exc}") from None
    offset += len(parts[1]) + 1
    if not parts[2].isdigit():
        raise SignatureError(f"position {offset}: bad length {parts[2]!r}")
    k = int(parts[2])
    offset += len(parts[2]) + 1
    items = parts[3].split(",") if parts[3] else []
    if len(items) != k:
        raise SignatureError(f"position {offset}: expected {k} entries, got {len(items)}")
    entries = []
    for item in items:
        body = item[1:] if item.startswith("-") else item
        if not body.isdigit() or (item.startswith("-") and item != "-1"):
            raise SignatureError(f"position {offset}: bad entry {item!r}")
        value = int(item)
        if value >= k:
            raise SignatureError(f"position {offset}: entry {value} out of range")
        entries.append(value)
        offset += len(item) + 1
    for i, e in enumerate(entries):
        if e != -1 and entries[e] != i:
            raise SignatureError(f"entry {i}: face-3 gluing is not symmetric")
    return SpecializedIsoSig(schlafli, tuple(entries))


def triangulation_from_sig(sig):
    """The canonical triangulation encoded by ``sig``."""
    tmpl = solid_template(sig.schlafli.p, sig.schlafli.q)
    n = tmpl.size
    m = sig.num_solids
    data = np.empty((m * n, 4), dtype=np.int32)
    offsets = np.repeat(np.arange(m, dtype=np.int32) * n, n)
    data[:, :3] = np.tile(tmpl.canonical_nbrs, (m, 1)) + offsets[:, None]
    data[:, 3] = sig.entries
    return Triangulation(sig.schlafli, data, orientable_mode=False)


def dual_classes(sigs):
    """Merge each tessellation with its dual (self-dual types only).

    Returns a sorted list of ``(representative, members)`` where the
    representative is the smaller of the two signatures.
    """
    sigs = list(sigs)
    classes = {}
    for sig in sigs:
        if not sig.schlafli.self_dual:
            classes.setdefault(sig, {sig})
            continue
        other = specialized_iso_sig(dual(triangulation_from_sig(sig)))
        rep = min(sig, other)
        classes.setdefault(rep, set()).update({sig, other})
    return sorted((rep, sorted(members)) for rep, members in classes.items())
