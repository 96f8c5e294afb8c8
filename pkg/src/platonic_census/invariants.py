"""Invariant profiles, grouping of tessellations and provisional names.

The base profile of a tessellation is orientability, number of cusps, H1
and the homology of all covers of degree 2 and 3.  Two profiles that are
known to collide get escalated:

* H1 = (Z/5)^3 with no covers of degree 2 or 3: add the cyclic 5-fold covers
* H1 = Z/29 with no covers of degree 2 or 3: add all 6-fold covers

Further rules can be supplied by the caller as a function from the current
profile to a list of ``(degree, cyclic_only)`` requests.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .canonical import serialize_sig, triangulation_from_sig
from .covers import covers
from .homology import (
    AbelianGroup,
    first_homology,
    fundamental_group_presentation,
    simplify_presentation,
)
from .triangulation import is_orientable, vertex_links

__all__ = [
    "InvariantProfile",
    "profile",
    "group_by_profile",
    "is_homology_link",
    "num_cusps",
    "provisional_names",
    "profile_line",
    "partition_text",
    "BUILTIN_ESCALATIONS",
]

log = logging.getLogger(__name__)

BUILTIN_ESCALATIONS = (
    (AbelianGroup(0, (5, 5, 5)), 5, True),
    (AbelianGroup(0, (29,)), 6, False),
)


@dataclass(frozen=True, order=True)
class InvariantProfile:
    orientable: bool
    num_cusps: int
    h1: AbelianGroup
    covers: tuple = ()

    def cover_summary(self):
        return "|".join(str(c) for c in self.covers) or "-"


def num_cusps(t):
    """Number of label-0 vertex classes of a cusped tessellation, else 0."""
    if not t.schlafli.cusped:
        return 0
    return sum(1 for lk in vertex_links(t) if lk.label == 0)


def profile(t, escalation=None):
    """Invariant profile of a fully glued tessellation (or of a signature)."""
    if not hasattr(t, "data"):
        t = triangulation_from_sig(t)
    pres, _ = simplify_presentation(fundamental_group_presentation(t))
    h1 = first_homology(pres)
    recs = covers(pres, 2, presentation=pres) + covers(pres, 3, presentation=pres)
    base = InvariantProfile(is_orientable(t), num_cusps(t), h1, tuple(sorted(recs)))
    requests = []
    if not recs:
        requests += [(deg, cyc) for group, deg, cyc in BUILTIN_ESCALATIONS if group == h1]
    if escalation is not None:
        requests += list(escalation(base))
    done = set()
    for deg, cyc in requests:
        if (deg, cyc) in done:
            continue
        done.add((deg, cyc))
        recs = recs + covers(pres, deg, cyclic_only=cyc, presentation=pres)
    return InvariantProfile(base.orientable, base.num_cusps, h1, tuple(sorted(recs)))


def is_homology_link(t):
    """H1 is free abelian of rank equal to the number of cusps."""
    if not hasattr(t, "data"):
        t = triangulation_from_sig(t)
    if not t.schlafli.cusped:
        raise ValueError("homology links are defined for cusped tessellations only")
    if not t.is_closed():
        raise ValueError("tessellation is not fully glued")
    h1 = first_homology(t)
    return not h1.torsion and h1.rank == num_cusps(t)


def group_by_profile(sigs, escalation=None, threads=1):
    """Partition signatures into groups of equal profile.

    Returns ``(groups, profiles)``: groups are sorted lists of signatures,
    ordered by solid count and then by their first signature; ``profiles``
    maps each signature to its profile.
    """
    sigs = sorted(set(sigs))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            profs = list(pool.map(lambda s: profile(s, escalation), sigs))
    else:
        profs = [profile(s, escalation) for s in sigs]
    by_profile = {}
    for sig, prof in zip(sigs, profs):
        by_profile.setdefault((sig.num_solids, prof), []).append(sig)
    groups = sorted(by_profile.values(), key=lambda g: (g[0].num_solids, g[0]))
    return groups, dict(zip(sigs, profs))


def provisional_names(groups, profiles):
    """Names in the census scheme, prefixed with '~' since the indices are
    ours: orientability, solid, 'cld' for closed, solid count, index and a
    '#i' suffix for groups with several tessellations."""
    names = {}
    counters = {}
    for group in groups:
        first = group[0]
        s = first.schlafli
        o = "o" if profiles[first].orientable else "n"
        key = (o, first.num_solids)
        idx = counters.get(key, 0)
        counters[key] = idx + 1
        base = f"~{o}{s.solid}{'' if s.cusped else 'cld'}{first.num_solids:02d}_{idx:05d}"
        for j, sig in enumerate(group):
            names[sig] = f"{base}#{j}" if len(group) > 1 else base
    return names


def profile_line(sig, prof):
    return (f"{serialize_sig(sig)} {'yes' if prof.orientable else 'no'} {prof.num_cusps} "
            f"{prof.h1.compact()} {prof.cover_summary()}")


def partition_text(groups, profiles):
    names = provisional_names(groups, profiles)
    blocks = []
    for group in groups:
        blocks.append("\n".join(f"{names[s]} {serialize_sig(s)}" for s in group))
    return "\n\n".join(blocks) + "\n"
