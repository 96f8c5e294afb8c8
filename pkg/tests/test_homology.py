"""Homology: Smith form against determinantal divisors, H1 against mod-p
ranks of the dual cellular chain complex."""

from itertools import combinations
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from platonic_census import AbelianGroup, first_homology, smith_form, triangulation_from_sig
from platonic_census.homology import (
    Presentation, abelian_group_from_matrix, fundamental_group_presentation,
    invariant_factors, simplify_presentation,
)

PRIMES = (2, 3, 5, 7)


def det(m):
    # exact Laplace expansion, fine for the small minors used here
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)) if m[0][j])


def determinantal_divisors(a):
    rows, cols = len(a), len(a[0])
    out = []
    for i in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), i):
            for cs in combinations(range(cols), i):
                g = gcd(g, det([[a[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g)
    return out


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@given(matrices)
def test_smith_form_matches_determinantal_divisors(a):
    torsion, rank = invariant_factors(a, len(a[0]))
    dd = determinantal_divisors(a)
    assert rank == len(dd) == np.linalg.matrix_rank(np.array(a, dtype=float))
    chain = [1] * (rank - len(torsion)) + torsion
    prod = 1
    for d, expect in zip(chain, dd):
        prod *= d
        assert prod == expect


@given(matrices)
def test_smith_transform_is_unimodular(a):
    diag, q = smith_form(a, len(a[0]), transform=True)
    det_q = round(np.linalg.det(np.array(q, dtype=float)))
    assert abs(det_q) == 1
    # A Q has the same row lattice as a diagonal matrix, so its column
    # gcds divide into the diagonal entries
    aq = np.array(a) @ np.array(q)
    for j, d in enumerate(diag):
        assert np.all(aq[:, j] % d == 0)
    assert np.all(aq[:, len(diag):] == 0)


def test_abelian_group_normal_form():
    g = AbelianGroup.from_factors(1, [2, 3, 0, 4, 1])
    assert g == AbelianGroup(2, (2, 12))
    assert str(g) == "Z^2 + Z/2 + Z/12"
    assert AbelianGroup.parse(g.compact()) == g
    assert str(AbelianGroup(0, (5, 5, 5))) == "(Z/5)^3"
    assert AbelianGroup(0, (3, 3)).order == 9
    assert AbelianGroup(0, ()).is_trivial
    with pytest.raises(ValueError):
        AbelianGroup(0, (2, 3))


def test_group_from_matrix():
    assert abelian_group_from_matrix([[2, 0], [0, 3]], 2) == AbelianGroup(0, (6,))
    assert abelian_group_from_matrix([[2, 4, 0]], 3) == AbelianGroup(2, (2,))


def boundary_matrices(t):
    """Dual cellular chain complex: simplices, glued face pairs, edge classes."""
    d = t.data
    k = len(d)
    dual_edges = {}
    for s in range(k):
        for f in range(4):
            o = int(d[s, f])
            if s < o:
                dual_edges[(s, f)] = len(dual_edges)
    d1 = np.zeros((k, len(dual_edges)), dtype=np.int64)
    for (s, f), j in dual_edges.items():
        d1[s, j] -= 1
        d1[d[s, f], j] += 1
    rows = []
    for a, b in combinations(range(4), 2):
        c, e = (x for x in range(4) if x not in (a, b))
        seen = set()
        for s in range(k):
            if s in seen:
                continue
            row = np.zeros(len(dual_edges), dtype=np.int64)
            cur, lab = s, c
            while True:
                seen.add(cur)
                o = int(d[cur, lab])
                if cur < o:
                    row[dual_edges[(cur, lab)]] += 1
                else:
                    row[dual_edges[(o, lab)]] -= 1
                cur, lab = o, (e if lab == c else c)
                if cur == s and lab == c:
                    break
            rows.append(row)
    return d1, np.array(rows).T


def rank_mod(m, p):
    m = m.copy() % p
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
        if r == rows:
            break
    return r


def test_chain_complex_is_a_complex(census):
    t = triangulation_from_sig(census((3, 4, 4), 1, True)[0])
    d1, d2 = boundary_matrices(t)
    assert not np.any(d1 @ d2)


CASES = [((3, 3, 6), 3, True), ((3, 3, 6), 3, False), ((3, 4, 4), 1, False),
         ((4, 3, 6), 1, True), ((3, 5, 3), 1, True)]


@pytest.mark.parametrize("case", CASES)
def test_h1_matches_mod_p_ranks(case, census):
    for sig in census(*case):
        t = triangulation_from_sig(sig)
        h1 = first_homology(t)
        d1, d2 = boundary_matrices(t)
        nedges = d1.shape[1]
        for p in PRIMES:
            dim = nedges - rank_mod(d1, p) - rank_mod(d2, p)
            assert dim == h1.rank + sum(1 for x in h1.torsion if x % p == 0), (sig, p)
        # rational rank
        q_rank = nedges - np.linalg.matrix_rank(d1) - np.linalg.matrix_rank(d2)
        assert q_rank == h1.rank


def test_simplification_preserves_h1(census):
    for sig in census((3, 4, 4), 1, True):
        pres = fundamental_group_presentation(triangulation_from_sig(sig))
        small, _ = simplify_presentation(pres)
        assert small.num_generators <= pres.num_generators
        assert first_homology(small) == first_homology(pres)


def test_presentation_h1():
    # trefoil group <x, y | x y x = y x y> has H1 = Z
    pres = Presentation(2, [[1, 2, 1, -2, -1, -2]])
    assert first_homology(pres) == AbelianGroup(1, ())
