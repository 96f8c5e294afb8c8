"""Compiled inner loops of the census search.

Triangulations are ``(k, 4)`` int32 arrays, ``t[s, i]`` being the simplex
glued to face ``i`` of simplex ``s`` (or -1).  All kernels release the GIL.
"""

import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def glue_faces(t, simp0, simp1, p):
    n = 0
    while t[simp0, 3] == -1 and t[simp1, 3] == -1:
        if simp0 == simp1:
            return False
        t[simp0, 3] = simp1
        t[simp1, 3] = simp0
        if n % 2 == 0:
            simp0 = t[simp0, 0]
            simp1 = t[simp1, 0]
        else:
            simp0 = t[simp0, 1]
            simp1 = t[simp1, 1]
        n += 1
    return n == 2 * p


@njit(**_opts)
def _edge01_classes(t, cls, orders, closed, ends, buf):
    """Label every simplex with its 01-edge class.

    ``cls[s]`` is the class representative, ``orders[s]`` the number of
    simplices about the edge, ``closed[s]`` whether the class is a cycle.
    For an open class ``ends[rep]`` holds its two end simplices (those with
    face 3 unglued).
    """
    k = t.shape[0]
    for s in range(k):
        cls[s] = -1
    for s in range(k):
        if cls[s] != -1:
            continue
        m = 0
        buf[m] = s
        m += 1
        cls[s] = s
        cur = s
        lab = 2
        is_closed = False
        end_a = -1
        while True:
            nxt = t[cur, lab]
            if nxt == -1:
                end_a = cur
                break
            if nxt == s:
                is_closed = True
                break
            cur = nxt
            cls[cur] = s
            buf[m] = cur
            m += 1
            lab = 5 - lab
        end_b = -1
        if not is_closed:
            cur = s
            lab = 3
            while True:
                nxt = t[cur, lab]
                if nxt == -1:
                    end_b = cur
                    break
                cur = nxt
                cls[cur] = s
                buf[m] = cur
                m += 1
                lab = 5 - lab
        for i in range(m):
            orders[buf[i]] = m
            closed[buf[i]] = is_closed
        ends[s, 0] = end_a
        ends[s, 1] = end_b


@njit(**_opts)
def fix_edges(t, p, r, orders):
    """Close 01-edges of order 2r and check edge orders and vertex-1 links.

    Mutates ``t``.  On return ``orders[s]`` is the 01-edge order of ``s``.
    Returns True for a valid triangulation.
    """
    k = t.shape[0]
    cls = np.empty(k, dtype=np.int32)
    closed = np.empty(k, dtype=np.bool_)
    ends = np.empty((k, 2), dtype=np.int32)
    buf = np.empty(k, dtype=np.int32)
    return _fix_edges(t, p, r, orders, cls, closed, ends, buf)


@njit(**_opts)
def _fix_edges(t, p, r, orders, cls, closed, ends, buf):
    k = t.shape[0]
    two_r = 2 * r
    while True:
        _edge01_classes(t, cls, orders, closed, ends, buf)
        glued = False
        for s in range(k):
            if cls[s] != s:
                continue
            if closed[s]:
                if orders[s] != two_r:
                    return False
            elif orders[s] > two_r:
                return False
            elif orders[s] == two_r:
                if not glue_faces(t, ends[s, 0], ends[s, 1], p):
                    return False
                glued = True
                break
        if not glued:
            break
    # the link of an edge midpoint is a projective plane iff both ends of
    # the edge fall into the same closed 01-edge class
    for s in range(k):
        if closed[s] and cls[t[s, 0]] == cls[s]:
            return False
    return True


@njit(**_opts)
def _add_solid(t, x, par, lab, order, new_index, stamp, mark, count):
    n = par.shape[0]
    order[count] = x
    new_index[x] = count
    stamp[x] = mark
    for j in range(1, n):
        y = t[order[count + par[j]], lab[j]]
        order[count + j] = y
        new_index[y] = count + j
        stamp[y] = mark
    return count + n


@njit(**_opts)
def solid_ids(t, sid):
    """Label every simplex with its solid (component under faces 0, 1, 2).

    Returns the number of solids.
    """
    k = t.shape[0]
    for s in range(k):
        sid[s] = -1
    stack = np.empty(k, dtype=np.int32)
    n = 0
    for root in range(k):
        if sid[root] != -1:
            continue
        sid[root] = n
        top = 1
        stack[0] = root
        while top > 0:
            top -= 1
            x = stack[top]
            for f in range(3):
                y = t[x, f]
                if y != -1 and sid[y] == -1:
                    sid[y] = n
                    stack[top] = y
                    top += 1
        n += 1
    return n


@njit(**_opts)
def _materialize(t, par, lab, order, new_index, stamp, mark, base, upto, made):
    # fill block positions made..upto-1 of the block starting at ``base``
    for j in range(made, upto):
        y = t[order[base + par[j]], lab[j]]
        order[base + j] = y
        new_index[y] = base + j
        stamp[y] = mark


@njit(**_opts)
def _scan_start(t, par, lab, sid, start, order, new_index, stamp, solid_mark,
                solid_block, made, cur, best, have_best):
    """Canonical face-3 tuple from ``start`` into ``cur``, compared on the fly
    with ``best``: returns -1 (smaller), 0 (equal), 1 (larger, abandoned)
    or 2 (disconnected)."""
    k = t.shape[0]
    n = par.shape[0]
    order[0] = start
    new_index[start] = 0
    stamp[start] = start
    solid_mark[sid[start]] = start
    solid_block[sid[start]] = 0
    made[0] = 1
    count = n
    state = 0
    for scan in range(k):
        if scan == count:
            return 2
        b = scan // n
        j = scan - b * n
        if made[b] <= j:
            _materialize(t, par, lab, order, new_index, stamp, start, b * n, j + 1, made[b])
            made[b] = j + 1
        nb = t[order[scan], 3]
        if nb == -1:
            val = -1
        else:
            so = sid[nb]
            if solid_mark[so] != start:
                # first visit of this solid: nb becomes the block root
                solid_mark[so] = start
                solid_block[so] = count // n
                order[count] = nb
                new_index[nb] = count
                stamp[nb] = start
                made[count // n] = 1
                val = count
                count += n
            else:
                if stamp[nb] != start:
                    bb = solid_block[so]
                    _materialize(t, par, lab, order, new_index, stamp, start,
                                 bb * n, n, made[bb])
                    made[bb] = n
                val = new_index[nb]
        if state == 0 and have_best:
            if val < best[scan]:
                state = -1
            elif val > best[scan]:
                return 1
        cur[scan] = val
    return state


@njit(**_opts)
def _iso_sig_starts(t, par, lab, sid, nsolids, starts, nstarts, best, witnesses):
    k = t.shape[0]
    order = np.empty(k, dtype=np.int32)
    new_index = np.empty(k, dtype=np.int32)
    stamp = np.full(k, -1, dtype=np.int32)
    solid_mark = np.full(nsolids, -1, dtype=np.int32)
    solid_block = np.empty(nsolids, dtype=np.int32)
    made = np.zeros(nsolids + 1, dtype=np.int32)
    cur = np.empty(k, dtype=np.int32)
    have_best = False
    nwit = 0
    for i in range(nstarts):
        start = starts[i]
        state = _scan_start(t, par, lab, sid, start, order, new_index, stamp,
                            solid_mark, solid_block, made, cur, best, have_best)
        if state == 2:
            return -1
        if state == 1:
            continue
        if not have_best or state == -1:
            for x in range(k):
                best[x] = cur[x]
            have_best = True
            nwit = 0
        witnesses[nwit] = start
        nwit += 1
    return nwit


@njit(**_opts)
def iso_sig(t, par, lab, best, witnesses):
    """Specialized isomorphism signature of ``t``.

    Writes the minimal face-3 tuple into ``best`` and the start simplices
    attaining it into ``witnesses``; returns the number of witnesses, or -1
    if ``t`` is disconnected.

    Solids are laid out lazily: a block of the canonical order is only
    filled as far as the scan has reached, or completely once some simplex
    in it has to be looked up.
    """
    k = t.shape[0]
    sid = np.empty(k, dtype=np.int32)
    nsolids = solid_ids(t, sid)
    starts = np.arange(k).astype(np.int32)
    return _iso_sig_starts(t, par, lab, sid, nsolids, starts, k, best, witnesses)


@njit(**_opts)
def template_positions(block, par, lab, seq):
    """``seq[f, j]``: the flag at position ``j`` of the canonical traversal
    of a single solid started at flag ``f``."""
    n = block.shape[0]
    for f in range(n):
        seq[f, 0] = f
        for j in range(1, n):
            seq[f, j] = block[seq[f, par[j]], lab[j]]


@njit(**_opts)
def iso_sig_blocked(t, par, lab, seq, best, witnesses):
    """:func:`iso_sig` for triangulations laid out as the search builds
    them: simplex ``b * n + f`` is flag ``f`` of solid ``b``.

    Only starts whose first glued face-3 position in their own solid is
    maximal can attain the minimum (up to there every start reads -1), so
    the others are dropped before scanning.  ``seq`` comes from
    :func:`template_positions`.  Same output as ``iso_sig``.
    """
    k = t.shape[0]
    n = par.shape[0]
    nsolids = k // n
    sid = np.empty(k, dtype=np.int32)
    for s in range(k):
        sid[s] = s // n
    first = np.empty(k, dtype=np.int32)
    gmax = -1
    for b in range(nsolids):
        base = b * n
        for f in range(n):
            g = 0
            while g < n and t[base + seq[f, g], 3] == -1:
                g += 1
            first[base + f] = g
            if g > gmax:
                gmax = g
    starts = np.empty(k, dtype=np.int32)
    nstarts = 0
    for s in range(k):
        if first[s] == gmax:
            starts[nstarts] = s
            nstarts += 1
    return _iso_sig_starts(t, par, lab, sid, nsolids, starts, nstarts, best, witnesses)


@njit(**_opts)
def reindex(t, par, lab, start, out):
    """Canonically reindexed copy of ``t`` from ``start`` into ``out``.

    Returns the number of simplices reached.
    """
    k = t.shape[0]
    order = np.empty(k, dtype=np.int32)
    new_index = np.empty(k, dtype=np.int32)
    stamp = np.full(k, -1, dtype=np.int32)
    count = _add_solid(t, start, par, lab, order, new_index, stamp, 0, 0)
    scan = 0
    while scan < count:
        nb = t[order[scan], 3]
        if nb != -1 and stamp[nb] != 0:
            count = _add_solid(t, nb, par, lab, order, new_index, stamp, 0, count)
        scan += 1
    for j in range(count):
        s = order[j]
        for i in range(4):
            nb = t[s, i]
            out[j, i] = -1 if nb == -1 else new_index[nb]
    return count


@njit(**_opts)
def two_coloring(t, color):
    """Proper 2-colouring of the dual graph; returns False if none exists."""
    k = t.shape[0]
    for s in range(k):
        color[s] = -1
    stack = np.empty(k, dtype=np.int32)
    for root in range(k):
        if color[root] != -1:
            continue
        color[root] = 0
        top = 0
        stack[top] = root
        top += 1
        while top > 0:
            top -= 1
            s = stack[top]
            for i in range(4):
                nb = t[s, i]
                if nb == -1:
                    continue
                if color[nb] == -1:
                    color[nb] = 1 - color[s]
                    stack[top] = nb
                    top += 1
                elif color[nb] == color[s]:
                    return False
    return True


@njit(**_opts)
def _scan_deduce(table, qc, qx, nq, ptr, rel_start, rel_len, letters, tc, tx, ntrail):
    """Process the deduction queue.

    Returns the new trail length, or ``-1 - length`` on a contradiction.
    """
    while nq > 0:
        nq -= 1
        c = qc[nq]
        x = qx[nq]
        for r in range(ptr[x], ptr[x + 1]):
            s0 = rel_start[r]
            L = rel_len[r]
            f = c
            i = 0
            while i < L and table[f, letters[s0 + i]] != -1:
                f = table[f, letters[s0 + i]]
                i += 1
            if i == L:
                if f != c:
                    return -1 - ntrail
                continue
            b = c
            j = L
            while j > i and table[b, letters[s0 + j - 1] ^ 1] != -1:
                b = table[b, letters[s0 + j - 1] ^ 1]
                j -= 1
            if j == i:
                if f != b:
                    return -1 - ntrail
            elif j == i + 1:
                y = letters[s0 + i]
                if table[b, y ^ 1] != -1:
                    return -1 - ntrail
                table[f, y] = b
                table[b, y ^ 1] = f
                tc[ntrail] = f
                tx[ntrail] = y
                ntrail += 1
                qc[nq] = f
                qx[nq] = y
                nq += 1
                qc[nq] = b
                qx[nq] = y ^ 1
                nq += 1
    return ntrail


@njit(**_opts)
def low_index_tables(n, cols, ptr, rel_start, rel_len, letters, out):
    """Enumerate standard coset tables of index exactly ``n``.

    Relator rotations starting with column ``x`` are
    ``ptr[x]..ptr[x+1]``; rotation ``r`` is
    ``letters[rel_start[r]:rel_start[r]+rel_len[r]]``.  Columns come in
    pairs ``2i``, ``2i+1`` (generator, inverse).  Complete tables are written
    to ``out`` while there is room; returns the total number found.
    """
    size = n * cols
    table = np.full((n, cols), -1, dtype=np.int32)
    tc = np.empty(size + 2, dtype=np.int32)
    tx = np.empty(size + 2, dtype=np.int32)
    qc = np.empty(2 * size + 4, dtype=np.int32)
    qx = np.empty(2 * size + 4, dtype=np.int32)
    fm = np.empty(size + 1, dtype=np.int32)
    fpos = np.empty(size + 1, dtype=np.int32)
    fnext = np.empty(size + 1, dtype=np.int32)
    fmark = np.empty(size + 1, dtype=np.int32)
    ntrail = 0
    nfound = 0
    depth = 0
    fm[0] = 1
    fpos[0] = 0
    fnext[0] = 0
    fmark[0] = 0
    while depth >= 0:
        m = fm[depth]
        pos = fpos[depth]
        c = pos // cols
        x = pos % cols
        y = x ^ 1
        while ntrail > fmark[depth]:
            ntrail -= 1
            a = tc[ntrail]
            z = tx[ntrail]
            d = table[a, z]
            table[a, z] = -1
            table[d, z ^ 1] = -1
        d = fnext[depth]
        while d < m and table[d, y] != -1:
            d += 1
        if d > m or (d == m and m >= n):
            depth -= 1
            continue
        fnext[depth] = d + 1
        table[c, x] = d
        table[d, y] = c
        tc[ntrail] = c
        tx[ntrail] = x
        ntrail += 1
        qc[0] = c
        qx[0] = x
        qc[1] = d
        qx[1] = y
        res = _scan_deduce(table, qc, qx, 2, ptr, rel_start, rel_len, letters, tc, tx, ntrail)
        if res < 0:
            ntrail = -1 - res
            continue
        ntrail = res
        m2 = m if d < m else m + 1
        p2 = pos + 1
        while p2 < m2 * cols and table[p2 // cols, p2 % cols] != -1:
            p2 += 1
        if p2 == m2 * cols:
            if m2 == n:
                if nfound < out.shape[0]:
                    out[nfound] = table
                nfound += 1
            continue
        depth += 1
        fm[depth] = m2
        fpos[depth] = p2
        fnext[depth] = 0
        fmark[depth] = ntrail
    return nfound


@njit(**_opts)
def expand_node(t, simp0, block, grow, step, p, r, par, lab, seq, out_t, out_k, out_key, out_next):
    """All valid children of ``t`` obtained by gluing face 3 of ``simp0``.

    The first candidate is a fresh solid (if ``grow``), then every open
    simplex ``simp1`` with ``simp1 % step == 0`` in increasing order.  Each
    child is completed by ``fix_edges``; the valid ones are written to
    ``out_t[i, :out_k[i]]`` together with their signature ``out_key[i]``
    and the next simplex to glue (``out_next[i]``, -1 when closed).
    Returns the number of children written.
    """
    k = t.shape[0]
    n = block.shape[0]
    kmax = out_t.shape[1]
    cls = np.empty(kmax, dtype=np.int32)
    closed = np.empty(kmax, dtype=np.bool_)
    ends = np.empty((kmax, 2), dtype=np.int32)
    buf = np.empty(kmax, dtype=np.int32)
    orders = np.empty(kmax, dtype=np.int32)
    wit = np.empty(kmax, dtype=np.int32)
    stamp = np.zeros(kmax, dtype=np.int32)
    pending = np.empty(kmax + 2 * p, dtype=np.int32)
    # 01-edge classes of the parent, for the pre-check below
    pcls = np.empty(k, dtype=np.int32)
    pord = np.empty(k, dtype=np.int32)
    _edge01_classes(t, pcls, pord, closed[:k], ends[:k], buf[:k])
    face0 = np.empty(2 * p, dtype=np.int32)
    on_face0 = np.zeros(k, dtype=np.bool_)
    cur = simp0
    for i in range(2 * p):
        face0[i] = cur
        on_face0[cur] = True
        cur = t[cur, 0] if i % 2 == 0 else t[cur, 1]
    scratch = np.empty((4, 4 * p), dtype=np.int32)
    count = 0
    first = -1 if grow else 0
    for cand in range(first, k):
        if cand >= 0:
            if t[cand, 3] != -1 or cand % step != 0 or on_face0[cand]:
                continue
            if not _merge_ok(t, face0, cand, pcls, pord, 2 * r, scratch):
                continue
        kk = k + n if cand == -1 else k
        child = out_t[count, :kk]
        child[:k] = t
        if cand == -1:
            for i in range(n):
                child[k + i, 0] = block[i, 0] + k
                child[k + i, 1] = block[i, 1] + k
                child[k + i, 2] = block[i, 2] + k
                child[k + i, 3] = -1
            target = k
        else:
            target = cand
        if not glue_faces(child, simp0, target, p):
            continue
        if not _fix_local(child, simp0, p, r, buf, stamp, pending):
            continue
        _edge01_classes(child, cls[:kk], orders[:kk], closed[:kk], ends[:kk], buf[:kk])
        iso_sig_blocked(child, par, lab, seq, out_key[count, :kk], wit[:kk])
        nxt = -1
        best = -1
        for s in range(1, kk, 2):
            if child[s, 3] == -1 and orders[s] > best:
                best = orders[s]
                nxt = s
        if nxt == -1:
            # every open face has simplices of both parities
            for s in range(kk):
                if child[s, 3] == -1:
                    nxt = s
                    break
        out_k[count] = kk
        out_next[count] = nxt
        count += 1
    return count


@njit(**_opts)
def _walk01(t, s, buf, stamp, mark):
    """Collect the 01-edge class of ``s`` into ``buf``.

    Returns ``(m, closed, end_a, end_b)``; members get ``stamp = mark``.
    """
    m = 0
    buf[m] = s
    m += 1
    stamp[s] = mark
    cur = s
    lab = 2
    while True:
        nxt = t[cur, lab]
        if nxt == -1:
            break
        if nxt == s:
            return m, True, -1, -1
        cur = nxt
        buf[m] = cur
        m += 1
        stamp[cur] = mark
        lab = 5 - lab
    end_a = cur
    cur = s
    lab = 3
    while True:
        nxt = t[cur, lab]
        if nxt == -1:
            break
        cur = nxt
        buf[m] = cur
        m += 1
        stamp[cur] = mark
        lab = 5 - lab
    return m, False, end_a, cur


@njit(**_opts)
def _fix_local(t, simp0, p, r, buf, stamp, pending):
    """``fix_edges`` after gluing the face through ``simp0`` into a valid
    triangulation: only the 01-edges about newly glued faces can change."""
    two_r = 2 * r
    npend = 0
    cur = simp0
    for i in range(2 * p):
        pending[npend] = cur
        npend += 1
        cur = t[cur, 0] if i % 2 == 0 else t[cur, 1]
    mark = stamp.max() + 1
    while npend > 0:
        npend -= 1
        s = pending[npend]
        m, closed, end_a, end_b = _walk01(t, s, buf, stamp, mark)
        mark += 1
        if closed:
            if m != two_r:
                return False
            # projective-plane link of the edge midpoint
            if stamp[t[s, 0]] == mark - 1:
                return False
        elif m > two_r:
            return False
        elif m == two_r:
            if not glue_faces(t, end_a, end_b, p):
                return False
            cur = end_a
            for i in range(2 * p):
                pending[npend] = cur
                npend += 1
                cur = t[cur, 0] if i % 2 == 0 else t[cur, 1]
    return True


@njit(**_opts)
def _merge_ok(t, face0, cand, pcls, pord, two_r, scratch):
    """Necessary condition for gluing the face through ``cand`` to ``face0``.

    Gluing joins the open 01-edge class ending at ``face0[i]`` with the one
    ending at the i-th simplex of the other face.  Classes chained this way
    must not exceed order 2r, and a chain that closes up must have exactly
    that order.  This is what the first round of ``fix_edges`` would check,
    without touching the triangulation.
    """
    np2 = face0.shape[0]
    a = face0[0]
    if pcls[a] != pcls[cand] and pord[a] + pord[cand] > two_r:
        return False
    reps = scratch[0]
    parent = scratch[1]
    total = scratch[2]
    nedge = scratch[3]
    m = 0
    b = cand
    for i in range(np2):
        a = face0[i]
        ia = _local(reps, parent, total, nedge, m, pcls[a], pord[a])
        if ia == m:
            m += 1
        ib = _local(reps, parent, total, nedge, m, pcls[b], pord[b])
        if ib == m:
            m += 1
        ra = _find(parent, ia)
        rb = _find(parent, ib)
        if ra != rb:
            parent[rb] = ra
            total[ra] += total[rb]
            nedge[ra] += nedge[rb]
        nedge[ra] += 1
        if total[ra] > two_r:
            return False
        b = t[b, 0] if i % 2 == 0 else t[b, 1]
    for i in range(m):
        if parent[i] == i and nedge[i] == _size(parent, m, i) and total[i] != two_r:
            # every class in the chain has both ends glued: a closed edge
            return False
    return True


@njit(**_opts)
def _local(reps, parent, total, nedge, m, rep, order):
    for i in range(m):
        if reps[i] == rep:
            return i
    reps[m] = rep
    parent[m] = m
    total[m] = order
    nedge[m] = 0
    return m


@njit(**_opts)
def _find(parent, i):
    while parent[i] != i:
        i = parent[i]
    return i


@njit(**_opts)
def _size(parent, m, root):
    n = 0
    for i in range(m):
        if _find(parent, i) == root:
            n += 1
    return n
