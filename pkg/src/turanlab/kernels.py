"""Hot inner loops over bitset adjacency.

Adjacency arrives as ``uint64[n, W]`` with vertex ``v`` stored at word
``v >> 6``, bit ``v & 63``.  Every kernel is decorated with
:func:`turanlab._accel.jit`, so the same source serves both backends.
"""
import numpy as np

from ._accel import JIT, jit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)

INT64_MAX = np.iinfo(np.int64).max

if JIT:
    _M1 = np.uint64(0x5555555555555555)
    _M2 = np.uint64(0x3333333333333333)
    _M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    _H01 = np.uint64(0x0101010101010101)
    _S1 = np.uint64(1)
    _S2 = np.uint64(2)
    _S4 = np.uint64(4)
    _S56 = np.uint64(56)

    @jit
    def popcount64(x):
        x = x - ((x >> _S1) & _M1)
        x = (x & _M2) + ((x >> _S2) & _M2)
        x = (x + (x >> _S4)) & _M4
        return np.int64((x * _H01) >> _S56)

    @jit
    def ctz64(x):
        return popcount64(x ^ (x - _ONE)) - 1

else:

    def popcount64(x):
        return int(x).bit_count()

    def ctz64(x):
        x = int(x)
        return (x & -x).bit_length() - 1


@jit
def _pop_lowest(cand, d, W):
    for w in range(W):
        x = cand[d, w]
        if x != _ZERO:
            b = ctz64(x)
            cand[d, w] = x & (x - _ONE)
            return w * 64 + b
    return -1


@jit
def _release(used, v):
    used[v >> 6] &= ~(_ONE << np.uint64(v & 63))


@jit
def _fill(cand, d, adj, active, used, back, nback, pin, img):
    W = active.shape[0]
    for w in range(W):
        m = active[w] & ~used[w]
        for t in range(nback[d]):
            m &= adj[img[back[d, t]], w]
        cand[d, w] = m
    p = pin[d]
    if p >= 0:
        pw = p >> 6
        keep = cand[d, pw] & (_ONE << np.uint64(p & 63))
        for w in range(W):
            cand[d, w] = _ZERO
        cand[d, pw] = keep


@jit
def count_inj_kernel(adj, active, back, nback, pin, limit):
    """Count injective homomorphisms by backtracking over a fixed order.

    Position ``i`` of the order must map into the common neighbourhood of the
    images of ``back[i, :nback[i]]``; ``pin[i] >= 0`` forces the image.  The
    last level is counted by popcount instead of being enumerated.

    Returns ``(count, overflowed)``.  With ``limit > 0`` the kernel stops as
    soon as the running total would exceed ``limit``.
    """
    k = nback.shape[0]
    W = active.shape[0]
    total = 0
    if k == 0:
        return 1, False
    cand = np.zeros((k, W), dtype=np.uint64)
    img = np.full(k, -1, dtype=np.int64)
    used = np.zeros(W, dtype=np.uint64)
    d = 0
    _fill(cand, 0, adj, active, used, back, nback, pin, img)
    while True:
        if d == k - 1:
            c = 0
            for w in range(W):
                c += popcount64(cand[d, w])
            if limit > 0 and total > limit - c:
                return total, True
            total += c
            d -= 1
            if d < 0:
                break
            _release(used, img[d])
            continue
        v = _pop_lowest(cand, d, W)
        if v < 0:
            d -= 1
            if d < 0:
                break
            _release(used, img[d])
            continue
        img[d] = v
        used[v >> 6] |= _ONE << np.uint64(v & 63)
        d += 1
        _fill(cand, d, adj, active, used, back, nback, pin, img)
    return total, False


@jit
def has_clique_kernel(adj, active, k):
    """True iff the active vertices span a clique on ``k`` vertices."""
    if k <= 0:
        return True
    W = active.shape[0]
    cand = np.zeros((k, W), dtype=np.uint64)
    for w in range(W):
        cand[0, w] = active[w]
    d = 0
    while d >= 0:
        cnt = 0
        for w in range(W):
            cnt += popcount64(cand[d, w])
        if d + cnt < k:
            d -= 1
            continue
        v = _pop_lowest(cand, d, W)
        if d + 1 == k:
            return True
        for w in range(W):
            cand[d + 1, w] = cand[d, w] & adj[v, w]
        d += 1
    return False


@jit
def max_rpartite_kernel(bptr, bidx, r):
    """Exact maximum r-partite subgraph by ordered colour assignment.

    ``bidx[bptr[i]:bptr[i+1]]`` lists the neighbours ``j < i`` of vertex
    ``i``.  Vertex ``i`` may use colour ``c`` only if colours ``0..c-1`` are
    already in use, and branches that cannot beat the incumbent are cut.
    Colours are tried in increasing order and only strict improvements are
    kept, so the result is the lexicographically first optimal colouring.
    """
    n = bptr.shape[0] - 1
    color = np.zeros(n, dtype=np.int64)
    best_color = np.zeros(n, dtype=np.int64)
    best = -1
    if n == 0:
        return 0, best_color
    rem = np.zeros(n + 1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        rem[i] = rem[i + 1] + (bptr[i + 1] - bptr[i])
    tryc = np.zeros(n + 1, dtype=np.int64)
    kept = np.zeros(n + 1, dtype=np.int64)
    opened = np.zeros(n + 1, dtype=np.int64)
    d = 0
    while d >= 0:
        if d == n:
            if kept[n] > best:
                best = kept[n]
                for i in range(n):
                    best_color[i] = color[i]
            d -= 1
            continue
        if kept[d] + rem[d] <= best:
            d -= 1
            continue
        c = tryc[d]
        top = opened[d]
        if top > r - 1:
            top = r - 1
        if c > top:
            d -= 1
            continue
        tryc[d] = c + 1
        color[d] = c
        same = 0
        for t in range(bptr[d], bptr[d + 1]):
            if color[bidx[t]] == c:
                same += 1
        kept[d + 1] = kept[d] + (bptr[d + 1] - bptr[d]) - same
        opened[d + 1] = opened[d] if opened[d] > c + 1 else c + 1
        tryc[d + 1] = 0
        d += 1
    return best, best_color


@jit
def local_search_kernel(nptr, nidx, r, color):
    """Best-improvement single-vertex recolouring to a local optimum.

    ``color`` is modified in place.  Ties go to the lowest vertex, then the
    lowest colour.  Returns the number of moves made.
    """
    n = nptr.shape[0] - 1
    cnt = np.zeros((n, r), dtype=np.int64)
    for v in range(n):
        for t in range(nptr[v], nptr[v + 1]):
            cnt[v, color[nidx[t]]] += 1
    moves = 0
    while True:
        best_gain = 0
        bv = -1
        bc = -1
        for v in range(n):
            a = color[v]
            for c in range(r):
                g = cnt[v, a] - cnt[v, c]
                if g > best_gain:
                    best_gain = g
                    bv = v
                    bc = c
        if bv < 0:
            return moves
        a = color[bv]
        for t in range(nptr[bv], nptr[bv + 1]):
            u = nidx[t]
            cnt[u, a] -= 1
            cnt[u, bc] += 1
        color[bv] = bc
        moves += 1


@jit
def canon_kernel(A, deg, pos_deg):
    """Lexicographically least column-order adjacency string.

    Minimises over every vertex order in which position ``p`` holds a vertex
    of degree ``pos_deg[p]``.  Column ``j`` of the string is the adjacency of
    position ``j`` to positions ``0..j-1``, most significant bit first.
    Returns the column values and one optimal order.
    """
    n = A.shape[0]
    INF = np.int64(1) << 62
    best = np.full(n, INF, dtype=np.int64)
    perm = np.full(n, -1, dtype=np.int64)
    bestperm = np.zeros(n, dtype=np.int64)
    usedv = np.zeros(n, dtype=np.bool_)
    nxt = np.zeros(n + 1, dtype=np.int64)
    j = 0
    while j >= 0:
        if j == n:
            for i in range(n):
                bestperm[i] = perm[i]
            j -= 1
            if j >= 0:
                usedv[perm[j]] = False
            continue
        v = nxt[j]
        while v < n and (usedv[v] or deg[v] != pos_deg[j]):
            v += 1
        if v == n:
            j -= 1
            if j >= 0:
                usedv[perm[j]] = False
            continue
        nxt[j] = v + 1
        col = np.int64(0)
        for i in range(j):
            col = (col << 1) | A[perm[i], v]
        if col > best[j]:
            continue
        if col < best[j]:
            best[j] = col
            for t in range(j + 1, n):
                best[t] = INF
        perm[j] = v
        usedv[v] = True
        j += 1
        nxt[j] = 0
    if n > 0:
        best[0] = 0
    return best, bestperm


@jit
def extension_codes_kernel(Ap):
    """Canonical codes of every one-vertex extension of ``Ap``.

    Entry ``S`` of the result is the canonical code of ``Ap`` plus a new last
    vertex adjacent to the vertex subset encoded by the bits of ``S``.
    """
    m = Ap.shape[0]
    n = m + 1
    total = 1 << m
    out = np.zeros(total, dtype=np.int64)
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            A[i, j] = Ap[i, j]
    deg = np.zeros(n, dtype=np.int64)
    for S in range(total):
        for i in range(m):
            bit = (S >> i) & 1
            A[i, m] = bit
            A[m, i] = bit
        for i in range(n):
            s = 0
            for j in range(n):
                s += A[i, j]
            deg[i] = s
        pos_deg = np.sort(deg)
        best, _ = canon_kernel(A, deg, pos_deg)
        code = np.int64(0)
        for j in range(1, n):
            code = (code << j) | best[j]
        out[S] = code
    return out
