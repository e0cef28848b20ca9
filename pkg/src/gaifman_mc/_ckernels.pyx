# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled graph kernels. Mirrors ``_pykernels`` result-for-result."""
import numpy as np

EPOCH_LIMIT = 2_000_000_000


cdef object _scratch(g):
    """Per-graph visited array with an epoch counter, so BFS never pays O(n) setup."""
    if g._mark is None or g._mark.shape[0] != g.n or g._epoch >= EPOCH_LIMIT:
        g._mark = np.zeros(max(g.n, 1), dtype=np.int32)
        g._epoch = 0
    g._epoch += 1
    return g._mark


cdef Py_ssize_t _ball_core(const int[::1] indptr, const int[::1] indices,
                           int[::1] mark, int epoch,
                           const int[::1] src, Py_ssize_t nsrc, int r,
                           int[::1] out) noexcept:
    cdef Py_ssize_t cnt = 0, i, lo, hi, j
    cdef int a, b, d = 0
    for i in range(nsrc):
        a = src[i]
        if mark[a] != epoch:
            mark[a] = epoch
            out[cnt] = a
            cnt += 1
    lo = 0
    hi = cnt
    while d < r and lo < hi:
        d += 1
        for i in range(lo, hi):
            a = out[i]
            for j in range(indptr[a], indptr[a + 1]):
                b = indices[j]
                if mark[b] != epoch:
                    mark[b] = epoch
                    out[cnt] = b
                    cnt += 1
        lo = hi
        hi = cnt
    return cnt


def ball(g, sources, int r):
    cdef int[::1] mark = _scratch(g)
    cdef int epoch = g._epoch
    src = np.asarray(sources, dtype=np.int32)
    if src.ndim != 1:
        src = src.reshape(-1)
    out = np.empty(max(g.n, 1), dtype=np.int32)
    cdef Py_ssize_t cnt = _ball_core(g.indptr, g.indices, mark, epoch, src, src.shape[0], r, out)
    return out[:cnt].tolist()


def distances(g, int source, int r):
    cdef const int[::1] indptr = g.indptr
    cdef const int[::1] indices = g.indices
    cdef int[::1] mark = _scratch(g)
    cdef int epoch = g._epoch
    cdef int[::1] out = np.empty(max(g.n, 1), dtype=np.int32)
    cdef Py_ssize_t lo = 0, hi = 1, cnt = 1, i, j
    cdef int a, b, d = 0
    dist = {source: 0}
    mark[source] = epoch
    out[0] = source
    while d < r and lo < hi:
        d += 1
        for i in range(lo, hi):
            a = out[i]
            for j in range(indptr[a], indptr[a + 1]):
                b = indices[j]
                if mark[b] != epoch:
                    mark[b] = epoch
                    out[cnt] = b
                    cnt += 1
                    dist[b] = d
        lo = hi
        hi = cnt
    return dist


def bfs_forest(g):
    cdef int n = g.n
    cdef const int[::1] indptr = g.indptr
    cdef const int[::1] indices = g.indices
    dist_arr = np.full(n, -1, dtype=np.int32)
    root_arr = np.full(n, -1, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    cdef int[::1] root = root_arr
    cdef int[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef Py_ssize_t head, tail, j
    cdef int s, a, b
    for s in range(n):
        if dist[s] >= 0:
            continue
        dist[s] = 0
        root[s] = s
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            a = queue[head]
            head += 1
            for j in range(indptr[a], indptr[a + 1]):
                b = indices[j]
                if dist[b] < 0:
                    dist[b] = dist[a] + 1
                    root[b] = s
                    queue[tail] = b
                    tail += 1
    return dist_arr.tolist(), root_arr.tolist()


def peleg(g, int r, int k):
    cdef int n = g.n
    cdef const int[::1] indptr = g.indptr
    cdef const int[::1] indices = g.indices
    cdef int[::1] mark = np.zeros(max(n, 1), dtype=np.int32)
    cdef char[::1] in_h = np.ones(max(n, 1), dtype=np.int8)
    big_arr = np.empty(max(n, 1), dtype=np.int32)
    small_arr = np.empty(max(n, 1), dtype=np.int32)
    layer_arr = np.empty(max(n, 1), dtype=np.int32)
    tmp_arr = np.empty(max(n, 1), dtype=np.int32)
    cdef int[::1] big = big_arr
    cdef int[::1] small = small_arr
    cdef int[::1] layer = layer_arr
    cdef int[::1] tmp = tmp_arr
    cdef int epoch = 0
    cdef Py_ssize_t remaining = n, nxt_seed = 0, nbig, nsmall, nlayer, ntmp, i
    cdef int a, rounds
    pieces, seeds, final_ms, iterations = [], [], [], []
    while remaining > 0:
        while not in_h[nxt_seed]:
            nxt_seed += 1
        a = <int>nxt_seed
        big[0] = a
        nbig = 1
        rounds = 0
        while True:
            rounds += 1
            for i in range(nbig):
                small[i] = big[i]
            nsmall = nbig
            epoch += 1
            ntmp = _ball_core(indptr, indices, mark, epoch, small, nsmall, r, tmp)
            nlayer = 0
            for i in range(ntmp):
                if in_h[tmp[i]]:
                    layer[nlayer] = tmp[i]
                    nlayer += 1
            epoch += 1
            nbig = _ball_core(indptr, indices, mark, epoch, layer, nlayer, r, big)
            # |N| > n^(1/k) |M|  <=>  |N|^k > n |M|^k, exact in Python ints
            if not (<object>nbig) ** k > n * (<object>nsmall) ** k:
                break
        pieces.append(sorted(big_arr[:nbig].tolist()))
        seeds.append(a)
        final_ms.append(sorted(small_arr[:nsmall].tolist()))
        iterations.append(rounds)
        for i in range(nlayer):
            in_h[layer[i]] = 0
        remaining -= nlayer
    return pieces, seeds, final_ms, iterations


def kernel_sets(g, pieces, int r):
    cdef const int[::1] indptr = g.indptr
    cdef const int[::1] indices = g.indices
    cdef int[::1] stamp = np.zeros(max(g.n, 1), dtype=np.int32)
    cdef int[::1] temp = np.empty(max(g.n, 1), dtype=np.int32)
    cdef int[::1] t
    cdef Py_ssize_t m, j, q, ntemp
    cdef int idx = 0, a, b, rnd
    out = []
    for piece in pieces:
        idx += 1
        t_arr = np.asarray(piece, dtype=np.int32)
        t = t_arr
        m = t.shape[0]
        for j in range(m):
            stamp[t[j]] = idx
        for rnd in range(r):
            ntemp = 0
            for j in range(m):
                a = t[j]
                if stamp[a] != idx:
                    continue
                for q in range(indptr[a], indptr[a + 1]):
                    b = indices[q]
                    if stamp[b] != idx:
                        temp[ntemp] = a
                        ntemp += 1
                        break
            if ntemp == 0:
                break
            for j in range(ntemp):
                stamp[temp[j]] = 0
        out.append([x for x in t_arr.tolist() if stamp[x] == idx])
    return out
