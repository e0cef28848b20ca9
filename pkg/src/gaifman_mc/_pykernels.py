"""Pure-Python graph kernels (fallback for ``_ckernels``).

Every function takes a :class:`~gaifman_mc.structures.GaifmanGraph` and uses
only its ``adj`` lists. Signatures and results match the compiled module
exactly, including element order.
"""


def _ball(adj, sources, r, seen):
    """Multi-source BFS truncated at depth r; ``seen`` is updated in place."""
    frontier = []
    for a in sources:
        if a not in seen:
            seen.add(a)
            frontier.append(a)
    out = list(frontier)
    for _ in range(r):
        nxt = []
        for a in frontier:
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        if not nxt:
            break
        out.extend(nxt)
        frontier = nxt
    return out


def ball(g, sources, r):
    """Elements within distance ``r`` of ``sources``, in BFS order."""
    return _ball(g.adj, sources, r, set())


def distances(g, source, r):
    adj = g.adj
    dist = {source: 0}
    frontier = [source]
    d = 0
    while frontier and d < r:
        d += 1
        nxt = []
        for a in frontier:
            for b in adj[a]:
                if b not in dist:
                    dist[b] = d
                    nxt.append(b)
        frontier = nxt
    return dist


def bfs_forest(g):
    """BFS from the smallest unvisited element of each component.

    Returns ``(dist, root)`` lists: depth of every element and the root of its
    component.
    """
    n = g.n
    adj = g.adj
    dist = [-1] * n
    root = [-1] * n
    for s in range(n):
        if dist[s] >= 0:
            continue
        dist[s] = 0
        root[s] = s
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for a in frontier:
                for b in adj[a]:
                    if dist[b] < 0:
                        dist[b] = d
                        root[b] = s
                        nxt.append(b)
            frontier = nxt
    return dist, root


def peleg(g, r, k):
    """Greedy cluster growth; see :func:`gaifman_mc.covers.peleg_cover`.

    Returns ``(pieces, seeds, final_ms, iterations)``; pieces and final sets
    are sorted lists.
    """
    n = g.n
    adj = g.adj
    in_h = [True] * n
    remaining = n
    nxt_seed = 0
    pieces, seeds, final_ms, iterations = [], [], [], []
    while remaining:
        while not in_h[nxt_seed]:
            nxt_seed += 1
        a = nxt_seed
        big = [a]
        rounds = 0
        while True:
            rounds += 1
            small = big
            layer = [b for b in _ball(adj, small, r, set()) if in_h[b]]
            big = _ball(adj, layer, r, set())
            # |N| > n^(1/k) |M|  <=>  |N|^k > n |M|^k
            if not len(big) ** k > n * len(small) ** k:
                break
        pieces.append(sorted(big))
        seeds.append(a)
        final_ms.append(sorted(small))
        iterations.append(rounds)
        for b in layer:
            in_h[b] = False
        remaining -= len(layer)
    return pieces, seeds, final_ms, iterations


def kernel_sets(g, pieces, r):
    """``{a in T | N_r(a) subset of T}`` for every piece ``T``.

    One stamp array shared by all pieces: ``stamp[a] == i`` means ``a`` is
    still a candidate for piece ``i``. Each round drops candidates with a
    neighbor outside the current candidate set.
    """
    adj = g.adj
    stamp = [0] * g.n
    out = []
    for idx, piece in enumerate(pieces, 1):
        for a in piece:
            stamp[a] = idx
        for _ in range(r):
            temp = []
            for a in piece:
                if stamp[a] == idx:
                    for b in adj[a]:
                        if stamp[b] != idx:
                            temp.append(a)
                            break
            if not temp:
                break
            for a in temp:
                stamp[a] = 0
        out.append([a for a in piece if stamp[a] == idx])
    return out
