"""Independent brute-force references used to cross-check the library.

Nothing here imports the library's search or gcd code: graphs are rebuilt from
the raw edge definition.
"""
from __future__ import annotations

import itertools
from collections import deque


def raw_adjacency(m, R, S, T):
    """Adjacency sets keyed by ('u', i) / ('v', i), straight from the edge-set definition."""
    adj = {(side, i): set() for side in "uv" for i in range(m)}
    for i in range(m):
        for a in R:
            adj[("u", i)].add(("u", (i + a) % m))
            adj[("u", (i + a) % m)].add(("u", i))
        for b in T:
            adj[("v", i)].add(("v", (i + b) % m))
            adj[("v", (i + b) % m)].add(("v", i))
        for c in S:
            adj[("u", i)].add(("v", (i + c) % m))
            adj[("v", (i + c) % m)].add(("u", i))
    return adj


def bfs_components(adj):
    seen, comps = set(), []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        q = deque([v])
        seen.add(v)
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    q.append(y)
        comps.append(frozenset(comp))
    return comps


def dp_hamiltonian(adj, verts=None):
    """Held-Karp bitmask DP: does the graph on ``verts`` have a hamilton cycle?"""
    verts = sorted(verts if verts is not None else adj)
    n = len(verts)
    if n < 3:
        return False
    idx = {v: k for k, v in enumerate(verts)}
    nb = [0] * n
    for v in verts:
        for w in adj[v]:
            if w in idx:
                nb[idx[v]] |= 1 << idx[w]
    full = (1 << n) - 1
    # reach[mask] = bitset of end vertices of paths from vertex 0 covering mask
    reach = [0] * (1 << n)
    reach[1] = 1
    for mask in range(1, full + 1):
        ends = reach[mask]
        if not ends or not mask & 1:
            continue
        e = ends
        while e:
            low = e & -e
            j = low.bit_length() - 1
            e ^= low
            nxt = nb[j] & ~mask
            while nxt:
                lb = nxt & -nxt
                k = lb.bit_length() - 1
                nxt ^= lb
                reach[mask | lb] |= lb
    return bool(reach[full] & nb[0])


def dp_hamiltonian_path(adj, verts, x, y):
    """Hamilton path from x to y within ``verts`` (bitmask DP)."""
    verts = sorted(verts)
    n = len(verts)
    idx = {v: k for k, v in enumerate(verts)}
    if x == y:
        return False
    nb = [0] * n
    for v in verts:
        for w in adj[v]:
            if w in idx:
                nb[idx[v]] |= 1 << idx[w]
    s, t = idx[x], idx[y]
    reach = [0] * (1 << n)
    reach[1 << s] = 1 << s
    full = (1 << n) - 1
    for mask in range(1, full + 1):
        ends = reach[mask]
        if not ends:
            continue
        e = ends
        while e:
            low = e & -e
            j = low.bit_length() - 1
            e ^= low
            nxt = nb[j] & ~mask
            while nxt:
                lb = nxt & -nxt
                nxt ^= lb
                reach[mask | lb] |= lb
    return bool(reach[full] >> t & 1)


def small_params(m_max, d_max):
    """Raw (m, R, S, T) tuples with 0 in S, symmetric rims of equal size, degree <= d_max.
    No orbit reduction, so every spoke set is visited."""
    for m in range(1, m_max + 1):
        types = range(1, m // 2 + 1)
        rims = set()
        for k in range(len(types) + 1):
            for combo in itertools.combinations(types, k):
                rims.add(frozenset(x % m for t in combo for x in (t, -t)))
        rims = sorted((tuple(sorted(r)) for r in rims), key=lambda r: (len(r), r))
        for s in range(1, min(d_max, m) + 1):
            for rest in itertools.combinations(range(1, m), s - 1):
                S = (0,) + rest
                for R in rims:
                    for T in rims:
                        if len(R) == len(T) and len(R) + s <= d_max:
                            yield m, R, S, T
