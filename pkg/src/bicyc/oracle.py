"""Hamiltonicity oracles: exact backtracking (cycles, fixed-endpoint paths) and a
randomized rotation-extension heuristic for graphs too large to exhaust.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .core import BicirculantError, BicirculantParams, Vertex, classify_edge, neighbors
from .structure import component_vertices, delta, is_connected


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes, reason="node budget"):
        super().__init__(f"search aborted after {nodes} nodes ({reason})")
        self.nodes = nodes


class DifferentComponents(BicirculantError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    max_millis: int = 60_000
    seed: int = 1

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_millis <= 0 or self.seed < 0:
            raise ValueError("budget fields must be positive")


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class Constraints:
    """Edge-class constraints for the exact search.

    ``min_counts`` maps 'outer'/'inner'/'spoke' to a minimum number of edges of that
    class; ``forbidden`` holds EdgeKind values (or bare class names) never to use.
    """

    min_counts: tuple = ()
    forbidden: frozenset = frozenset()

    @classmethod
    def min_outer(cls, k):
        return cls(min_counts=(("outer", k),))


def _graph(p: BicirculantParams, verts, forbidden=frozenset()):
    idx = {v: i for i, v in enumerate(verts)}
    adj = []
    for v in verts:
        row = []
        for w in sorted(neighbors(p, v)):
            if w not in idx:
                continue
            if forbidden:
                k = classify_edge(p, v, w)
                if k in forbidden or k.kind in forbidden:
                    continue
            row.append(idx[w])
        adj.append(row)
    return idx, adj


class _Search:
    """Depth-first hamilton path/cycle search.

    Pruning: every unvisited vertex keeps enough available partners (2, or 1 for
    a path's far endpoint); a neighbour of the head with exactly enough partners
    forces the next step; unvisited vertices must stay connected to the head.
    """

    def __init__(self, adj, start, end=None, accept=None, budget=DEFAULT_BUDGET):
        self.adj = adj
        self.n = len(adj)
        self.start = start
        self.end = end
        self.cycle = end is None
        self.accept = accept
        self.max_nodes = budget.max_nodes
        self.deadline = time.monotonic() + budget.max_millis / 1000.0
        self.nodes = 0
        self.visited = [False] * self.n
        self.cnt = [len(a) for a in adj]
        self.path = [start]
        self.visited[start] = True
        self.first = None

    def need(self, w):
        if w == self.end:
            return 1
        if self.cycle and w == self.start:
            return 1
        return 2

    def run(self):
        n = self.n
        if n <= 2 and self.cycle:
            return None
        if not self.cycle and self.end == self.start:
            return None
        if any(c < self.need(w) for w, c in enumerate(self.cnt)):
            return None
        return self._dfs()

    def _connected_rest(self, head):
        # unvisited vertices reachable from head through unvisited vertices
        visited = self.visited
        remaining = self.n - len(self.path)
        seen = {head}
        stack = [head]
        reached = 0
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if not visited[y] and y not in seen:
                    seen.add(y)
                    reached += 1
                    stack.append(y)
        return reached == remaining

    def _dfs(self):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(self.nodes)
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(self.nodes, "time budget")
        path, adj, visited, cnt = self.path, self.adj, self.visited, self.cnt
        head = path[-1]
        if len(path) == self.n:
            if self.cycle:
                if self.start not in adj[head] or head < self.first:
                    return None
            elif head != self.end:
                return None
            if self.accept is not None and not self.accept(path):
                return None
            return list(path)
        if not self._connected_rest(head):
            return None
        remaining = self.n - len(path)
        forced = None
        cands = []
        # the cycle anchor stays an endpoint, so its neighbours lose nothing
        can_force = not (self.cycle and head == self.start)
        for w in adj[head]:
            if visited[w]:
                continue
            if w == self.end and remaining > 1:
                if cnt[w] <= 1:
                    return None
                continue
            if can_force and cnt[w] <= self.need(w) and not (self.cycle and w == self.start):
                if forced is not None and forced != w:
                    return None
                forced = w
            cands.append(w)
        if forced is not None:
            cands = [forced]
        else:
            cands.sort(key=lambda w: (cnt[w], w))
        for x in cands:
            if len(path) == 1 and self.cycle:
                self.first = x
            # head stops being an endpoint unless it is the cycle's anchor
            release = not (self.cycle and head == self.start)
            ok = True
            if release:
                for w in adj[head]:
                    cnt[w] -= 1
                    if not visited[w] and w != x and cnt[w] < self.need(w):
                        ok = False
                    elif self.cycle and w == self.start and cnt[w] < 1 and len(path) + 1 < self.n:
                        ok = False
            visited[x] = True
            path.append(x)
            if ok:
                res = self._dfs()
            else:
                res = None
            path.pop()
            visited[x] = False
            if release:
                for w in adj[head]:
                    cnt[w] += 1
            if res is not None:
                return res
        return None


def _counts_ok(p, verts, min_counts):
    need = dict(min_counts)

    def accept(path):
        if not need:
            return True
        got = {"outer": 0, "inner": 0, "spoke": 0}
        n = len(path)
        for i in range(n):
            got[classify_edge(p, verts[path[i]], verts[path[(i + 1) % n]]).kind] += 1
        return all(got[k] >= v for k, v in need.items())

    return accept if need else None


def find_cycle_exact(p: BicirculantParams, constraints: Constraints | None = None,
                     budget: SearchBudget = DEFAULT_BUDGET):
    """A hamilton cycle of ``p`` honouring ``constraints``, or None after exhaustive search."""
    if not is_connected(p):
        return None
    return find_component_cycle(p, Vertex("u", 0), constraints, budget)


def find_component_cycle(p: BicirculantParams, v: Vertex, constraints: Constraints | None = None,
                         budget: SearchBudget = DEFAULT_BUDGET):
    """Exact search for a hamilton cycle of the component of ``p`` containing ``v``."""
    c = constraints or Constraints()
    verts = component_vertices(p, v)
    _, adj = _graph(p, verts, c.forbidden)
    s = _Search(adj, 0, None, _counts_ok(p, verts, c.min_counts), budget)
    res = s.run()
    return None if res is None else [verts[i] for i in res]


def find_path_between(p: BicirculantParams, x: Vertex, y: Vertex,
                      budget: SearchBudget = DEFAULT_BUDGET):
    """Hamilton path from ``x`` to ``y`` of their common component, or None after exhaustion."""
    x, y = Vertex(*x), Vertex(*y)
    k = delta(p)
    if x.index % k != y.index % k:
        raise DifferentComponents(f"{x} and {y} lie in different components")
    if x == y:
        raise BicirculantError("endpoints must differ")
    verts = component_vertices(p, x)
    idx, adj = _graph(p, verts)
    s = _Search(adj, idx[x], idx[y], None, budget)
    res = s.run()
    return None if res is None else [verts[i] for i in res]


def find_cycle_heuristic(p: BicirculantParams, budget: SearchBudget = DEFAULT_BUDGET,
                         restart_steps: int | None = None):
    """Randomized rotation-extension (Posa) search; None means the budget ran out."""
    if not is_connected(p) or p.m == 1:
        return None
    verts = p.vertices()
    _, adj = _graph(p, verts)
    n = len(verts)
    rng = random.Random(budget.seed)
    deadline = time.monotonic() + budget.max_millis / 1000.0
    steps_left = budget.max_nodes
    per_restart = restart_steps or max(50 * n, 2000)
    while steps_left > 0 and time.monotonic() < deadline:
        res, used = _posa(adj, n, rng, min(per_restart, steps_left), deadline)
        steps_left -= used
        if res is not None:
            return [verts[i] for i in res]
    return None


def _posa(adj, n, rng, max_steps, deadline):
    start = rng.randrange(n)
    path = [start]
    pos = [-1] * n
    pos[start] = 0
    steps = 0
    while steps < max_steps:
        steps += 1
        if steps & 4095 == 0 and time.monotonic() > deadline:
            break
        head = path[-1]
        if len(path) == n and path[0] in adj[head]:
            return path, steps
        free = [w for w in adj[head] if pos[w] < 0]
        if free:
            # prefer the most constrained unvisited neighbour
            best = min(sum(1 for z in adj[w] if pos[z] < 0) for w in free)
            choice = rng.choice([w for w in free if sum(1 for z in adj[w] if pos[z] < 0) == best])
            pos[choice] = len(path)
            path.append(choice)
            continue
        # rotation: pick a path neighbour w of head, reverse the segment after w
        opts = [w for w in adj[head] if pos[w] >= 0 and pos[w] < len(path) - 2]
        if not opts or rng.random() < 0.02:
            path.reverse()
            for i, v in enumerate(path):
                pos[v] = i
            continue
        w = rng.choice(opts)
        i = pos[w]
        path[i + 1:] = path[i + 1:][::-1]
        for j in range(i + 1, len(path)):
            pos[path[j]] = j
    return None, steps
