"""Maximum matching and exact minimum vertex cover for trade graphs.

The exact solver is a branch-and-bound over adjacency sets.  Each node applies
the usual kernel rules (degree 0, 1, 2 and domination), bounds with the LP
relaxation computed through a matching in the bipartite double cover, and
splits independent components.  When the node budget runs out the affected
subtrees return their LP bound, so the value reported is always a valid lower
bound and is exact whenever ``exact`` is set.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import networkx as nx

Graph = dict  # vertex -> set of neighbours


@dataclass
class VCResult:
    lower: int
    exact: bool
    nodes: int


def components(n: int, adj) -> list[list[int]]:
    """Connected components of an adjacency list, each sorted, in order of least vertex."""
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def maximum_matching(n: int, edges) -> list[tuple]:
    """Maximum cardinality matching as a sorted list of ``(i, j)`` with ``i < j``."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    m = nx.max_weight_matching(g, maxcardinality=True)
    return sorted((min(a, b), max(a, b)) for a, b in m)


def lp_bound(graph: Graph) -> float:
    """Optimum of the vertex-cover LP: half a maximum matching of the double cover."""
    left = list(graph)
    match_r: dict = {}

    def augment(u, seen):
        for w in graph[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in match_r or augment(match_r[w], seen):
                match_r[w] = u
                return True
        return False

    size = 0
    # greedy warm start keeps the augmenting searches short
    for u in left:
        for w in graph[u]:
            if w not in match_r:
                match_r[w] = u
                size += 1
                break
    matched_l = set(match_r.values())
    for u in left:
        if u not in matched_l and augment(u, set()):
            size += 1
    return size / 2


def _greedy_cover(graph: Graph) -> int:
    g = {u: set(ns) for u, ns in graph.items()}
    size = 0
    while True:
        u = max(g, key=lambda x: len(g[x]), default=None)
        if u is None or not g[u]:
            return size
        for w in g.pop(u):
            g[w].discard(u)
        size += 1


class _Solver:
    def __init__(self, budget_nodes, deadline):
        self.budget = budget_nodes
        self.deadline = deadline
        self.nodes = 0
        self.exact = True
        self.fresh = 0

    def out_of_budget(self) -> bool:
        if self.budget is not None and self.nodes >= self.budget:
            return True
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            self.budget = self.nodes
            return True
        return False

    @staticmethod
    def _remove(g: Graph, u) -> None:
        for w in g.pop(u):
            g[w].discard(u)

    def reduce(self, g: Graph) -> int:
        """Apply kernel rules in place; returns the number of vertices forced into the cover."""
        taken = 0
        changed = True
        while changed:
            changed = False
            for u in list(g):
                if u not in g:
                    continue
                nb = g[u]
                d = len(nb)
                if d == 0:
                    del g[u]
                    changed = True
                elif d == 1:
                    (w,) = nb
                    self._remove(g, w)
                    del g[u]
                    taken += 1
                    changed = True
                elif d == 2:
                    a, b = nb
                    if b in g[a]:
                        self._remove(g, a)
                        self._remove(g, b)
                        del g[u]
                        taken += 2
                    else:
                        # fold u, a, b into one vertex z adjacent to N(a) | N(b)
                        z = ("fold", self.fresh)
                        self.fresh += 1
                        nz = (g[a] | g[b]) - {u}
                        self._remove(g, u)
                        self._remove(g, a)
                        self._remove(g, b)
                        g[z] = nz
                        for w in nz:
                            g[w].add(z)
                        taken += 1
                    changed = True
                else:
                    for w in nb:
                        if len(g[w]) >= d and nb - {w} <= g[w]:
                            self._remove(g, w)
                            taken += 1
                            changed = True
                            break
        return taken

    def split(self, g: Graph) -> list[Graph]:
        seen, parts = set(), []
        for s in g:
            if s in seen:
                continue
            seen.add(s)
            comp, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w in g[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            parts.append({u: g[u] for u in comp})
        return parts

    def solve(self, g: Graph, ub: float) -> int:
        """Minimum cover of ``g`` when below ``ub``; otherwise some lower bound that is at least ``ub``."""
        self.nodes += 1
        g = {u: set(ns) for u, ns in g.items()}
        k = self.reduce(g)
        if not g:
            return k
        parts = self.split(g)
        lbs = [math.ceil(lp_bound(p) - 1e-9) for p in parts]
        if k + sum(lbs) >= ub:
            return k + sum(lbs)
        if self.out_of_budget():
            self.exact = False
            return k + sum(lbs)
        if len(parts) > 1:
            order = sorted(range(len(parts)), key=lambda i: len(parts[i]))
            total = k
            rest = sum(lbs)
            for i in order:
                rest -= lbs[i]
                total += self.solve(parts[i], ub - total - rest)
                if total + rest >= ub:
                    return total + rest
            return total
        best = ub - k
        u = max(g, key=lambda x: (len(g[x]), str(x)))
        nb = g[u]
        without = {x: ns - {u} for x, ns in g.items() if x != u}
        a = 1 + self.solve(without, best - 1)
        best = min(best, a)
        d = len(nb)
        if d < best:
            drop = nb | {u}
            rest_g = {x: ns - drop for x, ns in g.items() if x not in drop}
            b = d + self.solve(rest_g, best - d)
        else:
            b = d
        return k + min(a, b)


def minimum_vertex_cover(n: int, edges, *, budget_nodes: int | None = 20_000,
                         deadline: float | None = None) -> VCResult:
    """Size of a minimum vertex cover of the graph on ``0..n-1``.

    ``budget_nodes`` limits branch-and-bound nodes, ``deadline`` is a
    ``time.monotonic()`` instant.  Past either limit the remaining subtrees
    contribute their LP bound and the result is marked inexact.
    """
    g: Graph = {u: set() for u in range(n)}
    for a, b in edges:
        if a != b:
            g[a].add(b)
            g[b].add(a)
    solver = _Solver(budget_nodes, deadline)
    ub = _greedy_cover(g) + 1
    value = solver.solve(g, ub)
    return VCResult(value, solver.exact, solver.nodes)
