"""Directed trades of volume two, the trade graph, and defining-set bounds.

Two blocks ``b1, b2`` form a trade when some other pair of ordered 5-blocks
covers exactly the same multiset of ordered pairs.  Any defining set must
contain a block of every trade, so it is a vertex cover of the trade graph and
its size is at least the minimum vertex cover.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import vcover
from .core import LabeledDesign, ordered_pairs_of


@dataclass(frozen=True)
class VolumeTwoTrade:
    t1: tuple  # block indices (or the blocks themselves for standalone use)
    t2: tuple  # the two replacement ordered blocks


def _pair_multiset(blocks: Iterable[Sequence[int]]) -> Counter:
    return Counter(p for b in blocks for p in ordered_pairs_of(b))


def _tournament_order(pairs: Counter, points: frozenset):
    """Order ``points`` so its pair set is ``pairs``, or None if impossible."""
    if sum(pairs.values()) != len(points) * (len(points) - 1) // 2:
        return None
    out = Counter()
    for (x, y), c in pairs.items():
        if c != 1 or x not in points or y not in points:
            return None
        out[x] += 1
    order = tuple(sorted(points, key=lambda p: -out[p]))
    if Counter(ordered_pairs_of(order)) != pairs:
        return None
    return order


def _orderings(points: Sequence[int], avail: Counter) -> Iterable[tuple]:
    """Orderings of ``points`` whose ordered pairs all lie in ``avail``.

    Depth-first with pair-availability pruning; lexicographic in ``points``.
    """
    pts = sorted(points)
    chosen: list[int] = []

    def rec():
        if len(chosen) == len(pts):
            yield tuple(chosen)
            return
        for p in pts:
            if p in chosen:
                continue
            if all(avail[(q, p)] > 0 for q in chosen):
                chosen.append(p)
                yield from rec()
                chosen.pop()

    yield from rec()


def find_trade(b1: Sequence[int], b2: Sequence[int]) -> tuple | None:
    """Return replacement blocks ``(c1, c2)`` for the trade ``{b1, b2}`` or None.

    Every point of a replacement block carries four of its pairs, so the two
    replacements use the same point multiset as ``b1, b2``.  A pair joining a
    point only in ``b1`` with a point only in ``b2`` is never covered, so each
    replacement lives on the point set of ``b1`` or of ``b2``.
    """
    b1, b2 = tuple(b1), tuple(b2)
    if b1 == b2:
        raise ValueError("find_trade needs two different blocks")
    s1, s2 = frozenset(b1), frozenset(b2)
    if len(s1 & s2) < 2:
        return None
    pairs = _pair_multiset((b1, b2))
    for c1 in _orderings(s1, pairs):
        if c1 == b1 or c1 == b2:
            continue
        rest = pairs - Counter(ordered_pairs_of(c1))
        c2 = _tournament_order(rest, s2)
        if c2 is not None and c2 not in (b1, b2):
            return (c1, c2)
    return None


def is_trade_witness(b1, b2, c1, c2) -> bool:
    """Independent check that ``{c1, c2}`` can replace ``{b1, b2}``."""
    blocks = [tuple(b1), tuple(b2)]
    for c in (c1, c2):
        if len(set(c)) != len(c) or tuple(c) in blocks:
            return False
    pb = sorted(p for b in blocks for p in itertools.combinations(b, 2))
    pc = sorted(p for c in (c1, c2) for p in itertools.combinations(c, 2))
    return pb == pc


# ---------------------------------------------------------------------------
# trade graph

@dataclass
class TradeGraph:
    n: int
    edges: list  # (i, j) with i < j, sorted
    witness: dict  # (i, j) -> (c1, c2)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def trade_graph(design: LabeledDesign) -> TradeGraph:
    """Edges join block pairs admitting a volume-two trade."""
    by_pair = defaultdict(list)
    for i, b in enumerate(design.blocks):
        for x, y in itertools.combinations(sorted(b), 2):
            by_pair[(x, y)].append(i)
    candidates = set()
    for ids in by_pair.values():
        for i, j in itertools.combinations(ids, 2):
            if i != j:
                candidates.add((min(i, j), max(i, j)))
    edges, witness = [], {}
    for i, j in sorted(candidates):
        bi, bj = design.blocks[i], design.blocks[j]
        if bi == bj:
            continue
        w = find_trade(bi, bj)
        if w is not None:
            edges.append((i, j))
            witness[(i, j)] = w
    return TradeGraph(design.b, edges, witness)


def find_cycles(graph: TradeGraph) -> list[list[int]]:
    """Components of the trade graph that are simple cycles (cyclical trades)."""
    adj = graph.adjacency()
    seen = [False] * graph.n
    cycles = []
    for start in range(graph.n):
        if seen[start] or not adj[start]:
            continue
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        if len(comp) >= 3 and all(len(adj[u]) == 2 for u in comp):
            cyc, prev, cur = [start], None, start
            while True:
                nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
                if nxt == start:
                    break
                cyc.append(nxt)
                prev, cur = cur, nxt
            cycles.append(cyc)
    return cycles


def hits_all_trades(design: LabeledDesign, S: Iterable[int], graph: TradeGraph | None = None) -> bool:
    """True iff ``S`` meets every volume-two trade (a necessary condition only)."""
    S = set(S)
    for i in S:
        if not 0 <= i < design.b:
            raise IndexError(f"block index {i} out of range")
    graph = graph or trade_graph(design)
    return all(i in S or j in S for i, j in graph.edges)


# ---------------------------------------------------------------------------
# sub-designs and the free-point argument

def free_point_bound(design: LabeledDesign, cap: int = 6) -> int:
    """Lower bound on defining sets of a 2-(v,5,1)DD from relabelings.

    If two points ``x, y`` lie in no block of ``S``, swapping them maps the
    design to a different design that still contains ``S``.  The two images
    differ because a block through ``x`` and ``y`` and its swapped copy share at
    least three ordered pairs.  So a defining set covers at least ``v - 1``
    points.  Returns the least ``k`` for which some ``k`` blocks do, searching up
    to ``cap`` blocks (beyond that ``cap`` itself is returned as a valid bound).
    """
    v = design.v
    if v < 2 or not design.blocks:
        return 0
    masks = sorted({sum(1 << p for p in b) for b in design.blocks}, reverse=True)
    need = v - 1
    kmax = max(len(b) for b in design.blocks)
    k = max(1, math.ceil(need / kmax))
    while k <= cap:
        if _cover_exists(masks, k, need):
            return k
        k += 1
    return cap


def _cover_exists(masks: list[int], k: int, need: int) -> bool:
    kmax = max(m.bit_count() for m in masks)

    def rec(start: int, left: int, cov: int) -> bool:
        c = cov.bit_count()
        if c >= need:
            return True
        if left == 0 or c + left * kmax < need:
            return False
        for i in range(start, len(masks)):
            if rec(i + 1, left - 1, cov | masks[i]):
                return True
        return False

    return rec(0, k, 0)


@dataclass
class SubDesign:
    blocks: tuple  # block indices in the host design
    points: tuple
    bound: int


def find_subdesigns(design: LabeledDesign, graph: TradeGraph, max_points: int = 21) -> list[SubDesign]:
    """Embedded 2-(w,5,1)DDs whose blocks trade with nothing outside them.

    Such a block set can be swapped for any other DD on its points, so a defining
    set of the host must contain a defining set of the sub-design.
    """
    adj = graph.adjacency()
    parent = list(range(design.b))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    by_pair = defaultdict(list)
    for i, b in enumerate(design.blocks):
        for x, y in itertools.combinations(sorted(b), 2):
            by_pair[(x, y)].append(i)
    for ids in by_pair.values():
        for i in ids[1:]:
            parent[find(i)] = find(ids[0])
    comps = defaultdict(list)
    for i in range(design.b):
        comps[find(i)].append(i)
    out = []
    for ids in comps.values():
        pts = sorted({p for i in ids for p in design.blocks[i]})
        w = len(pts)
        if w > max_points:
            continue
        if len(ids) * 10 != w * (w - 1):
            continue
        idset = set(ids)
        if any(j not in idset for i in ids for j in adj[i]):
            continue
        relabel = {p: k for k, p in enumerate(pts)}
        sub = LabeledDesign.from_labels([[relabel[p] for p in design.blocks[i]] for i in ids],
                                        points=range(w))
        if _pair_multiset(sub.blocks) != Counter(itertools.permutations(range(w), 2)):
            continue
        out.append(SubDesign(tuple(ids), tuple(pts), free_point_bound(sub)))
    return out


# ---------------------------------------------------------------------------
# certificates

@dataclass
class TradeCertificate:
    blocks: int
    mode: str
    bound: int
    matching: list = field(default_factory=list)      # (i, j)
    cycles: list = field(default_factory=list)        # lists of block indices
    witness: dict = field(default_factory=dict)       # (i, j) -> (c1, c2)
    subdesigns: list = field(default_factory=list)    # (bound, indices)
    exact: bool = True

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.bound, self.blocks) if self.blocks else Fraction(0)

    def render(self, labels=None) -> str:
        def fmt(block):
            if labels is None:
                return "(" + ",".join(map(str, block)) + ")"
            from .core import format_label
            return "(" + ",".join(format_label(labels[p]) for p in block) + ")"

        lines = [f"BOUND {self.bound} OF {self.blocks} MODE {self.mode}"]
        if not self.exact:
            lines.append("NOTE budget exhausted; bound falls back to the LP/matching value")
        for bound, ids in self.subdesigns:
            lines.append(f"SUBDESIGN {bound} : " + " ".join(map(str, ids)))
        for cyc in self.cycles:
            lines.append("CYCLE " + " ".join(map(str, cyc)))
        for i, j in self.matching:
            c1, c2 = self.witness[(i, j)]
            lines.append(f"EDGE {i} {j} : {fmt(c1)} {fmt(c2)}")
        return "\n".join(lines) + "\n"


def defining_bound(design: LabeledDesign, mode: str = "exactVC", *, graph: TradeGraph | None = None,
                   max_vertices: int = 2000, budget_nodes: int | None = 20_000,
                   budget_seconds: float | None = None, subdesigns: bool = True) -> TradeCertificate:
    """Lower bound on the smallest defining set.

    ``matching``  size of a maximum matching of the trade graph (cycle components
                  counted as ceil(len/2)).
    ``exactVC``   minimum vertex cover, component by component; a component that
                  exhausts its budget contributes its LP bound instead and the
                  certificate is flagged inexact.

    Embedded sub-designs isolated from other trades contribute the larger of
    their own cover and their free-point bound.
    """
    modes = {"matching": "matching", "exactvc": "exactVC"}
    if mode.lower() not in modes:
        raise ValueError(f"unknown mode {mode!r}")
    mode = modes[mode.lower()]
    graph = graph or trade_graph(design)
    adj = graph.adjacency()
    cert = TradeCertificate(design.b, mode, 0)
    cert.witness = dict(graph.witness)

    subs = find_subdesigns(design, graph) if subdesigns else []
    in_sub = {}
    for k, sd in enumerate(subs):
        for i in sd.blocks:
            in_sub[i] = k

    cycles = find_cycles(graph)
    cert.cycles = cycles
    in_cycle = {u for c in cycles for u in c}

    deadline = time.monotonic() + budget_seconds if budget_seconds else None
    comps = vcover.components(graph.n, adj)
    sub_cover = defaultdict(int)
    total = 0
    for comp in comps:
        if len(comp) == 1:
            continue
        if comp[0] in in_cycle:
            value = math.ceil(len(comp) / 2)
        else:
            local = {u: k for k, u in enumerate(comp)}
            edges = [(local[u], local[w]) for u in comp for w in adj[u] if u < w]
            matching = vcover.maximum_matching(len(comp), edges)
            cert.matching += sorted((min(comp[a], comp[b]), max(comp[a], comp[b])) for a, b in matching)
            value = len(matching)
            if mode == "exactVC" and len(comp) <= max_vertices:
                res = vcover.minimum_vertex_cover(len(comp), edges, budget_nodes=budget_nodes,
                                                  deadline=deadline)
                value = max(value, res.lower)
                cert.exact &= res.exact
        if comp[0] in in_sub:
            sub_cover[in_sub[comp[0]]] += value
        else:
            total += value
    if mode == "exactVC" and any(len(c) > max_vertices for c in comps):
        cert.exact = False
    for k, sd in enumerate(subs):
        b = max(sub_cover[k], sd.bound)
        total += b
        if sd.bound > sub_cover[k]:
            cert.subdesigns.append((sd.bound, list(sd.blocks)))
    cert.matching.sort()
    cert.bound = total
    return cert


def check_certificate(design: LabeledDesign, cert: TradeCertificate) -> list[str]:
    """Re-verify a certificate; returns a list of problems (empty when valid).

    Every listed edge witness is re-checked, the edges and cycles must be
    vertex-disjoint, and in matching mode the bound must follow from them.
    """
    problems = []
    used = set()
    for i, j in cert.matching:
        c1, c2 = cert.witness.get((i, j), (None, None))
        if c1 is None or not is_trade_witness(design.blocks[i], design.blocks[j], c1, c2):
            problems.append(f"edge {i} {j} has no valid witness")
        if i in used or j in used:
            problems.append(f"edge {i} {j} is not disjoint from the others")
        used.update((i, j))
    for cyc in cert.cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if find_trade(design.blocks[a], design.blocks[b]) is None:
                problems.append(f"cycle step {a} {b} is not a trade")
        if used & set(cyc):
            problems.append("cycle overlaps a matched edge")
        used.update(cyc)
    if cert.mode == "matching":
        claimed = len(cert.matching) + sum(math.ceil(len(c) / 2) for c in cert.cycles)
        claimed += sum(b for b, _ in cert.subdesigns)
        if cert.bound > claimed:
            problems.append(f"bound {cert.bound} exceeds the {claimed} implied by the trades")
    if cert.bound > cert.blocks:
        problems.append("bound exceeds the block count")
    return problems


def parse_certificate(text: str) -> TradeCertificate:
    """Read the text written by :meth:`TradeCertificate.render` (integer witnesses only)."""
    cert = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "BOUND":
            parts = rest.split()
            cert = TradeCertificate(int(parts[2]), parts[4], int(parts[0]))
        elif cert is None:
            raise ValueError("certificate must start with BOUND")
        elif head == "EDGE":
            ij, _, ws = rest.partition(":")
            i, j = map(int, ij.split())
            blocks = [tuple(int(x) for x in t.strip("() ").split(","))
                      for t in ws.replace(") (", ")|(").split("|")]
            cert.matching.append((i, j))
            cert.witness[(i, j)] = tuple(blocks)
        elif head == "CYCLE":
            cert.cycles.append([int(x) for x in rest.split()])
        elif head == "SUBDESIGN":
            b, _, ids = rest.partition(":")
            cert.subdesigns.append((int(b), [int(x) for x in ids.split()]))
        elif head == "NOTE":
            cert.exact = False
        else:
            raise ValueError(f"unknown certificate line {line!r}")
    if cert is None:
        raise ValueError("empty certificate")
    return cert


# ---------------------------------------------------------------------------
# completion search

class _Budget(Exception):
    pass


@dataclass
class CompletionResult:
    """Outcome of :func:`completion_search`.

    ``verdict`` is ``"0"``, ``"1"``, ``">=2"`` or ``"indeterminate"`` (budget
    exhausted before the count was settled).
    """

    verdict: str
    count: int
    nodes: int
    seconds: float
    exhausted: bool
    first: list | None = None

    def render(self) -> str:
        budget = "exhausted" if self.exhausted else "ok"
        return (f"COMPLETIONS {self.verdict} nodes={self.nodes} seconds={self.seconds:.2f} "
                f"budget={budget}\n")


def completion_search(v: int, S: Iterable[Sequence[int]], *, budget_nodes: int | None = 10**8,
                      budget_seconds: float | None = 120.0, limit: int = 2) -> CompletionResult:
    """Count 2-(v,5,1)DDs on ``0..v-1`` containing the ordered blocks ``S``, up to ``limit``.

    Runs in two phases.  The first chooses the underlying 5-sets by exact cover
    of the unordered pairs, each needed twice, always branching on the pair with
    the fewest candidates.  The second orients every chosen set so that each
    ordered pair is used once, with forward checking.  A set already used by a
    block of ``S`` may be chosen again, because the design need not be
    super-simple.
    """
    S = [tuple(b) for b in S]
    start = time.monotonic()
    deadline = start + budget_seconds if budget_seconds is not None else None
    nodes = 0
    found: list = []

    def tick():
        nonlocal nodes
        nodes += 1
        if budget_nodes is not None and nodes > budget_nodes:
            raise _Budget
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise _Budget

    def key(a, b):
        return (a, b) if a < b else (b, a)

    used0 = set()
    need = Counter({p: 2 for p in itertools.combinations(range(v), 2)})
    for b in S:
        if len(set(b)) != 5 or not all(0 <= x < v for x in b):
            raise ValueError(f"bad block {b}")
        for x, y in ordered_pairs_of(b):
            if (x, y) in used0:
                return CompletionResult("0", 0, 0, 0.0, False)
            used0.add((x, y))
            need[key(x, y)] -= 1
    sets = [c for c in itertools.combinations(range(v), 5)]
    spairs = [list(itertools.combinations(s, 2)) for s in sets]
    contain = defaultdict(list)
    for i, ps in enumerate(spairs):
        for p in ps:
            contain[p].append(i)

    def orient(chosen):
        used = set(used0)
        perms = []
        for s in chosen:
            opts = []
            for p in itertools.permutations(s):
                opts.append((p, ordered_pairs_of(p)))
            perms.append(opts)

        def rec(remaining):
            tick()
            if len(found) >= limit:
                return
            if not remaining:
                found.append(S + [p for p in picked])
                return
            best = None
            for k in remaining:
                ok = [(p, ps) for p, ps in perms[k] if not any(q in used for q in ps)]
                if not ok:
                    return
                if best is None or len(ok) < len(best[1]):
                    best = (k, ok)
            k, ok = best
            rest = [r for r in remaining if r != k]
            for p, ps in ok:
                used.update(ps)
                picked.append(p)
                rec(rest)
                picked.pop()
                used.difference_update(ps)
                if len(found) >= limit:
                    return

        picked: list = []
        rec(list(range(len(chosen))))

    chosen: list = []

    def cover():
        tick()
        if len(found) >= limit:
            return
        open_pairs = [p for p, n in need.items() if n > 0]
        if not open_pairs:
            orient(list(chosen))
            return
        best = None
        for p in open_pairs:
            cands = [i for i in contain[p] if all(need[q] > 0 for q in spairs[i])]
            if not cands:
                return
            if best is None or len(cands) < len(best[1]):
                best = (p, cands)
        p, cands = best
        for combo in itertools.combinations_with_replacement(cands, need[p]):
            cnt = Counter(q for i in combo for q in spairs[i])
            if any(need[q] < c for q, c in cnt.items()):
                continue
            for q, c in cnt.items():
                need[q] -= c
            chosen.extend(sets[i] for i in combo)
            cover()
            del chosen[len(chosen) - len(combo):]
            for q, c in cnt.items():
                need[q] += c
            if len(found) >= limit:
                return

    if any(c < 0 for c in need.values()):
        return CompletionResult("0", 0, 0, 0.0, False)
    exhausted = False
    try:
        cover()
    except _Budget:
        exhausted = True
    elapsed = time.monotonic() - start
    count = len(found)
    if count >= limit:
        verdict = f">={limit}"
    elif exhausted:
        verdict = "indeterminate"
    else:
        verdict = str(count)
    return CompletionResult(verdict, count, nodes, elapsed, exhausted, found[0] if found else None)


def is_defining_set(design: LabeledDesign, S: Iterable[int], **budget) -> CompletionResult:
    """Run :func:`completion_search` for a subset of a plain-labeled design's blocks.

    The set is defining exactly when the verdict is ``"1"``.
    """
    blocks = [design.blocks[i] for i in S]
    return completion_search(design.v, blocks, **budget)
