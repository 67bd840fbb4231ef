"""Recursive constructions: transversal designs from finite fields, GDD surgery,
weighting with directed ingredients, and filling groups with extra points.

Every public constructor verifies its output and raises
:class:`CompositionError` (carrying the report) when verification fails.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import networkx as nx

from .core import GroupTypeSignature, Inf, LabeledDesign, PointSpace, parse_design, parse_label
from .gf import field as gf_field
from .verify import Report, verify_design, verify_resolution, verify_unordered


class CompositionError(ValueError):
    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


def _checked(design: LabeledDesign, what: str, K=None) -> LabeledDesign:
    if design.ordered:
        report = verify_design(design)
    else:
        report = verify_unordered(design, K)
    if not report.passed:
        raise CompositionError(f"{what} failed verification", report)
    return design


# ---------------------------------------------------------------------------
# transversal designs and their surgery

def td_from_mols(k: int, q: int) -> LabeledDesign:
    """TD(k, q) with blocks ``{(0,x), (1,y), (i, x + a_i y)}`` over GF(q).

    ``a_i`` is the ``(i-1)``-th nonzero field element, which gives ``k - 2``
    mutually orthogonal Latin squares for any ``k <= q + 1``.
    """
    if k < 2:
        raise ValueError("a transversal design needs k >= 2")
    F = gf_field(q)  # raises for non prime powers
    if k > q + 1:
        raise ValueError(f"TD({k},{q}) needs k <= q + 1")
    a = [None, None] + [i - 1 for i in range(2, k)]
    blocks = []
    for x in F.elements():
        for y in F.elements():
            blocks.append(((0, x), (1, y)) + tuple((i, F.add(x, F.mul(a[i], y))) for i in range(2, k)))
    groups = [[(i, x) for x in range(q)] for i in range(k)]
    td = LabeledDesign.from_labels(blocks, groups=groups, kind="TD", ordered=False,
                                   name=f"TD({k},{q})")
    return _checked(td, f"TD({k},{q})")


def _restrict(design: LabeledDesign, keep: Sequence[int], blocks, groups, kind: str,
              extra_labels: Sequence = ()) -> LabeledDesign:
    labels = [design.space.labels[p] for p in keep] + list(extra_labels)
    return LabeledDesign.from_labels(blocks, points=PointSpace(tuple(labels)), groups=groups,
                                     kind=kind, ordered=False)


def truncate_td(td: LabeledDesign, group: int, y: int) -> LabeledDesign:
    """Delete the last ``y`` points of one group; blocks shrink to size k-1 or stay at k."""
    if td.groups is None or not 0 <= group < len(td.groups):
        raise IndexError(f"group {group} out of range")
    g = td.groups[group]
    if not 0 <= y <= len(g):
        raise ValueError(f"cannot remove {y} points from a group of {len(g)}")
    if y == 0:
        return td
    gone = set(g[len(g) - y:])
    labels = td.space.labels
    keep = [p for p in range(td.v) if p not in gone]
    blocks = [[labels[p] for p in b if p not in gone] for b in td.blocks]
    groups = [[labels[p] for p in G if p not in gone] for G in td.groups]
    groups = [G for G in groups if G]
    k = max(len(b) for b in td.blocks)
    out = _restrict(td, keep, blocks, groups, "GDD")
    return _checked(out, "truncated TD", {k - 1, k})


def delete_point(pbd: LabeledDesign, p) -> LabeledDesign:
    """Remove point ``p`` (a label); blocks through it become the groups."""
    if p not in pbd.space.index:
        raise KeyError(f"point {p} is not in the design")
    x = pbd.space.index[p]
    labels = pbd.space.labels
    groups = [[labels[q] for q in b if q != x] for b in pbd.blocks if x in b]
    blocks = [[labels[q] for q in b] for b in pbd.blocks if x not in b]
    keep = [q for q in range(pbd.v) if q != x]
    out = _restrict(pbd, keep, blocks, groups, "GDD")
    return _checked(out, "point-deleted PBD", {len(b) for b in pbd.blocks})


def adjoin_and_delete(td: LabeledDesign, z=None) -> LabeledDesign:
    """Add a point ``y`` to every group, then delete ``z`` (default: the first point).

    The blocks through ``z`` become groups of size k-1, ``z``'s own group with
    ``y`` becomes a group of size n, and the other groups plus ``y`` become
    blocks of size n+1.
    """
    if td.kind != "TD" or td.groups is None:
        raise ValueError("adjoin_and_delete needs a transversal design")
    labels = td.space.labels
    zi = 0 if z is None else td.space.index[z]
    y = Inf(0)
    gz = next(G for G in td.groups if zi in G)
    groups = [[labels[p] for p in b if p != zi] for b in td.blocks if zi in b]
    groups.append([labels[p] for p in gz if p != zi] + [y])
    blocks = [[labels[p] for p in b] for b in td.blocks if zi not in b]
    blocks += [[labels[p] for p in G] + [y] for G in td.groups if G is not gz]
    keep = [p for p in range(td.v) if p != zi]
    out = _restrict(td, keep, blocks, groups, "GDD", [y])
    k, n = len(td.groups), len(gz)
    return _checked(out, "adjoin-and-delete GDD", {k, n + 1})


def affine_rgdd(q: int) -> tuple[LabeledDesign, list[list[int]]]:
    """Resolvable q-GDD of type q^q: the affine plane of order q minus one parallel class.

    Points are ``(a, b)``; groups are the vertical lines, and the lines of slope
    ``m`` form parallel class ``m``.
    """
    F = gf_field(q)
    blocks, classes = [], []
    for m in F.elements():
        cls = []
        for c in F.elements():
            cls.append(len(blocks))
            blocks.append([(a, F.add(F.mul(m, a), c)) for a in F.elements()])
        classes.append(cls)
    groups = [[(a, b) for b in F.elements()] for a in F.elements()]
    d = LabeledDesign.from_labels(blocks, groups=groups, kind="GDD", ordered=False,
                                  name=f"RGDD({q}^{q})")
    _checked(d, "affine RGDD")
    report = verify_resolution(d, classes)
    if not report.passed:
        raise CompositionError("affine resolution failed", report)
    return d, classes


def extend_resolvable(rgdd: LabeledDesign, classes: Sequence[Sequence[int]], x: int) -> LabeledDesign:
    """Add a new group of ``x`` points; point ``i`` joins every block of class ``i``."""
    report = verify_resolution(rgdd, classes)
    if not report.passed:
        raise CompositionError("classes do not resolve the design", report)
    if not 0 <= x <= len(classes):
        raise ValueError(f"x={x} exceeds the {len(classes)} parallel classes")
    if x == 0:
        return rgdd
    labels = rgdd.space.labels
    top = max((lab.j + 1 for lab in labels if isinstance(lab, Inf)), default=0)
    new = [Inf(top + i) for i in range(x)]
    extra = {}
    for i in range(x):
        for bi in classes[i]:
            extra[bi] = new[i]
    blocks = [[labels[p] for p in b] + ([extra[i]] if i in extra else [])
              for i, b in enumerate(rgdd.blocks)]
    groups = [[labels[p] for p in G] for G in rgdd.groups] + [new]
    k = max(len(b) for b in rgdd.blocks)
    out = _restrict(rgdd, range(rgdd.v), blocks, groups, "GDD", new)
    return _checked(out, "extended RGDD", {k, k + 1})


def product_expand(dgdd: LabeledDesign, factor: int) -> LabeledDesign:
    """Inflate a DGDD by ``factor`` using TD(k, factor) on each block times Z_factor.

    Each TD block takes its points in the order of the master block, so every
    ordered master pair spreads over the fibres with its direction kept.
    """
    if factor == 1:
        return dgdd
    if dgdd.groups is None or not dgdd.ordered:
        raise ValueError("product_expand needs a DGDD")
    k = max(len(b) for b in dgdd.blocks)
    td = td_from_mols(k, factor)
    slots = [{td.space.labels[p][0]: td.space.labels[p][1] for p in tb} for tb in td.blocks]
    # point (x, j) of U x Z_factor gets index x * factor + j
    blocks = [tuple(x * factor + slot[j] for j, x in enumerate(b))
              for b in dgdd.blocks for slot in slots]
    groups = tuple(tuple(x * factor + j for x in G for j in range(factor)) for G in dgdd.groups)
    out = LabeledDesign(PointSpace.range(dgdd.v * factor), tuple(blocks), groups, kind="DGDD")
    return _checked(out, "product expansion")


# ---------------------------------------------------------------------------
# weighting

@dataclass
class CompositionRecipe:
    master: LabeledDesign
    default_weight: int = 1
    point_weights: dict = field(default_factory=dict)  # label -> weight
    ingredients: dict = field(default_factory=dict)    # GroupTypeSignature -> design
    added: int = 0
    fillers: dict = field(default_factory=dict)        # group index -> design
    fill_all: LabeledDesign | None = None
    coherent: bool = False  # align TD ingredients along the master's trades

    def weight(self, p: int) -> int:
        w = self.point_weights.get(self.master.space.labels[p], self.default_weight)
        if w < 0:
            raise ValueError("weights must be nonnegative")
        return w


class IngredientRegistry:
    """Verified ingredients keyed by group type; directed designs also by order."""

    def __init__(self):
        self._by_sig: dict = {}
        self._dd: dict = {}

    def add(self, design: LabeledDesign) -> None:
        _checked(design, f"ingredient {design.name or design.kind}")
        if design.kind == "DD":
            self._dd[design.v] = design
        else:
            self._by_sig.setdefault(design.signature(), design)

    def get(self, sig: GroupTypeSignature | str) -> LabeledDesign:
        if isinstance(sig, str):
            sig = GroupTypeSignature.parse(sig)
        try:
            return self._by_sig[sig]
        except KeyError:
            raise CompositionError(f"no ingredient of type {sig}") from None

    def dd(self, v: int) -> LabeledDesign:
        try:
            return self._dd[v]
        except KeyError:
            raise CompositionError(f"no 2-({v},5,1)DD ingredient") from None

    def signatures(self) -> list[str]:
        return [str(s) for s in self._by_sig]


def _bind_groups(ingredient: LabeledDesign, weights: Sequence[int]) -> list[int]:
    """Match ingredient groups to block positions by size, first fit in group order."""
    free = list(range(len(ingredient.groups)))
    out = []
    for w in weights:
        for gi in free:
            if len(ingredient.groups[gi]) == w:
                out.append(gi)
                free.remove(gi)
                break
        else:
            raise CompositionError(f"ingredient {ingredient.name} has no free group of size {w}")
    if free:
        raise CompositionError(f"ingredient {ingredient.name} has more groups than the block")
    return out


def coherent_directions(master: LabeledDesign, q: int, blocks: Sequence[int]) -> dict | None:
    """Pick a direction of the affine plane over GF(q) for every (block, point) slot.

    Slots joined by a trade of the master (through either shared point) get the
    same direction, and the slots of one block get distinct directions.  A TD
    built from these directions then lifts every master trade to ``q*q``
    parallel copies, so the weighted design keeps the master's trade graph
    structure.  Returns ``None`` when ``q + 1`` directions do not suffice.
    """
    from .trades import trade_graph

    chosen = set(blocks)
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in trade_graph(master).edges:
        if a in chosen and b in chosen:
            for x in set(master.blocks[a]) & set(master.blocks[b]):
                parent[find((a, x))] = find((b, x))
    conflict = nx.Graph()
    for i in blocks:
        slots = [find((i, x)) for x in master.blocks[i]]
        if len(set(slots)) < len(slots):
            return None
        conflict.add_nodes_from(slots)
        conflict.add_edges_from((s, t) for n, s in enumerate(slots) for t in slots[n + 1:])
    for strategy in ("DSATUR", "largest_first", "smallest_last"):
        colors = nx.coloring.greedy_color(conflict, strategy)
        if max(colors.values(), default=0) < q + 1:
            return {(i, x): colors[find((i, x))] for i in blocks for x in master.blocks[i]}
    return None


def _direction_td(q: int, dirs: Sequence[int]) -> list[tuple]:
    """Blocks of a TD(k,q) indexed by (a, b): direction 0 reads ``a``, direction
    ``c >= 1`` reads ``e*a + b`` for the (c-1)-th field element ``e``."""
    F = gf_field(q)
    out = []
    for a in range(q):
        for b in range(q):
            out.append(tuple(a if d == 0 else F.add(F.mul(d - 1, a), b) for d in dirs))
    return out


def inflate(recipe: CompositionRecipe) -> tuple[LabeledDesign, list[int]]:
    """Weight the master and replace each block; returns the DGDD and point offsets.

    Point ``(x, j)`` of the weighted design has index ``offset[x] + j``.
    """
    master = recipe.master
    weights = [recipe.weight(p) for p in range(master.v)]
    offset, total = [], 0
    for w in weights:
        offset.append(total)
        total += w
    dirs: dict = {}
    if recipe.coherent and master.ordered:
        by_q: dict = {}
        for i, b in enumerate(master.blocks):
            ws = {weights[x] for x in b}
            ing = recipe.ingredients.get(GroupTypeSignature.of([weights[x] for x in b]))
            if (len(ws) == 1 and ing is not None and not ing.ordered and ing.kind == "TD"
                    and len(b) <= min(ws) + 1):
                by_q.setdefault(min(ws), []).append(i)
        for q, idx in by_q.items():
            dirs.update(coherent_directions(master, q, idx) or {})
    blocks = []
    for i, b in enumerate(master.blocks):
        if (i, b[0]) in dirs:
            q = weights[b[0]]
            for t in _direction_td(q, [dirs[i, x] for x in b]):
                blocks.append(tuple(offset[x] + j for x, j in zip(b, t)))
            continue
        b = [x for x in b if weights[x] > 0]
        if len(b) < 2:
            continue
        ws = [weights[x] for x in b]
        sig = GroupTypeSignature.of(ws)
        ing = recipe.ingredients.get(sig)
        if ing is None and set(ws) == {1} and master.ordered:
            blocks.append(tuple(offset[x] for x in b))
            continue
        if ing is None:
            raise CompositionError(f"no ingredient for block weight type {sig}")
        slots = _bind_groups(ing, ws)
        where = {}
        for pos, (x, gi) in enumerate(zip(b, slots)):
            for j, p in enumerate(ing.groups[gi]):
                where[p] = (pos, offset[x] + j)
        if ing.ordered:
            blocks += [tuple(where[p][1] for p in ib) for ib in ing.blocks]
        elif master.ordered:
            blocks += [tuple(q for _, q in sorted(where[p] for p in ib)) for ib in ing.blocks]
        else:
            # nothing supplies a direction: use each block both ways and let
            # the verifier decide whether the result is acceptable
            for ib in ing.blocks:
                t = tuple(where[p][1] for p in ib)
                blocks += [t, t[::-1]]
    groups = []
    for G in master.groups or [[p] for p in range(master.v)]:
        g = [offset[x] + j for x in G for j in range(weights[x])]
        if g:
            groups.append(g)
    d = LabeledDesign(PointSpace.range(total), tuple(blocks), tuple(tuple(g) for g in groups),
                      kind="DGDD")
    return d, offset


def fill_groups(dgdd: LabeledDesign, m: int, fillers) -> LabeledDesign:
    """Adjoin ``m`` new points and put a filler design on each group plus those points.

    ``fillers`` is one design for every group or a sequence with one per group.
    A filler DGDD of type ``1^g m^1`` has its size-``m`` group placed on the new
    points.  The result is a 2-(v,5,1)DD and is verified before returning.
    """
    if dgdd.groups is None:
        raise ValueError("fill_groups needs a group partition")
    if isinstance(fillers, LabeledDesign):
        fillers = [fillers] * len(dgdd.groups)
    if len(fillers) != len(dgdd.groups):
        raise CompositionError(f"{len(fillers)} fillers for {len(dgdd.groups)} groups")
    labels = list(dgdd.space.labels)
    top = max((lab.j + 1 for lab in labels if isinstance(lab, Inf)), default=0)
    new = [Inf(top + i) for i in range(m)]
    blocks = [[labels[p] for p in b] for b in dgdd.blocks]
    for G, f in zip(dgdd.groups, fillers):
        pts = [labels[p] for p in G]
        if f.v != len(pts) + m:
            raise CompositionError(f"filler on {f.v} points for a group of {len(pts)} plus {m}")
        if f.kind == "DD" or f.groups is None:
            place = pts + new
            image = {i: place[i] for i in range(f.v)}
        else:
            big = [g for g in f.groups if len(g) == m and m > 1]
            rest = [g for g in f.groups if not big or g is not big[0]]
            if m > 1 and not big:
                raise CompositionError(f"filler {f.name} has no group of size {m}")
            single = [p for g in rest for p in g]
            image = {p: pts[i] for i, p in enumerate(single[:len(pts)])}
            tail = (big[0] if big else single[len(pts):])
            image.update({p: new[i] for i, p in enumerate(tail)})
        blocks += [[image[p] for p in b] for b in f.blocks]
    out = LabeledDesign.from_labels(blocks, points=PointSpace(tuple(labels + new)), kind="DD",
                                    name=dgdd.name)
    return _checked(out, "filled design")


def wilson_compose(recipe: CompositionRecipe) -> LabeledDesign:
    """Weight, replace blocks by ingredients, then fill groups if fillers are given."""
    inflated, _ = inflate(recipe)
    if recipe.fill_all is None and not recipe.fillers:
        if recipe.added:
            raise CompositionError("added points need fillers")
        return _checked(inflated, "weighted DGDD")
    _checked(inflated, "weighted DGDD")
    fillers = []
    for i in range(len(inflated.groups)):
        f = recipe.fillers.get(i, recipe.fill_all)
        if f is None:
            raise CompositionError(f"group {i} has no filler")
        fillers.append(f)
    return fill_groups(inflated, recipe.added, fillers)


# ---------------------------------------------------------------------------
# recipe text

Resolver = Callable[[str], LabeledDesign]


def resolve_ref(ref: str, catalog: Resolver | None = None, base: Path | None = None) -> LabeledDesign:
    """``catalog:NAME``, ``td:k,q``, ``rgdd:q`` or a design file path."""
    if ref.startswith("catalog:"):
        if catalog is None:
            raise CompositionError("catalog references need a catalog")
        return catalog(ref[8:])
    m = re.fullmatch(r"td:(\d+),(\d+)", ref)
    if m:
        return td_from_mols(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"rgdd:(\d+)", ref)
    if m:
        return affine_rgdd(int(m.group(1)))[0]
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    return parse_design(path.read_text())


def parse_recipe(text: str, catalog: Resolver | None = None, base: Path | None = None) -> CompositionRecipe:
    """Read ``master``, ``weight``, ``ingredient``, ``add`` and ``fill`` lines."""
    recipe = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "master":
                recipe = CompositionRecipe(resolve_ref(words[1], catalog, base))
            elif words[0] == "weight" and words[1] == "default":
                pending.append(("default", int(words[2])))
            elif words[0] == "weight" and words[1] == "point":
                pending.append(("point", parse_label(words[2]), int(words[3])))
            elif words[0] == "ingredient" and words[1].startswith("sig="):
                sig = " ".join([words[1][4:]] + [w for w in words[2:-1]])
                pending.append(("ingredient", GroupTypeSignature.parse(sig),
                                resolve_ref(words[-1], catalog, base)))
            elif words[0] == "add":
                pending.append(("add", int(words[1])))
            elif words == ["coherent"]:
                pending.append(("coherent",))
            elif words[0] == "fill" and words[1] == "group":
                pending.append(("fill", int(words[2]), resolve_ref(words[3], catalog, base)))
            elif words[0] == "fill" and words[1] == "all":
                pending.append(("fill_all", resolve_ref(words[2], catalog, base)))
            else:
                raise ValueError(f"unknown recipe line {line!r}")
        except (IndexError, ValueError, OSError, KeyError) as exc:
            raise CompositionError(f"line {lineno}: {exc}") from None
    if recipe is None:
        raise CompositionError("recipe has no master line")
    for item in pending:
        if item[0] == "default":
            recipe.default_weight = item[1]
        elif item[0] == "point":
            recipe.point_weights[item[1]] = item[2]
        elif item[0] == "ingredient":
            recipe.ingredients[item[1]] = item[2]
        elif item[0] == "add":
            recipe.added = item[1]
        elif item[0] == "coherent":
            recipe.coherent = True
        elif item[0] == "fill":
            recipe.fillers[item[1]] = item[2]
        else:
            recipe.fill_all = item[1]
    return recipe


def block_count(recipe: CompositionRecipe) -> Counter:
    """Expected block counts by source, for the conservation check."""
    c = Counter()
    weights = [recipe.weight(p) for p in range(recipe.master.v)]
    for b in recipe.master.blocks:
        ws = [weights[x] for x in b if weights[x] > 0]
        if len(ws) < 2:
            continue
        ing = recipe.ingredients.get(GroupTypeSignature.of(ws))
        c["ingredients"] += 1 if ing is None else ing.b * (1 if ing.ordered or recipe.master.ordered else 2)
    if recipe.fill_all is not None or recipe.fillers:
        groups = recipe.master.groups or [[p] for p in range(recipe.master.v)]
        live = [G for G in groups if any(weights[x] for x in G)]
        for i in range(len(live)):
            f = recipe.fillers.get(i, recipe.fill_all)
            if f is not None:
                c["fillers"] += f.b
    return c


__all__ = [
    "CompositionError", "CompositionRecipe", "IngredientRegistry", "adjoin_and_delete",
    "affine_rgdd", "block_count", "coherent_directions", "delete_point", "extend_resolvable", "fill_groups", "inflate",
    "parse_recipe", "product_expand", "resolve_ref", "td_from_mols", "truncate_td",
    "wilson_compose",
]
