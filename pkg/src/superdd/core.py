"""Domain types for directed and undirected block designs.

Points are always stored as indices ``0..v-1``.  A :class:`PointSpace` keeps the
bijection between those indices and the external labels used in text files:
integer residues, coordinate pairs ``a:b`` and infinity points ``INFj``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

KINDS = ("DD", "DGDD", "GDD", "TD", "PBD", "BIBD")
ORDERED_KINDS = ("DD", "DGDD")


@dataclass(frozen=True, order=True)
class Inf:
    """The infinity point with subscript ``j``."""

    j: int

    def __str__(self) -> str:
        return f"INF{self.j}"


Label = Union[int, tuple, Inf]

_LABEL_RE = re.compile(r"^(?:INF(\d+)|(-?\d+):(-?\d+)|(-?\d+))$")


def parse_label(token: str) -> Label:
    """Parse ``12``, ``3:7`` or ``INF4`` into a label."""
    m = _LABEL_RE.match(token.strip())
    if not m:
        raise ValueError(f"bad point label {token!r}")
    if m.group(1) is not None:
        return Inf(int(m.group(1)))
    if m.group(2) is not None:
        return (int(m.group(2)), int(m.group(3)))
    return int(m.group(4))


def format_label(label: Label) -> str:
    if isinstance(label, tuple):
        return f"{label[0]}:{label[1]}"
    return str(label)


def label_key(label: Label):
    """Canonical sort key: residues, then coordinates, then infinity points."""
    if isinstance(label, Inf):
        return (2, label.j, 0)
    if isinstance(label, tuple):
        return (1, label[0], label[1])
    return (0, label, 0)


@dataclass(frozen=True)
class PointSpace:
    labels: tuple

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("point labels must be distinct")

    @classmethod
    def canonical(cls, labels: Iterable[Label]) -> "PointSpace":
        return cls(tuple(sorted(set(labels), key=label_key)))

    @classmethod
    def range(cls, v: int) -> "PointSpace":
        return cls(tuple(range(v)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def is_plain(self) -> bool:
        """True when the labels are exactly ``0..size-1``."""
        return self.labels == tuple(range(len(self.labels)))


@dataclass(frozen=True)
class LabeledDesign:
    """A design over a labeled point space.

    ``blocks`` holds index tuples.  For unordered kinds the tuple order carries
    no meaning.  ``groups`` is the optional group partition.
    """

    space: PointSpace
    blocks: tuple
    groups: tuple | None = None
    lam: int = 1
    kind: str = "DD"
    ordered: bool = True
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown design kind {self.kind!r}")
        v = self.space.size
        for b in self.blocks:
            if len(b) < 2 or len(set(b)) != len(b):
                raise ValueError(f"invalid block {b}")
            if min(b) < 0 or max(b) >= v:
                raise ValueError(f"block {b} leaves the point space")
        if self.groups is not None:
            seen = [p for g in self.groups for p in g]
            if sorted(seen) != list(range(v)):
                raise ValueError("groups must partition the point space")

    @classmethod
    def from_labels(cls, blocks: Iterable[Sequence[Label]], *, points=None, groups=None,
                    **kw) -> "LabeledDesign":
        blocks = [tuple(b) for b in blocks]
        if points is None:
            pts = {p for b in blocks for p in b}
            for g in groups or ():
                pts.update(g)
            space = PointSpace.canonical(pts)
        elif isinstance(points, PointSpace):
            space = points
        else:
            space = PointSpace.canonical(points)
        ix = space.index
        gs = None
        if groups is not None:
            gs = tuple(tuple(ix[p] for p in g) for g in groups)
        return cls(space, tuple(tuple(ix[p] for p in b) for b in blocks), gs, **kw)

    @property
    def v(self) -> int:
        return self.space.size

    @property
    def b(self) -> int:
        return len(self.blocks)

    def labeled_blocks(self) -> list[tuple]:
        labels = self.space.labels
        return [tuple(labels[p] for p in b) for b in self.blocks]

    def labeled_groups(self) -> list[tuple] | None:
        if self.groups is None:
            return None
        labels = self.space.labels
        return [tuple(labels[p] for p in g) for g in self.groups]

    def group_of(self) -> list[int]:
        """Map each point index to its group number (every point alone if no groups)."""
        gid = list(range(self.v))
        for i, g in enumerate(self.groups or ()):
            for p in g:
                gid[p] = i
        return gid

    def signature(self) -> "GroupTypeSignature":
        if self.groups is None:
            return GroupTypeSignature.of([1] * self.v)
        return GroupTypeSignature.of(len(g) for g in self.groups)

    def relabel(self, perm: Sequence[int]) -> "LabeledDesign":
        """Apply the point permutation ``i -> perm[i]`` to blocks and groups."""
        blocks = tuple(tuple(perm[p] for p in b) for b in self.blocks)
        groups = None
        if self.groups is not None:
            groups = tuple(tuple(perm[p] for p in g) for g in self.groups)
        return replace(self, blocks=blocks, groups=groups)

    def with_blocks(self, blocks) -> "LabeledDesign":
        return replace(self, blocks=tuple(tuple(b) for b in blocks))

    def plain(self) -> "LabeledDesign":
        """Same design with labels replaced by their indices."""
        return replace(self, space=PointSpace.range(self.v))


@dataclass(frozen=True)
class GroupTypeSignature:
    """Group type such as ``4^8 6^1``, stored as sorted (size, multiplicity) pairs."""

    parts: tuple = field(default=())

    @classmethod
    def of(cls, sizes: Iterable[int]) -> "GroupTypeSignature":
        c = Counter(sizes)
        if any(s <= 0 for s in c):
            raise ValueError("group sizes must be positive")
        return cls(tuple(sorted(c.items())))

    @classmethod
    def parse(cls, text: str) -> "GroupTypeSignature":
        sizes = []
        for tok in text.replace("(", " ").replace(")", " ").split():
            g, _, u = tok.partition("^")
            sizes += [int(g)] * int(u or 1)
        return cls.of(sizes)

    def sizes(self) -> list[int]:
        return [g for g, u in self.parts for _ in range(u)]

    def __str__(self) -> str:
        return " ".join(f"{g}^{u}" for g, u in self.parts)


def ordered_pairs_of(block: Sequence[int]) -> list[tuple]:
    """All pairs ``(b[i], b[j])`` with ``i < j``, in position order."""
    return list(itertools.combinations(block, 2))


def pair_table(design: LabeledDesign) -> np.ndarray:
    """Dense ``v x v`` coverage counts.

    Ordered designs count ``(x, y)`` at ``[x, y]``.  Unordered designs count the
    pair once at ``[min, max]`` so the table total equals the number of pairs.
    """
    v = design.v
    table = np.zeros((v, v), dtype=np.int64)
    by_len: dict[int, list] = {}
    for b in design.blocks:
        by_len.setdefault(len(b), []).append(b)
    for k, bl in by_len.items():
        arr = np.asarray(bl, dtype=np.int64)
        ii, jj = np.triu_indices(k, 1)
        x, y = arr[:, ii].ravel(), arr[:, jj].ravel()
        if not design.ordered:
            x, y = np.minimum(x, y), np.maximum(x, y)
        np.add.at(table, (x, y), 1)
    return table


def underlying(design: LabeledDesign) -> LabeledDesign:
    """Forget block order: DD becomes BIBD and DGDD becomes GDD, with lambda doubled."""
    if not design.ordered:
        raise ValueError("underlying() needs an ordered design")
    kind = {"DD": "BIBD", "DGDD": "GDD"}[design.kind]
    blocks = tuple(tuple(sorted(b)) for b in design.blocks)
    return replace(design, blocks=blocks, lam=2 * design.lam, kind=kind, ordered=False)


# ---------------------------------------------------------------------------
# design exchange format

def format_design(design: LabeledDesign) -> str:
    lines = [f"design v={design.v} lambda={design.lam} kind={design.kind} "
             f"ordered={int(design.ordered)}"]
    if design.name:
        lines.append(f"name: {design.name}")
    if not design.space.is_plain():
        lines.append("points: " + " ".join(format_label(x) for x in design.space.labels))
    for g in design.labeled_groups() or ():
        lines.append("group: " + " ".join(format_label(x) for x in g))
    for b in design.labeled_blocks():
        lines.append("(" + ",".join(format_label(x) for x in b) + ")")
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^design\s+v=(\d+)\s+lambda=(\d+)\s+kind=(\w+)\s+ordered=([01])\s*$")


def parse_design(text: str) -> LabeledDesign:
    """Read the text form written by :func:`format_design`."""
    header = None
    name = ""
    points = None
    groups: list[list] = []
    blocks: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if header is None:
                m = _HEADER_RE.match(line)
                if not m:
                    raise ValueError("expected 'design v=.. lambda=.. kind=.. ordered=..' header")
                header = m.groups()
            elif line.startswith("name:"):
                name = line[5:].strip()
            elif line.startswith("points:"):
                points = [parse_label(t) for t in line[7:].split()]
            elif line.startswith("group:"):
                groups.append([parse_label(t) for t in line[6:].split()])
            elif line.startswith("(") and line.endswith(")"):
                blocks.append(tuple(parse_label(t) for t in line[1:-1].split(",")))
            else:
                raise ValueError(f"unexpected line {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ValueError("empty design file")
    v, lam, kind, ordered = int(header[0]), int(header[1]), header[2], header[3] == "1"
    space = PointSpace(tuple(points)) if points is not None else PointSpace.range(v)
    if space.size != v:
        raise ValueError(f"header says v={v} but {space.size} points are listed")
    ix = space.index
    try:
        bl = tuple(tuple(ix[p] for p in b) for b in blocks)
        gs = tuple(tuple(ix[p] for p in g) for g in groups) if groups else None
    except KeyError as exc:
        raise ValueError(f"label {format_label(exc.args[0])} is not a point") from None
    return LabeledDesign(space, bl, gs, lam=lam, kind=kind, ordered=ordered, name=name)
