"""Exact verifiers.  Every check is total: all violations are collected (up to a
cap) instead of stopping at the first one."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .core import LabeledDesign, format_label, pair_table, underlying

MAX_VIOLATIONS = 1000


@dataclass
class Report:
    checks: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    blocks: int = 0
    pairs: int = 0
    dropped: int = 0

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def check(self, name: str, ok: bool) -> None:
        self.checks.append((name, bool(ok)))

    def add(self, kind: str, details: str) -> None:
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append((kind, details))
        else:
            self.dropped += 1

    def merge(self, other: "Report") -> "Report":
        return Report(self.checks + other.checks, self.violations + other.violations,
                      max(self.blocks, other.blocks), max(self.pairs, other.pairs),
                      self.dropped + other.dropped)

    def render(self) -> str:
        lines = [f"RESULT {'pass' if self.passed else 'fail'}"]
        lines += [f"CHECK {name} {'pass' if ok else 'fail'}" for name, ok in self.checks]
        lines.append(f"COUNT blocks={self.blocks} pairs={self.pairs}")
        lines += [f"VIOLATION {kind} {details}" for kind, details in self.violations]
        if self.dropped:
            lines.append(f"VIOLATION truncated {self.dropped} more")
        return "\n".join(lines) + "\n"


def _lab(design: LabeledDesign, p: int) -> str:
    return format_label(design.space.labels[p])


def _block_str(design: LabeledDesign, i: int) -> str:
    return "#%d(%s)" % (i, ",".join(_lab(design, p) for p in design.blocks[i]))


def _coverage(design: LabeledDesign, report: Report, name: str, want: np.ndarray) -> None:
    table = pair_table(design)
    report.pairs = int(table.sum())
    bad = np.argwhere(table != want)
    report.check(name, len(bad) == 0)
    for x, y in bad:
        report.add("pair", f"{_lab(design, x)} {_lab(design, y)} count={table[x, y]} "
                           f"expected={want[x, y]}")


def _within_group_blocks(design: LabeledDesign, report: Report) -> None:
    gid = design.group_of()
    ok = True
    for i, b in enumerate(design.blocks):
        seen = {}
        for p in b:
            g = gid[p]
            if g in seen:
                ok = False
                report.add("group", f"block {_block_str(design, i)} meets group {g} in "
                                    f"{_lab(design, seen[g])} and {_lab(design, p)}")
                break
            seen[g] = p
    report.check("block_meets_group_once", ok)


def _expected_cross(design: LabeledDesign, lam: int, upper: bool) -> np.ndarray:
    gid = np.asarray(design.group_of())
    want = np.where(gid[:, None] != gid[None, :], lam, 0)
    if upper:
        want = np.triu(want, 1)
    return want


def verify_dd(design: LabeledDesign) -> Report:
    """Every ordered pair of distinct points is covered exactly ``lam`` times."""
    if not design.ordered:
        raise ValueError("verify_dd needs an ordered design")
    report = Report(blocks=design.b)
    v = design.v
    want = np.full((v, v), design.lam) - design.lam * np.eye(v, dtype=np.int64)
    _coverage(design, report, "ordered_pair_coverage", want)
    k = {len(b) for b in design.blocks}
    if k == {5}:
        report.check("block_count", design.b * 10 == design.lam * v * (v - 1))
    return report


def verify_dgdd(design: LabeledDesign) -> Report:
    """Cross-group ordered pairs covered ``lam`` times and no block meets a group twice."""
    if not design.ordered:
        raise ValueError("verify_dgdd needs an ordered design")
    if design.groups is None:
        raise ValueError("verify_dgdd needs a group partition")
    report = Report(blocks=design.b)
    _within_group_blocks(design, report)
    _coverage(design, report, "cross_pair_coverage", _expected_cross(design, design.lam, False))
    return report


def verify_super_simple(design: LabeledDesign) -> Report:
    """Any two blocks of the underlying design share at most two points."""
    report = Report(blocks=design.b)
    by_triple = defaultdict(list)
    for i, b in enumerate(design.blocks):
        for t in itertools.combinations(sorted(b), 3):
            by_triple[t].append(i)
    offending = sorted({(i, j) for ids in by_triple.values() if len(ids) > 1
                        for i, j in itertools.combinations(ids, 2)})
    report.check("super_simple", not offending)
    for i, j in offending:
        common = sorted(set(design.blocks[i]) & set(design.blocks[j]))
        report.add("intersection", f"{_block_str(design, i)} {_block_str(design, j)} share "
                                   + " ".join(_lab(design, p) for p in common))
    return report


def verify_unordered(design: LabeledDesign, K=None) -> Report:
    """Check a PBD, BIBD, GDD or TD: block sizes in ``K`` and pair coverage."""
    d = underlying(design) if design.ordered else design
    report = Report(blocks=d.b)
    if K is not None:
        bad = [i for i, b in enumerate(d.blocks) if len(b) not in set(K)]
        report.check("block_sizes", not bad)
        for i in bad:
            report.add("size", f"block {_block_str(d, i)} has size {len(d.blocks[i])}")
    if d.kind in ("GDD", "TD"):
        if d.groups is None:
            raise ValueError(f"{d.kind} needs a group partition")
        _within_group_blocks(d, report)
        _coverage(d, report, "pair_coverage", _expected_cross(d, d.lam, True))
        if d.kind == "TD":
            k = len(d.groups)
            bad = [i for i, b in enumerate(d.blocks) if len(b) != k]
            report.check("transversal", not bad)
            for i in bad:
                report.add("transversal", f"block {_block_str(d, i)} misses a group")
    elif d.kind in ("PBD", "BIBD"):
        v = d.v
        _coverage(d, report, "pair_coverage", np.triu(np.full((v, v), d.lam), 1))
    else:
        raise ValueError(f"verify_unordered does not handle kind {d.kind}")
    return report


def verify_resolution(design: LabeledDesign, classes) -> Report:
    """Each parallel class must cover every point exactly once."""
    report = Report(blocks=design.b)
    n = design.b
    for c in classes:
        for i in c:
            if not 0 <= i < n:
                raise ValueError(f"class index {i} out of range")
    used = [i for c in classes for i in c]
    report.check("classes_partition_blocks", sorted(used) == list(range(n)))
    if sorted(used) != list(range(n)):
        report.add("class", "block indices are not partitioned by the classes")
    ok = True
    for ci, c in enumerate(classes):
        count = [0] * design.v
        for i in c:
            for p in design.blocks[i]:
                count[p] += 1
        for p, m in enumerate(count):
            if m != 1:
                ok = False
                what = "misses" if m == 0 else f"covers {m} times"
                report.add("class", f"class {ci} {what} point {_lab(design, p)}")
    report.check("parallel_classes", ok)
    return report


def verify_design(design: LabeledDesign, *, super_simple: bool | None = None) -> Report:
    """Dispatch on the declared kind; ordered designs are also checked for super-simplicity."""
    if design.kind == "DD":
        report = verify_dd(design)
    elif design.kind == "DGDD":
        report = verify_dgdd(design)
    else:
        report = verify_unordered(design)
    if super_simple is None:
        super_simple = design.ordered
    if super_simple:
        report = report.merge(verify_super_simple(design))
    return report
