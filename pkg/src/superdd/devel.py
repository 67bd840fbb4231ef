"""Catalog DSL and base-block development.

A catalog file is a sequence of ``design`` sections::

    design DGDD(5^7)
    kind DGDD
    space mod 35
    groups mod 7
    develop +7 mod 35
    base (21,17,5,6,15)
    base (3,6,INF2,0,17) develop +2 mod 30 count 7 sub INF2 -> shift mod 6
    claims blocks=105 fnum=53 fden=105

``emit_catalog`` writes the canonical form, so ``parse(emit(x))`` is stable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .core import Inf, Label, LabeledDesign, PointSpace, format_label, parse_label


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# data model

@dataclass(frozen=True)
class OrbitAction:
    """One of the four development actions.

    ``cyclic``  adds ``step`` mod ``modulus`` to integer labels.
    ``coords``  acts on coordinate labels ``a:b`` component-wise; ``None`` marks a
                frozen component, so ``(None, (1, 12))`` develops the second
                coordinate only.
    ``cycles``  advances every listed cycle of labels by ``step`` positions.
    ``none``    the identity (a literal block).
    """

    kind: str
    step: int = 1
    modulus: int = 1
    components: tuple = ()
    cycles: tuple = ()

    @classmethod
    def cyclic(cls, step: int, modulus: int) -> "OrbitAction":
        return cls("cyclic", step, modulus)

    @classmethod
    def coords(cls, *components) -> "OrbitAction":
        return cls("coords", components=tuple(components))

    @classmethod
    def multi_cycle(cls, cycles, step: int) -> "OrbitAction":
        return cls("cycles", step, cycles=tuple(tuple(c) for c in cycles))

    @classmethod
    def identity(cls) -> "OrbitAction":
        return cls("none")

    @property
    def label(self) -> str:
        """Name of the action family."""
        if self.kind == "coords":
            active = [c for c in self.components if c]
            if len(active) == 1 and self.components[-1] and len(self.components) == 2:
                return "secondCoordinate"
            return "productCyclic"
        return {"cyclic": "cyclic", "cycles": "multiCycle", "none": "identity"}[self.kind]

    def orbit_length(self) -> int:
        if self.kind == "cyclic":
            return self.modulus // math.gcd(self.step, self.modulus)
        if self.kind == "coords":
            return math.lcm(*[g // math.gcd(t, g) for t, g in filter(None, self.components)] or [1])
        if self.kind == "cycles":
            return math.lcm(*[len(c) // math.gcd(self.step, len(c)) for c in self.cycles])
        return 1

    def added_value(self, i: int) -> int:
        """The value added at iteration ``i``; substitution rules key on it."""
        if self.kind == "cyclic":
            return i * self.step % self.modulus
        if self.kind == "cycles":
            return i * self.step
        if self.kind == "coords":
            active = [c for c in self.components if c]
            if len(active) == 1:
                t, g = active[0]
                return i * t % g
            return i
        return 0

    def mover(self, i: int) -> Callable[[Label], Label]:
        if self.kind == "cyclic":
            s, g = i * self.step, self.modulus
            return lambda x: (x + s) % g if isinstance(x, int) else x
        if self.kind == "coords":
            comps = self.components

            def move(x):
                if not isinstance(x, tuple):
                    return x
                return tuple(c if comp is None else (c + i * comp[0]) % comp[1]
                             for c, comp in zip(x, comps))
            return move
        if self.kind == "cycles":
            table = {}
            for c in self.cycles:
                n = len(c)
                for pos, lab in enumerate(c):
                    table[lab] = c[(pos + i * self.step) % n]
            return lambda x: table.get(x, x)
        return lambda x: x


@dataclass(frozen=True)
class Substitution:
    """Rewrite an infinity label depending on the added value ``s``.

    ``map``   replaces ``target`` by ``mapping[s % modulus]``.
    ``shift`` replaces ``INFj`` by ``INF((j + s) % modulus)``.
    """

    target: Inf
    kind: str
    modulus: int
    mapping: tuple = ()

    def apply(self, s: int) -> Label:
        r = s % self.modulus
        if self.kind == "shift":
            return Inf((self.target.j + r) % self.modulus)
        table = dict(self.mapping)
        if r not in table:
            raise DSLError(f"substitution for {self.target} has no entry for residue {r}")
        return table[r]


@dataclass(frozen=True)
class BaseDirective:
    block: tuple
    action: OrbitAction | None = None
    count: int | None = None
    subs: tuple = ()
    patches: tuple = ()
    literal: bool = False
    line: int = 0


@dataclass(frozen=True)
class Include:
    """Embed another catalog design, mapping its points (in index order) to ``labels``."""

    name: str
    labels: tuple
    line: int = 0


@dataclass(frozen=True)
class SpaceDecl:
    kind: str  # mod | grid | range | labels
    params: tuple
    infty: int = 0

    def labels(self) -> list:
        if self.kind == "mod":
            base = list(range(self.params[0]))
        elif self.kind == "grid":
            m, n = self.params
            base = [(a, b) for a in range(m) for b in range(n)]
        elif self.kind == "range":
            base = list(range(self.params[0], self.params[1] + 1))
        else:
            base = list(self.params)
        return base + [Inf(j) for j in range(self.infty)]


@dataclass(frozen=True)
class GroupDecl:
    kind: str  # mod | pattern | explicit
    modulus: int = 0
    terms: tuple = ()
    values: tuple = ()
    labels: tuple = ()


@dataclass
class ConstructionSpec:
    name: str
    kind: str = "DD"
    lam: int = 1
    k: int = 5
    space: SpaceDecl | None = None
    groups: list = field(default_factory=list)
    type_sig: str | None = None
    action: OrbitAction | None = None
    directives: list = field(default_factory=list)
    claims: dict = field(default_factory=dict)
    line: int = 0

    def point_labels(self) -> list:
        return self.space.labels() if self.space else []

    def resolve_groups(self) -> list[tuple] | None:
        if not self.groups:
            return None
        labels = self.point_labels()
        out: list[tuple] = []
        for g in self.groups:
            if g.kind == "mod":
                ints = [x for x in labels if isinstance(x, int)]
                out += [tuple(x for x in ints if x % g.modulus == r) for r in range(g.modulus)]
            elif g.kind == "pattern":
                out += [tuple(_eval_term(t, i, self.space) for t in g.terms) for i in g.values]
            else:
                out.append(tuple(g.labels))
        return out


# ---------------------------------------------------------------------------
# parsing helpers

_INT = r"-?\d+"
_TERM_INT = r"(?:i(?:[+-]\d+)?|-?\d+)"
_TERM_RE = re.compile(rf"^(?:INF\d+|{_TERM_INT}(?::{_TERM_INT})?)$")


def _eval_int(expr: str, i: int) -> int:
    if expr.startswith("i"):
        return i + (int(expr[1:]) if len(expr) > 1 else 0)
    return int(expr)


def _eval_term(term: str, i: int, space: SpaceDecl) -> Label:
    if term.startswith("INF"):
        return parse_label(term)
    if ":" in term:
        a, b = (_eval_int(t, i) for t in term.split(":"))
        if space.kind == "grid":
            a, b = a % space.params[0], b % space.params[1]
        return (a, b)
    x = _eval_int(term, i)
    return x % space.params[0] if space.kind == "mod" else x


def _expand_labels(tokens: Sequence[str]) -> list:
    """Labels with ``a..b`` ranges for integers or infinity points."""
    out = []
    for tok in tokens:
        if ".." in tok:
            lo, hi = (parse_label(t) for t in tok.split(".."))
            if isinstance(lo, Inf) and isinstance(hi, Inf):
                out += [Inf(j) for j in range(lo.j, hi.j + 1)]
            elif isinstance(lo, int) and isinstance(hi, int):
                out += list(range(lo, hi + 1))
            else:
                raise ValueError(f"bad range {tok!r}")
        else:
            out.append(parse_label(tok))
    return out


def _compress_labels(labels: Sequence[Label]) -> str:
    """Inverse of :func:`_expand_labels` using ranges for runs of length >= 3."""
    parts, i = [], 0
    while i < len(labels):
        j = i
        while j + 1 < len(labels) and _succ(labels[j]) == labels[j + 1]:
            j += 1
        if j - i >= 2:
            parts.append(f"{format_label(labels[i])}..{format_label(labels[j])}")
        else:
            parts += [format_label(x) for x in labels[i:j + 1]]
        i = j + 1
    return " ".join(parts)


def _succ(x: Label):
    if isinstance(x, Inf):
        return Inf(x.j + 1)
    if isinstance(x, int) and not isinstance(x, bool):
        return x + 1
    return None


def format_tuple(labels: Sequence[Label]) -> str:
    return "(" + ",".join(format_label(x) for x in labels) + ")"


class _Line:
    """Cursor over one DSL line for column-accurate diagnostics."""

    def __init__(self, text: str, lineno: int):
        self.text, self.lineno, self.pos = text, lineno, 0

    def error(self, message: str, pos: int | None = None) -> DSLError:
        return DSLError(message, self.lineno, (self.pos if pos is None else pos) + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def done(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def match(self, pattern: re.Pattern):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return m

    def tuple_(self, k: int | None = None) -> tuple:
        self.skip()
        start = self.pos
        if not self.text.startswith("(", start):
            raise self.error("expected '('")
        end = self.text.find(")", start)
        if end < 0:
            raise self.error("unclosed tuple")
        items, col = [], start + 1
        for raw in self.text[start + 1:end].split(","):
            tok = raw.strip()
            try:
                items.append(parse_label(tok))
            except ValueError:
                off = col + len(raw) - len(raw.lstrip())
                raise self.error(f"bad tuple entry {tok!r} (missing comma?)", off) from None
            col += len(raw) + 1
        if k is not None and len(items) != k:
            raise self.error(f"tuple has {len(items)} entries, expected {k}", start)
        self.pos = end + 1
        return tuple(items)


_CYCLIC_RE = re.compile(r"\+(\d+)\s+mod\s+(\d+)")
_COMP = r"(?:-|\+\d+\s+mod\s+\d+)"
_COORDS_RE = re.compile(rf"\(\s*({_COMP}(?:\s*,\s*{_COMP})+)\s*\)")
_CYCLES_RE = re.compile(r"cycles\s+((?:\([^()]*\)\s*)+)\+(\d+)")
_NONE_RE = re.compile(r"none\b")


def _parse_action(cur: _Line) -> OrbitAction:
    m = cur.match(_CYCLIC_RE)
    if m:
        t, g = int(m.group(1)), int(m.group(2))
        if g <= 0 or t <= 0:
            raise cur.error("step and modulus must be positive", m.start())
        return OrbitAction.cyclic(t, g)
    m = cur.match(_COORDS_RE)
    if m:
        comps = []
        for part in m.group(1).split(","):
            part = part.strip()
            if part == "-":
                comps.append(None)
            else:
                t, g = _CYCLIC_RE.match(part).groups()
                comps.append((int(t), int(g)))
        return OrbitAction.coords(*comps)
    m = cur.match(_CYCLES_RE)
    if m:
        cycles = [tuple(_expand_labels(c.split())) for c in re.findall(r"\(([^()]*)\)", m.group(1))]
        flat = [x for c in cycles for x in c]
        if len(set(flat)) != len(flat):
            raise cur.error("cycles must be disjoint", m.start())
        return OrbitAction.multi_cycle(cycles, int(m.group(2)))
    if cur.match(_NONE_RE):
        return OrbitAction.identity()
    raise cur.error("expected a development action")


def emit_action(a: OrbitAction) -> str:
    if a.kind == "cyclic":
        return f"+{a.step} mod {a.modulus}"
    if a.kind == "coords":
        return "(" + ", ".join("-" if c is None else f"+{c[0]} mod {c[1]}"
                               for c in a.components) + ")"
    if a.kind == "cycles":
        return "cycles " + " ".join(f"({_compress_labels(c)})" for c in a.cycles) + f" +{a.step}"
    return "none"


_OPT_DEVELOP = re.compile(r"develop\b")
_OPT_COUNT = re.compile(r"count\s+(\d+)")
_OPT_SUBMAP = re.compile(r"sub\s+(INF\d+)\s*->\s*map\s+mod\s+(\d+)\s*\{([^}]*)\}")
_OPT_SUBSHIFT = re.compile(r"sub\s+(INF\d+)\s*->\s*shift\s+mod\s+(\d+)")
_OPT_PATCH = re.compile(r"patch\b")
_ARROW = re.compile(r"->")


def _parse_base(cur: _Line, k: int, literal: bool) -> BaseDirective:
    block = cur.tuple_(k)
    if len(set(block)) != len(block):
        raise cur.error("repeated point in block", 0)
    action = count = None
    subs, patches = [], []
    while not cur.done():
        start = cur.pos
        if cur.match(_OPT_DEVELOP):
            action = _parse_action(cur)
        elif m := cur.match(_OPT_COUNT):
            count = int(m.group(1))
        elif m := cur.match(_OPT_SUBMAP):
            mapping = []
            for item in filter(None, (x.strip() for x in m.group(3).split(","))):
                r, _, lab = item.partition(":")
                try:
                    mapping.append((int(r), parse_label(lab)))
                except ValueError:
                    raise cur.error(f"bad map entry {item!r}", start) from None
            subs.append(Substitution(parse_label(m.group(1)), "map", int(m.group(2)), tuple(mapping)))
        elif m := cur.match(_OPT_SUBSHIFT):
            subs.append(Substitution(parse_label(m.group(1)), "shift", int(m.group(2))))
        elif cur.match(_OPT_PATCH):
            src = cur.tuple_(k)
            if not cur.match(_ARROW):
                raise cur.error("expected '->' in patch")
            dst = cur.tuple_(k)
            patches.append((src, dst))
        else:
            raise cur.error("unexpected text in directive")
    if literal and (action or count or subs or patches):
        raise cur.error("literal blocks take no options", 0)
    return BaseDirective(block, action, count, tuple(subs), tuple(patches), literal, cur.lineno)


def parse_catalog(text: str) -> list[ConstructionSpec]:
    """Parse catalog DSL text into construction specs (strict, first error wins)."""
    specs: list[ConstructionSpec] = []
    cur_spec: ConstructionSpec | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        word, _, rest = line.strip().partition(" ")
        offset = len(line) - len(line.lstrip()) + len(word) + 1
        cur = _Line(line, lineno)
        cur.pos = min(offset, len(line))
        rest = rest.strip()
        if word == "design":
            if not rest:
                raise cur.error("design needs a name")
            cur_spec = ConstructionSpec(rest, line=lineno)
            specs.append(cur_spec)
            continue
        if cur_spec is None:
            raise DSLError(f"statement {word!r} before any 'design'", lineno, 1)
        s = cur_spec
        try:
            if word == "kind":
                if rest not in ("DD", "DGDD"):
                    raise cur.error(f"kind must be DD or DGDD, not {rest!r}")
                s.kind = rest
            elif word == "lambda":
                s.lam = int(rest)
            elif word == "blocksize":
                s.k = int(rest)
            elif word == "space":
                s.space = _parse_space(rest, cur, s.space)
            elif word == "infty":
                if s.space is None:
                    raise cur.error("'infty' must follow 'space'")
                s.space = SpaceDecl(s.space.kind, s.space.params, int(rest))
            elif word == "groups":
                s.groups.append(_parse_groups(rest, cur))
            elif word == "group:":
                s.groups.append(GroupDecl("explicit", labels=tuple(_expand_labels(rest.split()))))
            elif word == "type":
                s.type_sig = rest
            elif word == "develop":
                s.action = _parse_action(cur)
                if not cur.done():
                    raise cur.error("unexpected text after action")
            elif word in ("base", "block"):
                s.directives.append(_parse_base(cur, s.k, word == "block"))
            elif word == "include":
                name, sep, labs = rest.partition(" on ")
                if not sep:
                    raise cur.error("expected 'include <name> on <labels>'")
                s.directives.append(Include(name.strip(), tuple(_expand_labels(labs.split())), lineno))
            elif word == "claims":
                for item in rest.split():
                    key, eq, val = item.partition("=")
                    if not eq or key not in ("blocks", "fnum", "fden"):
                        raise cur.error(f"bad claim {item!r}")
                    s.claims[key] = int(val)
            else:
                raise DSLError(f"unknown statement {word!r}", lineno, 1)
        except DSLError:
            raise
        except ValueError as exc:
            raise cur.error(str(exc)) from None
    for s in specs:
        _check_spec(s)
    return specs


def _parse_space(rest: str, cur: _Line, old: SpaceDecl | None) -> SpaceDecl:
    infty = old.infty if old else 0
    if m := re.fullmatch(r"mod\s+(\d+)", rest):
        return SpaceDecl("mod", (int(m.group(1)),), infty)
    if m := re.fullmatch(r"(\d+)x(\d+)", rest):
        return SpaceDecl("grid", (int(m.group(1)), int(m.group(2))), infty)
    if m := re.fullmatch(r"range\s+(-?\d+)\.\.(-?\d+)", rest):
        return SpaceDecl("range", (int(m.group(1)), int(m.group(2))), infty)
    if rest.startswith("labels "):
        return SpaceDecl("labels", tuple(_expand_labels(rest[7:].split())), infty)
    raise cur.error(f"bad space declaration {rest!r}")


def _parse_groups(rest: str, cur: _Line) -> GroupDecl:
    if m := re.fullmatch(r"mod\s+(\d+)", rest):
        return GroupDecl("mod", modulus=int(m.group(1)))
    m = re.fullmatch(r"\{([^}]*)\}\s+for\s+i\s+in\s+(.+)", rest)
    if not m:
        raise cur.error("expected 'groups mod <d>' or 'groups {..} for i in ..'")
    terms = tuple(t.strip() for t in m.group(1).split(","))
    for t in terms:
        if not _TERM_RE.match(t):
            raise cur.error(f"bad group term {t!r}")
    rng = m.group(2).strip()
    if r := re.fullmatch(r"(-?\d+)\.\.(-?\d+)", rng):
        values = tuple(range(int(r.group(1)), int(r.group(2)) + 1))
    else:
        values = tuple(int(x) for x in rng.split(","))
    return GroupDecl("pattern", terms=terms, values=values)


def _check_spec(s: ConstructionSpec) -> None:
    if s.space is None:
        raise DSLError(f"design {s.name} declares no point space", s.line, 1)
    labels = s.point_labels()
    known = set(labels)
    for d in s.directives:
        if isinstance(d, Include):
            for x in d.labels:
                if x not in known:
                    raise DSLError(f"unknown label {format_label(x)}", d.line, 1)
            continue
        for x in d.block + tuple(x for pair in d.patches for t in pair for x in t):
            if x not in known:
                raise DSLError(f"unknown label {format_label(x)} in {s.name}", d.line, 1)
        action = OrbitAction.identity() if d.literal else (d.action or s.action)
        if action is None:
            raise DSLError(f"no development action for base block in {s.name}", d.line, 1)
        if d.count is not None and d.count > action.orbit_length():
            raise DSLError(f"count {d.count} exceeds orbit length {action.orbit_length()}",
                           d.line, 1)
        for sub in d.subs:
            for _, lab in sub.mapping:
                if lab not in known:
                    raise DSLError(f"unknown label {format_label(lab)}", d.line, 1)
    groups = s.resolve_groups()
    if groups is not None:
        flat = [x for g in groups for x in g]
        if set(flat) != set(labels) or len(flat) != len(labels):
            raise DSLError(f"groups of {s.name} do not partition the point space", s.line, 1)
        if s.type_sig is not None:
            from .core import GroupTypeSignature
            if GroupTypeSignature.parse(s.type_sig) != GroupTypeSignature.of(len(g) for g in groups):
                raise DSLError(f"declared type {s.type_sig} does not match the groups", s.line, 1)


# ---------------------------------------------------------------------------
# emission

def emit_spec(s: ConstructionSpec) -> str:
    out = [f"design {s.name}"]
    if s.kind != "DD":
        out.append(f"kind {s.kind}")
    if s.lam != 1:
        out.append(f"lambda {s.lam}")
    if s.k != 5:
        out.append(f"blocksize {s.k}")
    sp = s.space
    if sp.kind == "mod":
        out.append(f"space mod {sp.params[0]}")
    elif sp.kind == "grid":
        out.append(f"space {sp.params[0]}x{sp.params[1]}")
    elif sp.kind == "range":
        out.append(f"space range {sp.params[0]}..{sp.params[1]}")
    else:
        out.append("space labels " + _compress_labels(sp.params))
    if sp.infty:
        out.append(f"infty {sp.infty}")
    for g in s.groups:
        if g.kind == "mod":
            out.append(f"groups mod {g.modulus}")
        elif g.kind == "pattern":
            vals = g.values
            if len(vals) > 1 and list(vals) == list(range(vals[0], vals[-1] + 1)):
                rng = f"{vals[0]}..{vals[-1]}"
            else:
                rng = ",".join(map(str, vals))
            out.append("groups {" + ", ".join(g.terms) + "} for i in " + rng)
        else:
            out.append("group: " + _compress_labels(g.labels))
    if s.type_sig:
        out.append(f"type {s.type_sig}")
    if s.action:
        out.append(f"develop {emit_action(s.action)}")
    for d in s.directives:
        if isinstance(d, Include):
            out.append(f"include {d.name} on {_compress_labels(d.labels)}")
            continue
        if d.literal:
            out.append(f"block {format_tuple(d.block)}")
            continue
        parts = [f"base {format_tuple(d.block)}"]
        if d.action:
            parts.append(f"develop {emit_action(d.action)}")
        if d.count is not None:
            parts.append(f"count {d.count}")
        for sub in d.subs:
            if sub.kind == "shift":
                parts.append(f"sub {sub.target} -> shift mod {sub.modulus}")
            else:
                body = ", ".join(f"{r}:{format_label(lab)}" for r, lab in sub.mapping)
                parts.append(f"sub {sub.target} -> map mod {sub.modulus} {{{body}}}")
        for src, dst in d.patches:
            parts.append(f"patch {format_tuple(src)} -> {format_tuple(dst)}")
        out.append(" ".join(parts))
    if s.claims:
        out.append("claims " + " ".join(f"{k}={s.claims[k]}" for k in ("blocks", "fnum", "fden")
                                        if k in s.claims))
    return "\n".join(out) + "\n"


def emit_catalog(specs: Sequence[ConstructionSpec]) -> str:
    return "\n".join(emit_spec(s) for s in specs)


def roundtrip(spec: ConstructionSpec) -> ConstructionSpec:
    (out,) = parse_catalog(emit_spec(spec))
    return out


# ---------------------------------------------------------------------------
# development

Resolver = Callable[[str], LabeledDesign]


@dataclass(frozen=True)
class Developed:
    directive: int
    added: int | None
    block: tuple


def expand(spec: ConstructionSpec, resolve: Resolver | None = None) -> Iterator[Developed]:
    """Yield every developed block with the directive and added value that made it."""
    for di, d in enumerate(spec.directives):
        if isinstance(d, Include):
            if resolve is None:
                raise DSLError(f"cannot include {d.name}: no resolver", d.line, 1)
            sub = resolve(d.name)
            if sub.v != len(d.labels):
                raise DSLError(f"{d.name} has {sub.v} points, {len(d.labels)} labels given",
                               d.line, 1)
            for b in sub.blocks:
                yield Developed(di, None, tuple(d.labels[p] for p in b))
            continue
        action = OrbitAction.identity() if d.literal else (d.action or spec.action)
        n = d.count if d.count is not None else action.orbit_length()
        patches = dict(d.patches)
        hit = set()
        for i in range(n):
            s = action.added_value(i)
            move = action.mover(i)
            subs = {sub.target: sub.apply(s) for sub in d.subs}
            blk = tuple(subs[x] if x in subs else move(x) for x in d.block)
            if len(set(blk)) != len(blk):
                raise DSLError(f"development of {format_tuple(d.block)} at +{s} repeats a point",
                               d.line, 1)
            if blk in patches:
                hit.add(blk)
                blk = patches[blk]
            yield Developed(di, s, blk)
        missing = set(patches) - hit
        if missing:
            raise DSLError("patch source never developed: "
                           + ", ".join(format_tuple(m) for m in sorted(missing, key=str)), d.line, 1)


def develop(spec: ConstructionSpec, resolve: Resolver | None = None) -> LabeledDesign:
    """Expand a construction spec into a labeled design.  Duplicates are kept."""
    space = PointSpace.canonical(spec.point_labels())
    blocks = [dev.block for dev in expand(spec, resolve)]
    return LabeledDesign.from_labels(blocks, points=space, groups=spec.resolve_groups(),
                                     lam=spec.lam, kind=spec.kind, ordered=True, name=spec.name)
