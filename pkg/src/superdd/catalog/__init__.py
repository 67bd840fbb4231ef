"""Built-in designs: base-block transcriptions, composed entries and errata.

Entries are named ``DGDD(<type>)`` or ``DD(<v>)``.  Text specs live in
``data/*.dd``; a few entries are recipes over other entries.
"""

from __future__ import annotations

import csv
import difflib
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ..compose import parse_recipe, product_expand, wilson_compose
from ..core import GroupTypeSignature, LabeledDesign
from ..devel import ConstructionSpec, develop, parse_catalog
from ..verify import verify_design

RECIPES = {
    "DGDD(10^6)": ("product DGDD(2^6) 5", 300, 150),
    "DD(141)": ("master catalog:DGDD(5^7)\nweight default 4\ningredient sig=4^5 td:5,4\ncoherent\n"
                "add 1\nfill all catalog:DD(21)\n", 1974, 987),
    "DD(151)": ("master td:5,5\nweight default 6\ningredient sig=6^5 catalog:DGDD(6^5)\n"
                "add 1\nfill all catalog:DD(31)\n", 2265, 1133),
}

NO_DESIGN = {5: "no super-simple 2-(5,5,1)DD exists", 15: "no super-simple 2-(15,5,1)DD exists"}


@dataclass
class Erratum:
    entry: str
    printed: str
    stored: str
    justification: str


@dataclass
class CatalogEntry:
    name: str
    spec: ConstructionSpec | None = None
    recipe: str | None = None
    blocks: int | None = None
    fnum: int | None = None
    fden: int | None = None
    errata: list = field(default_factory=list)

    @property
    def claim(self) -> Fraction | None:
        if self.fnum is None or not self.fden:
            return None
        return Fraction(self.fnum, self.fden)


def _read_data(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


def load_errata() -> list[Erratum]:
    rows = csv.DictReader(io.StringIO(_read_data("errata.tsv")), delimiter="\t",
                          quoting=csv.QUOTE_NONE)
    return [Erratum(r["entry"], r["printed"], r["stored"], r["justification"]) for r in rows]


class Catalog:
    """Named entries with lazily developed, verified designs."""

    def __init__(self, specs, recipes=None, errata=()):
        self.entries: dict[str, CatalogEntry] = {}
        for s in specs:
            claims = s.claims or {}
            self.entries[s.name] = CatalogEntry(s.name, spec=s, blocks=claims.get("blocks"),
                                                fnum=claims.get("fnum"), fden=claims.get("fden"))
        for name, (text, blocks, fnum) in (recipes or {}).items():
            self.entries[name] = CatalogEntry(name, recipe=text, blocks=blocks, fnum=fnum,
                                              fden=blocks)
        for e in errata:
            if e.entry in self.entries:
                self.entries[e.entry].errata.append(e)
        self._cache: dict[str, LabeledDesign] = {}

    @classmethod
    def builtin(cls) -> "Catalog":
        specs = []
        for name in ("dgdd.dd", "direct.dd"):
            specs += parse_catalog(_read_data(name))
        return cls(specs, RECIPES, load_errata())

    def names(self) -> list[str]:
        return list(self.entries)

    def design(self, name: str) -> LabeledDesign:
        """Develop (or compose) an entry.  Results are cached per catalog."""
        if name in self._cache:
            return self._cache[name]
        entry = self.lookup(name)
        if entry.spec is not None:
            d = develop(entry.spec, self.design)
        elif entry.recipe.startswith("product "):
            _, src, factor = entry.recipe.split()
            d = product_expand(self.design(src), int(factor))
        else:
            d = wilson_compose(parse_recipe(entry.recipe, self.design))
        d = LabeledDesign(d.space, d.blocks, d.groups, d.lam, d.kind, d.ordered, entry.name)
        self._cache[name] = d
        return d

    def lookup(self, key) -> CatalogEntry:
        """Find an entry by name, by ``v`` (an int) or by a group type such as ``4^8 6^1``."""
        if isinstance(key, int):
            if key in NO_DESIGN:
                raise LookupError(f"DD({key}): {NO_DESIGN[key]}")
            name = f"DD({key})"
        elif key in self.entries:
            name = key
        else:
            try:
                name = f"DGDD({GroupTypeSignature.parse(key)})"
            except ValueError:
                name = key
        if name not in self.entries:
            near = difflib.get_close_matches(name, self.names(), n=3, cutoff=0.5)
            hint = f"; nearest: {', '.join(near)}" if near else ""
            raise LookupError(f"no catalog entry {name}{hint}")
        return self.entries[name]


@lru_cache(maxsize=1)
def builtin() -> Catalog:
    return Catalog.builtin()


def lookup(key) -> CatalogEntry:
    return builtin().lookup(key)


def design(name: str) -> LabeledDesign:
    return builtin().design(name)


@dataclass
class AuditRow:
    name: str
    blocks: int
    expected: int | None
    verified: bool
    bound: int | None
    claim: Fraction | None
    errata: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        if not self.verified or (self.expected is not None and self.blocks != self.expected):
            return False
        if self.bound is not None and self.claim is not None and self.blocks:
            return Fraction(self.bound, self.blocks) >= self.claim
        return True

    def render(self) -> str:
        bound = "-" if self.bound is None else f"{self.bound}/{self.blocks}"
        claim = "-" if self.claim is None else str(self.claim)
        return (f"{'pass' if self.ok else 'fail'}\t{self.name}\tblocks={self.blocks}"
                f"\texpected={self.expected}\tverify={'pass' if self.verified else 'fail'}"
                f"\tbound={bound}\tclaim={claim}\terrata={self.errata}"
                + (f"\t{self.detail}" if self.detail else ""))


def audit_entry(cat: Catalog, name: str, bounds: bool = True, **bound_kw) -> AuditRow:
    from ..trades import defining_bound

    entry = cat.lookup(name)
    try:
        d = cat.design(name)
    except ValueError as exc:
        return AuditRow(name, 0, entry.blocks, False, None, entry.claim, len(entry.errata), str(exc))
    report = verify_design(d)
    detail = "" if report.passed else "; ".join(f"{k} {v}" for k, v in report.violations[:3])
    bound = None
    if bounds and report.passed:
        bound = defining_bound(d, "exactVC", **bound_kw).bound
    return AuditRow(name, d.b, entry.blocks, report.passed, bound, entry.claim, len(entry.errata),
                    detail)


def _audit_builtin(args) -> AuditRow:
    name, bounds, bound_kw = args
    return audit_entry(builtin(), name, bounds, **bound_kw)


def audit_all(cat: Catalog | None = None, bounds: bool = True, names=None, workers: int = 1,
              **bound_kw) -> list[AuditRow]:
    """Develop, verify and bound every entry; one row per entry, ordered by name.

    With ``workers > 1`` the built-in catalog is audited in worker processes;
    the rows do not depend on the worker count.
    """
    names = sorted(names or (cat or builtin()).names())
    if workers > 1 and cat is None:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_audit_builtin, [(n, bounds, bound_kw) for n in names]))
    cat = cat or builtin()
    return [audit_entry(cat, n, bounds, **bound_kw) for n in names]
