"""Construction routes for every admissible ``v``.

A plan names the master design, its weighting, the ingredients and the group
fillers.  Plans whose ingredients are all internal (catalog entries, finite
field TDs, affine resolvable GDDs) run with :meth:`SpectrumPlan.build`.  Other
plans name the external designs they need; those are read from the directory
in ``$SUPERDD_EXTERNAL`` as ``<slug>.dd`` files (see :func:`external_slug`),
and once every file is present the plan runs as well.

An external RBIBD file must list its blocks class by class, ``v/5`` blocks per
parallel class.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..compose import (CompositionRecipe, adjoin_and_delete, affine_rgdd, delete_point,
                       extend_resolvable, fill_groups, inflate, td_from_mols, truncate_td)
from ..core import GroupTypeSignature, Inf, LabeledDesign, parse_design
from ..verify import verify_design
from . import NO_DESIGN, builtin

EXTERNAL_ENV = "SUPERDD_EXTERNAL"
DEFAULT_CEILING = 1000

OUT_OF_SCOPE = {
    91: "only sketched by analogy with an external 2-(91,5,2) design",
    235: "only sketched by analogy with an external design",
}
OPEN = {
    155: "needs a super-simple DGDD of type 31^5 whose construction is not given",
    395: "listed among the remaining values but no construction is given",
}
# n for which v = 5(n-1)+1 is not built from a PBD(n,{5,7,9})
PBD_EXCEPTIONS = {11, 13, 15, 17, 19, 23, 27, 29, 31, 33, 39, 43, 51, 59, 71, 75, 83, 87, 95, 99,
                  107, 111, 113, 115, 119, 139, 179}
RBIBD_MISSING = {2, 11, 17, 23, 32}

# values left after the general residue-class families; the printed lists use
# ellipses, read here in steps of 20
RESIDUAL_5_MOD_20 = frozenset({125, 145, 165, 185, 205, 225, 245, 265, 325, 345, 425})
RESIDUAL_15_MOD_20 = frozenset({155, 195, 215, 235, 255, 275, 295, 315, 335, 355, 375, 395, 515})


class PlanError(ValueError):
    pass


def external_slug(name: str) -> str:
    """File stem for an external ingredient: ``PBD(31,{5,7,9})`` -> ``PBD_31_5_7_9``."""
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")


def external_path(name: str) -> Path | None:
    root = os.environ.get(EXTERNAL_ENV)
    if not root:
        return None
    path = Path(root) / f"{external_slug(name)}.dd"
    return path if path.exists() else None


def load_external(name: str) -> LabeledDesign:
    path = external_path(name)
    if path is None:
        raise PlanError(f"external ingredient {name} not found (set ${EXTERNAL_ENV})")
    d = parse_design(path.read_text())
    report = verify_design(d)
    if not report.passed:
        raise PlanError(f"external ingredient {name} fails verification: "
                        + "; ".join(f"{k} {v}" for k, v in report.violations[:3]))
    return d


@dataclass
class SpectrumPlan:
    v: int
    route: str
    steps: list = field(default_factory=list)
    ingredients: list = field(default_factory=list)
    external: list = field(default_factory=list)
    children: list = field(default_factory=list)
    status: str = "plan"  # catalog | plan | open | out-of-scope
    inferred: bool = False
    builder: Callable[[], LabeledDesign] | None = field(default=None, repr=False)

    @property
    def unresolved(self) -> list[str]:
        out = [e for e in self.external if external_path(e) is None]
        for c in self.children:
            out += c.unresolved
        return out

    @property
    def executable(self) -> bool:
        return (self.status in ("catalog", "plan") and self.builder is not None
                and not self.unresolved and all(c.executable for c in self.children))

    def build(self) -> LabeledDesign:
        if not self.executable:
            why = ", ".join(self.unresolved) or self.status
            raise PlanError(f"plan for v={self.v} is not executable: {why}")
        return self.builder()

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.executable:
            state = "executable"
        else:
            state = "needs-external" if self.status == "plan" else self.status
        lines = [f"{pad}PLAN v={self.v} route={self.route} {state}"]
        if self.inferred:
            lines.append(f"{pad}  NOTE v is taken from an inferred residual list")
        lines += [f"{pad}  STEP {s}" for s in self.steps]
        lines += [f"{pad}  USES {i}" for i in self.ingredients]
        for e in self.external:
            have = "found" if external_path(e) else "missing"
            lines.append(f"{pad}  EXTERNAL {e} file={external_slug(e)}.dd {have}")
        text = "\n".join(lines) + "\n"
        for c in self.children:
            text += c.render(indent + 1)
        return text


# ---------------------------------------------------------------------------
# shared building blocks

def _cat(name: str) -> LabeledDesign:
    return builtin().design(name)


def _fillers(dgdd: LabeledDesign, m: int) -> list[LabeledDesign]:
    """With two or more new points only the last group gets a full design; the
    others get a DGDD of type ``1^g m^1``."""
    sizes = [len(g) for g in dgdd.groups]
    if m <= 1:
        return [_cat(f"DD({g + m})") for g in sizes]
    return [_cat(f"DGDD(1^{g} {m}^1)") for g in sizes[:-1]] + [_cat(f"DD({sizes[-1] + m})")]


def _weighted(master: LabeledDesign, weight, ingredients: dict, added: int) -> LabeledDesign:
    recipe = CompositionRecipe(master, coherent=True)
    labels = master.space.labels
    recipe.point_weights = {lab: (weight(lab) if callable(weight) else weight) for lab in labels}
    for sig, ing in ingredients.items():
        recipe.ingredients[GroupTypeSignature.parse(sig)] = _cat(ing) if isinstance(ing, str) else ing
    dgdd, _ = inflate(recipe)
    out = fill_groups(dgdd, added, _fillers(dgdd, added))
    return LabeledDesign(out.space, out.blocks, None, out.lam, "DD", True, f"DD({out.v})")


def _last_group_weights(master: LabeledDesign, weights: list[int], default: int = 4):
    """``default`` everywhere except the last group, whose points take ``weights``
    in order (missing entries are 0)."""
    last = [master.space.labels[p] for p in master.groups[-1]]
    special = {lab: (weights[i] if i < len(weights) else 0) for i, lab in enumerate(last)}
    return lambda lab: special.get(lab, default)


def _td_pbd(td: LabeledDesign) -> LabeledDesign:
    """A TD with its groups added as blocks, read as a PBD."""
    return LabeledDesign(td.space, td.blocks + td.groups, None, kind="PBD", ordered=False)


def _rgdd_from_rbibd(rb: LabeledDesign) -> tuple[LabeledDesign, list[list[int]]]:
    """Use the first parallel class of a class-ordered RBIBD as the groups."""
    per = rb.v // 5
    labels = rb.space.labels
    groups = [[labels[p] for p in b] for b in rb.blocks[:per]]
    blocks = [[labels[p] for p in b] for b in rb.blocks[per:]]
    d = LabeledDesign.from_labels(blocks, groups=groups, kind="GDD", ordered=False)
    classes = [list(range(i, i + per)) for i in range(0, len(blocks), per)]
    return d, classes


def _six_eight(g: int, room: int) -> list[int]:
    """Weights 8 and 6 summing to ``g`` on as few points as possible."""
    for a in range(g // 8, -1, -1):
        if (g - 8 * a) % 6 == 0 and a + (g - 8 * a) // 6 <= room:
            return [8] * a + [6] * ((g - 8 * a) // 6)
    raise PlanError(f"cannot split weight {g} into 6s and 8s on {room} points")


ING4 = {"4^5": "DGDD(4^5)", "4^6": "DGDD(4^6)"}
ING6 = {"6^5": "DGDD(6^5)", "6^6": "DGDD(6^6)", "6^5 8^1": "DGDD(6^5 8^1)"}
ING10 = {"10^5": "DGDD(10^5)", "10^6": "DGDD(10^6)"}


def _adjoin_9(zeros: int) -> LabeledDesign:
    """Adjoin-and-delete on TD(6,9) with weight 4, except ``zeros`` points of the
    last group (never the adjoined point) get weight 0."""
    master = adjoin_and_delete(td_from_mols(6, 9))
    last = [master.space.labels[p] for p in master.groups[-1] if master.space.labels[p] != Inf(0)]
    gone = set(last[len(last) - zeros:])
    return _weighted(master, lambda lab: 0 if lab in gone else 4,
                     {**ING4, "4^10": "DGDD(4^10)"}, 3)


def _pbd_minus_point(n: int) -> LabeledDesign:
    pbd = _td_pbd(td_from_mols(6, n))
    master = delete_point(pbd, pbd.space.labels[0])
    return _weighted(master, _last_group_weights(master, [4] * 8),
                     {**ING4, f"4^{n}": f"DGDD(4^{n})"}, 3)


def _truncated(td: LabeledDesign, y: int, w: int, w_last: int, ing: dict, added: int = 1):
    master = truncate_td(td, len(td.groups) - 1, y)
    last = set(master.space.labels[p] for p in master.groups[-1])
    return _weighted(master, lambda lab: w_last if lab in last else w, ing, added)


def _weighted_dgdd(name: str, w: int):
    k = len(_cat(name).blocks[0])
    return _weighted(_cat(name), w, {f"{w}^{k}": td_from_mols(k, w)}, 0)


def _rgdd_route(rb: LabeledDesign | None, last: list[int], w: int, ing: dict, added: int):
    if rb is None:
        d, classes = affine_rgdd(5)
    else:
        d, classes = _rgdd_from_rbibd(rb)
    master = extend_resolvable(d, classes, len(last))
    return _weighted(master, _last_group_weights(master, last, w), ing, added)


def _build_191():
    master = td_from_mols(6, 5)
    last = set(master.space.labels[p] for p in master.groups[-1])
    return _weighted(master, lambda lab: 8 if lab in last else 6, ING6, 1)


def _build_291():
    d, classes = affine_rgdd(5)
    return _weighted(extend_resolvable(d, classes, 4), 10, ING10, 1)


# v -> (description, ingredients, builder, external names)
SPECIAL = {
    105: ("adjoin a point to TD(5,5) and delete another, weight 4, five new points",
          ["TD(5,5)", "DGDD(4^5)", "DGDD(4^6)", "DGDD(1^16 5^1)", "DD(25)"],
          lambda: _weighted(adjoin_and_delete(td_from_mols(5, 5)), 4, ING4, 5), []),
    125: ("weight DGDD(5^5) by 5 using TD(5,5) blocks, groups filled by DD(25)",
          ["DGDD(5^5)", "TD(5,5)", "DD(25)"], lambda: _weighted_dgdd("DGDD(5^5)", 5), []),
    145: ("{5,6}-GDD of type 6^6, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(25)"],
          lambda: _weighted(load_external("{5,6}-GDD(6^6)"), 4, ING4, 1), ["{5,6}-GDD(6^6)"]),
    165: ("weight DGDD(4^10) by 4 using TD(5,4) blocks, five new points",
          ["DGDD(4^10)", "TD(5,4)", "DGDD(1^16 5^1)", "DD(21)"],
          lambda: _weighted(_cat("DGDD(4^10)"), 4, {"4^5": td_from_mols(5, 4)}, 5), []),
    185: ("{5,6}-GDD of type 5^8 6^1, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(21)", "DD(25)"],
          lambda: _weighted(load_external("{5,6}-GDD(5^8 6^1)"), 4, ING4, 1),
          ["{5,6}-GDD(5^8 6^1)"]),
    191: ("TD(6,5) with weight 6 and weight 8 on one group, one new point",
          ["TD(6,5)", "DGDD(6^5 8^1)", "DD(31)", "DD(41)"], _build_191, []),
    195: ("adjoin a point to TD(6,8) and delete another, weights 4 and 6, one new point",
          ["TD(6,8)", "DGDD(4^6)", "DGDD(4^8 6^1)", "DD(21)", "DD(35)"],
          lambda: _weighted(adjoin_and_delete(td_from_mols(6, 8)),
                            lambda lab: 6 if lab == Inf(0) else 4,
                            {"4^6": "DGDD(4^6)", "4^8 6^1": "DGDD(4^8 6^1)"}, 1), []),
    205: ("TD(6,17) with weight 2, one new point",
          ["TD(6,17)", "DGDD(2^6)", "DD(35)"],
          lambda: _weighted(td_from_mols(6, 17), 2, {"2^6": "DGDD(2^6)"}, 1), []),
    211: ("adjoin a point to TD(6,9) and delete another, weight 4 with two zeros, "
          "three new points",
          ["TD(6,9)", "DGDD(4^5)", "DGDD(4^6)", "DGDD(4^10)", "DGDD(1^20 3^1)", "DD(31)"],
          lambda: _adjoin_9(2), []),
    215: ("as for 211 with one zero, three new points",
          ["TD(6,9)", "DGDD(4^5)", "DGDD(4^6)", "DGDD(4^10)", "DGDD(1^20 3^1)", "DD(35)"],
          lambda: _adjoin_9(1), []),
    225: ("weight DGDD(5^9) by 5 using TD(5,5) blocks, groups filled by DD(25)",
          ["DGDD(5^9)", "TD(5,5)", "DD(25)"], lambda: _weighted_dgdd("DGDD(5^9)", 5), []),
    245: ("weight DGDD(5^7) by 7 using TD(5,7) blocks, groups filled by DD(35)",
          ["DGDD(5^7)", "TD(5,7)", "DD(35)"], lambda: _weighted_dgdd("DGDD(5^7)", 7), []),
    251: ("TD(5,5) with weight 10, one new point",
          ["TD(5,5)", "DGDD(10^5)", "DD(51)"],
          lambda: _weighted(td_from_mols(5, 5), 10, ING10, 1), []),
    255: ("TD(6,11) read as a PBD minus a point, weight 4, three new points",
          ["TD(6,11)", "DGDD(4^5)", "DGDD(4^6)", "DGDD(4^11)", "DGDD(1^20 3^1)", "DD(35)"],
          lambda: _pbd_minus_point(11), []),
    265: ("{5,6}-GDD of type 11^6, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(45)"],
          lambda: _weighted(load_external("{5,6}-GDD(11^6)"), 4, ING4, 1), ["{5,6}-GDD(11^6)"]),
    275: ("TD(5,11) with weight 5, groups filled by DD(55)",
          ["TD(5,11)", "DGDD(5^5)", "DD(55)"],
          lambda: _weighted(td_from_mols(5, 11), 5, {"5^5": "DGDD(5^5)"}, 0), []),
    291: ("affine RGDD 5^5 plus a group of 4, weight 10, one new point",
          ["RGDD(5^5)", "DGDD(10^5)", "DGDD(10^6)", "DD(51)", "DD(41)"], _build_291, []),
    295: ("TD(6,9) truncated to 9^5 3^1, weights 6 and 8, one new point",
          ["TD(6,9)", "DGDD(6^5)", "DGDD(6^5 8^1)", "DD(55)", "DD(25)"],
          lambda: _truncated(td_from_mols(6, 9), 6, 6, 8, ING6), []),
    315: ("TD(7,9) with weight 5, groups filled by DD(45)",
          ["TD(7,9)", "DGDD(5^7)", "DD(45)"],
          lambda: _weighted(td_from_mols(7, 9), 5, {"5^7": "DGDD(5^7)"}, 0), []),
    325: ("TD(6,15) truncated to 15^5 6^1, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(61)", "DD(25)"],
          lambda: _truncated(load_external("TD(6,15)"), 9, 4, 4, ING4), ["TD(6,15)"]),
    335: ("TD(6,9) truncated to 9^5 8^1, weights 6 and 8, one new point",
          ["TD(6,9)", "DGDD(6^5)", "DGDD(6^5 8^1)", "DD(55)", "DD(65)"],
          lambda: _truncated(td_from_mols(6, 9), 1, 6, 8, ING6), []),
    345: ("TD(6,15) truncated to 15^5 11^1, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(61)", "DD(45)"],
          lambda: _truncated(load_external("TD(6,15)"), 4, 4, 4, ING4), ["TD(6,15)"]),
    351: ("TD(5,14) with weight 5, one new point",
          ["DGDD(5^5)", "DD(71)"],
          lambda: _weighted(load_external("TD(5,14)"), 5, {"5^5": "DGDD(5^5)"}, 1), ["TD(5,14)"]),
    355: ("TD(6,16) read as a PBD minus a point, weight 4, three new points",
          ["TD(6,16)", "DGDD(4^5)", "DGDD(4^6)", "DGDD(4^16)", "DGDD(1^20 3^1)", "DD(35)"],
          lambda: _pbd_minus_point(16), []),
    371: ("TD(6,7) truncated to 7^5 2^1, weight 10, one new point",
          ["TD(6,7)", "DGDD(10^5)", "DGDD(10^6)", "DD(71)", "DD(21)"],
          lambda: _truncated(td_from_mols(6, 7), 5, 10, 10, ING10), []),
    375: ("TD(5,15) with weight 5, groups filled by DD(75)",
          ["DGDD(5^5)", "DD(75)"],
          lambda: _weighted(load_external("TD(5,15)"), 5, {"5^5": "DGDD(5^5)"}, 0), ["TD(5,15)"]),
    411: ("TD(6,7) truncated to 7^5 6^1, weight 10, one new point",
          ["TD(6,7)", "DGDD(10^5)", "DGDD(10^6)", "DD(71)", "DD(61)"],
          lambda: _truncated(td_from_mols(6, 7), 1, 10, 10, ING10), []),
    425: ("TD(6,20) truncated to 20^5 6^1, weight 4, one new point",
          ["DGDD(4^5)", "DGDD(4^6)", "DD(81)", "DD(25)"],
          lambda: _truncated(load_external("TD(6,20)"), 14, 4, 4, ING4), ["TD(6,20)"]),
    515: ("RGDD 5^21 plus a group of 23, weight 4, three new points",
          ["DGDD(4^5)", "DGDD(4^6)", "DGDD(1^20 3^1)", "DD(95)"],
          lambda: _rgdd_route(load_external("RBIBD(105,5,1)"), [4] * 23, 4, ING4, 3),
          ["RBIBD(105,5,1)"]),
}


# ---------------------------------------------------------------------------
# planning

def check_admissible(v: int) -> None:
    if v % 10 not in (1, 5):
        raise PlanError("v must be 1 or 5 mod 10")
    if v in NO_DESIGN:
        raise PlanError(f"v={v} is excluded: {NO_DESIGN[v]}")


def spectrum_plan(v: int, *, ceiling: int = DEFAULT_CEILING) -> SpectrumPlan:
    """The construction route for ``v`` following the residue-class case analysis."""
    check_admissible(v)
    if v > ceiling:
        raise PlanError(f"v={v} is above the planner ceiling {ceiling}")
    cat = builtin()
    name = f"DD({v})"
    if name in cat.entries:
        entry = cat.entries[name]
        steps = [f"catalog entry {name}"]
        if entry.recipe:
            steps += [line for line in entry.recipe.splitlines() if line.strip()]
        return SpectrumPlan(v, "catalog", steps, [name], status="catalog",
                            builder=lambda: cat.design(name))
    inferred = v in RESIDUAL_5_MOD_20 or v in RESIDUAL_15_MOD_20
    if v in OUT_OF_SCOPE:
        return SpectrumPlan(v, "out-of-scope", [OUT_OF_SCOPE[v]], status="out-of-scope",
                            inferred=inferred)
    if v in OPEN:
        return SpectrumPlan(v, "open", [OPEN[v]], status="open", inferred=inferred)
    if v in SPECIAL:
        text, uses, build, ext = SPECIAL[v]
        return SpectrumPlan(v, "special", [text], uses, ext, inferred=inferred, builder=build)
    if v % 10 == 1:
        return _plan_1_mod_10(v, ceiling)
    return _plan_rgdd(v, ceiling)


def _plan_1_mod_10(v: int, ceiling: int) -> SpectrumPlan:
    n = (v - 1) // 5 + 1
    if n not in PBD_EXCEPTIONS:
        pbd = f"PBD({n},{{5,7,9}})"

        def build():
            p = load_external(pbd)
            master = delete_point(p, p.space.labels[0])
            return _weighted(master, 5, {f"5^{k}": f"DGDD(5^{k})" for k in (5, 7, 9)}, 1)

        return SpectrumPlan(v, "pbd", [f"delete a point of {pbd}, weight 5, one new point"],
                            ["DGDD(5^5)", "DGDD(5^7)", "DGDD(5^9)", "DD(21)", "DD(31)", "DD(41)"],
                            [pbd], builder=build)
    for x in (13, 17, 21, 25):
        g = v - 1 - 30 * x
        if 20 <= g <= 10 * (x - 1) and g % 10 == 0 and g != 90:
            return _rgdd6_plan(v, x, g, ceiling)
    raise PlanError(f"no route known for v={v}")


def _rgdd6_plan(v: int, groups: int, g: int, ceiling: int) -> SpectrumPlan:
    """RGDD of type 5^groups plus a group weighted by 6s and 8s to total ``g``."""
    last = _six_eight(g, (groups - 1) * 5 // 4)
    rb = None if groups == 5 else f"RBIBD({5 * groups},5,1)"
    text = (f"RGDD 5^{groups} plus a group of {len(last)}, weight 6 with 8s on the new group, "
            f"giving DGDD 30^{groups} {g}^1, one new point")
    child = spectrum_plan(g + 1, ceiling=ceiling)

    def build():
        return _rgdd_route(load_external(rb) if rb else None, last, 6, ING6, 1)

    return SpectrumPlan(v, "rgdd", [text],
                        ["DGDD(6^5)", "DGDD(6^6)", "DGDD(6^5 8^1)", "DD(31)", f"DD({g + 1})"],
                        [rb] if rb else [], [child], builder=build)


def _plan_rgdd(v: int, ceiling: int) -> SpectrumPlan:
    """The general families over a resolvable GDD of type 5^(4n+1)."""
    n = 0
    while 80 * (n + 1) + 21 <= v:
        n += 1
        if n in RBIBD_MISSING:
            continue
        if v % 20 == 5:
            # v = 80n + 4x + 21 with x = 1 mod 5 and 6 <= x <= 5n
            x, r = divmod(v - 80 * n - 21, 4)
            if r or x < 6 or x > 5 * n or x % 5 != 1:
                continue
            rb = f"RBIBD({20 * n + 5},5,1)"
            child = spectrum_plan(4 * x + 1, ceiling=ceiling)

            def build(rb=rb, x=x):
                return _rgdd_route(load_external(rb), [4] * x, 4, ING4, 1)

            return SpectrumPlan(v, "rgdd", [f"RGDD 5^{4 * n + 1} plus a group of {x}, weight 4, "
                                            f"one new point"],
                                ["DGDD(4^5)", "DGDD(4^6)", "DD(21)", f"DD({4 * x + 1})"], [rb],
                                [child], builder=build)
        # v = 120n + 31 + g with 24 <= g <= 40n and g + 1 = 5 mod 20
        g = v - 120 * n - 31
        if 24 <= g <= 40 * n and (g + 1) % 20 == 5:
            return _rgdd6_plan(v, 4 * n + 1, g, ceiling)
    raise PlanError(f"no route known for v={v}")


def admissible(limit: int) -> list[int]:
    return [v for v in range(11, limit + 1) if v % 10 in (1, 5) and v not in NO_DESIGN]
