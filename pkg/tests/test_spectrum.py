import itertools

import pytest

from superdd.catalog.spectrum import (
    EXTERNAL_ENV,
    SPECIAL,
    PlanError,
    admissible,
    external_slug,
    load_external,
    spectrum_plan,
)
from superdd.core import LabeledDesign, format_design
from superdd.trades import defining_bound
from superdd.verify import verify_design

INTERNAL = sorted(v for v, (_, _, _, ext) in SPECIAL.items() if not ext)
QUICK = [105, 125, 165]


def test_planner_is_total_below_ceiling():
    routes = {}
    for v in admissible(1000):
        plan = spectrum_plan(v)
        routes.setdefault(plan.route, []).append(v)
        assert plan.render().startswith(f"PLAN v={v} ")
    assert routes["out-of-scope"] == [91, 235]
    assert routes["open"] == [155, 395]
    assert {"catalog", "special", "pbd", "rgdd"} <= set(routes)


@pytest.mark.parametrize("v, msg", [(12, "1 or 5 mod 10"), (5, "excluded"), (15, "excluded"),
                                    (2001, "ceiling")])
def test_plan_errors(v, msg):
    with pytest.raises(PlanError, match=msg):
        spectrum_plan(v)


def test_residual_values_flagged_inferred():
    assert spectrum_plan(125).inferred
    assert "inferred" in spectrum_plan(125).render()
    assert not spectrum_plan(105).inferred


def test_external_plans_report_missing_files(monkeypatch, tmp_path):
    monkeypatch.setenv(EXTERNAL_ENV, str(tmp_path))
    plan = spectrum_plan(145)
    assert not plan.executable
    assert "EXTERNAL {5,6}-GDD(6^6) file=5_6_GDD_6_6.dd missing" in plan.render()
    with pytest.raises(PlanError):
        plan.build()


def test_slug():
    assert external_slug("PBD(21,{5,7,9})") == "PBD_21_5_7_9"
    assert external_slug("RBIBD(105,5,1)") == "RBIBD_105_5_1"


def _projective_plane_4() -> LabeledDesign:
    """PG(2,4) from the difference set {0,1,4,14,16} mod 21, as a PBD with block size 5."""
    base = (0, 1, 4, 14, 16)
    blocks = [tuple((x + s) % 21 for x in base) for s in range(21)]
    return LabeledDesign.from_labels(blocks, points=range(21), kind="PBD", ordered=False)


def test_external_pbd_route(monkeypatch, tmp_path):
    pg = _projective_plane_4()
    pairs = {frozenset(p) for b in pg.blocks for p in itertools.combinations(b, 2)}
    assert len(pairs) == 210
    (tmp_path / "PBD_21_5_7_9.dd").write_text(format_design(pg))
    monkeypatch.setenv(EXTERNAL_ENV, str(tmp_path))
    assert load_external("PBD(21,{5,7,9})").b == 21
    plan = spectrum_plan(101)
    assert plan.route == "pbd" and plan.executable
    d = plan.build()
    assert d.v == 101 and d.b == 1010
    assert verify_design(d).passed


def test_bad_external_file_is_rejected(monkeypatch, tmp_path):
    pg = _projective_plane_4()
    broken = pg.with_blocks(pg.blocks[1:])
    (tmp_path / "PBD_21_5_7_9.dd").write_text(format_design(broken))
    monkeypatch.setenv(EXTERNAL_ENV, str(tmp_path))
    with pytest.raises(PlanError):
        load_external("PBD(21,{5,7,9})")


def _check_build(v):
    plan = spectrum_plan(v)
    assert plan.executable
    d = plan.build()
    assert d.v == v and d.b == v * (v - 1) // 10
    assert verify_design(d).passed
    assert 2 * defining_bound(d).bound >= d.b


@pytest.mark.parametrize("v", QUICK)
def test_internal_build(v):
    _check_build(v)


@pytest.mark.slow
@pytest.mark.parametrize("v", [v for v in INTERNAL if v not in QUICK])
def test_internal_build_slow(v):
    _check_build(v)
