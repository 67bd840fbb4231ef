import random

import pytest
from hypothesis import given, settings, strategies as st

from superdd.core import LabeledDesign, PointSpace, underlying
from superdd.verify import (
    verify_dd,
    verify_design,
    verify_dgdd,
    verify_resolution,
    verify_super_simple,
    verify_unordered,
)
from superdd.compose import td_from_mols


def test_dd21_passes(dd21):
    r = verify_dd(dd21)
    assert r.passed and r.blocks == 42 and r.pairs == 420
    assert r.render().splitlines()[0] == "RESULT pass"


def test_dd11_passes_and_blocks_meet_in_two(dd11):
    assert verify_design(dd11).passed
    sets = [set(b) for b in dd11.blocks]
    assert all(len(a & b) == 2 for i, a in enumerate(sets) for b in sets[i + 1:])


def test_deleted_block_uncovers_ten_pairs(dd21):
    r = verify_dd(dd21.with_blocks(dd21.blocks[1:]))
    assert not r.passed
    assert len(r.violations) == 10
    assert "VIOLATION" in r.render()


def test_dgdd_counts(cat):
    d = cat.design("DGDD(5^5)")
    r = verify_dgdd(d)
    assert r.passed and d.b == 50 and r.pairs == 500
    assert verify_dgdd(cat.design("DGDD(6^6)")).passed and cat.design("DGDD(6^6)").b == 108


def test_dgdd_block_inside_group(cat):
    d = cat.design("DGDD(5^5)")
    g = d.groups[0]
    bad = d.with_blocks(list(d.blocks) + [(g[0], g[1], d.groups[1][0])])
    r = verify_dgdd(bad)
    assert not r.passed


def test_dgdd_needs_groups(dd21):
    with pytest.raises(ValueError):
        verify_dgdd(dd21)


def test_super_simple_failures():
    space = PointSpace.range(8)
    rev = LabeledDesign(space, ((0, 1, 2, 3, 4), (4, 3, 2, 1, 0)))
    assert not verify_super_simple(rev).passed
    triple = LabeledDesign(space, ((0, 1, 2, 3, 4), (0, 1, 2, 5, 6)))
    r = verify_super_simple(triple)
    assert not r.passed and "0,1,2" in r.render().replace(" ", "")
    ok = LabeledDesign(space, ((0, 1, 2, 3, 4), (0, 1, 5, 6, 7)))
    assert verify_super_simple(ok).passed


def test_unordered_td_and_pbd():
    td = td_from_mols(5, 5)
    assert verify_unordered(td, {5}).passed and td.b == 25
    pbd = LabeledDesign(PointSpace.range(4), ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
                        kind="PBD", ordered=False, lam=1)
    assert not verify_unordered(pbd, {3}).passed
    assert not verify_unordered(td, {4}).passed


def test_resolution():
    d = LabeledDesign(PointSpace.range(4), ((0, 1), (2, 3), (0, 2), (1, 3)),
                      kind="BIBD", ordered=False)
    assert verify_resolution(d, [[0, 1], [2, 3]]).passed
    r = verify_resolution(d, [[0], [2, 3]])
    assert not r.passed
    with pytest.raises(ValueError):
        verify_resolution(d, [[0, 9]])


def _shuffle_design(d, seed):
    rng = random.Random(seed)
    perm = list(range(d.v))
    rng.shuffle(perm)
    blocks = list(d.relabel(perm).blocks)
    rng.shuffle(blocks)
    return d.relabel(perm).with_blocks(blocks)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), name=st.sampled_from(["DD(11)", "DD(21)", "DGDD(5^5)", "DGDD(1^16 5^1)"]))
def test_verdicts_invariant_under_relabeling(cat, seed, name):
    d = cat.design(name)
    e = _shuffle_design(d, seed)
    assert verify_design(e).passed == verify_design(d).passed is True
    broken = d.with_blocks(d.blocks[1:])
    assert verify_design(_shuffle_design(broken, seed)).passed is False


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_super_simple_ignores_order(dd21, seed):
    rng = random.Random(seed)
    blocks = [tuple(rng.sample(b, len(b))) for b in dd21.blocks]
    rng.shuffle(blocks)
    assert verify_super_simple(dd21.with_blocks(blocks)).passed
    dup = blocks + [tuple(reversed(blocks[0]))]
    assert not verify_super_simple(dd21.with_blocks(dup)).passed


def test_underlying_of_verified_dd_is_bibd(dd21):
    assert verify_unordered(underlying(dd21), {5}).passed
