import pytest

from superdd.compose import (
    CompositionError,
    CompositionRecipe,
    adjoin_and_delete,
    affine_rgdd,
    block_count,
    delete_point,
    extend_resolvable,
    fill_groups,
    parse_recipe,
    product_expand,
    td_from_mols,
    truncate_td,
    wilson_compose,
)
from superdd.core import GroupTypeSignature, LabeledDesign, PointSpace
from superdd.gf import field, prime_power
from superdd.trades import defining_bound
from superdd.verify import verify_design, verify_resolution, verify_unordered

PRIME_POWERS = [q for q in range(2, 17) if prime_power(q)]
TD_CASES = [(k, q) for q in PRIME_POWERS for k in range(3, q + 2)]


def test_prime_powers_up_to_16():
    assert PRIME_POWERS == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms(q):
    F = field(q)
    for a in F.elements():
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    a, b, c = 1 % q, (q - 1), q // 2
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("k, q", TD_CASES)
def test_td_from_mols(k, q):
    td = td_from_mols(k, q)
    assert td.b == q * q and len(td.groups) == k
    assert verify_unordered(td, {k}).passed


@pytest.mark.parametrize("k, q", [(8, 6), (5, 10), (7, 5)])
def test_td_rejects_bad_parameters(k, q):
    with pytest.raises(ValueError):
        td_from_mols(k, q)


@pytest.mark.parametrize("k, q, sig", [(6, 9, "5^9 9^1"), (6, 8, "5^8 8^1"), (5, 5, "4^5 5^1")])
def test_adjoin_and_delete_signatures(k, q, sig):
    g = adjoin_and_delete(td_from_mols(k, q))
    assert str(g.signature()) == sig
    assert {len(b) for b in g.blocks} == {k, q + 1}
    assert verify_unordered(g, {k, q + 1}).passed


@pytest.mark.parametrize("k, q", TD_CASES)
def test_adjoin_and_delete_always_verifies(k, q):
    g = adjoin_and_delete(td_from_mols(k, q))
    assert verify_unordered(g, {k, q + 1}).passed


def test_truncate_td():
    td = td_from_mols(6, 7)
    g = truncate_td(td, 5, 5)
    assert str(g.signature()) == "2^1 7^5"
    assert truncate_td(td, 5, 0) is td
    full = truncate_td(td_from_mols(6, 9), 5, 9)
    assert str(full.signature()) == "9^5"
    assert {len(b) for b in full.blocks} == {5}
    with pytest.raises(ValueError):
        truncate_td(td, 5, 8)
    with pytest.raises(IndexError):
        truncate_td(td, 6, 1)


def test_delete_point():
    td = td_from_mols(5, 4)
    pbd = LabeledDesign(td.space, td.blocks + td.groups, kind="PBD", ordered=False)
    g = delete_point(pbd, td.space.labels[0])
    assert str(g.signature()) == "3^1 4^4"
    single = LabeledDesign(PointSpace.range(5), ((0, 1, 2, 3, 4),), kind="PBD", ordered=False)
    one = delete_point(single, 0)
    assert one.b == 0 and one.groups == ((0, 1, 2, 3),)
    with pytest.raises(KeyError):
        delete_point(single, 9)


def test_extend_resolvable():
    d, classes = affine_rgdd(5)
    assert verify_resolution(d, classes).passed and len(classes) == 5
    e = extend_resolvable(d, classes, 3)
    assert str(e.signature()) == "3^1 5^5"
    assert extend_resolvable(d, classes, 0) is d
    with pytest.raises(ValueError):
        extend_resolvable(d, classes, 6)


def test_product_expand(cat):
    base = cat.design("DGDD(2^6)")
    out = product_expand(base, 5)
    assert out.b == 12 * 25 and str(out.signature()) == "10^6"
    assert verify_design(out).passed
    assert defining_bound(out).fraction >= 0.5
    assert product_expand(base, 1) is base


def test_single_block_master_gives_ingredient(cat):
    ing = cat.design("DGDD(5^5)")
    master = LabeledDesign(PointSpace.range(5), ((0, 1, 2, 3, 4),), groups=tuple((i,) for i in range(5)),
                           kind="GDD", ordered=False)
    recipe = CompositionRecipe(master, default_weight=5,
                               ingredients={GroupTypeSignature.parse("5^5"): ing})
    out = wilson_compose(recipe)
    assert out.b == ing.b and str(out.signature()) == "5^5"


def test_missing_ingredient(cat):
    recipe = parse_recipe("master td:5,5\nweight default 3\n", cat.design)
    with pytest.raises(CompositionError):
        wilson_compose(recipe)


def test_fill_groups_size_mismatch(cat):
    with pytest.raises(CompositionError):
        fill_groups(cat.design("DGDD(5^5)"), 0, cat.design("DD(11)"))


def test_fill_groups_with_added_points(cat):
    out = fill_groups(cat.design("DGDD(10^5)"), 1, cat.design("DD(11)"))
    assert out.v == 51 and out.b == 255


def test_recipe_block_conservation(cat):
    text = "master td:5,5\nweight default 6\ningredient sig=6^5 catalog:DGDD(6^5)\nadd 1\nfill all catalog:DD(31)\n"
    recipe = parse_recipe(text, cat.design)
    counts = block_count(recipe)
    out = wilson_compose(recipe)
    assert out.v == 151
    assert sum(counts.values()) == out.b == 2265


def test_recipe_syntax_errors(cat):
    with pytest.raises(CompositionError):
        parse_recipe("weight default 4\n", cat.design)
    with pytest.raises(CompositionError):
        parse_recipe("master td:5,5\nfrobnicate\n", cat.design)


def test_coherent_lift_raises_bound(cat):
    text = ("master catalog:DGDD(5^7)\nweight default 4\ningredient sig=4^5 td:5,4\n"
            "{}add 1\nfill all catalog:DD(21)\n")
    plain = wilson_compose(parse_recipe(text.format(""), cat.design))
    lifted = wilson_compose(parse_recipe(text.format("coherent\n"), cat.design))
    assert plain.b == lifted.b == 1974
    assert verify_design(lifted).passed
    assert defining_bound(lifted).bound > defining_bound(plain).bound
