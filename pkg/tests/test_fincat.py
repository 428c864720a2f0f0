import pytest

from koenig_ramsey.corpus import absorbing_monoid, chain, parallel_pair, span, standard_corpus
from koenig_ramsey.errors import (
    AssociativityViolated,
    CompositionNotClosed,
    MissingIdentity,
    UnitLawViolated,
    UnknownObject,
    UnknownReference,
)
from koenig_ramsey.fincat import (
    FinCategory,
    connected_components,
    discrete_category,
    full_subcategory,
    is_confluent,
    opposite,
    validate_category,
)
from koenig_ramsey.relstruct import structures_category
from koenig_ramsey.corpus import linear_orders

from oracles import confluent_by_brute_force, zigzag_blocks


def small_chain(drop_composite=False):
    compose = [] if drop_composite else [("g", "f", "gf")]
    return {
        "objects": ["1", "2", "3"],
        "arrows": [("f", "1", "2"), ("g", "2", "3"), ("gf", "1", "3")],
        "compose": compose,
    }


def test_chain_validates():
    cat = validate_category(small_chain())
    assert len(cat.arrows) == 6
    assert cat.compose("g", "f") == "gf"
    assert cat.hom("1", "3") == ("gf",)
    assert cat.hom("3", "1") == ()


def test_missing_composite_names_the_pair():
    with pytest.raises(CompositionNotClosed) as exc:
        validate_category(small_chain(drop_composite=True))
    assert set(exc.value.ids) == {"f", "g"}


def test_associativity_violation_is_found():
    # a, b, c idempotents with a corrupted product: (a∘b)∘c ≠ a∘(b∘c)
    elems = ["e", "a", "b", "c"]
    table = {}
    for x in elems:
        for y in elems:
            table[(x, y)] = y if x == "e" else x if y == "e" else "a"
    table[("b", "c")] = "c"
    table[("a", "c")] = "b"
    with pytest.raises(AssociativityViolated) as exc:
        FinCategory(["*"], [(x, "*", "*") for x in elems], {"*": "e"}, table)
    assert len(exc.value.ids) == 3


def test_unknown_reference():
    with pytest.raises(UnknownReference):
        validate_category({"objects": ["A"], "arrows": [("f", "A", "Z")]})


def test_unit_law():
    raw = {
        "objects": ["A"],
        "arrows": [("u", "A", "A")],
        "identities": {"A": "u"},
        "compose": [("u", "u", "u")],
    }
    validate_category(raw)
    with pytest.raises((UnitLawViolated, MissingIdentity)):
        FinCategory(["A"], [("u", "A", "A"), ("v", "A", "A")], {"A": "u"},
                    {("u", "u"): "u", ("u", "v"): "u", ("v", "u"): "v", ("v", "v"): "v"})


def test_hom_unknown_object():
    with pytest.raises(UnknownObject):
        chain(2).hom("1", "nope")


def test_hom_size_in_orders():
    cat = structures_category(linear_orders(6))
    assert len(cat.hom("o2", "o6")) == 15


def test_components():
    assert connected_components(span()) == [["A", "B", "S"]]
    assert connected_components(discrete_category(["x", "y"])) == [["x"], ["y"]]
    assert connected_components(chain(3)) == [["1", "2", "3"]]


@pytest.mark.parametrize("entry", standard_corpus(), ids=lambda e: e.name)
def test_components_match_zigzag_closure(entry):
    got = {frozenset(b) for b in connected_components(entry.category)}
    assert got == zigzag_blocks(entry.category)


@pytest.mark.parametrize("entry", standard_corpus(), ids=lambda e: e.name)
def test_confluence_matches_brute_force(entry):
    rep = is_confluent(entry.category)
    assert rep.confluent == confluent_by_brute_force(entry.category)
    if rep.confluent:
        cat = entry.category
        for (a, b), (c, fa, fb) in rep.cocones.items():
            assert cat.src(fa) == a and cat.src(fb) == b
            assert cat.tgt(fa) == cat.tgt(fb) == c
    else:
        a, b = rep.counterexample
        assert not any(entry.category.hom(a, c) and entry.category.hom(b, c) for c in entry.category.objects)


def test_confluence_examples():
    rep = is_confluent(span())
    assert not rep and rep.counterexample == ("A", "B")
    assert is_confluent(chain(3))
    assert is_confluent(parallel_pair())
    assert is_confluent(absorbing_monoid())


@pytest.mark.parametrize("entry", standard_corpus(), ids=lambda e: e.name)
def test_opposite_is_an_involution(entry):
    cat = entry.category
    op = opposite(cat)
    for f in cat.arrows:
        assert op.src(f) == cat.tgt(f)
    assert opposite(op) == cat


def test_full_subcategory():
    cat = validate_category(small_chain())
    sub = full_subcategory(cat, ["1", "3"])
    assert set(sub.arrows) == {"id_1", "id_3", "gf"}
    assert full_subcategory(cat, cat.objects) == cat
    assert len(full_subcategory(cat, []).objects) == 0
    with pytest.raises(UnknownObject):
        full_subcategory(cat, ["9"])


def test_empty_category_is_confluent():
    empty = validate_category({"objects": []})
    assert is_confluent(empty)
