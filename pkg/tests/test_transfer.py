import random

import pytest

from koenig_ramsey.corpus import (
    absorbing_monoid,
    bare_sets,
    chain,
    cospan,
    point,
    standard_corpus,
)
from koenig_ramsey.errors import NotAFunctor, NotASolution, NotNatural
from koenig_ramsey.fincat import disjoint_union, is_confluent
from koenig_ramsey.functor import (
    FunctorData,
    constant_functor,
    find_isomorphism,
    identity_functor,
)
from koenig_ramsey.ramsey import is_ramsey
from koenig_ramsey.relstruct import blowup, blowup_cat_valued
from koenig_ramsey.setdiag import (
    constant_diagram,
    enumerate_solutions,
    precompose,
    random_diagram,
    solve,
    validate_diagram,
)
from koenig_ramsey.transfer import (
    NatTransformData,
    constant_cat_valued,
    grothendieck_elts,
    hom_functor,
    power,
    product,
    slice_category,
    transfer_solution,
    validate_cat_valued,
)

SMALL = [e for e in standard_corpus() if len(e.category.arrows) <= 9]


def test_square():
    sq = product(chain(2), chain(2))
    assert (len(sq.objects), len(sq.arrows)) == (4, 9)


@pytest.mark.parametrize("c", SMALL, ids=lambda e: e.name)
@pytest.mark.parametrize("d", SMALL[:6], ids=lambda e: e.name)
def test_product_counts(c, d):
    p = product(c.category, d.category)
    assert len(p.arrows) == len(c.category.arrows) * len(d.category.arrows)
    assert len(p.objects) == len(c.category.objects) * len(d.category.objects)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_point_times_c(entry):
    assert find_isomorphism(product(point(), entry.category), entry.category) is not None


@pytest.mark.parametrize("pair", [("chain2", "cospan"), ("absorbing_monoid", "chain2"), ("span", "point")])
def test_constant_elts_is_product(pair):
    cats = {e.name: e.category for e in standard_corpus()}
    base, fiber = cats[pair[0]], cats[pair[1]]
    elts, proj = grothendieck_elts(constant_cat_valued(base, fiber))
    assert find_isomorphism(elts, product(base, fiber)) is not None


def test_slice_examples():
    s, proj = slice_category(chain(3), "1")
    assert len(s.objects) == 3 and len(s.arrows) == 6
    assert find_isomorphism(s, chain(3)) is not None
    s3, _ = slice_category(chain(3), "3")
    assert len(s3.objects) == 1


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_slice_object_count(entry):
    cat = entry.category
    for a in cat.objects:
        s, proj = slice_category(cat, a)
        assert len(s.objects) == len(cat.out_arrows(a))


def test_elts_has_opcartesian_lifts():
    S = hom_functor(cospan(), "A")
    elts, proj = grothendieck_elts(S)
    base = S.base
    for (r, x) in elts.objects:
        for f in base.out_arrows(r):
            lift = (f, x, S.fiber[base.tgt(f)].identity(S.transition[f].objects[x]))
            assert elts.has_arrow(lift) and elts.src(lift) == (r, x)
            assert proj.arrows[lift] == f


def test_partition_category_matches_blowup():
    base, fibers = bare_sets(2), bare_sets(2, include_empty=True)
    elts, _ = grothendieck_elts(blowup_cat_valued(base, fibers))
    direct = blowup(base, fibers)
    assert (len(elts.objects), len(elts.arrows)) == (len(direct.objects), len(direct.arrows))
    assert find_isomorphism(elts, direct) is not None


def test_power():
    sq = power(chain(2), 2)
    assert find_isomorphism(sq, product(chain(2), chain(2))) is not None


def test_cat_valued_validation():
    base = chain(2)
    good = constant_cat_valued(base, chain(2))
    validate_cat_valued(base, good.fiber, good.transition)
    bad = dict(good.transition)
    c = chain(2)
    bad["1<2"] = FunctorData(c, c, {"1": "2", "2": "2"}, {"id_1": "id_2", "id_2": "id_2", "1<2": "1<2"})
    with pytest.raises(NotAFunctor):
        validate_cat_valued(base, good.fiber, bad)


# -- transfer of solutions --------------------------------------------------------

def test_transfer_identity():
    c = chain(3)
    ident = identity_functor(c)
    delta = NatTransformData(ident, ident, {o: c.identity(o) for o in c.objects})
    d = random_diagram(c, 3, random.Random(1))
    sol = solve(d)
    assert transfer_solution(delta, d, sol) == sol


def test_transfer_through_a_terminal_object():
    c = chain(3)
    F = constant_functor(c, point(), "*")
    G = FunctorData(point(), c, {"*": "3"}, {"id_*": "id_3"})
    delta = NatTransformData(F, G, {"1": "1<3", "2": "2<3", "3": "id_3"})
    d = random_diagram(c, 3, random.Random(5))
    for x in d.carrier["3"]:
        out = transfer_solution(delta, d, {"*": x})
        assert out["3"] == x
        assert out["1"] == d.apply("1<3", x)


def test_transfer_from_doubled_category():
    c = chain(2)
    doubled = disjoint_union(c, c)
    F = FunctorData(c, doubled, {o: (0, o) for o in c.objects}, {a: (0, a) for a in c.arrows})
    G = FunctorData(doubled, c, {o: o[1] for o in doubled.objects}, {a: a[1] for a in doubled.arrows})
    delta = NatTransformData(F, G, {o: c.identity(o) for o in c.objects})
    d = random_diagram(c, 3, random.Random(2))
    pulled = precompose(d, G)
    for sol in enumerate_solutions(pulled):
        out = transfer_solution(delta, d, sol)
        assert out == {o: sol[(0, o)] for o in c.objects}


def test_transfer_errors():
    c = chain(2)
    ident = identity_functor(c)
    with pytest.raises(NotNatural):
        transfer_solution(NatTransformData(ident, ident, {"1": "1<2", "2": "id_2"}), constant_diagram(c, [0]), {"1": 0, "2": 0})
    d = validate_diagram(c, {"sets": {"1": [0, 1], "2": [0, 1]}, "maps": {"1<2": {0: 0, 1: 0}}})
    delta = NatTransformData(ident, ident, {o: c.identity(o) for o in c.objects})
    with pytest.raises(NotASolution):
        transfer_solution(delta, d, {"1": 1, "2": 0})


# -- the transfer theorem on finite instances ----------------------------------------

def confluent_ramsey(cat):
    return bool(is_confluent(cat)) and bool(is_ramsey(cat, 2))


GOOD = [e for e in SMALL if confluent_ramsey(e.category) and len(e.category.objects) <= 3]


@pytest.mark.parametrize("base", GOOD, ids=lambda e: e.name)
@pytest.mark.parametrize("fiber", GOOD, ids=lambda e: e.name)
def test_products_stay_confluent_ramsey(base, fiber):
    elts, _ = grothendieck_elts(constant_cat_valued(base.category, fiber.category))
    assert confluent_ramsey(elts)


@pytest.mark.parametrize("entry", GOOD, ids=lambda e: e.name)
def test_slices_stay_confluent_ramsey(entry):
    for a in entry.category.objects:
        s, _ = slice_category(entry.category, a)
        assert confluent_ramsey(s)


def test_mixed_fibers_stay_confluent_ramsey():
    # point over 1, absorbing monoid over 2, included along 1<2
    base, small, big = chain(2), point(), absorbing_monoid()
    incl = FunctorData(small, big, {"*": "*"}, {"id_*": "e"})
    S = validate_cat_valued(base, {"1": small, "2": big}, {"1<2": incl})
    elts, proj = grothendieck_elts(S)
    assert len(elts.objects) == 2
    assert confluent_ramsey(elts)
