import random

import pytest

from koenig_ramsey.corpus import chain, parallel_pair, span, standard_corpus
from koenig_ramsey.errors import (
    FunctorialityViolated,
    MissingAction,
    MissingCarrier,
    NotAFunction,
    UnknownArrow,
)
from koenig_ramsey.fincat import discrete_category, disjoint_union, validate_category
from koenig_ramsey.ramsey import confluence_counterexample_diagram
from koenig_ramsey.setdiag import (
    constant_diagram,
    enumerate_diagrams,
    enumerate_solutions,
    is_solution,
    minimal_unsat_core,
    random_diagram,
    solve,
    solve_by_components,
    solve_restricted,
    validate_diagram,
)

from oracles import all_solutions, restricted_solutions


def parallel_diagram():
    return validate_diagram(parallel_pair(), {
        "sets": {"X": [0, 1], "Y": ["*"]},
        "maps": {"p": {"*": 0}, "q": {"*": 1}},
    })


def koenig_chain(n):
    cat = chain(n)
    sets = {str(i): [f"a{i}"] for i in range(1, n + 1)}
    maps = {f: {f"a{cat.tgt(f)}": f"a{cat.src(f)}"} for f in cat.arrows if not cat.is_identity(f)}
    return validate_diagram(cat, {"sets": sets, "maps": maps})


def test_singleton_chain():
    d = koenig_chain(4)
    assert solve(d) == {str(i): f"a{i}" for i in range(1, 5)}


def test_parallel_pair_has_no_solution():
    d = parallel_diagram()
    assert solve(d) is None
    assert enumerate_solutions(d) == []
    assert minimal_unsat_core(d) == ["p", "q"]
    x = solve_restricted(d, ["p"])
    assert x == {"X": 0, "Y": "*"}


def test_span_counterexample():
    d = confluence_counterexample_diagram(span(), "A", "B")
    assert d.carrier == {"A": (0,), "B": (1,), "S": (0, 1)}
    assert solve(d) is None
    assert minimal_unsat_core(d) == ["inclA", "inclB"]


def test_functoriality_violation_names_pair():
    with pytest.raises(FunctorialityViolated) as exc:
        validate_diagram(chain(3), {
            "sets": {"1": [0, 1], "2": [0, 1], "3": [0, 1]},
            "maps": {"1<2": {0: 0, 1: 1}, "2<3": {0: 0, 1: 1}, "1<3": {0: 1, 1: 0}},
        })
    assert set(exc.value.ids) == {"1<2", "2<3"}


def test_missing_pieces():
    with pytest.raises(MissingCarrier):
        validate_diagram(chain(2), {"sets": {"1": [0]}, "maps": {}})
    with pytest.raises(MissingAction):
        validate_diagram(chain(2), {"sets": {"1": [0], "2": [0]}, "maps": {}})
    with pytest.raises(NotAFunction):
        validate_diagram(chain(2), {"sets": {"1": [0], "2": [0, 1]}, "maps": {"1<2": {0: 0}}})
    with pytest.raises(NotAFunction):
        validate_diagram(chain(2), {"sets": {"1": [0], "2": [0]}, "maps": {"1<2": {0: 7}}})
    with pytest.raises(UnknownArrow):
        validate_diagram(chain(2), {"sets": {"1": [0], "2": [0]}, "maps": {"1<2": {0: 0}, "zz": {}}})


def test_empty_carrier_warns():
    with pytest.warns(UserWarning):
        validate_diagram(chain(2), {"sets": {"1": [], "2": []}, "maps": {"1<2": {}}})


def test_enumerate_examples():
    d = constant_diagram(chain(3), [0, 1])
    assert enumerate_solutions(d) == [{o: 0 for o in "123"}, {o: 1 for o in "123"}]
    disc = discrete_category(["x", "y"])
    d2 = validate_diagram(disc, {"sets": {"x": [0, 1], "y": [0, 1, 2]}, "maps": {}})
    assert len(enumerate_solutions(d2)) == 6
    assert len(enumerate_solutions(d2, cap=4)) == 4


def test_restricted_empty_m():
    d = parallel_diagram()
    assert solve_restricted(d, []) == {"X": 0, "Y": "*"}
    with pytest.raises(UnknownArrow):
        solve_restricted(d, ["nope"])


def small_bases():
    return [e.category for e in standard_corpus() if len(e.category.arrows) <= 8]


@pytest.mark.parametrize("seed", range(40))
def test_solver_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    cat = rng.choice(small_bases())
    d = random_diagram(cat, 3, rng)
    expected = all_solutions(d)
    got = enumerate_solutions(d)
    key = lambda x: [repr(x[o]) for o in cat.objects]
    assert sorted(got, key=key) == sorted(expected, key=key)
    assert [key(x) for x in got] == sorted(key(x) for x in got)
    first = solve(d)
    assert (first is None) == (not expected)
    if first is not None:
        assert first in expected


@pytest.mark.parametrize("seed", range(30))
def test_restricted_and_monotone(seed):
    rng = random.Random(1000 + seed)
    cat = rng.choice(small_bases())
    d = random_diagram(cat, 3, rng)
    arrows = [f for f in cat.arrows if rng.random() < 0.5]
    x = solve_restricted(d, arrows)
    ref = restricted_solutions(d, arrows)
    assert (x is None) == (not ref)
    if x is not None:
        assert is_solution(d, x, arrows)
        smaller = arrows[: len(arrows) // 2]
        assert is_solution(d, x, smaller)


@pytest.mark.parametrize("seed", range(20))
def test_componentwise(seed):
    rng = random.Random(2000 + seed)
    cat = disjoint_union(rng.choice(small_bases()), rng.choice(small_bases()))
    d = random_diagram(cat, 2, rng)
    whole = solve(d)
    parts = solve_by_components(d)
    assert (whole is None) == (parts is None)
    if parts is not None:
        assert is_solution(d, parts)


def test_unsat_core_is_minimal():
    for entry in standard_corpus():
        if len(entry.category.arrows) > 8:
            continue
        for d in enumerate_diagrams(entry.category, 2):
            core = minimal_unsat_core(d)
            if core is None:
                assert solve(d) is not None
                continue
            assert not restricted_solutions(d, core)
            for f in core:
                assert restricted_solutions(d, [g for g in core if g != f])


def test_enumerate_diagrams_are_functorial():
    cat = validate_category({
        "objects": ["1", "2", "3"],
        "arrows": [("f", "1", "2"), ("g", "2", "3"), ("gf", "1", "3")],
        "compose": [("g", "f", "gf")],
    })
    n = 0
    for d in enumerate_diagrams(cat, 2):
        n += 1
        for y in d.carrier["3"]:
            assert d.apply("f", d.apply("g", y)) == d.apply("gf", y)
    # carriers of size 1 or 2 on a 3-chain: count the compatible map pairs by hand
    brute = 0
    import itertools
    for sizes in itertools.product((1, 2), repeat=3):
        s1, s2, s3 = (range(k) for k in sizes)
        for g in itertools.product(s2, repeat=len(s3)):
            for f in itertools.product(s1, repeat=len(s2)):
                brute += 1
    assert n == brute
