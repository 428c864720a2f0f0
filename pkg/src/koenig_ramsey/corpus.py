"""Small named categories, structure classes and expansions used as fixtures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .expansion import Expansion, as_expansion
from .fincat import FinCategory, disjoint_union, monoid, validate_category
from .relstruct import (
    RelStructure,
    Signature,
    TruncatedClass,
    reduct_functor,
    structures_category,
)
from .transfer import product


# -- categories ----------------------------------------------------------------

def point() -> FinCategory:
    return validate_category({"objects": ["*"]})


def chain(n: int) -> FinCategory:
    """The poset 1 < 2 < … < n; the arrow ``i→j`` is named ``"i<j"``."""
    objs = [str(i) for i in range(1, n + 1)]
    arrows = [(f"{i}<{j}", str(i), str(j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    compose = [
        (f"{j}<{k}", f"{i}<{j}", f"{i}<{k}")
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
    ]
    return validate_category({"objects": objs, "arrows": arrows, "compose": compose})


def span() -> FinCategory:
    """A ← S → B with no cocone."""
    return validate_category({
        "objects": ["A", "B", "S"],
        "arrows": [("inclA", "S", "A"), ("inclB", "S", "B")],
    })


def cospan() -> FinCategory:
    return validate_category({
        "objects": ["A", "B", "T"],
        "arrows": [("toT_A", "A", "T"), ("toT_B", "B", "T")],
    })


def parallel_pair() -> FinCategory:
    return validate_category({"objects": ["X", "Y"], "arrows": [("p", "X", "Y"), ("q", "X", "Y")]})


def commutative_square() -> FinCategory:
    return product(chain(2), chain(2))


def absorbing_monoid() -> FinCategory:
    """``{e, z}`` with ``z`` absorbing."""
    return monoid(["e", "z"], lambda g, f: "e" if g == f == "e" else "z")


def cyclic_monoid(n: int = 2) -> FinCategory:
    """The group Z/n as a one-object category; not Ramsey for n ≥ 2."""
    return monoid([f"r{i}" for i in range(n)], lambda g, f: f"r{(int(g[1:]) + int(f[1:])) % n}")


# -- structure classes -------------------------------------------------------------

ORDER = Signature.of({"<": 2})
EDGE = Signature.of({"E": 2})
EMPTY = Signature.of({})


def _order_on(perm, sig=ORDER) -> RelStructure:
    dom = tuple(sorted(perm))
    return RelStructure(sig, dom, {"<": {(perm[i], perm[j]) for i in range(len(perm)) for j in range(i + 1, len(perm))}})


def linear_orders(n: int, *, full: bool = False, include_empty: bool = False) -> TruncatedClass:
    """Linear orders of size ≤ n.

    Skeletal by default: one order ``o<m>`` on ``range(m)`` per size.  With
    ``full`` every order on ``range(m)`` is a member, named by its listing.
    """
    members = []
    for m in range(0 if include_empty else 1, n + 1):
        perms = itertools.permutations(range(m)) if full else [tuple(range(m))]
        for perm in perms:
            name = "L" + "".join(map(str, perm)) if full else f"o{m}"
            members.append(_order_on(perm).renamed(name))
    return TruncatedClass(ORDER, members, n)


def bare_sets(n: int, *, include_empty: bool = False) -> TruncatedClass:
    return TruncatedClass(
        EMPTY,
        [RelStructure(EMPTY, range(m), name=f"i{m}") for m in range(0 if include_empty else 1, n + 1)],
        n,
    )


def _graphs(n: int, keep, sig=EDGE, include_empty=False, prefix="g") -> list[RelStructure]:
    out = []
    for m in range(0 if include_empty else 1, n + 1):
        pairs = list(itertools.combinations(range(m), 2))
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = [p for p, b in zip(pairs, bits) if b]
            if not keep(m, edges):
                continue
            rel = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
            out.append(RelStructure(sig, range(m), {"E": rel}, name=f"{prefix}{m}_{''.join(map(str, bits))}"))
    return out


def graphs(n: int, *, include_empty: bool = False) -> TruncatedClass:
    """All labelled simple graphs on ``range(m)``, m ≤ n."""
    return TruncatedClass(EDGE, _graphs(n, lambda m, e: True, include_empty=include_empty), n)


def matchings(n: int) -> TruncatedClass:
    """Labelled graphs of maximum degree one."""

    def keep(m, edges):
        ends = [x for e in edges for x in e]
        return len(ends) == len(set(ends))

    return TruncatedClass(EDGE, _graphs(n, keep, prefix="m"), n)


ORDERED_GRAPH = ORDER.union(EDGE)


def ordered_graphs(n: int) -> TruncatedClass:
    """Every labelled graph on ``range(m)`` with every linear order on it."""
    members = []
    for g in _graphs(n, lambda m, e: True, sig=ORDERED_GRAPH):
        for perm in itertools.permutations(g.domain):
            rels = dict(g.relations)
            rels["<"] = _order_on(perm).relations["<"]
            members.append(RelStructure(ORDERED_GRAPH, g.domain, rels, name=f"{g.name}_L{''.join(map(str, perm))}"))
    return TruncatedClass(ORDERED_GRAPH, members, n)


# -- expansions ----------------------------------------------------------------

def order_forgetting(n: int) -> Expansion:
    """All linear orders on ``range(m)`` over bare sets, m ≤ n."""
    return as_expansion(reduct_functor(linear_orders(n, full=True), bare_sets(n)))


def ordered_graph_forgetting(n: int) -> Expansion:
    return as_expansion(reduct_functor(ordered_graphs(n), graphs(n)))


# -- the standard corpus ----------------------------------------------------------

@dataclass
class CorpusEntry:
    name: str
    category: FinCategory
    note: str = ""


def standard_corpus() -> list[CorpusEntry]:
    return [
        CorpusEntry("point", point()),
        CorpusEntry("chain2", chain(2)),
        CorpusEntry("chain3", chain(3)),
        CorpusEntry("span", span(), "not confluent"),
        CorpusEntry("cospan", cospan()),
        CorpusEntry("parallel_pair", parallel_pair(), "confluent, not Ramsey"),
        CorpusEntry("square", commutative_square()),
        CorpusEntry("absorbing_monoid", absorbing_monoid()),
        CorpusEntry("cyclic_monoid2", cyclic_monoid(2), "confluent, not Ramsey"),
        CorpusEntry("chain2+point", disjoint_union(chain(2), point()), "two components"),
        CorpusEntry("span+point", disjoint_union(span(), point()), "two components, not confluent"),
        CorpusEntry("orders4", structures_category(linear_orders(4)), "confluent, not Ramsey(2)"),
    ]


def corpus_by_name() -> dict[str, FinCategory]:
    return {e.name: e.category for e in standard_corpus()}
