"""Ramsey witnesses, whole-category verdicts and the diagrams built from them.

A coloring of ``hom(A, C)`` with ``N`` colors is stored as a tuple of color
indices aligned with ``cat.hom(A, C)``.  Colorings are ordered
lexicographically with the first arrow of the hom-set most significant, so
the certificate returned on failure is the first violating coloring in that
order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import (
    ConfluentPair,
    InvalidColorCount,
    InvalidInput,
    NoCocone,
    NotAWitness,
    NoWitness,
)
from .fincat import FinCategory, connected_components
from .setdiag import SetDiagram, is_solution


@dataclass
class WitnessCheck:
    is_witness: bool
    certificate: dict | None = None

    def __bool__(self):
        return self.is_witness


def _check_colors(n):
    if not isinstance(n, int) or n < 1:
        raise InvalidColorCount(f"color count must be a positive integer, got {n!r}", n)


def copy_positions(cat: FinCategory, a, b, c) -> list[list[int]]:
    """For each ``g`` in hom(B, C): the hom(A, C)-positions of ``g∘f``, f in hom(A, B)."""
    index = {h: i for i, h in enumerate(cat.hom(a, c))}
    hom_ab = cat.hom(a, b)
    return [sorted({index[cat.compose(g, f)] for f in hom_ab}) for g in cat.hom(b, c)]


def _first_violating(m: int, copies: list[list[int]], n: int) -> tuple | None:
    """Lexicographically first coloring of ``m`` positions with no monochromatic copy."""
    if not copies:
        return (0,) * m
    if any(len(c) <= 1 for c in copies):
        return None
    closing: list[list[list[int]]] = [[] for _ in range(m)]
    for c in copies:
        closing[c[-1]].append(c)
    colors = [0] * m

    def rec(i):
        if i == m:
            return True
        for col in range(n):
            colors[i] = col
            if any(all(colors[p] == col for p in c) for c in closing[i]):
                continue
            if rec(i + 1):
                return True
        return False

    return tuple(colors) if rec(0) else None


def is_ramsey_witness(cat: FinCategory, a, b, c, colors: int) -> WitnessCheck:
    """Is every ``colors``-coloring of hom(A, C) constant on some ``g∘hom(A, B)``?"""
    _check_colors(colors)
    hom_ac = cat.hom(a, c)
    cat.hom(b, c)
    bad = _first_violating(len(hom_ac), copy_positions(cat, a, b, c), colors)
    if bad is None:
        return WitnessCheck(True)
    return WitnessCheck(False, dict(zip(hom_ac, bad)))


def monochromatic_arrow(cat: FinCategory, a, b, c, chi) -> object | None:
    """First ``g: B→C`` with ``chi∘g_*`` constant on hom(A, B); ``chi`` maps arrows to colors."""
    hom_ab = cat.hom(a, b)
    for g in cat.hom(b, c):
        if len({chi[cat.compose(g, f)] for f in hom_ab}) <= 1:
            return g
    return None


def witness_candidates(cat: FinCategory, a, b) -> list:
    cat.hom(a, b)
    return sorted(cat.objects, key=lambda c: (len(cat.hom(a, c)), cat.object_index(c)))


def find_witness(cat: FinCategory, a, b, colors: int):
    """First witness by ascending |hom(A, C)|, ties by declaration order; None if absent."""
    _check_colors(colors)
    for c in witness_candidates(cat, a, b):
        if cat.hom(b, c) and is_ramsey_witness(cat, a, b, c, colors):
            return c
    return None


@dataclass
class RamseyReport:
    colors: int
    witnesses: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    @property
    def ramsey(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ramsey


def _pair_verdict(args):
    cat, a, b, colors = args
    if not cat.hom(a, b):
        return a, b, b, None
    found = find_witness(cat, a, b, colors)
    if found is not None:
        return a, b, found, None
    certs = {}
    for c in cat.objects:
        check = is_ramsey_witness(cat, a, b, c, colors)
        certs[c] = check.certificate
    return a, b, None, certs


def is_ramsey(cat: FinCategory, colors: int = 2, workers: int = 1) -> RamseyReport:
    """Witness search for every ordered pair of objects, within ``cat``."""
    _check_colors(colors)
    jobs = [(cat, a, b, colors) for a in cat.objects for b in cat.objects]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_verdict, jobs, chunksize=4))
    else:
        results = [_pair_verdict(j) for j in jobs]
    report = RamseyReport(colors)
    for a, b, c, certs in results:
        if c is not None:
            report.witnesses[(a, b)] = c
        else:
            report.failures[(a, b)] = certs
    return report


# -- diagrams and witnesses ---------------------------------------------------

def monochromatic_copy(diag: SetDiagram, a, b, c, x):
    """Color hom(A, C) by ``h ↦ D_h(x)`` and pick ``g`` making the coloring constant.

    Returns ``(g, value)`` where ``value = D_f(D_g(x))`` for every
    ``f`` in hom(A, B) (None if hom(A, B) is empty).
    """
    cat = diag.base
    chi = {h: diag.apply(h, x) for h in cat.hom(a, c)}
    g = monochromatic_arrow(cat, a, b, c, chi)
    if g is None:
        raise NotAWitness(f"{c!r} is not a witness for ({a!r}, {b!r}) on this coloring", a, b, c)
    y = diag.apply(g, x)
    values = {diag.apply(f, y) for f in cat.hom(a, b)}
    assert len(values) <= 1
    return g, (values.pop() if values else None)


def _endpoints(cat: FinCategory, arrows) -> list:
    seen = []
    for f in arrows:
        for o in (cat.src(f), cat.tgt(f)):
            if o not in seen:
                seen.append(o)
    return seen


def _iterate_once(diag: SetDiagram, arrows, bs: list, witness_cache: dict):
    cat = diag.base
    # a common target C_0 for all endpoints
    c0 = None
    for c in cat.objects:
        if all(cat.hom(bi, c) for bi in bs):
            c0 = c
            break
    if c0 is None:
        raise NoCocone(f"no object receives arrows from all of {bs!r}", *bs)
    gs = [cat.hom(bi, c0)[0] for bi in bs]
    cs = [c0]
    for bi in bs:
        key = (bi, cs[-1], len(diag.carrier[bi]))
        if key not in witness_cache:
            witness_cache[key] = find_witness(cat, *key) if key[2] >= 1 else None
        ci = witness_cache[key]
        if ci is None:
            raise NoWitness(
                f"no witness for ({bi!r}, {cs[-1]!r}) with {key[2]} colors", bi, cs[-1]
            )
        cs.append(ci)
    n = len(bs)
    xn = diag.carrier[cs[n]][0]
    x = xn
    hs = [None] * (n + 1)
    for i in range(n, 0, -1):
        hs[i], _ = monochromatic_copy(diag, bs[i - 1], cs[i - 1], cs[i], x)
        x = diag.apply(hs[i], x)
    chain = hs[1]  # h_n∘…∘h_1 : C_0 → C_n
    for i in range(2, n + 1):
        chain = cat.compose(hs[i], chain)
    out = {o: diag.carrier[o][0] for o in cat.objects}
    for bi, gi in zip(bs, gs):
        out[bi] = diag.apply(cat.compose(chain, gi), xn)
    return out


MAX_ENDPOINT_ORDERS = 5040


def iterated_m_solution(diag: SetDiagram, arrows, endpoint_order=None) -> dict:
    """An M-solution built from a chain of Ramsey witnesses.

    The endpoints ``B_1..B_n`` of ``arrows`` get a common target ``C_0``;
    ``C_i`` is a witness of ``(B_i, C_{i-1}, |D_{B_i}|)``; arrows
    ``h_i: C_{i-1}→C_i`` are chosen backwards from an element of ``D_{C_n}``
    and ``x_{B_i} = D_{h_n∘…∘h_1∘g_i}(x_n)``.  Other coordinates take the first
    carrier element.

    Any listing of the endpoints works when witnesses exist for all pairs;
    in a truncated category some listings need witnesses that are missing.
    Without ``endpoint_order`` the listing by decreasing carrier size is tried
    first, then the remaining permutations.
    """
    cat = diag.base
    arrows = list(arrows)
    for f in arrows:
        cat.src(f)
    if any(not diag.carrier[o] for o in cat.objects):
        raise InvalidInput("all sets must be nonempty")
    bs = _endpoints(cat, arrows)
    if not bs:
        return {o: diag.carrier[o][0] for o in cat.objects}
    if endpoint_order is not None:
        orders = [list(endpoint_order)]
        if sorted(map(repr, orders[0])) != sorted(map(repr, bs)):
            raise InvalidInput("endpoint_order must list exactly the endpoints of the arrows")
    else:
        first = sorted(bs, key=lambda o: (-len(diag.carrier[o]), cat.object_index(o)))
        rest = (list(p) for p in itertools.permutations(first) if list(p) != first)
        orders = itertools.chain([first], itertools.islice(rest, MAX_ENDPOINT_ORDERS - 1))
    cache: dict = {}
    first_error = None
    for order in orders:
        try:
            out = _iterate_once(diag, arrows, order, cache)
        except NoWitness as exc:
            first_error = first_error or exc
            continue
        if not is_solution(diag, out, arrows):
            raise RuntimeError("iterated witness construction produced a non-solution")
        return out
    raise first_error


def _connected(cat: FinCategory, a, b) -> bool:
    return any(a in block and b in block for block in connected_components(cat))


def confluence_counterexample_diagram(cat: FinCategory, a, b) -> SetDiagram:
    """Sets {0}, {1}, {0,1} by reachability from A and B; every map an inclusion."""
    cat.hom(a, b)
    if not _connected(cat, a, b):
        raise InvalidInput(f"{a!r} and {b!r} are not connected", a, b)
    carrier = {}
    for c in cat.objects:
        from_a, from_b = bool(cat.hom(a, c)), bool(cat.hom(b, c))
        if from_a and from_b:
            raise ConfluentPair(f"{c!r} receives arrows from both {a!r} and {b!r}", a, b, c)
        carrier[c] = (0,) if from_a else (1,) if from_b else (0, 1)
    action = {f: {x: x for x in carrier[cat.tgt(f)]} for f in cat.arrows}
    return SetDiagram(cat, carrier, action)


def bad_coloring_diagram(cat: FinCategory, a, b, colors: int) -> SetDiagram:
    """At each C: the colorings of hom(A, C) that stop C from being a witness.

    The map of ``f: C→C'`` sends a coloring ``chi`` of hom(A, C') to
    ``chi∘f_*``.  The set at C is empty iff C is a witness of (A, B, colors).
    """
    _check_colors(colors)
    cat.hom(a, b)
    carrier = {}
    index = {}
    for c in cat.objects:
        hom_ac = cat.hom(a, c)
        index[c] = {h: i for i, h in enumerate(hom_ac)}
        copies = copy_positions(cat, a, b, c)
        carrier[c] = tuple(
            chi
            for chi in itertools.product(range(colors), repeat=len(hom_ac))
            if all(len({chi[p] for p in cp}) > 1 for cp in copies)
        )
    action = {}
    for f in cat.arrows:
        src, tgt = cat.src(f), cat.tgt(f)
        pull = [index[tgt][cat.compose(f, k)] for k in cat.hom(a, src)]
        action[f] = {chi: tuple(chi[p] for p in pull) for chi in carrier[tgt]}
    return SetDiagram(cat, carrier, action, check=False)


def coloring_diagram(cat: FinCategory, a, colors: int) -> SetDiagram:
    """At each C: every coloring of hom(A, C); maps by precomposition as above."""
    _check_colors(colors)
    cat.hom(a, a)
    index = {c: {h: i for i, h in enumerate(cat.hom(a, c))} for c in cat.objects}
    carrier = {
        c: tuple(itertools.product(range(colors), repeat=len(index[c]))) for c in cat.objects
    }
    action = {}
    for f in cat.arrows:
        src, tgt = cat.src(f), cat.tgt(f)
        pull = [index[tgt][cat.compose(f, k)] for k in cat.hom(a, src)]
        action[f] = {chi: tuple(chi[p] for p in pull) for chi in carrier[tgt]}
    return SetDiagram(cat, carrier, action, check=False)
