"""Products, slices, the Grothendieck construction and transfer of solutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import NotAFunctor, NotASolution, NotNatural
from .fincat import FinCategory, default_identity_id, discrete_category
from .functor import FunctorData, compose_functors, functor_law_violation, identity_functor
from .setdiag import SetDiagram, is_solution, precompose


def product(c: FinCategory, d: FinCategory) -> FinCategory:
    objects = [(x, y) for x in c.objects for y in d.objects]
    records = [
        ((f, g), (c.src(f), d.src(g)), (c.tgt(f), d.tgt(g)))
        for f in c.arrows
        for g in d.arrows
    ]
    ids = {(x, y): (c.identity(x), d.identity(y)) for x, y in objects}
    table = {
        ((g1, g2), (f1, f2)): (h1, h2)
        for (g1, f1), h1 in c.table.items()
        for (g2, f2), h2 in d.table.items()
    }
    return FinCategory(objects, records, ids, table)


def power(cat: FinCategory, n: int) -> FinCategory:
    """``cat^n``: tuples of objects and arrows indexed by ``range(n)``."""
    objects = list(itertools.product(cat.objects, repeat=n))
    records = []
    for arrows in itertools.product(cat.arrows, repeat=n):
        records.append((arrows, tuple(map(cat.src, arrows)), tuple(map(cat.tgt, arrows))))
    ids = {o: tuple(map(cat.identity, o)) for o in objects}
    table = {}
    for f in (r[0] for r in records):
        tgt = tuple(map(cat.tgt, f))
        for parts in itertools.product(*(cat.out_arrows(t) for t in tgt)):
            table[(parts, f)] = tuple(cat.compose(g, h) for g, h in zip(parts, f))
    return FinCategory(objects, records, ids, table, check=False)


@dataclass
class CatValuedFunctor:
    """A functor from ``base`` into finite categories.

    ``transition[f]`` is the functor from the fiber over the source of ``f``
    to the fiber over its target.  Missing identity transitions are filled in.
    """

    base: FinCategory
    fiber: dict
    transition: dict

    def __post_init__(self):
        for r in self.base.objects:
            self.transition.setdefault(self.base.identity(r), identity_functor(self.fiber[r]))


def validate_cat_valued(base: FinCategory, fiber: Mapping, transition: Mapping) -> CatValuedFunctor:
    S = CatValuedFunctor(base, dict(fiber), dict(transition))
    for r in base.objects:
        if r not in S.fiber:
            raise NotAFunctor(f"no fiber over {r!r}", r)
    for f in base.arrows:
        if f not in S.transition:
            raise NotAFunctor(f"no transition functor for {f!r}", f)
        F = S.transition[f]
        if F.source is not S.fiber[base.src(f)] and F.source != S.fiber[base.src(f)]:
            raise NotAFunctor(f"transition of {f!r} has the wrong source fiber", f)
        if F.target is not S.fiber[base.tgt(f)] and F.target != S.fiber[base.tgt(f)]:
            raise NotAFunctor(f"transition of {f!r} has the wrong target fiber", f)
        problem = functor_law_violation(F)
        if problem:
            raise NotAFunctor(f"transition of {f!r}: {problem}", f)
    for r in base.objects:
        F = S.transition[base.identity(r)]
        if F.objects != {o: o for o in F.source.objects} or F.arrows != {a: a for a in F.source.arrows}:
            raise NotAFunctor(f"transition of the identity of {r!r} is not the identity", r)
    for (g, f), h in base.table.items():
        gf = compose_functors(S.transition[g], S.transition[f])
        if gf.objects != S.transition[h].objects or gf.arrows != S.transition[h].arrows:
            raise NotAFunctor(f"transitions do not compose for {g!r}∘{f!r}", g, f)
    return S


def grothendieck_elts(S: CatValuedFunctor) -> tuple[FinCategory, FunctorData]:
    """The category of elements with its projection to the base.

    Objects are ``(R, X)`` with ``X`` in the fiber over ``R``; an arrow
    ``(R, X) → (R', X')`` is ``(f, X, phi)`` with ``f: R→R'`` and
    ``phi: S_f(X) → X'``.  Composition is
    ``(g, X', psi)∘(f, X, phi) = (g∘f, X, psi∘S_g(phi))``.
    """
    base = S.base
    objects = [(r, x) for r in base.objects for x in S.fiber[r].objects]
    records = []
    for f in base.arrows:
        r, r2 = base.src(f), base.tgt(f)
        F, target = S.transition[f], S.fiber[r2]
        for x in S.fiber[r].objects:
            for phi in target.out_arrows(F.objects[x]):
                records.append(((f, x, phi), (r, x), (r2, target.tgt(phi))))
    ids = {(r, x): (base.identity(r), x, S.fiber[r].identity(x)) for r, x in objects}
    out: dict = {}
    for rec in records:
        out.setdefault(rec[1], []).append(rec)
    table = {}
    for (f, x, phi), _, (r2, x2) in records:
        for (g, _x2, psi), _, _ in out[(r2, x2)]:
            fiber = S.fiber[base.tgt(g)]
            table[((g, x2, psi), (f, x, phi))] = (
                base.compose(g, f),
                x,
                fiber.compose(psi, S.transition[g].arrows[phi]),
            )
    cat = FinCategory(objects, records, ids, table)
    proj = FunctorData(cat, base, {o: o[0] for o in objects}, {a: a[0] for a in cat.arrows})
    return cat, proj


def constant_cat_valued(base: FinCategory, fiber: FinCategory) -> CatValuedFunctor:
    ident = identity_functor(fiber)
    return CatValuedFunctor(base, {r: fiber for r in base.objects}, {f: ident for f in base.arrows})


def hom_functor(cat: FinCategory, a) -> CatValuedFunctor:
    """``R ↦ hom(A, R)`` as discrete categories, transitions by post-composition."""
    fibers = {r: discrete_category(cat.hom(a, r)) for r in cat.objects}
    transitions = {}
    for f in cat.arrows:
        src, tgt = fibers[cat.src(f)], fibers[cat.tgt(f)]
        omap = {k: cat.compose(f, k) for k in src.objects}
        transitions[f] = FunctorData(
            src, tgt, omap, {default_identity_id(k): default_identity_id(omap[k]) for k in src.objects}
        )
    return CatValuedFunctor(cat, fibers, transitions)


def slice_category(cat: FinCategory, a) -> tuple[FinCategory, FunctorData]:
    """``A\\C`` built as the category of elements of ``hom(A, -)``."""
    cat.hom(a, a)
    return grothendieck_elts(hom_functor(cat, a))


# -- transfer of solutions ------------------------------------------------------

@dataclass
class NatTransformData:
    """Components ``Δ_C: C → G(F(C))`` of a transformation id ⇒ G∘F."""

    F: FunctorData
    G: FunctorData
    components: dict


def naturality_violation(delta: NatTransformData) -> str | None:
    c = delta.F.source
    GF = compose_functors(delta.G, delta.F)
    for o in c.objects:
        d = delta.components.get(o)
        if d is None or not c.has_arrow(d):
            return f"no component at {o!r}"
        if c.src(d) != o or c.tgt(d) != GF.objects[o]:
            return f"component at {o!r} has the wrong type"
    for u in c.arrows:
        s, t = c.src(u), c.tgt(u)
        if c.compose(delta.components[t], u) != c.compose(GF.arrows[u], delta.components[s]):
            return f"naturality square fails at {u!r}"
    return None


def transfer_solution(delta: NatTransformData, diag: SetDiagram, sol: Mapping) -> dict:
    """Turn a solution of ``D∘G^op`` into the solution ``C ↦ D_{Δ_C}(x_{F(C)})`` of ``D``."""
    problem = naturality_violation(delta)
    if problem:
        raise NotNatural(problem)
    pulled = precompose(diag, delta.G)
    if not is_solution(pulled, sol):
        raise NotASolution("input is not a solution of the pulled-back diagram")
    out = {
        o: diag.apply(delta.components[o], sol[delta.F.objects[o]])
        for o in diag.base.objects
    }
    if not is_solution(diag, out):
        raise NotASolution("transferred tuple is not a solution")
    return out
