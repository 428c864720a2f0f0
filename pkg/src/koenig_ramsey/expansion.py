"""Abstract expansions: surjective discrete fibrations onto a finite category.

An expansion hom ``pi → rho`` is a functor between the total categories
commuting with the projections.  It is determined by its object map; arrows
follow by unique lifting, so homs are found as solutions of a set diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyCarrier, NotAFunctor, NotFibration, NotSurjective
from .fincat import FinCategory, disjoint_union, full_subcategory
from .functor import FunctorData, compose_functors, functor_law_violation, identity_functor
from .setdiag import SetDiagram, enumerate_solutions, solve


@dataclass
class FibrationCheck:
    holds: bool
    certificate: tuple | None = None  # (E, base arrow, lifts found)

    def __bool__(self):
        return self.holds


def _lift_table(F: FunctorData):
    """``(E, f) → [g]`` for every object E and base arrow f into F(E)."""
    src, base = F.source, F.target
    lifts: dict = {}
    for e in src.objects:
        for f in base.in_arrows(F.objects[e]):
            lifts[(e, f)] = []
        for g in src.in_arrows(e):
            lifts[(e, F.arrows[g])].append(g)
    return lifts


def is_discrete_fibration(F: FunctorData) -> FibrationCheck:
    for (e, f), gs in _lift_table(F).items():
        if len(gs) != 1:
            return FibrationCheck(False, (e, f, tuple(gs)))
    return FibrationCheck(True)


class Expansion:
    """A surjective discrete fibration ``functor: total → base`` with its fibers."""

    def __init__(self, functor: FunctorData, fibers: dict, lifts: dict):
        self.functor = functor
        self.fibers = fibers
        self._lifts = lifts

    @property
    def total(self) -> FinCategory:
        return self.functor.source

    @property
    def base(self) -> FinCategory:
        return self.functor.target

    def lift(self, e, f):
        """The unique arrow into ``e`` lying over the base arrow ``f``."""
        return self._lifts[(e, f)]

    def pull(self, f, e):
        """Source of the lift of ``f`` at ``e``."""
        return self.total.src(self._lifts[(e, f)])

    def fiber_sizes(self) -> dict:
        return {c: len(xs) for c, xs in self.fibers.items()}

    def __repr__(self):
        return f"Expansion(fibers {self.fiber_sizes()})"


def as_expansion(F: FunctorData) -> Expansion:
    problem = functor_law_violation(F)
    if problem:
        raise NotAFunctor(problem)
    fibers = {c: [] for c in F.target.objects}
    for e in F.source.objects:
        fibers[F.objects[e]].append(e)
    for c, xs in fibers.items():
        if not xs:
            raise NotSurjective(f"empty fiber over {c!r}", c)
    table = _lift_table(F)
    for (e, f), gs in table.items():
        if len(gs) != 1:
            raise NotFibration(f"{len(gs)} lifts of {f!r} at {e!r}", e, f)
    return Expansion(F, {c: tuple(xs) for c, xs in fibers.items()}, {k: v[0] for k, v in table.items()})


# -- the correspondence with diagrams ------------------------------------------

def expansion_to_diagram(pi: Expansion) -> SetDiagram:
    base = pi.base
    action = {f: {e: pi.pull(f, e) for e in pi.fibers[base.tgt(f)]} for f in base.arrows}
    return SetDiagram(base, dict(pi.fibers), action)


def diagram_to_expansion(diag: SetDiagram) -> Expansion:
    """Objects ``(C, x)``; arrow ``(f, x)`` goes from ``(src f, D_f(x))`` to ``(C, x)``."""
    base = diag.base
    for c in base.objects:
        if not diag.carrier[c]:
            raise EmptyCarrier(f"empty set at {c!r}", c)
    objects = [(c, x) for c in base.objects for x in diag.carrier[c]]
    records = []
    for f in base.arrows:
        a, b = base.src(f), base.tgt(f)
        for x in diag.carrier[b]:
            records.append(((f, x), (a, diag.apply(f, x)), (b, x)))
    ids = {(c, x): (base.identity(c), x) for c, x in objects}
    table = {}
    for (g, y), _, _ in records:
        b = base.src(g)
        x = diag.apply(g, y)
        for f in base.in_arrows(b):
            table[((g, y), (f, x))] = (base.compose(g, f), y)
    total = FinCategory(objects, records, ids, table)
    proj = FunctorData(total, base, {o: o[0] for o in objects}, {a: a[0] for a in total.arrows})
    return as_expansion(proj)


# -- homomorphisms -----------------------------------------------------------------

def hom_diagram(pi: Expansion, rho: Expansion) -> SetDiagram:
    """On the total category of ``pi``: ``E ↦ rho⁻¹(pi(E))``, maps by lifting in ``rho``."""
    total, P = pi.total, pi.functor
    carrier = {e: rho.fibers[P.objects[e]] for e in total.objects}
    action = {
        g: {x: rho.pull(P.arrows[g], x) for x in carrier[total.tgt(g)]}
        for g in total.arrows
    }
    return SetDiagram(total, carrier, action, check=False)


def _hom_from_objects(pi: Expansion, rho: Expansion, omap: dict) -> FunctorData:
    P = pi.functor
    amap = {g: rho.lift(omap[pi.total.tgt(g)], P.arrows[g]) for g in pi.total.arrows}
    alpha = FunctorData(pi.total, rho.total, dict(omap), amap)
    problem = functor_law_violation(alpha)
    if problem:
        raise RuntimeError(f"lifted object map is not a functor: {problem}")
    if compose_functors(rho.functor, alpha) != P:
        raise RuntimeError("hom does not commute with the projections")
    return alpha


def find_expansion_hom(pi: Expansion, rho: Expansion) -> FunctorData | None:
    sol = solve(hom_diagram(pi, rho))
    return None if sol is None else _hom_from_objects(pi, rho, sol)


def enumerate_expansion_homs(pi: Expansion, rho: Expansion, cap: int | None = None) -> list[FunctorData]:
    return [_hom_from_objects(pi, rho, s) for s in enumerate_solutions(hom_diagram(pi, rho), cap)]


def enumerate_endomorphisms(pi: Expansion) -> list[FunctorData]:
    return enumerate_expansion_homs(pi, pi)


def section(pi: Expansion) -> FunctorData | None:
    """A functor ``s`` from the base with ``pi∘s = id``, if one exists."""
    sol = solve(expansion_to_diagram(pi))
    if sol is None:
        return None
    base = pi.base
    amap = {f: pi.lift(sol[base.tgt(f)], f) for f in base.arrows}
    s = FunctorData(base, pi.total, sol, amap)
    problem = functor_law_violation(s)
    if problem:
        raise RuntimeError(problem)
    return s


def find_expansion_isomorphism(pi: Expansion, rho: Expansion) -> FunctorData | None:
    if pi.fiber_sizes() != rho.fiber_sizes():
        return None
    for alpha in enumerate_expansion_homs(pi, rho):
        if alpha.is_bijective_on_objects():
            return alpha
    return None


def is_surjective_hom(alpha: FunctorData) -> bool:
    return alpha.is_surjective_on_objects()


# -- the expansion property ---------------------------------------------------------

@dataclass
class EPReport:
    holds: bool
    witnesses: dict = field(default_factory=dict)
    failure: object = None

    def __bool__(self):
        return self.holds


def has_expansion_property(pi: Expansion) -> EPReport:
    total, base = pi.total, pi.base
    report = EPReport(True)
    for c in base.objects:
        for c2 in base.objects:
            if all(total.hom(e, e2) for e in pi.fibers[c] for e2 in pi.fibers[c2]):
                report.witnesses[c] = c2
                break
        else:
            return EPReport(False, report.witnesses, c)
    return report


# -- cores -----------------------------------------------------------------------------

def image_subcategory(alpha: FunctorData) -> FinCategory:
    """The image of an endomorphism; checked to equal the full subcategory on its objects."""
    sub = full_subcategory(alpha.target, alpha.image_objects())
    if set(alpha.arrows.values()) != set(sub.arrows):
        raise RuntimeError("endomorphism image is not a full subcategory")
    return sub


def restrict_expansion(pi: Expansion, objects) -> Expansion:
    sub = full_subcategory(pi.total, objects)
    P = pi.functor
    F = FunctorData(sub, pi.base, {o: P.objects[o] for o in sub.objects}, {a: P.arrows[a] for a in sub.arrows})
    return as_expansion(F)


@dataclass
class CoreResult:
    core: Expansion
    collapse: FunctorData  # endomorphism of the input whose image is the core


def compute_core(pi: Expansion, *, reverse: bool = False) -> CoreResult:
    """Restrict to a minimal endomorphism image.

    Endomorphisms are scanned in solver order (reversed if asked); the first
    one with the fewest image objects wins, which makes its image minimal
    under inclusion.
    """
    endos = enumerate_endomorphisms(pi)
    if reverse:
        endos.reverse()
    best = min(endos, key=lambda a: len(set(a.objects.values())))
    images = [set(a.objects.values()) for a in endos]
    chosen = set(best.objects.values())
    if any(img < chosen for img in images):
        raise RuntimeError("chosen image is not minimal")
    image_subcategory(best)
    core = restrict_expansion(pi, [o for o in pi.total.objects if o in chosen])
    if not is_core(core):
        raise RuntimeError("restriction to a minimal image is not a core")
    return CoreResult(core, best)


def is_core(pi: Expansion) -> bool:
    return all(a.is_bijective_on_objects() for a in enumerate_endomorphisms(pi))


# -- small fixtures --------------------------------------------------------------------

def identity_expansion(cat: FinCategory) -> Expansion:
    return as_expansion(identity_functor(cat))


def doubled_expansion(cat: FinCategory) -> Expansion:
    """Two disjoint copies of ``cat`` folded onto it."""
    total = disjoint_union(cat, cat)
    F = FunctorData(total, cat, {o: o[1] for o in total.objects}, {a: a[1] for a in total.arrows})
    return as_expansion(F)

