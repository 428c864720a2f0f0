"""Functors between finite categories and category isomorphism search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotAFunctor
from .fincat import FinCategory


@dataclass(eq=False)
class FunctorData:
    source: FinCategory
    target: FinCategory
    objects: dict
    arrows: dict

    def __call__(self, x):
        """Apply to an object or an arrow id (objects take precedence)."""
        if x in self.objects:
            return self.objects[x]
        return self.arrows[x]

    def on_object(self, obj):
        return self.objects[obj]

    def on_arrow(self, f):
        return self.arrows[f]

    def is_injective_on_objects(self) -> bool:
        return len(set(self.objects.values())) == len(self.objects)

    def is_surjective_on_objects(self) -> bool:
        return set(self.objects.values()) == set(self.target.objects)

    def is_bijective_on_objects(self) -> bool:
        return self.is_injective_on_objects() and self.is_surjective_on_objects()

    def image_objects(self) -> list:
        seen = set(self.objects.values())
        return [o for o in self.target.objects if o in seen]

    def __eq__(self, other):
        if not isinstance(other, FunctorData):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.objects == other.objects
            and self.arrows == other.arrows
        )

    def __repr__(self):
        return f"FunctorData({self.source!r} -> {self.target!r})"


def functor_law_violation(F: FunctorData) -> str | None:
    """Describe the first violated functor law, or return None."""
    src, tgt = F.source, F.target
    for o in src.objects:
        if o not in F.objects:
            return f"object {o!r} is not mapped"
        if not tgt.has_object(F.objects[o]):
            return f"object {o!r} maps outside the target"
    for a in src.arrows:
        if a not in F.arrows:
            return f"arrow {a!r} is not mapped"
        b = F.arrows[a]
        if not tgt.has_arrow(b):
            return f"arrow {a!r} maps outside the target"
        if tgt.src(b) != F.objects[src.src(a)] or tgt.tgt(b) != F.objects[src.tgt(a)]:
            return f"arrow {a!r}: endpoints not preserved"
    for o in src.objects:
        if F.arrows[src.identity(o)] != tgt.identity(F.objects[o]):
            return f"identity of {o!r} not preserved"
    for (g, f), h in src.table.items():
        if tgt.compose(F.arrows[g], F.arrows[f]) != F.arrows[h]:
            return f"composite {g!r}∘{f!r} not preserved"
    return None


def validate_functor(
    source: FinCategory, target: FinCategory, objects: Mapping, arrows: Mapping
) -> FunctorData:
    F = FunctorData(source, target, dict(objects), dict(arrows))
    problem = functor_law_violation(F)
    if problem:
        raise NotAFunctor(problem)
    return F


def identity_functor(cat: FinCategory) -> FunctorData:
    return FunctorData(cat, cat, {o: o for o in cat.objects}, {a: a for a in cat.arrows})


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """``G∘F``."""
    return FunctorData(
        F.source,
        G.target,
        {o: G.objects[F.objects[o]] for o in F.source.objects},
        {a: G.arrows[F.arrows[a]] for a in F.source.arrows},
    )


def constant_functor(source: FinCategory, target: FinCategory, obj) -> FunctorData:
    ident = target.identity(obj)
    return FunctorData(
        source, target, {o: obj for o in source.objects}, {a: ident for a in source.arrows}
    )


def _object_signature(cat: FinCategory, o):
    return (
        len(cat.hom(o, o)),
        sorted(len(cat.hom(o, x)) for x in cat.objects),
        sorted(len(cat.hom(x, o)) for x in cat.objects),
    )


def find_isomorphism(c: FinCategory, d: FinCategory) -> FunctorData | None:
    """Search for an isomorphism of categories ``c → d``.

    Backtracks over object bijections that respect hom-set sizes, then over
    arrow bijections hom-set by hom-set, checking the composition table.
    """
    if len(c.objects) != len(d.objects) or len(c.arrows) != len(d.arrows):
        return None
    sig_c = {o: _object_signature(c, o) for o in c.objects}
    sig_d = {o: _object_signature(d, o) for o in d.objects}
    if sorted(map(repr, sig_c.values())) != sorted(map(repr, sig_d.values())):
        return None

    objs = list(c.objects)
    obj_map: dict = {}
    used: set = set()

    def objects_ok(o, image):
        for p, q in obj_map.items():
            if len(c.hom(o, p)) != len(d.hom(image, q)) or len(c.hom(p, o)) != len(d.hom(q, image)):
                return False
        return len(c.hom(o, o)) == len(d.hom(image, image))

    def arrow_search():
        arrows = list(c.arrows)
        amap: dict = {}
        taken: set = set()
        for o in objs:
            amap[c.identity(o)] = d.identity(obj_map[o])
            taken.add(d.identity(obj_map[o]))
        rest = [a for a in arrows if a not in amap]

        def consistent(a):
            # check every table entry whose three arrows are mapped and involve a
            for b in c.out_arrows(c.tgt(a)):
                if b in amap:
                    ba = c.compose(b, a)
                    if ba in amap and d.compose(amap[b], amap[a]) != amap[ba]:
                        return False
            for b in c.in_arrows(c.src(a)):
                if b in amap:
                    ab = c.compose(a, b)
                    if ab in amap and d.compose(amap[a], amap[b]) != amap[ab]:
                        return False
            for g, f in c.factorizations(a):
                if g in amap and f in amap and d.compose(amap[g], amap[f]) != amap[a]:
                    return False
            return True

        def step(i):
            if i == len(rest):
                return True
            a = rest[i]
            for b in d.hom(obj_map[c.src(a)], obj_map[c.tgt(a)]):
                if b in taken:
                    continue
                amap[a] = b
                taken.add(b)
                if consistent(a) and step(i + 1):
                    return True
                del amap[a]
                taken.discard(b)
            return False

        return dict(amap) if step(0) else None

    def obj_step(i):
        if i == len(objs):
            return arrow_search()
        o = objs[i]
        for image in d.objects:
            if image in used or repr(sig_c[o]) != repr(sig_d[image]) or not objects_ok(o, image):
                continue
            obj_map[o] = image
            used.add(image)
            found = obj_step(i + 1)
            if found is not None:
                return found
            del obj_map[o]
            used.discard(image)
        return None

    amap = obj_step(0)
    if amap is None:
        return None
    return FunctorData(c, d, dict(obj_map), amap)
