"""Finite categories given by an explicit composition table."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import (
    AssociativityViolated,
    CompositionNotClosed,
    InvalidInput,
    MissingIdentity,
    UnitLawViolated,
    UnknownArrow,
    UnknownObject,
    UnknownReference,
)

Obj = Hashable
ArrowId = Hashable


def default_identity_id(obj: Obj) -> ArrowId:
    if isinstance(obj, str):
        return f"id_{obj}"
    return ("id", obj)


class FinCategory:
    """A finite category.

    Arrows are globally identified; ``table[(g, f)]`` is the id of ``g∘f``
    for every composable pair ``f: A→B``, ``g: B→C``.  Instances are
    treated as immutable once constructed.  Use :func:`validate_category` (or
    ``check=True``) to verify the axioms.
    """

    def __init__(
        self,
        objects: Iterable[Obj],
        arrows: Iterable[tuple[ArrowId, Obj, Obj]],
        identities: Mapping[Obj, ArrowId],
        table: Mapping[tuple[ArrowId, ArrowId], ArrowId],
        *,
        check: bool = True,
    ):
        self.objects: tuple = tuple(objects)
        arrows = tuple(arrows)
        self.arrows: tuple = tuple(a for a, _, _ in arrows)
        self._src = {a: s for a, s, _ in arrows}
        self._tgt = {a: t for a, _, t in arrows}
        self.identities = dict(identities)
        self.table = dict(table)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._arr_index = {a: i for i, a in enumerate(self.arrows)}
        self._identity_set = set(self.identities.values())
        self._factorizations: dict | None = None
        self._homs: dict[tuple[Obj, Obj], list] = {}
        self._out: dict[Obj, list] = {o: [] for o in self.objects}
        self._in: dict[Obj, list] = {o: [] for o in self.objects}
        for a, s, t in arrows:
            self._homs.setdefault((s, t), []).append(a)
            if s in self._out:
                self._out[s].append(a)
            if t in self._in:
                self._in[t].append(a)
        if check:
            _check_axioms(self)

    # -- queries -----------------------------------------------------------
    def src(self, f: ArrowId) -> Obj:
        try:
            return self._src[f]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {f!r}", f) from None

    def tgt(self, f: ArrowId) -> Obj:
        try:
            return self._tgt[f]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {f!r}", f) from None

    def identity(self, obj: Obj) -> ArrowId:
        try:
            return self.identities[obj]
        except KeyError:
            raise UnknownObject(f"unknown object {obj!r}", obj) from None

    def is_identity(self, f: ArrowId) -> bool:
        return f in self._identity_set

    def compose(self, g: ArrowId, f: ArrowId) -> ArrowId:
        """Return ``g∘f`` (first ``f``, then ``g``)."""
        try:
            return self.table[(g, f)]
        except KeyError:
            raise InvalidInput(f"{g!r}∘{f!r} is not defined", g, f) from None

    def compose_path(self, *arrows: ArrowId) -> ArrowId:
        """Compose right to left: ``compose_path(h, g, f) == h∘g∘f``."""
        result = arrows[-1]
        for a in reversed(arrows[:-1]):
            result = self.compose(a, result)
        return result

    def factorizations(self, h: ArrowId) -> list[tuple[ArrowId, ArrowId]]:
        """All pairs ``(g, f)`` with ``g∘f == h``."""
        if self._factorizations is None:
            index: dict = {}
            for key, res in self.table.items():
                index.setdefault(res, []).append(key)
            self._factorizations = index
        return self._factorizations.get(h, [])

    def hom(self, a: Obj, b: Obj) -> tuple:
        self._require(a)
        self._require(b)
        return tuple(self._homs.get((a, b), ()))

    def out_arrows(self, a: Obj) -> tuple:
        self._require(a)
        return tuple(self._out[a])

    def in_arrows(self, b: Obj) -> tuple:
        self._require(b)
        return tuple(self._in[b])

    def has_object(self, obj: Obj) -> bool:
        return obj in self._obj_index

    def has_arrow(self, f: ArrowId) -> bool:
        return f in self._arr_index

    def object_index(self, obj: Obj) -> int:
        return self._obj_index[obj]

    def arrow_index(self, f: ArrowId) -> int:
        return self._arr_index[f]

    def arrow_records(self) -> list[tuple[ArrowId, Obj, Obj]]:
        return [(a, self._src[a], self._tgt[a]) for a in self.arrows]

    def _require(self, obj):
        if obj not in self._obj_index:
            raise UnknownObject(f"unknown object {obj!r}", obj)

    def __len__(self):
        return len(self.objects)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and set(self.arrow_records()) == set(other.arrow_records())
            and self.identities == other.identities
            and self.table == other.table
        )

    def __hash__(self):
        return hash((frozenset(self.objects), frozenset(self.arrows)))

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.arrows)} arrows)"


def _check_axioms(cat: FinCategory) -> None:
    if len(set(cat.objects)) != len(cat.objects):
        raise InvalidInput("duplicate object ids")
    if len(set(cat.arrows)) != len(cat.arrows):
        raise InvalidInput("duplicate arrow ids")
    for a in cat.arrows:
        for end in (cat._src[a], cat._tgt[a]):
            if end not in cat._obj_index:
                raise UnknownReference(f"arrow {a!r} refers to undeclared object {end!r}", a, end)
    for obj in cat.objects:
        i = cat.identities.get(obj)
        if i is None or i not in cat._src or cat._src[i] != obj or cat._tgt[i] != obj:
            raise MissingIdentity(f"object {obj!r} has no identity arrow", obj)
    for (g, f), h in cat.table.items():
        for a in (g, f, h):
            if a not in cat._src:
                raise UnknownReference(f"composition entry refers to undeclared arrow {a!r}", a)
        if cat._tgt[f] != cat._src[g]:
            raise InvalidInput(f"composition entry for non-composable pair ({g!r}, {f!r})", g, f)
        if cat._src[h] != cat._src[f] or cat._tgt[h] != cat._tgt[g]:
            raise CompositionNotClosed(
                f"{g!r}∘{f!r} = {h!r} has the wrong source or target", f, g
            )
    for f in cat.arrows:
        for g in cat._out[cat._tgt[f]]:
            if (g, f) not in cat.table:
                raise CompositionNotClosed(f"no composite for {g!r}∘{f!r}", f, g)
    for f in cat.arrows:
        s, t = cat._src[f], cat._tgt[f]
        if cat.table[(f, cat.identities[s])] != f or cat.table[(cat.identities[t], f)] != f:
            raise UnitLawViolated(f"unit law fails for {f!r}", f)
    table = cat.table
    for f in cat.arrows:
        for g in cat._out[cat._tgt[f]]:
            gf = table[(g, f)]
            for h in cat._out[cat._tgt[g]]:
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    raise AssociativityViolated(
                        f"associativity fails for ({f!r}, {g!r}, {h!r})", f, g, h
                    )


def validate_category(raw: Mapping) -> FinCategory:
    """Build a category from a plain description and check the axioms.

    ``raw`` has keys ``objects``, ``arrows`` (records ``{"id", "src", "tgt"}``
    or triples), optional ``identities`` and ``compose`` (triples
    ``[g, f, g∘f]`` or a mapping ``(g, f) -> g∘f``).  Missing identity arrows
    get ids ``id_<obj>`` and composites with identities are filled in.
    """
    try:
        objects = list(raw["objects"])
    except (KeyError, TypeError):
        raise InvalidInput("category description needs 'objects'") from None
    records = []
    for rec in raw.get("arrows", ()):
        if isinstance(rec, Mapping):
            try:
                records.append((rec["id"], rec["src"], rec["tgt"]))
            except KeyError as exc:
                raise InvalidInput(f"arrow record missing field {exc}") from None
        else:
            a, s, t = rec
            records.append((a, s, t))
    declared = {a for a, _, _ in records}
    identities = dict(raw.get("identities") or {})
    for obj in objects:
        if obj not in identities:
            ident = default_identity_id(obj)
            identities[obj] = ident
            if ident not in declared:
                records.append((ident, obj, obj))
                declared.add(ident)
    for obj, ident in identities.items():
        if obj not in objects:
            raise UnknownObject(f"identity declared for unknown object {obj!r}", obj)
        if ident not in declared:
            raise MissingIdentity(f"identity {ident!r} of {obj!r} is not an arrow", obj, ident)
    compose = raw.get("compose", ())
    table = {}
    entries = compose.items() if isinstance(compose, Mapping) else (((g, f), h) for g, f, h in compose)
    for (g, f), h in entries:
        if (g, f) in table and table[(g, f)] != h:
            raise InvalidInput(f"conflicting entries for {g!r}∘{f!r}", g, f)
        table[(g, f)] = h
    src = {a: s for a, s, _ in records}
    tgt = {a: t for a, _, t in records}
    for a in declared:
        if a not in src:
            continue
        s, t = src[a], tgt[a]
        if s in identities:
            table.setdefault((a, identities[s]), a)
        if t in identities:
            table.setdefault((identities[t], a), a)
    return FinCategory(objects, records, identities, table)


# -- structural operations --------------------------------------------------

def hom(cat: FinCategory, a: Obj, b: Obj) -> tuple:
    return cat.hom(a, b)


def connected_components(cat: FinCategory) -> list[list]:
    """Blocks of objects joined by zigzags, in declaration order."""
    parent = {o: o for o in cat.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in cat.arrows:
        ra, rb = find(cat.src(a)), find(cat.tgt(a))
        if ra != rb:
            # keep the earlier-declared root so block order is stable
            if cat.object_index(ra) < cat.object_index(rb):
                parent[rb] = ra
            else:
                parent[ra] = rb
    blocks: dict = {}
    for o in cat.objects:
        blocks.setdefault(find(o), []).append(o)
    return list(blocks.values())


@dataclass
class ConfluenceReport:
    confluent: bool
    cocones: dict = field(default_factory=dict)
    counterexample: tuple | None = None

    def __bool__(self):
        return self.confluent


def common_target(cat: FinCategory, a: Obj, b: Obj):
    """First object (declaration order) receiving arrows from both, with the arrows."""
    for c in cat.objects:
        ha, hb = cat.hom(a, c), cat.hom(b, c)
        if ha and hb:
            return c, ha[0], hb[0]
    return None


def is_confluent(cat: FinCategory) -> ConfluenceReport:
    cocones = {}
    for block in connected_components(cat):
        for i, a in enumerate(block):
            for b in block[i + 1:]:
                found = common_target(cat, a, b)
                if found is None:
                    return ConfluenceReport(False, {}, (a, b))
                cocones[(a, b)] = found
    return ConfluenceReport(True, cocones, None)


def opposite(cat: FinCategory) -> FinCategory:
    records = [(a, t, s) for a, s, t in cat.arrow_records()]
    table = {(f, g): h for (g, f), h in cat.table.items()}
    return FinCategory(cat.objects, records, cat.identities, table, check=False)


def full_subcategory(cat: FinCategory, objs: Iterable[Obj]) -> FinCategory:
    keep = set(objs)
    for o in keep:
        cat._require(o)
    objects = [o for o in cat.objects if o in keep]
    records = [r for r in cat.arrow_records() if r[1] in keep and r[2] in keep]
    kept = {r[0] for r in records}
    table = {k: v for k, v in cat.table.items() if k[0] in kept and k[1] in kept}
    ids = {o: cat.identities[o] for o in objects}
    return FinCategory(objects, records, ids, table)


def discrete_category(objects: Iterable[Obj]) -> FinCategory:
    objects = list(objects)
    ids = {o: default_identity_id(o) for o in objects}
    return FinCategory(
        objects,
        [(ids[o], o, o) for o in objects],
        ids,
        {(ids[o], ids[o]): ids[o] for o in objects},
        check=False,
    )


def disjoint_union(*cats: FinCategory) -> FinCategory:
    """Coproduct; object ``o`` of the ``i``-th summand becomes ``(i, o)``."""
    objects, records, ids, table = [], [], {}, {}
    for i, cat in enumerate(cats):
        objects += [(i, o) for o in cat.objects]
        records += [((i, a), (i, s), (i, t)) for a, s, t in cat.arrow_records()]
        ids.update({(i, o): (i, a) for o, a in cat.identities.items()})
        table.update({((i, g), (i, f)): (i, h) for (g, f), h in cat.table.items()})
    return FinCategory(objects, records, ids, table, check=False)


def monoid(elements: Iterable, multiply, obj: Obj = "*", identity=None) -> FinCategory:
    """One-object category from a multiplication ``multiply(g, f) = g∘f``."""
    elements = list(elements)
    identity = elements[0] if identity is None else identity
    table = {(g, f): multiply(g, f) for g in elements for f in elements}
    return FinCategory([obj], [(e, obj, obj) for e in elements], {obj: identity}, table)
