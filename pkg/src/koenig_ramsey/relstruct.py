"""Finite relational structures, classes of them, and constructions on classes.

Relations are sets of tuples of domain elements; a symbol of arity ``k``
holds tuples of length ``k``.  Maps between structures are tuples of images
aligned with the source domain order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    BoundTooSmall,
    InvalidInput,
    NoAmalgam,
    NotClosed,
    NotDomainPreserving,
    NotSurjective,
    SignatureMismatch,
    SignatureOverlap,
)
from .fincat import FinCategory
from .functor import FunctorData
from .setdiag import SetDiagram


@dataclass(frozen=True)
class Signature:
    arity: tuple  # ((symbol, k), ...) in declaration order

    @classmethod
    def of(cls, arities: Mapping | Iterable = ()) -> "Signature":
        items = tuple(arities.items()) if isinstance(arities, Mapping) else tuple(arities)
        names = [s for s, _ in items]
        if len(set(names)) != len(names):
            raise InvalidInput("duplicate relation symbol")
        return cls(items)

    @property
    def symbols(self) -> tuple:
        return tuple(s for s, _ in self.arity)

    def arity_of(self, symbol) -> int:
        return dict(self.arity)[symbol]

    def __contains__(self, symbol):
        return symbol in self.symbols

    def issubset(self, other: "Signature") -> bool:
        return set(self.arity) <= set(other.arity)

    def union(self, other: "Signature") -> "Signature":
        return Signature.of(self.arity + other.arity)

    def restrict(self, symbols) -> "Signature":
        keep = set(symbols)
        return Signature(tuple((s, k) for s, k in self.arity if s in keep))


class RelStructure:
    def __init__(self, signature: Signature, domain: Iterable, relations: Mapping | None = None, name=None):
        self.signature = signature
        self.domain = tuple(domain)
        relations = relations or {}
        dom = set(self.domain)
        if len(dom) != len(self.domain):
            raise InvalidInput("repeated domain element")
        for s in relations:
            if s not in signature:
                raise SignatureMismatch(f"relation {s!r} is not in the signature", s)
        self.relations = {}
        for s, k in signature.arity:
            tuples = frozenset(tuple(t) for t in relations.get(s, ()))
            for t in tuples:
                if len(t) != k or any(x not in dom for x in t):
                    raise InvalidInput(f"bad tuple {t!r} for {s!r}", s)
            self.relations[s] = tuples
        self.name = name
        self._canon = None

    def __len__(self):
        return len(self.domain)

    def holds(self, symbol, tup) -> bool:
        return tuple(tup) in self.relations[symbol]

    def key(self):
        return (
            frozenset(self.domain),
            tuple((s, self.relations[s]) for s in self.signature.symbols),
        )

    def __eq__(self, other):
        if not isinstance(other, RelStructure):
            return NotImplemented
        return self.signature == other.signature and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rels = {s: sorted(map(tuple, r)) for s, r in self.relations.items()}
        label = f"{self.name!r}, " if self.name is not None else ""
        return f"RelStructure({label}{list(self.domain)}, {rels})"

    def renamed(self, name) -> "RelStructure":
        return RelStructure(self.signature, self.domain, self.relations, name)

    def relabel(self, mapping: Mapping, domain: Iterable | None = None) -> "RelStructure":
        """Image under the bijection ``mapping`` (old element → new element)."""
        dom = tuple(domain) if domain is not None else tuple(mapping[x] for x in self.domain)
        rels = {s: {tuple(mapping[x] for x in t) for t in r} for s, r in self.relations.items()}
        return RelStructure(self.signature, dom, rels)

    def pullback(self, beta: Mapping, domain: Iterable) -> "RelStructure":
        """Structure on ``domain`` making the bijection ``beta: domain → self.domain`` an isomorphism."""
        inverse = {beta[d]: d for d in domain}
        return self.relabel(inverse, domain)

    def induced(self, subset: Iterable) -> "RelStructure":
        keep = [x for x in self.domain if x in set(subset)]
        ks = set(keep)
        rels = {s: {t for t in r if all(x in ks for x in t)} for s, r in self.relations.items()}
        return RelStructure(self.signature, keep, rels)

    def canonical_form(self):
        """Isomorphism invariant: the least relabelled encoding over all orderings."""
        if self._canon is None:
            best = None
            for perm in itertools.permutations(self.domain):
                pos = {x: i for i, x in enumerate(perm)}
                enc = tuple(
                    tuple(sorted(tuple(pos[x] for x in t) for t in self.relations[s]))
                    for s in self.signature.symbols
                )
                if best is None or enc < best:
                    best = enc
            self._canon = (len(self.domain), best)
        return self._canon


def reduct(structure: RelStructure, signature: Signature) -> RelStructure:
    if not signature.issubset(structure.signature):
        raise SignatureMismatch("reduct signature is not contained in the structure's signature")
    return RelStructure(
        signature, structure.domain, {s: structure.relations[s] for s in signature.symbols}
    )


# -- embeddings --------------------------------------------------------------

def is_embedding(a: RelStructure, b: RelStructure, images: Mapping) -> bool:
    values = [images[x] for x in a.domain]
    if len(set(values)) != len(values):
        return False
    for s, k in a.signature.arity:
        rb = b.relations[s]
        for t in itertools.product(a.domain, repeat=k):
            if (t in a.relations[s]) != (tuple(images[x] for x in t) in rb):
                return False
    return True


def embeddings(a: RelStructure, b: RelStructure) -> Iterator[tuple]:
    """Injective relation-preserving-and-reflecting maps, as image tuples."""
    if a.signature != b.signature:
        raise SignatureMismatch("structures have different signatures")
    n = len(a.domain)
    arities = a.signature.arity
    assigned: dict = {}
    used: set = set()
    order = a.domain

    def ok(x):
        # tuples over assigned elements that contain x
        done = list(assigned)
        for s, k in arities:
            ra, rb = a.relations[s], b.relations[s]
            for t in itertools.product(done, repeat=k):
                if x not in t:
                    continue
                if (t in ra) != (tuple(assigned[y] for y in t) in rb):
                    return False
        return True

    def rec(i):
        if i == n:
            yield tuple(assigned[x] for x in order)
            return
        x = order[i]
        for y in b.domain:
            if y in used:
                continue
            assigned[x] = y
            used.add(y)
            if ok(x):
                yield from rec(i + 1)
            del assigned[x]
            used.discard(y)

    yield from rec(0)


def enumerate_embeddings(a: RelStructure, b: RelStructure) -> list[tuple]:
    return list(embeddings(a, b))


def find_isomorphism(a: RelStructure, b: RelStructure) -> dict | None:
    if len(a) != len(b) or a.signature != b.signature:
        return None
    for images in embeddings(a, b):
        return dict(zip(a.domain, images))
    return None


# -- classes -----------------------------------------------------------------

class TruncatedClass:
    """An explicit list of finite structures over one signature.

    Members get names (``s0``, ``s1``, ... unless named); names become the
    objects of :func:`structures_category`.
    """

    def __init__(self, signature: Signature, structures: Iterable[RelStructure], max_size: int | None = None,
                 *, validate: bool = True):
        self.signature = signature
        members = []
        names = set()
        for i, st in enumerate(structures):
            if st.signature != signature:
                raise SignatureMismatch(f"member {i} has a different signature")
            name = st.name if st.name is not None else f"s{i}"
            if name in names:
                raise InvalidInput(f"duplicate member name {name!r}", name)
            names.add(name)
            members.append(st if st.name == name else st.renamed(name))
        self.members: list[RelStructure] = members
        self.by_name = {m.name: m for m in members}
        sizes = [len(m) for m in members]
        self.max_size = max_size if max_size is not None else (max(sizes) if sizes else 0)
        self._by_canon: dict = {}
        for m in members:
            self._by_canon.setdefault(m.canonical_form(), m)
        if validate:
            self.check_closed()

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def representative(self, structure: RelStructure) -> RelStructure | None:
        """The first member isomorphic to ``structure``, if any."""
        return self._by_canon.get(structure.canonical_form())

    def contains_iso(self, structure: RelStructure) -> bool:
        return structure.canonical_form() in self._by_canon

    def representatives(self) -> list[RelStructure]:
        seen, out = set(), []
        for m in self.members:
            c = m.canonical_form()
            if c not in seen:
                seen.add(c)
                out.append(m)
        return out

    def of_size(self, n: int) -> list[RelStructure]:
        return [m for m in self.members if len(m) == n]

    def closure_violation(self):
        """A (member, subset) whose induced substructure has no isomorphic member."""
        for m in self.members:
            for k in range(1, len(m)):
                for subset in itertools.combinations(m.domain, k):
                    if not self.contains_iso(m.induced(subset)):
                        return m.name, subset
        return None

    def check_closed(self):
        bad = self.closure_violation()
        if bad is not None:
            raise NotClosed(f"induced substructure of {bad[0]!r} on {bad[1]!r} is not in the class", *bad)

    def __repr__(self):
        return f"TruncatedClass({len(self.members)} structures, max size {self.max_size})"


def structures_category(cls: TruncatedClass) -> FinCategory:
    """Members as objects, embeddings ``(src, tgt, images)`` as arrows."""
    members = cls.members
    records = []
    for a in members:
        for b in members:
            for images in embeddings(a, b):
                records.append(((a.name, b.name, images), a.name, b.name))
    ids = {m.name: (m.name, m.name, m.domain) for m in members}
    position = {m.name: {x: i for i, x in enumerate(m.domain)} for m in members}
    out: dict = {}
    for rec in records:
        out.setdefault(rec[1], []).append(rec[0])
    table = {}
    for f, a, b in records:
        for g in out[b]:
            pos = position[b]
            table[(g, f)] = (a, g[1], tuple(g[2][pos[y]] for y in f[2]))
    return FinCategory([m.name for m in members], records, ids, table, check=False)


def arrow_map(arrow) -> tuple:
    """Image tuple of an arrow of :func:`structures_category`."""
    return arrow[2]


# -- strong amalgamation ------------------------------------------------------

@dataclass
class AmalgamationReport:
    holds: bool
    certificate: dict | None = None

    def __bool__(self):
        return self.holds


def has_strong_amalgamation(cls: TruncatedClass, bound: int) -> AmalgamationReport:
    """Check every configuration B ← A → C whose strong amalgam has size ≤ ``bound``."""
    reps = [m for m in cls.representatives() if len(m) <= bound]
    by_size: dict = {}
    for m in cls.representatives():
        by_size.setdefault(len(m), []).append(m)
    for a in reps:
        for b in reps:
            for c in reps:
                size = len(b) + len(c) - len(a)
                if size > bound or len(a) > min(len(b), len(c)):
                    continue
                for f in embeddings(a, b):
                    for g in embeddings(a, c):
                        if not _strong_amalgam(a, b, c, f, g, by_size.get(size, [])):
                            return AmalgamationReport(
                                False, {"A": a.name, "B": b.name, "C": c.name, "f": f, "g": g}
                            )
    return AmalgamationReport(True)


def _strong_amalgam(a, b, c, f, g, candidates) -> bool:
    fa = dict(zip(a.domain, f))
    ga = dict(zip(a.domain, g))
    for d in candidates:
        for h in embeddings(b, d):
            hb = dict(zip(b.domain, h))
            for k in embeddings(c, d):
                kc = dict(zip(c.domain, k))
                if all(hb[fa[x]] == kc[ga[x]] for x in a.domain) and set(h) | set(k) == set(d.domain):
                    return True
    return False


# -- superposition structures ---------------------------------------------------

def right_inverses(pi: Mapping, codomain: Iterable) -> Iterator[dict]:
    fibers = {c: [d for d in pi if pi[d] == c] for c in codomain}
    cs = list(codomain)
    for choice in itertools.product(*(fibers[c] for c in cs)):
        yield dict(zip(cs, choice))


def superposition_structure(cls: TruncatedClass, c: RelStructure, pi: Mapping, domain: Iterable | None = None) -> RelStructure:
    """A structure on the domain of ``pi`` in which every section of ``pi`` embeds ``c``.

    Induction on the domain: collapse the first pair ``d1 < d2`` with the same
    image, build the smaller structure, then scan members of the right size
    (declaration order, all bijections) for one in which both sections of the
    collapse are embeddings.
    """
    dom = tuple(domain) if domain is not None else tuple(pi)
    if set(pi.values()) != set(c.domain) or set(pi) != set(dom):
        raise NotSurjective("map is not a surjection onto the structure's domain")
    result = _superpose(cls, c, dict(pi), dom)
    for s in right_inverses(pi, c.domain):
        if not is_embedding(c, result, s):
            raise RuntimeError("a section of the surjection is not an embedding")
    return result


def _superpose(cls, c, pi, dom):
    if len(dom) == len(c.domain):
        return c.pullback(pi, dom)
    d1 = d2 = None
    for i, x in enumerate(dom):
        for y in dom[i + 1:]:
            if pi[x] == pi[y]:
                d1, d2 = x, y
                break
        if d1 is not None:
            break
    smaller = tuple(x for x in dom if x != d2)
    inner = _superpose(cls, c, {x: pi[x] for x in smaller}, smaller)
    s = {x: x for x in smaller}
    s2 = dict(s)
    s2[d1] = d2
    for member in cls.of_size(len(dom)):
        for perm in itertools.permutations(member.domain):
            candidate = member.pullback(dict(zip(dom, perm)), dom)
            if is_embedding(inner, candidate, s) and is_embedding(inner, candidate, s2):
                return candidate
    raise NoAmalgam(f"no member of size {len(dom)} amalgamates the collapse of {d2!r} onto {d1!r}", d1, d2)


def free_superposition(k_sigma: TruncatedClass, k_tau: TruncatedClass, bound: int, *, up_to_iso: bool = False) -> TruncatedClass:
    """Structures on ``range(n)``, n ≤ bound, whose two reducts lie in the classes."""
    if set(k_sigma.signature.symbols) & set(k_tau.signature.symbols):
        raise SignatureOverlap("signatures share a symbol")
    sig = k_sigma.signature.union(k_tau.signature)
    out = []
    seen = set()
    for n in range(bound + 1):
        dom = tuple(range(n))
        left = _labelled_copies(k_sigma, n)
        right = _labelled_copies(k_tau, n)
        for x in left:
            for y in right:
                rels = dict(x.relations)
                rels.update(y.relations)
                st = RelStructure(sig, dom, rels)
                if up_to_iso:
                    cf = st.canonical_form()
                    if cf in seen:
                        continue
                    seen.add(cf)
                out.append(st.renamed(f"s{len(out)}"))
    return TruncatedClass(sig, out, bound, validate=False)


def _labelled_copies(cls: TruncatedClass, n: int) -> list[RelStructure]:
    dom = tuple(range(n))
    seen, out = set(), []
    for m in cls.of_size(n):
        for perm in itertools.permutations(dom):
            st = m.relabel(dict(zip(m.domain, perm)), dom)
            if st.key() not in seen:
                seen.add(st.key())
                out.append(st)
    return out


# -- blowups -------------------------------------------------------------------

def blowup(k_c: TruncatedClass, k_d: TruncatedClass) -> FinCategory:
    """Objects ``(C, (D_c)_c)``; arrows ``(f, (D_c), (D'_c'), (g_c)_c)`` with ``g_c: D_c → D'_{f(c)}``."""
    cat_c = structures_category(k_c)
    cat_d = structures_category(k_d)
    names_d = [m.name for m in k_d.members]
    objects = []
    for m in k_c.members:
        for ds in itertools.product(names_d, repeat=len(m)):
            objects.append((m.name, ds))
    position = {m.name: {x: i for i, x in enumerate(m.domain)} for m in k_c.members}
    records = []
    for f in cat_c.arrows:
        a, b = cat_c.src(f), cat_c.tgt(f)
        targets = [position[b][y] for y in f[2]]
        for src_obj in (o for o in objects if o[0] == a):
            for tgt_obj in (o for o in objects if o[0] == b):
                homs = [cat_d.hom(src_obj[1][i], tgt_obj[1][j]) for i, j in enumerate(targets)]
                for gs in itertools.product(*homs):
                    records.append(((f, src_obj[1], tgt_obj[1], gs), src_obj, tgt_obj))
    ids = {
        o: (cat_c.identity(o[0]), o[1], o[1], tuple(cat_d.identity(x) for x in o[1])) for o in objects
    }
    out: dict = {}
    for rec in records:
        out.setdefault(rec[1], []).append(rec[0])
    table = {}
    for first, _, tgt_obj in records:
        f, ds, _, gs = first
        targets = [position[tgt_obj[0]][y] for y in f[2]]
        for second in out[tgt_obj]:
            f2, _, ds3, gs2 = second
            comp = tuple(cat_d.compose(gs2[targets[i]], gs[i]) for i in range(len(gs)))
            table[(second, first)] = (cat_c.compose(f2, f), ds, ds3, comp)
    return FinCategory(objects, records, ids, table)


def blowup_cat_valued(k_c: TruncatedClass, k_d: TruncatedClass):
    """``C ↦ D^C`` with transitions that pad with the empty structure."""
    from .transfer import CatValuedFunctor, power

    empty = [m for m in k_d.members if len(m) == 0]
    if not empty:
        raise InvalidInput("the fiber class must contain the empty structure")
    e = empty[0].name
    cat_c = structures_category(k_c)
    cat_d = structures_category(k_d)
    fibers = {m.name: power(cat_d, len(m)) for m in k_c.members}
    position = {m.name: {x: i for i, x in enumerate(m.domain)} for m in k_c.members}
    transitions = {}
    for f in cat_c.arrows:
        a, b = cat_c.src(f), cat_c.tgt(f)
        n_b = len(k_c.by_name[b])
        targets = [position[b][y] for y in f[2]]
        fill_obj = [e] * n_b
        fill_arr = [cat_d.identity(e)] * n_b

        def pad(values, fill, targets=targets):
            out = list(fill)
            for i, j in enumerate(targets):
                out[j] = values[i]
            return tuple(out)

        src, tgt = fibers[a], fibers[b]
        transitions[f] = FunctorData(
            src,
            tgt,
            {o: pad(o, fill_obj) for o in src.objects},
            {g: pad(g, fill_arr) for g in src.arrows},
        )
    return CatValuedFunctor(cat_c, fibers, transitions)


# -- the superposition diagram ---------------------------------------------------

def _projection_sections(left: RelStructure, right: RelStructure):
    """Right inverses of the two projections of ``left.domain × right.domain``."""
    firsts = [dict(zip(left.domain, ys)) for ys in itertools.product(right.domain, repeat=len(left))]
    seconds = [dict(zip(right.domain, xs)) for xs in itertools.product(left.domain, repeat=len(right))]
    s1 = [{x: (x, sec[x]) for x in left.domain} for sec in firsts]
    s2 = [{y: (sec[y], y) for y in right.domain} for sec in seconds]
    return s1, s2


def superposition_diagram(k_sigma: TruncatedClass, k_tau: TruncatedClass, bound: int) -> SetDiagram:
    """Diagram on the product of the two categories (members up to size ``bound``).

    At ``(C, D)``: the superposed structures ``E`` on ``C×D`` whose reducts lie
    in the classes and in which every section of either projection is an
    embedding.  Along ``(f, g)`` a structure restricts to the unique structure
    on ``C'×D'`` making ``f×g`` an embedding.
    """
    from .transfer import product

    def members(cls):
        return [m for m in cls.members if len(m) <= bound]

    ms, mt = members(k_sigma), members(k_tau)
    for x in ms:
        for y in mt:
            if len(x) * len(y) > min(k_sigma.max_size, k_tau.max_size):
                raise BoundTooSmall(
                    f"{x.name!r}×{y.name!r} exceeds the class size bound", x.name, y.name
                )
    sub_s = TruncatedClass(k_sigma.signature, ms, validate=False)
    sub_t = TruncatedClass(k_tau.signature, mt, validate=False)
    cs, ct = structures_category(sub_s), structures_category(sub_t)
    base = product(cs, ct)
    sig = k_sigma.signature.union(k_tau.signature)
    carrier = {}
    for x in ms:
        for y in mt:
            dom = tuple(itertools.product(x.domain, y.domain))
            s1, s2 = _projection_sections(x, y)
            lefts = [st for st in _copies_on(k_sigma, dom) if all(is_embedding(x, st, s) for s in s1)]
            rights = [st for st in _copies_on(k_tau, dom) if all(is_embedding(y, st, s) for s in s2)]
            elems = []
            for p in lefts:
                for q in rights:
                    rels = dict(p.relations)
                    rels.update(q.relations)
                    elems.append(RelStructure(sig, dom, rels))
            carrier[(x.name, y.name)] = tuple(elems)
    action = {}
    for (f, g) in base.arrows:
        src, tgt = base.src((f, g)), base.tgt((f, g))
        xs, ys = k_sigma.by_name[src[0]], k_tau.by_name[src[1]]
        fmap = dict(zip(xs.domain, f[2]))
        gmap = dict(zip(ys.domain, g[2]))
        dom = tuple(itertools.product(xs.domain, ys.domain))
        action[(f, g)] = {
            e: _restrict_along(e, {(a, b): (fmap[a], gmap[b]) for a, b in dom}, dom)
            for e in carrier[tgt]
        }
    return SetDiagram(base, carrier, action, check=False)


def _copies_on(cls: TruncatedClass, dom: tuple) -> list[RelStructure]:
    seen, out = set(), []
    for m in cls.of_size(len(dom)):
        for perm in itertools.permutations(dom):
            st = m.relabel(dict(zip(m.domain, perm)), dom)
            if st.key() not in seen:
                seen.add(st.key())
                out.append(st)
    return out


def _restrict_along(e: RelStructure, emb: Mapping, dom: tuple) -> RelStructure:
    inverse = {v: k for k, v in emb.items()}
    rels = {
        s: {tuple(inverse[x] for x in t) for t in r if all(x in inverse for x in t)}
        for s, r in e.relations.items()
    }
    return RelStructure(e.signature, dom, rels)


# -- quantifier-free formulas ----------------------------------------------------

@dataclass(frozen=True)
class Atom:
    symbol: object
    args: tuple

    def __str__(self):
        return f"{self.symbol}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Equal:
    left: object
    right: object

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        if isinstance(self.body, Equal):
            return f"{self.body.left} ≠ {self.body.right}"
        return f"¬{self.body}"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __str__(self):
        return "(" + " ∧ ".join(map(str, self.parts)) + ")" if self.parts else "⊤"


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __str__(self):
        return "(" + " ∨ ".join(map(str, self.parts)) + ")" if self.parts else "⊥"


@dataclass(frozen=True)
class QFFormula:
    variables: tuple
    body: object

    def __str__(self):
        return str(self.body)


def variables_of(node) -> set:
    if isinstance(node, Atom):
        return set(node.args)
    if isinstance(node, Equal):
        return {node.left, node.right}
    if isinstance(node, Not):
        return variables_of(node.body)
    out: set = set()
    for p in node.parts:
        out |= variables_of(p)
    return out


def evaluate(node, structure: RelStructure, assignment: Mapping) -> bool:
    if isinstance(node, QFFormula):
        node = node.body
    if isinstance(node, Atom):
        return tuple(assignment[v] for v in node.args) in structure.relations[node.symbol]
    if isinstance(node, Equal):
        return assignment[node.left] == assignment[node.right]
    if isinstance(node, Not):
        return not evaluate(node.body, structure, assignment)
    if isinstance(node, And):
        return all(evaluate(p, structure, assignment) for p in node.parts)
    if isinstance(node, Or):
        return any(evaluate(p, structure, assignment) for p in node.parts)
    raise TypeError(f"not a formula node: {node!r}")


def _variable(i: int) -> str:
    return f"x{i}"


def reduct_functor(expanded: TruncatedClass, base: TruncatedClass) -> FunctorData:
    """The forgetful functor sending each member to the base member equal to its reduct."""
    cat_e, cat_b = structures_category(expanded), structures_category(base)
    by_key = {m.key(): m.name for m in base.members}
    omap = {}
    for m in expanded.members:
        r = reduct(m, base.signature)
        if r.key() not in by_key:
            raise NotDomainPreserving(f"reduct of {m.name!r} is not a member of the base class", m.name)
        omap[m.name] = by_key[r.key()]
    amap = {(a, b, im): (omap[a], omap[b], im) for a, b, im in cat_e.arrows}
    return FunctorData(cat_e, cat_b, omap, amap)


def define_reduct_formulas(pi: FunctorData, expanded: TruncatedClass, base: TruncatedClass) -> dict:
    """Quantifier-free definitions of the base relations inside the expanded structures.

    ``pi`` must keep domains and maps.  For each base symbol R the formula is
    a disjunction over members E and surjective tuples ``e ∈ R^{pi(E)}`` of
    the equality pattern of ``e`` and the complete description of E read
    through ``iota`` (each element goes to the least index hitting it).
    """
    expanded.check_closed()
    base.check_closed()
    for m in expanded.members:
        image = base.by_name[pi.objects[m.name]]
        if image.domain != m.domain:
            raise NotDomainPreserving(f"{m.name!r} and its image have different domains", m.name)
    for a in pi.source.arrows:
        if pi.arrows[a][2] != a[2]:
            raise NotDomainPreserving(f"arrow {a!r} is not mapped to the same function", a)
    formulas = {}
    for symbol, k in base.signature.arity:
        xs = tuple(_variable(i) for i in range(k))
        disjuncts = []
        for m in expanded.members:
            image = base.by_name[pi.objects[m.name]]
            for e in sorted(image.relations[symbol], key=repr):
                if set(e) != set(m.domain):
                    continue
                pattern = []
                for i, j in itertools.combinations(range(k), 2):
                    eq = Equal(xs[i], xs[j])
                    pattern.append(eq if e[i] == e[j] else Not(eq))
                iota = {}
                for i, x in enumerate(e):
                    iota.setdefault(x, xs[i])
                description = []
                for s, ks in expanded.signature.arity:
                    for t in itertools.product(m.domain, repeat=ks):
                        atom = Atom(s, tuple(iota[x] for x in t))
                        description.append(atom if t in m.relations[s] else Not(atom))
                disjuncts.append(And(tuple(pattern + description)))
        formulas[symbol] = QFFormula(xs, Or(tuple(disjuncts)))
    bad = reduct_formula_mismatches(formulas, pi, expanded, base)
    if bad:
        raise RuntimeError(f"formulas disagree with the reduct at {bad[0]!r}")
    return formulas


def reduct_formula_mismatches(formulas: Mapping, pi: FunctorData, expanded: TruncatedClass, base: TruncatedClass) -> list:
    bad = []
    for m in expanded.members:
        image = base.by_name[pi.objects[m.name]]
        for symbol, phi in formulas.items():
            for c in itertools.product(m.domain, repeat=len(phi.variables)):
                holds = evaluate(phi, m, dict(zip(phi.variables, c)))
                if holds != (c in image.relations[symbol]):
                    bad.append((m.name, symbol, c))
    return bad


# -- abstract to concrete expansions ---------------------------------------------

def concrete_expansion(pi, base: TruncatedClass) -> tuple[TruncatedClass, FunctorData]:
    """Realise an abstract expansion of ``structures_category(base)`` by structures.

    New symbols are the objects of the expanded category; the symbol ``E'``
    of arity ``|pi(E')|`` holds, in the structure for ``E``, the functions
    ``pi(g)`` for all arrows ``g: E' → E``.  Returns the class and the
    isomorphism from the expanded category onto its category of embeddings.
    """
    F = pi.functor if hasattr(pi, "functor") else pi
    ecat = F.source
    tau = [(("E", e), len(base.by_name[F.objects[e]])) for e in ecat.objects]
    sig = base.signature.union(Signature.of(tau))
    structures = []
    for e in ecat.objects:
        b = base.by_name[F.objects[e]]
        rels = dict(b.relations)
        for e2 in ecat.objects:
            rels[("E", e2)] = {F.arrows[g][2] for g in ecat.hom(e2, e)}
        structures.append(RelStructure(sig, b.domain, rels, name=e))
    cls = TruncatedClass(sig, structures, validate=False)
    ccat = structures_category(cls)
    iso = FunctorData(
        ecat, ccat, {e: e for e in ecat.objects},
        {g: (ecat.src(g), ecat.tgt(g), F.arrows[g][2]) for g in ecat.arrows},
    )
    return cls, iso
