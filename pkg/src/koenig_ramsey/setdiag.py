"""Set-valued contravariant diagrams on finite categories and their limits.

A diagram assigns a finite ordered carrier to every object and, to every arrow
``f: A→B``, a function from the carrier of ``B`` to the carrier of ``A``.  A
solution picks ``x_C`` in every carrier with ``x_A = D_f(x_B)`` for all arrows.
Solving is constraint propagation to a fixpoint followed by backtracking.
"""

from __future__ import annotations

import itertools
import random
import warnings
from collections import deque
from typing import Iterable, Iterator, Mapping

from .errors import (
    FunctorialityViolated,
    InvalidInput,
    MissingAction,
    MissingCarrier,
    NotAFunction,
    UnknownArrow,
)
from .fincat import FinCategory, connected_components, full_subcategory

Solution = dict


class SetDiagram:
    def __init__(self, base: FinCategory, carrier: Mapping, action: Mapping, *, check: bool = True):
        self.base = base
        self.carrier = {o: tuple(carrier[o]) for o in carrier}
        self.action = {f: dict(m) for f, m in action.items()}
        for o in base.objects:
            if o in self.carrier:
                ident = base.identity(o)
                self.action.setdefault(ident, {x: x for x in self.carrier[o]})
        if check:
            _check_diagram(self)

    def apply(self, f, x):
        """``D_f(x)`` for ``x`` in the carrier of the target of ``f``."""
        return self.action[f][x]

    def sizes(self) -> dict:
        return {o: len(self.carrier[o]) for o in self.base.objects}

    def __eq__(self, other):
        if not isinstance(other, SetDiagram):
            return NotImplemented
        return (
            self.base == other.base
            and {o: set(c) for o, c in self.carrier.items()} == {o: set(c) for o, c in other.carrier.items()}
            and self.action == other.action
        )

    def __repr__(self):
        return f"SetDiagram(sizes={self.sizes()})"


def _check_diagram(diag: SetDiagram) -> None:
    base = diag.base
    for o in base.objects:
        if o not in diag.carrier:
            raise MissingCarrier(f"no set for object {o!r}", o)
        if len(set(diag.carrier[o])) != len(diag.carrier[o]):
            raise InvalidInput(f"repeated element in the set of {o!r}", o)
    for f in base.arrows:
        if f not in diag.action:
            raise MissingAction(f"no map for arrow {f!r}", f)
        dom, cod = diag.carrier[base.tgt(f)], set(diag.carrier[base.src(f)])
        m = diag.action[f]
        if set(m) != set(dom):
            raise NotAFunction(f"map of {f!r} is not total on the set of {base.tgt(f)!r}", f)
        if any(v not in cod for v in m.values()):
            raise NotAFunction(f"map of {f!r} leaves the set of {base.src(f)!r}", f)
    for f in diag.action:
        if not base.has_arrow(f):
            raise UnknownArrow(f"map given for unknown arrow {f!r}", f)
    for o in base.objects:
        m = diag.action[base.identity(o)]
        if any(m[x] != x for x in m):
            raise FunctorialityViolated(f"identity of {o!r} acts non-trivially", base.identity(o))
    for (g, f), h in base.table.items():
        mf, mg, mh = diag.action[f], diag.action[g], diag.action[h]
        for x in diag.carrier[base.tgt(g)]:
            if mf[mg[x]] != mh[x]:
                raise FunctorialityViolated(f"D_{f}∘D_{g} != D_({g}∘{f})", f, g)
    empty = [o for o in base.objects if not diag.carrier[o]]
    if empty:
        warnings.warn(f"diagram has empty sets at {empty!r}; it cannot have a solution", stacklevel=3)


def validate_diagram(cat: FinCategory, raw: Mapping) -> SetDiagram:
    """Build a diagram from ``{"sets": {obj: [...]}, "maps": {arrow: {y: x}}}``.

    Identity maps may be omitted.  ``maps[f][y] = x`` means ``D_f(y) = x``
    for ``y`` in the set of the target of ``f``.
    """
    sets = raw.get("sets", raw.get("carrier"))
    maps = raw.get("maps", raw.get("action", {}))
    if sets is None:
        raise MissingCarrier("diagram description needs 'sets'")
    for f in maps:
        if not cat.has_arrow(f):
            raise UnknownArrow(f"map given for unknown arrow {f!r}", f)
    for o in sets:
        if not cat.has_object(o):
            raise InvalidInput(f"set given for unknown object {o!r}", o)
    for o in cat.objects:
        if o not in sets:
            raise MissingCarrier(f"no set for object {o!r}", o)
    for f in cat.arrows:
        if f not in maps and not cat.is_identity(f):
            raise MissingAction(f"no map for arrow {f!r}", f)
    return SetDiagram(cat, {o: list(sets[o]) for o in cat.objects}, maps)


# -- solving -----------------------------------------------------------------

def _constraints(diag: SetDiagram, arrows: Iterable):
    base = diag.base
    cons = []
    for f in arrows:
        if base.is_identity(f):
            continue
        cons.append((base.src(f), base.tgt(f), diag.action[f]))
    by_obj: dict = {o: [] for o in base.objects}
    for k, (a, b, _) in enumerate(cons):
        by_obj[a].append(k)
        if b != a:
            by_obj[b].append(k)
    return cons, by_obj


def _propagate(domains: dict, cons: list, by_obj: dict, pending: Iterable[int]) -> bool:
    queue = deque(pending)
    queued = set(queue)
    while queue:
        k = queue.popleft()
        queued.discard(k)
        a, b, m = cons[k]
        changed = []
        if a == b:
            kept = [x for x in domains[a] if m[x] == x]
            if len(kept) != len(domains[a]):
                domains[a] = kept
                changed.append(a)
        else:
            allowed_a = set(domains[a])
            kept_b = [y for y in domains[b] if m[y] in allowed_a]
            image = {m[y] for y in kept_b}
            kept_a = [x for x in domains[a] if x in image]
            if len(kept_b) != len(domains[b]):
                domains[b] = kept_b
                changed.append(b)
            if len(kept_a) != len(domains[a]):
                domains[a] = kept_a
                changed.append(a)
        for o in changed:
            if not domains[o]:
                return False
            for k2 in by_obj[o]:
                if k2 not in queued:
                    queue.append(k2)
                    queued.add(k2)
    return True


def _search(diag: SetDiagram, arrows, order: list) -> Iterator[dict]:
    cons, by_obj = _constraints(diag, arrows)
    domains = {o: list(diag.carrier[o]) for o in diag.base.objects}
    if any(not domains[o] for o in order):
        return
    if not _propagate(domains, cons, by_obj, range(len(cons))):
        return

    def rec(i, doms):
        if i == len(order):
            yield {o: doms[o][0] for o in order}
            return
        o = order[i]
        for v in doms[o]:
            trial = dict(doms)
            trial[o] = [v]
            if _propagate(trial, cons, by_obj, by_obj[o]):
                yield from rec(i + 1, trial)

    yield from rec(0, domains)


def _degree_order(base: FinCategory, arrows, objects) -> list:
    degree = {o: 0 for o in objects}
    for f in arrows:
        if base.is_identity(f):
            continue
        for end in {base.src(f), base.tgt(f)}:
            if end in degree:
                degree[end] += 1
    return sorted(objects, key=lambda o: (-degree[o], base.object_index(o)))


def solve(diag: SetDiagram) -> Solution | None:
    """One element of the limit, or None when the limit is empty."""
    base = diag.base
    order = _degree_order(base, base.arrows, base.objects)
    for sol in _search(diag, base.arrows, order):
        return {o: sol[o] for o in base.objects}
    return None


def enumerate_solutions(diag: SetDiagram, cap: int | None = None, arrows=None) -> list[Solution]:
    """All solutions in lexicographic order (objects in declaration order).

    ``arrows`` restricts the equations to an arrow set M, giving the full set
    of M-solutions (every coordinate ranges over its carrier).
    """
    base = diag.base
    arrows = base.arrows if arrows is None else _check_arrows(base, arrows)
    gen = _search(diag, arrows, list(base.objects))
    return list(itertools.islice(gen, cap)) if cap is not None else list(gen)


def _check_arrows(base: FinCategory, arrows) -> list:
    arrows = list(arrows)
    for f in arrows:
        if not base.has_arrow(f):
            raise UnknownArrow(f"unknown arrow {f!r}", f)
    return arrows


def solve_restricted(diag: SetDiagram, arrows) -> Solution | None:
    """An M-solution; coordinates not touched by M take the first carrier element."""
    base = diag.base
    arrows = _check_arrows(base, arrows)
    touched = set()
    for f in arrows:
        if not base.is_identity(f):
            touched.update((base.src(f), base.tgt(f)))
    if any(not diag.carrier[o] for o in base.objects):
        return None
    variables = _degree_order(base, arrows, [o for o in base.objects if o in touched])
    for sol in _search(diag, arrows, variables):
        return {o: sol[o] if o in touched else diag.carrier[o][0] for o in base.objects}
    return None


def is_solution(diag: SetDiagram, x: Mapping, arrows=None) -> bool:
    base = diag.base
    arrows = base.arrows if arrows is None else arrows
    for o in base.objects:
        if x.get(o) not in diag.carrier[o]:
            return False
    return all(x[base.src(f)] == diag.action[f][x[base.tgt(f)]] for f in arrows)


def minimal_unsat_core(diag: SetDiagram) -> list | None:
    """A subset-minimal arrow set M with no M-solution, by greedy deletion.

    Returns None when the diagram is solvable.
    """
    if solve(diag) is not None:
        return None
    core = list(diag.base.arrows)
    for f in list(core):
        trial = [g for g in core if g != f]
        if solve_restricted(diag, trial) is None:
            core = trial
    return core


# -- diagram constructions -----------------------------------------------------

def restrict_diagram(diag: SetDiagram, sub: FinCategory) -> SetDiagram:
    return SetDiagram(
        sub,
        {o: diag.carrier[o] for o in sub.objects},
        {f: diag.action[f] for f in sub.arrows},
        check=False,
    )


def solve_by_components(diag: SetDiagram) -> Solution | None:
    """Solve each connected component separately and combine."""
    out: dict = {}
    for block in connected_components(diag.base):
        part = solve(restrict_diagram(diag, full_subcategory(diag.base, block)))
        if part is None:
            return None
        out.update(part)
    return {o: out[o] for o in diag.base.objects}


def precompose(diag: SetDiagram, G) -> SetDiagram:
    """``D∘G^op`` for a functor ``G`` into the base of ``D``."""
    return SetDiagram(
        G.source,
        {b: diag.carrier[G.objects[b]] for b in G.source.objects},
        {u: diag.action[G.arrows[u]] for u in G.source.arrows},
        check=False,
    )


def constant_diagram(cat: FinCategory, elements: Iterable) -> SetDiagram:
    elements = list(elements)
    ident = {x: x for x in elements}
    return SetDiagram(cat, {o: elements for o in cat.objects}, {f: ident for f in cat.arrows})


def find_diagram_isomorphism(d1: SetDiagram, d2: SetDiagram) -> dict | None:
    """Per-object carrier bijections ``phi[o]: D1_o → D2_o`` commuting with all maps."""
    base = d1.base
    if d2.base.objects != base.objects or set(d2.base.arrows) != set(base.arrows):
        return None
    if d1.sizes() != d2.sizes():
        return None
    objs = list(base.objects)
    phi: dict = {}

    def compatible(o):
        for f in base.in_arrows(o) + base.out_arrows(o):
            a, b = base.src(f), base.tgt(f)
            if a in phi and b in phi:
                m1, m2 = d1.action[f], d2.action[f]
                if any(phi[a][m1[y]] != m2[phi[b][y]] for y in d1.carrier[b]):
                    return False
        return True

    def rec(i):
        if i == len(objs):
            return True
        o = objs[i]
        src = d1.carrier[o]
        for perm in itertools.permutations(d2.carrier[o]):
            phi[o] = dict(zip(src, perm))
            if compatible(o) and rec(i + 1):
                return True
        phi.pop(o, None)
        return False

    return {o: dict(m) for o, m in phi.items()} if rec(0) else None


def _functorial_assignments(cat: FinCategory, carriers: dict, rng: random.Random | None, budget: int | None):
    """Yield functorial arrow actions for fixed carriers (DFS over arrows)."""
    acts: dict = {}
    for o in cat.objects:
        acts[cat.identity(o)] = {x: x for x in carriers[o]}
    todo = [f for f in cat.arrows if not cat.is_identity(f)]
    steps = [0]

    def consistent(a):
        checks = [(b, a) for b in cat.out_arrows(cat.tgt(a))]
        checks += [(a, b) for b in cat.in_arrows(cat.src(a))]
        for g, f in checks:
            h = cat.compose(g, f)
            if g in acts and f in acts and h in acts:
                mf, mg, mh = acts[f], acts[g], acts[h]
                if any(mf[mg[x]] != mh[x] for x in carriers[cat.tgt(g)]):
                    return False
        for g, f in cat.factorizations(a):
            if g in acts and f in acts:
                mf, mg, mh = acts[f], acts[g], acts[a]
                if any(mf[mg[x]] != mh[x] for x in carriers[cat.tgt(g)]):
                    return False
        return True

    def candidates(a):
        for g, f in cat.factorizations(a):
            if g != a and f != a and g in acts and f in acts:
                mf, mg = acts[f], acts[g]
                return [{x: mf[mg[x]] for x in carriers[cat.tgt(a)]}]
        dom, cod = carriers[cat.tgt(a)], carriers[cat.src(a)]
        maps = [dict(zip(dom, values)) for values in itertools.product(cod, repeat=len(dom))]
        if rng is not None:
            rng.shuffle(maps)
        return maps

    def rec(i):
        if i == len(todo):
            yield dict(acts)
            return
        a = todo[i]
        for m in candidates(a):
            steps[0] += 1
            if budget is not None and steps[0] > budget:
                return
            acts[a] = m
            if consistent(a):
                yield from rec(i + 1)
            del acts[a]

    yield from rec(0)


def enumerate_diagrams(cat: FinCategory, max_size: int, min_size: int = 1) -> Iterator[SetDiagram]:
    """Every diagram with carriers ``range(k)``, ``min_size <= k <= max_size``."""
    objs = list(cat.objects)
    for sizes in itertools.product(range(min_size, max_size + 1), repeat=len(objs)):
        carriers = {o: tuple(range(k)) for o, k in zip(objs, sizes)}
        for acts in _functorial_assignments(cat, carriers, None, None):
            yield SetDiagram(cat, carriers, acts, check=False)


def random_diagram(cat: FinCategory, max_size: int, rng: random.Random, budget: int = 20000) -> SetDiagram:
    """A random diagram with nonempty carriers of size at most ``max_size``."""
    objs = list(cat.objects)
    for _ in range(50):
        carriers = {o: tuple(range(rng.randint(1, max_size))) for o in objs}
        for acts in _functorial_assignments(cat, carriers, rng, budget):
            return SetDiagram(cat, carriers, acts, check=False)
    raise RuntimeError("could not sample a diagram within the search budget")
