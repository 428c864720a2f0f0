"""Command line front end: JSON files in, JSON reports out.

Exit codes: 0 when the property holds or a solution exists, 1 when it fails,
2 on invalid input.  All labels are read and written as strings; tuples
render as ``"(a,b)"``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from typing import Any

from . import __version__
from .errors import InvalidInput, PreconditionFailed
from .expansion import (
    as_expansion,
    compute_core,
    enumerate_endomorphisms,
    find_expansion_hom,
    has_expansion_property,
    is_discrete_fibration,
    section,
)
from .fincat import FinCategory, connected_components, is_confluent, validate_category
from .functor import validate_functor
from .ramsey import (
    bad_coloring_diagram,
    confluence_counterexample_diagram,
    find_witness,
    is_ramsey,
    is_ramsey_witness,
)
from .relstruct import (
    RelStructure,
    Signature,
    TruncatedClass,
    blowup,
    define_reduct_formulas,
    free_superposition,
    has_strong_amalgamation,
    reduct_functor,
    structures_category,
)
from .setdiag import (
    SetDiagram,
    enumerate_solutions,
    minimal_unsat_core,
    solve,
    solve_restricted,
    validate_diagram,
)
from .transfer import grothendieck_elts, product, slice_category, validate_cat_valued

FORMAT_VERSION = 1


# -- labels ----------------------------------------------------------------------

def label(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(label(p) for p in x) + ")"
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def relabel_category(cat: FinCategory) -> FinCategory:
    """Copy of ``cat`` with every object and arrow id turned into a string."""
    objs = {o: label(o) for o in cat.objects}
    arrs = {a: label(a) for a in cat.arrows}
    if len(set(objs.values())) != len(objs) or len(set(arrs.values())) != len(arrs):
        raise InvalidInput("labels collide after conversion to strings")
    return FinCategory(
        [objs[o] for o in cat.objects],
        [(arrs[a], objs[s], objs[t]) for a, s, t in cat.arrow_records()],
        {objs[o]: arrs[i] for o, i in cat.identities.items()},
        {(arrs[g], arrs[f]): arrs[h] for (g, f), h in cat.table.items()},
        check=False,
    )


def category_document(cat: FinCategory) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "category",
        "objects": [label(o) for o in cat.objects],
        "arrows": [{"id": label(a), "src": label(s), "tgt": label(t)} for a, s, t in cat.arrow_records()],
        "identities": {label(o): label(i) for o, i in cat.identities.items()},
        "compose": [[label(g), label(f), label(h)] for (g, f), h in cat.table.items()],
    }


def diagram_document(diag: SetDiagram) -> dict:
    base = diag.base
    return {
        "format_version": FORMAT_VERSION,
        "kind": "diagram",
        "category": category_document(base),
        "sets": {label(o): [label(x) for x in diag.carrier[o]] for o in base.objects},
        "maps": {
            label(f): {label(y): label(x) for y, x in diag.action[f].items()}
            for f in base.arrows
            if not base.is_identity(f)
        },
    }


def structclass_document(cls: TruncatedClass) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "structclass",
        "signature": {label(s): k for s, k in cls.signature.arity},
        "max_size": cls.max_size,
        "structures": [
            {
                "name": label(m.name),
                "domain": [label(x) for x in m.domain],
                "relations": {label(s): sorted([label(x) for x in t] for t in r) for s, r in m.relations.items()},
            }
            for m in cls.members
        ],
    }


# -- loading ---------------------------------------------------------------------

class Loader:
    """Reads input files, remembers their bytes for the input hash."""

    def __init__(self):
        self.digest = hashlib.sha256()
        self.current: str | None = None

    def read(self, path: str) -> dict:
        self.current = path
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {path}: {exc.strerror}", path) from None
        self.digest.update(data)
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not JSON ({exc.msg} at line {exc.lineno})", path) from None
        if not isinstance(doc, dict):
            raise InvalidInput(f"{path}: top level must be an object", path)
        doc["__dir__"] = os.path.dirname(os.path.abspath(path))
        return doc

    def resolve(self, ref, here: str) -> dict:
        if isinstance(ref, str):
            return self.read(ref if os.path.isabs(ref) else os.path.join(here, ref))
        if isinstance(ref, dict):
            return {**ref, "__dir__": here}
        raise InvalidInput("expected a path or an inline object")

    def category(self, doc: dict) -> FinCategory:
        kind = doc.get("kind")
        if kind == "structclass" or (kind is None and "signature" in doc):
            return relabel_category(structures_category(self.structclass(doc)))
        if kind not in (None, "category"):
            raise InvalidInput(f"expected a category, got kind {kind!r}")
        raw = {
            "objects": [label(o) for o in doc.get("objects", [])],
            "arrows": [
                {"id": label(r["id"]), "src": label(r["src"]), "tgt": label(r["tgt"])}
                if isinstance(r, dict) else [label(x) for x in r]
                for r in doc.get("arrows", [])
            ],
            "identities": {label(o): label(i) for o, i in (doc.get("identities") or {}).items()},
            "compose": [[label(x) for x in row] for row in doc.get("compose", [])],
        }
        if "objects" not in doc:
            raise InvalidInput("category description needs 'objects'")
        return validate_category(raw)

    def category_path(self, path: str) -> FinCategory:
        return self.category(self.read(path))

    def diagram(self, path: str) -> SetDiagram:
        return self.diagram_from(self.read(path))

    def diagram_from(self, doc: dict) -> SetDiagram:
        if doc.get("kind") not in (None, "diagram"):
            raise InvalidInput(f"expected a diagram, got kind {doc.get('kind')!r}")
        if "category" not in doc:
            raise InvalidInput("diagram needs 'category'")
        cat = self.category(self.resolve(doc["category"], doc["__dir__"]))
        raw = {
            "sets": {label(o): [label(x) for x in xs] for o, xs in (doc.get("sets") or {}).items()},
            "maps": {
                label(f): {label(y): label(x) for y, x in m.items()}
                for f, m in (doc.get("maps") or {}).items()
            },
        }
        return validate_diagram(cat, raw)

    def functor(self, path: str):
        return self.functor_from(self.read(path))

    def functor_from(self, doc: dict):
        if doc.get("kind") not in (None, "functor"):
            raise InvalidInput(f"expected a functor, got kind {doc.get('kind')!r}")
        for key in ("source", "target", "objects", "arrows"):
            if key not in doc:
                raise InvalidInput(f"functor needs {key!r}")
        src = self.category(self.resolve(doc["source"], doc["__dir__"]))
        tgt = self.category(self.resolve(doc["target"], doc["__dir__"]))
        return _functor(src, tgt, doc)

    def structclass(self, doc: dict) -> TruncatedClass:
        try:
            sig = Signature.of({label(s): int(k) for s, k in doc["signature"].items()})
            members = []
            for i, st in enumerate(doc["structures"]):
                rels = {label(s): [tuple(_element(x) for x in t) for t in ts] for s, ts in st.get("relations", {}).items()}
                members.append(RelStructure(sig, [_element(x) for x in st["domain"]], rels, name=label(st.get("name", f"s{i}"))))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInput(f"malformed structure class: {exc}") from None
        return TruncatedClass(sig, members, doc.get("max_size"))

    def structclass_path(self, path: str) -> TruncatedClass:
        return self.structclass(self.read(path))

    def cat_valued(self, path: str):
        return self.cat_valued_from(self.read(path))

    def cat_valued_from(self, doc: dict):
        here = doc["__dir__"]
        base = self.category(self.resolve(doc["base"], here))
        fibers = {label(r): self.category(self.resolve(c, here)) for r, c in doc.get("fibers", {}).items()}
        transitions = {}
        for f, t in (doc.get("transitions") or {}).items():
            f = label(f)
            if not base.has_arrow(f):
                raise InvalidInput(f"transition for unknown arrow {f!r}", f)
            transitions[f] = _functor(fibers[label(base.src(f))], fibers[label(base.tgt(f))], t)
        return validate_cat_valued(base, fibers, transitions)

    def hexdigest(self) -> str:
        return self.digest.hexdigest()


def _element(x):
    return label(x) if isinstance(x, list) else x


def _functor(src: FinCategory, tgt: FinCategory, doc: dict):
    objects = {label(k): label(v) for k, v in doc.get("objects", {}).items()}
    arrows = {label(k): label(v) for k, v in doc.get("arrows", {}).items()}
    for o in src.objects:
        if src.identity(o) not in arrows and o in objects:
            arrows[src.identity(o)] = tgt.identity(objects[o]) if tgt.has_object(objects[o]) else None
    return validate_functor(src, tgt, objects, arrows)


# -- commands ----------------------------------------------------------------------

def _arrows_arg(text: str | None) -> list | None:
    if text is None:
        return None
    return [a for a in (p.strip() for p in text.split(",")) if a]


def _solution(x: dict | None):
    return None if x is None else {label(k): label(v) for k, v in x.items()}


def cmd_validate(args, ld: Loader):
    doc = ld.read(args.file)
    kind = doc.get("kind") or (
        "diagram" if "sets" in doc
        else "structclass" if "signature" in doc
        else "functor" if "source" in doc
        else "catvalued" if "fibers" in doc
        else "category"
    )
    if kind == "diagram":
        d = ld.diagram_from(doc)
        return 0, {"valid": True, "kind": kind, "sizes": {label(o): n for o, n in d.sizes().items()}}
    if kind == "functor":
        ld.functor_from(doc)
        return 0, {"valid": True, "kind": kind}
    if kind == "catvalued":
        ld.cat_valued_from(doc)
        return 0, {"valid": True, "kind": kind}
    if kind == "structclass":
        cls = ld.structclass(doc)
        return 0, {"valid": True, "kind": kind, "structures": len(cls)}
    cat = ld.category(doc)
    return 0, {"valid": True, "kind": "category", "objects": len(cat.objects), "arrows": len(cat.arrows)}


def cmd_components(args, ld):
    cat = ld.category_path(args.file)
    return 0, {"components": connected_components(cat)}


def cmd_confluent(args, ld):
    cat = ld.category_path(args.file)
    rep = is_confluent(cat)
    return (0 if rep else 1), {
        "confluent": rep.confluent,
        "counterexample": list(rep.counterexample) if rep.counterexample else None,
        "cocones": [{"pair": list(p), "target": c} for p, (c, _, _) in rep.cocones.items()],
    }


def cmd_ramsey(args, ld):
    cat = ld.category_path(args.file)
    rep = is_ramsey(cat, args.colors, workers=args.threads)
    return (0 if rep else 1), {
        "ramsey": rep.ramsey,
        "colors": args.colors,
        "witnesses": [{"A": a, "B": b, "C": c} for (a, b), c in rep.witnesses.items()],
        "failures": [{"A": a, "B": b} for (a, b) in rep.failures],
    }


def cmd_witness(args, ld):
    cat = ld.category_path(args.file)
    if args.C is not None:
        chk = is_ramsey_witness(cat, args.A, args.B, args.C, args.colors)
        return (0 if chk else 1), {
            "is_witness": chk.is_witness,
            "certificate": None if chk.certificate is None else {label(k): v for k, v in chk.certificate.items()},
        }
    c = find_witness(cat, args.A, args.B, args.colors)
    return (0 if c is not None else 1), {"witness": c}


def cmd_solve(args, ld):
    diag = ld.diagram(args.file)
    arrows = _arrows_arg(args.arrows)
    if args.all:
        sols = enumerate_solutions(diag, args.cap, arrows)
        return (0 if sols else 1), {"count": len(sols), "solutions": [_solution(s) for s in sols]}
    if arrows is not None:
        x = solve_restricted(diag, arrows)
        return (0 if x is not None else 1), {"solvable": x is not None, "arrows": arrows, "solution": _solution(x)}
    x = solve(diag)
    if x is not None:
        return 0, {"solvable": True, "solution": _solution(x)}
    return 1, {"solvable": False, "unsat_core": minimal_unsat_core(diag)}


def _emit(args, doc: dict, summary: dict):
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=2 if args.pretty else None, ensure_ascii=False)
            fh.write("\n")
        return {"written": args.output, **summary}
    return {**summary, "document": doc}


def cmd_bad_diagram(args, ld):
    cat = ld.category_path(args.file)
    d = bad_coloring_diagram(cat, args.A, args.B, args.colors)
    empty = [o for o in cat.objects if not d.carrier[o]]
    return 0, _emit(args, diagram_document(d), {"empty_sets": empty})


def cmd_confl_diagram(args, ld):
    cat = ld.category_path(args.file)
    d = confluence_counterexample_diagram(cat, args.A, args.B)
    return 0, _emit(args, diagram_document(d), {"sizes": d.sizes()})


def cmd_fibration(args, ld):
    F = ld.functor(args.file)
    fib = is_discrete_fibration(F)
    surjective = F.is_surjective_on_objects()
    cert = None if fib.certificate is None else {
        "object": label(fib.certificate[0]),
        "arrow": label(fib.certificate[1]),
        "lifts": [label(g) for g in fib.certificate[2]],
    }
    ok = fib.holds and surjective
    return (0 if ok else 1), {
        "discrete_fibration": fib.holds,
        "surjective": surjective,
        "expansion": ok,
        "certificate": cert,
    }


def cmd_section(args, ld):
    pi = as_expansion(ld.functor(args.file))
    s = section(pi)
    return (0 if s else 1), {"section": None if s is None else {label(k): label(v) for k, v in s.objects.items()}}


def cmd_core(args, ld):
    pi = as_expansion(ld.functor(args.file))
    res = compute_core(pi)
    return 0, {
        "endomorphisms": len(enumerate_endomorphisms(pi)),
        "core_objects": [label(o) for o in res.core.total.objects],
        "fiber_sizes": {label(c): n for c, n in res.core.fiber_sizes().items()},
        "is_own_core": len(res.core.total.objects) == len(pi.total.objects),
    }


def cmd_ep(args, ld):
    pi = as_expansion(ld.functor(args.file))
    rep = has_expansion_property(pi)
    return (0 if rep else 1), {
        "expansion_property": rep.holds,
        "witnesses": {label(k): label(v) for k, v in rep.witnesses.items()},
        "failure": None if rep.failure is None else label(rep.failure),
    }


def cmd_hom_expansion(args, ld):
    pi = as_expansion(ld.functor(args.source))
    rho = as_expansion(ld.functor(args.target))
    if pi.base != rho.base:
        raise InvalidInput("expansions have different base categories")
    alpha = find_expansion_hom(pi, rho)
    return (0 if alpha else 1), {"hom": None if alpha is None else {label(k): label(v) for k, v in alpha.objects.items()}}


def _category_summary(cat):
    return {"objects": len(cat.objects), "arrows": len(cat.arrows)}


def cmd_product(args, ld):
    c, d = ld.category_path(args.first), ld.category_path(args.second)
    cat = relabel_category(product(c, d))
    return 0, _emit(args, category_document(cat), _category_summary(cat))


def cmd_slice(args, ld):
    c = ld.category_path(args.file)
    cat, _ = slice_category(c, args.A)
    cat = relabel_category(cat)
    return 0, _emit(args, category_document(cat), _category_summary(cat))


def cmd_elts(args, ld):
    cat, _ = grothendieck_elts(ld.cat_valued(args.file))
    cat = relabel_category(cat)
    return 0, _emit(args, category_document(cat), _category_summary(cat))


def cmd_blowup(args, ld):
    cat = relabel_category(blowup(ld.structclass_path(args.base), ld.structclass_path(args.fiber)))
    return 0, _emit(args, category_document(cat), _category_summary(cat))


def cmd_superpose(args, ld):
    cls = free_superposition(ld.structclass_path(args.first), ld.structclass_path(args.second), args.bound, up_to_iso=args.up_to_iso)
    return 0, _emit(args, structclass_document(cls), {"structures": len(cls)})


def cmd_amalgamation(args, ld):
    cls = ld.structclass_path(args.file)
    rep = has_strong_amalgamation(cls, args.bound)
    cert = None
    if rep.certificate:
        cert = {k: label(v) for k, v in rep.certificate.items()}
    return (0 if rep else 1), {"strong_amalgamation": rep.holds, "certificate": cert}


def cmd_formulas(args, ld):
    expanded, base = ld.structclass_path(args.expanded), ld.structclass_path(args.base)
    pi = reduct_functor(expanded, base)
    formulas = define_reduct_formulas(pi, expanded, base)
    return 0, {
        "formulas": {
            label(s): {"variables": list(phi.variables), "formula": str(phi)} for s, phi in formulas.items()
        }
    }


def cmd_report(args, ld):
    from .harness import check_category

    cat = ld.category_path(args.file)
    res = check_category(cat, colors=args.colors, max_size=args.max_size, samples=args.samples, rng=random.Random(args.seed))
    return (0 if res.consistent else 1), res.as_dict()


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="koenig-ramsey", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="compact JSON output (default)")
    common.add_argument("--pretty", action="store_true", help="indented JSON output")
    common.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positionals, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(fn=fn)
        return sp

    def pair(sp, colors=True):
        sp.add_argument("-A", required=True)
        sp.add_argument("-B", required=True)
        if colors:
            sp.add_argument("--colors", type=int, default=2)

    def out(sp):
        sp.add_argument("-o", "--output")

    add("validate", cmd_validate, "file", help="check a category, diagram, functor or class file")
    add("components", cmd_components, "file", help="connected components")
    add("confluent", cmd_confluent, "file", help="confluence verdict")
    sp = add("ramsey", cmd_ramsey, "file", help="Ramsey verdict for every pair")
    sp.add_argument("--colors", type=int, default=2)
    sp = add("witness", cmd_witness, "file", help="find or check a Ramsey witness")
    pair(sp)
    sp.add_argument("-C")
    sp = add("solve", cmd_solve, "file", help="solve a diagram")
    sp.add_argument("--arrows", help="comma separated arrow ids to respect")
    sp.add_argument("--all", action="store_true", help="enumerate all solutions")
    sp.add_argument("--cap", type=int)
    sp = add("bad-diagram", cmd_bad_diagram, "file", help="diagram of colorings with no constant copy")
    pair(sp)
    out(sp)
    sp = add("confl-diagram", cmd_confl_diagram, "file", help="unsolvable diagram for a pair without a cocone")
    pair(sp, colors=False)
    out(sp)
    add("fibration", cmd_fibration, "file", help="is the functor a surjective discrete fibration")
    add("section", cmd_section, "file", help="section of an expansion")
    add("core", cmd_core, "file", help="core of an expansion")
    add("ep", cmd_ep, "file", help="expansion property")
    add("hom-expansion", cmd_hom_expansion, "source", "target", help="hom between expansions")
    sp = add("product", cmd_product, "first", "second", help="product category")
    out(sp)
    sp = add("slice", cmd_slice, "file", help="category under an object")
    sp.add_argument("-A", required=True)
    out(sp)
    sp = add("elts", cmd_elts, "file", help="category of elements of a category valued functor")
    out(sp)
    sp = add("blowup", cmd_blowup, "base", "fiber", help="blowup of two structure classes")
    out(sp)
    sp = add("superpose", cmd_superpose, "first", "second", help="free superposition of two classes")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--up-to-iso", action="store_true")
    out(sp)
    sp = add("amalgamation", cmd_amalgamation, "file", help="strong amalgamation check")
    sp.add_argument("--bound", type=int, required=True)
    add("formulas", cmd_formulas, "expanded", "base", help="quantifier-free definitions of reduct relations")
    sp = add("report", cmd_report, "file", help="confluence, Ramsey and solvability side by side")
    sp.add_argument("--colors", type=int, default=2)
    sp.add_argument("--max-size", type=int, default=2)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    ld = Loader()
    try:
        code, body = args.fn(args, ld)
    except InvalidInput as exc:
        code, body = 2, {
            "error": type(exc).__name__,
            "file": ld.current,
            "message": str(exc),
            "ids": [label(i) for i in exc.ids],
        }
    except PreconditionFailed as exc:
        code, body = 1, {"error": type(exc).__name__, "message": str(exc), "ids": [label(i) for i in exc.ids]}
    report: dict[str, Any] = {"tool_version": __version__, "input_hash": ld.hexdigest(), **body}
    json.dump(report, stdout, indent=2 if args.pretty else None, ensure_ascii=False, default=label)
    stdout.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
