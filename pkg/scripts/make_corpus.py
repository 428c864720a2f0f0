"""Write the fixture categories, classes, diagrams and expansions as JSON files."""

import argparse
import json
import os

from koenig_ramsey.cli import category_document, diagram_document, label, structclass_document
from koenig_ramsey.corpus import (
    bare_sets,
    graphs,
    linear_orders,
    matchings,
    order_forgetting,
    ordered_graphs,
    point,
    span,
    standard_corpus,
)
from koenig_ramsey.expansion import diagram_to_expansion, doubled_expansion, identity_expansion
from koenig_ramsey.ramsey import confluence_counterexample_diagram
from koenig_ramsey.relstruct import structures_category


def functor_document(F):
    return {
        "format_version": 1,
        "kind": "functor",
        "source": category_document(F.source),
        "target": category_document(F.target),
        "objects": {label(k): label(v) for k, v in F.objects.items()},
        "arrows": {label(k): label(v) for k, v in F.arrows.items()},
    }


def write(outdir, name, doc):
    path = os.path.join(outdir, name)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, ensure_ascii=False)
        fh.write("\n")
    return path


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="data")
    args = ap.parse_args(argv)
    os.makedirs(args.outdir, exist_ok=True)
    written = []
    for entry in standard_corpus():
        written.append(write(args.outdir, f"{entry.name}.cat.json", category_document(entry.category)))
    for n in (3, 5, 6):
        cat = structures_category(linear_orders(n))
        written.append(write(args.outdir, f"lorders{n}.cat.json", category_document(cat)))
    written.append(write(args.outdir, "span.diag.json", diagram_document(confluence_counterexample_diagram(span(), "A", "B"))))
    classes = {
        "orders3": linear_orders(3, full=True),
        "orders4": linear_orders(4),
        "sets2": bare_sets(2, include_empty=True),
        "sets3": bare_sets(3),
        "matchings3": matchings(3),
        "graphs2": graphs(2),
        "ordered_graphs2": ordered_graphs(2),
    }
    for name, cls in classes.items():
        written.append(write(args.outdir, f"{name}.class.json", structclass_document(cls)))
    expansions = {
        "order_forgetting3": order_forgetting(3),
        "doubled_point": doubled_expansion(point()),
        "identity_span": identity_expansion(span()),
        "span_expansion": diagram_to_expansion(confluence_counterexample_diagram(span(), "A", "B")),
    }
    for name, pi in expansions.items():
        written.append(write(args.outdir, f"{name}.functor.json", functor_document(pi.functor)))
    for p in written:
        print(p)


if __name__ == "__main__":
    main()
