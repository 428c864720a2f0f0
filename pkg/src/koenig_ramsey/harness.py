"""Side-by-side check of the two descriptions of "every diagram is solvable".

For a category this computes confluence and the Ramsey verdict, then looks
for evidence on the diagram side: exhaustive and sampled diagrams when both
properties hold, and the matching unsolvable diagram when one fails.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .fincat import FinCategory, is_confluent
from .ramsey import bad_coloring_diagram, confluence_counterexample_diagram, is_ramsey
from .setdiag import enumerate_diagrams, random_diagram, solve

EXHAUSTIVE_ARROW_LIMIT = 6


@dataclass
class HarnessResult:
    confluent: bool
    ramsey: bool
    diagrams_checked: int = 0
    unsolved: int = 0
    obstruction: str | None = None  # "confluence" or "ramsey"
    obstruction_pair: list | None = None
    obstruction_nonempty: bool | None = None
    obstruction_solvable: bool | None = None
    consistent: bool = False
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def check_category(
    cat: FinCategory,
    *,
    colors: int = 2,
    max_size: int = 2,
    samples: int = 200,
    sample_size: int = 3,
    rng: random.Random | None = None,
) -> HarnessResult:
    rng = rng or random.Random(0)
    conf = is_confluent(cat)
    ram = is_ramsey(cat, colors)
    res = HarnessResult(conf.confluent, ram.ramsey)
    if conf and ram:
        if len(cat.arrows) <= EXHAUSTIVE_ARROW_LIMIT:
            for d in enumerate_diagrams(cat, max_size):
                res.diagrams_checked += 1
                res.unsolved += solve(d) is None
        else:
            res.notes.append(f"more than {EXHAUSTIVE_ARROW_LIMIT} arrows: sampled diagrams only")
        for _ in range(samples):
            d = random_diagram(cat, sample_size, rng)
            res.diagrams_checked += 1
            res.unsolved += solve(d) is None
        res.consistent = res.unsolved == 0
        return res
    if not conf:
        a, b = conf.counterexample
        d = confluence_counterexample_diagram(cat, a, b)
        res.obstruction, res.obstruction_pair = "confluence", [a, b]
    else:
        a, b = next(iter(ram.failures))
        d = bad_coloring_diagram(cat, a, b, colors)
        res.obstruction, res.obstruction_pair = "ramsey", [a, b]
    res.obstruction_nonempty = all(d.carrier[o] for o in cat.objects)
    res.obstruction_solvable = solve(d) is not None
    res.diagrams_checked = 1
    res.consistent = res.obstruction_nonempty and not res.obstruction_solvable
    return res
