"""
Exhaustive search for the knot K used in the worked WRT examples.

Candidates are all one-component signed Gauss codes with at most three
classical crossings. A candidate K is kept when its fundamental group
abelianizes to Z, its 3-manifold group abelianizes to Z/2, its state-sum Z at
r = 3 is 0 and K with one extra positive curl has Z = 0.707107i at r = 3.
For each survivor the state-sum Z at r = 3, 4 is printed next to the
printed values.

    python scripts/derive_example_knots.py
"""

import itertools
from typing import Iterator, List, Tuple

from rich.console import Console
from rich.table import Table

from virtual_wrt.algebra.poly import close
from virtual_wrt.cli.main import format_complex
from virtual_wrt.diagram.codec import parse_diagram, serialize, writhe
from virtual_wrt.invariants.conventions import PRINTED_Z
from virtual_wrt.invariants.groups import abelianization, three_manifold_group, wirtinger
from virtual_wrt.invariants.wrt import normalized_wrt

MAX_CROSSINGS = 3

console = Console()


def _label_orders(n: int) -> Iterator[Tuple[int, ...]]:
    # each label twice, labels introduced in increasing order
    def extend(prefix: List[int], counts: List[int]):
        if len(prefix) == 2 * n:
            yield tuple(prefix)
            return
        introduced = sum(1 for c in counts if c)
        for cid in range(1, min(introduced + 1, n) + 1):
            if counts[cid - 1] < 2:
                counts[cid - 1] += 1
                yield from extend(prefix + [cid], counts)
                counts[cid - 1] -= 1

    yield from extend([], [0] * n)


def candidate_codes(max_crossings: int = MAX_CROSSINGS) -> Iterator[str]:
    seen = set()
    for n in range(max_crossings + 1):
        for labels in _label_orders(n):
            for over_first in itertools.product((True, False), repeat=n):
                for signs in itertools.product("+-", repeat=n):
                    first_seen = set()
                    parts = []
                    for cid in labels:
                        first = cid not in first_seen
                        first_seen.add(cid)
                        role = "O" if first == over_first[cid - 1] else "U"
                        parts.append(f"{role}{cid}{signs[cid - 1]}")
                    code = serialize(parse_diagram("".join(parts)))
                    if code not in seen:
                        seen.add(code)
                        yield code


def main():
    table = Table(title=f"Candidates with at most {MAX_CROSSINGS} crossings")
    for col in ("K", "writhe", "Z_K(3)", "Z_K(4)", "Z_Khat(3)", "Z_Khat(4)"):
        table.add_column(col)

    for code in candidate_codes():
        knot = parse_diagram(code)
        if str(abelianization(wirtinger(knot))) != "Z":
            continue
        if str(abelianization(three_manifold_group(knot))) != "Z/2":
            continue
        if not close(normalized_wrt(knot, 3).normalized, PRINTED_Z[("K", 3)], 1e-4):
            continue
        extra = knot.crossing_count + 1
        curled = parse_diagram(f"{code}O{extra}+U{extra}+")
        if not close(normalized_wrt(curled, 3).normalized, PRINTED_Z[("Khat", 3)], 1e-4):
            continue
        values = [normalized_wrt(d, r).normalized for d in (knot, curled) for r in (3, 4)]
        table.add_row(code, str(writhe(knot)), *(format_complex(v) for v in values))

    console.print(table)
    printed = [PRINTED_Z[(v, r)] for v in ("K", "Khat") for r in (3, 4)]
    console.print("printed: " + ", ".join(format_complex(z) for z in printed))


if __name__ == "__main__":
    main()
