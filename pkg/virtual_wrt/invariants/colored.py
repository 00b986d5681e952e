"""
Colored Jones values: cable each component and splice in a Jones-Wenzl projector.

A component of color a is replaced by its blackboard a-cable; the a parallel
copies are opened at the component's starting point and the projector T_a is
inserted there by linearity. The state sum of the cabled diagram is run once
with the cut ends left open, then closed against every planar term of the
projector product.
"""

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from virtual_wrt.algebra.poly import GENERIC, Context, RootParams
from virtual_wrt.algebra.tangle import jw
from virtual_wrt.diagram.codec import VirtualLinkDiagram, cable
from virtual_wrt.errors import DomainError
from virtual_wrt.invariants.bracket import (
    StateGraph,
    _orientation,
    connectivity_states,
    count_cycles,
    counts_value,
)


def check_colors(diagram: VirtualLinkDiagram, colors: Sequence[int], ctx: Context) -> List[int]:
    colors = [int(a) for a in colors]
    if len(colors) != len(diagram.components):
        raise DomainError(f"need {len(diagram.components)} colors, got {len(colors)}")
    for a in colors:
        if a < 0:
            raise DomainError(f"colors must be non-negative, got {a}")
        if isinstance(ctx, RootParams) and a > ctx.max_color:
            raise DomainError(f"color {a} exceeds r-2 = {ctx.max_color} at level r={ctx.r}")
    return colors


def splice_and_evaluate(diagram: VirtualLinkDiagram, colors: Sequence[int], ctx: Optional[Context] = None,
                        orientation: Optional[int] = None, budget: Optional[int] = None):
    """
    Unreduced colored bracket <K^a>.

    Returns a complex number at a root of unity and an element of Q(A) for the
    generic context. Color 0 deletes a component; the unknot of color a gives
    Delta_a.
    """
    ctx = ctx or GENERIC
    colors = check_colors(diagram, colors, ctx)
    orientation = _orientation(orientation)

    cabled = cable(diagram, colors)
    # copies of component i occupy a contiguous block of the cabled components
    first_copy: Dict[int, int] = {}
    offset = 0
    for i, a in enumerate(colors):
        first_copy[i] = offset
        offset += a
    spliced = [i for i, a in enumerate(colors) if a >= 2]
    cut = [first_copy[i] + k for i in spliced for k in range(colors[i])]

    graph, terminals = StateGraph.from_diagram(cabled, cut)
    states = connectivity_states(graph, orientation, budget)

    # per terminal pairing: sum of A^e d^loops over the states that end in it
    values = {key: _lift(counts_value(counter, ctx), ctx) for key, counter in states.items()}
    d = ctx.d
    free = d ** graph.free_loops

    factors: List[List[Tuple[object, List[Tuple[int, int]]]]] = []
    for i in spliced:
        a = colors[i]
        tops = [terminals[first_copy[i] + k][0] for k in range(a)]
        bottoms = [terminals[first_copy[i] + k][1] for k in range(a)]
        node = lambda p: tops[p] if p < a else bottoms[p - a]
        projector = jw(a, ctx)
        factors.append([
            (coeff, [(node(p), node(q)) for p, q in diagram_.pairs()])
            for diagram_, coeff in projector.terms.items()
        ])
    logger.debug(
        f"Colored bracket with colors {colors}: {cabled.crossing_count} cabled crossing(s), "
        f"{len(states)} terminal pairing(s), projector terms {[len(f) for f in factors]}"
    )

    total = ctx.zero
    for choice in itertools.product(*factors):
        coeff = ctx.one
        matching: List[Tuple[int, int]] = []
        for c, pairs in choice:
            coeff = coeff * c
            matching.extend(pairs)
        term = ctx.zero
        for key, value in values.items():
            term = term + value * d ** count_cycles(list(key) + matching)
        total = total + coeff * term
    return total * free


def _lift(value, ctx: Context):
    return value if isinstance(ctx, RootParams) else ctx.lift(value)
