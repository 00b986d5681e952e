"""
Bracket state sum for virtual link diagrams.

Every classical crossing has four endpoints: over-in, over-out, under-in,
under-out. The oriented smoothing joins over-in/under-out and under-in/over-out;
the unoriented smoothing joins over-in/under-in and over-out/under-out.
Virtual crossings are transparent, so arcs simply join consecutive passes of
the Gauss code. The alpha smoothing (weight A) is the oriented one when
``sign * orientation > 0``; orientation +1 makes the positive curl -A^3.
"""

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from virtual_wrt.algebra.poly import D_POLY, JonesPoly, LaurentPoly, RootParams
from virtual_wrt.config.settings import settings
from virtual_wrt.diagram.codec import VirtualLinkDiagram, writhe
from virtual_wrt.errors import BudgetExceededError

OVER_IN, OVER_OUT, UNDER_IN, UNDER_OUT = 0, 1, 2, 3
_SLOT = {("O", "in"): OVER_IN, ("O", "out"): OVER_OUT, ("U", "in"): UNDER_IN, ("U", "out"): UNDER_OUT}


@dataclass(frozen=True)
class SmoothingState:
    """One smoothing per crossing, in increasing crossing-id order: 'a' (alpha) or 'b' (beta)."""

    choices: Tuple[str, ...]

    @property
    def exponent(self) -> int:
        return sum(1 if c == "a" else -1 for c in self.choices)


class StateGraph:
    """
    Crossing endpoints plus terminal nodes joined by fixed arc edges.

    Every node carries exactly one arc edge, so the arcs form a perfect
    matching; smoothings add the remaining two edges per crossing. Terminals
    mark where a component was opened for a projector splice.
    """

    def __init__(self, signs: Sequence[int]):
        self.signs = list(signs)
        self.node_count = 4 * len(self.signs)
        self.edges: List[Tuple[int, int]] = []
        self.terminals: List[int] = []
        self.free_loops = 0

    def new_terminal(self) -> int:
        self.node_count += 1
        self.terminals.append(self.node_count - 1)
        return self.node_count - 1

    def add_edge(self, a: int, b: int) -> None:
        self.edges.append((a, b))

    @property
    def crossing_count(self) -> int:
        return len(self.signs)

    def arc_partner(self) -> List[int]:
        partner = [-1] * self.node_count
        for a, b in self.edges:
            if partner[a] != -1 or partner[b] != -1:
                raise ValueError("arc edges must form a perfect matching")
            partner[a], partner[b] = b, a
        return partner

    @classmethod
    def from_diagram(
        cls, diagram: VirtualLinkDiagram, cut: Iterable[int] = ()
    ) -> Tuple["StateGraph", Dict[int, Tuple[int, int]]]:
        """
        Build the graph; each component listed in ``cut`` is opened at its
        starting point and gets a (top, bottom) terminal pair: top is the
        incoming end, bottom the outgoing start.
        """
        index = {cid: i for i, cid in enumerate(diagram.crossing_ids)}
        signs = diagram.signs()
        graph = cls([signs[cid] for cid in diagram.crossing_ids])
        cut = set(cut)
        terminals: Dict[int, Tuple[int, int]] = {}

        def node(ref, end: str) -> int:
            return 4 * index[ref.id] + _SLOT[(ref.role, end)]

        for ci, comp in enumerate(diagram.components):
            if ci in cut:
                top, bottom = graph.new_terminal(), graph.new_terminal()
                terminals[ci] = (top, bottom)
                if not comp:
                    graph.add_edge(bottom, top)
                    continue
                for prev, nxt in zip(comp, comp[1:]):
                    graph.add_edge(node(prev, "out"), node(nxt, "in"))
                graph.add_edge(node(comp[-1], "out"), top)
                graph.add_edge(bottom, node(comp[0], "in"))
                continue
            if not comp:
                graph.free_loops += 1
                continue
            for k, ref in enumerate(comp):
                graph.add_edge(node(ref, "out"), node(comp[(k + 1) % len(comp)], "in"))
        return graph, terminals


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _check_budget(count: int, budget: Optional[int]) -> None:
    budget = settings.crossing_budget if budget is None else budget
    if count > budget:
        logger.error(f"State sum over {count} crossings exceeds budget {budget}")
        raise BudgetExceededError(
            f"{count} classical crossings exceed the crossing budget {budget} (set VWRT_CROSSING_BUDGET to raise it)"
        )


def _smoothing_pairs(i: int, oriented: bool) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    n = 4 * i
    if oriented:
        return (n + OVER_IN, n + UNDER_OUT), (n + UNDER_IN, n + OVER_OUT)
    return (n + OVER_IN, n + UNDER_IN), (n + OVER_OUT, n + UNDER_OUT)


Pairing = Tuple[Tuple[int, int], ...]


def connectivity_states(graph: StateGraph, orientation: int = 1,
                        budget: Optional[int] = None) -> Dict[Pairing, Counter]:
    """
    Sum over all 2^c smoothings, crossing by crossing.

    The running state is the pairing of frontier nodes (unprocessed nodes
    whose arc partner is already processed) by the paths through processed
    crossings; each state carries a Counter of (A-exponent, closed loops).
    The result is keyed by the final pairing of the terminals.
    """
    _check_budget(graph.crossing_count, budget)
    arc = graph.arc_partner()
    oriented_is_alpha = [s * orientation > 0 for s in graph.signs]

    states: Dict[Pairing, Counter] = {(): Counter({(0, 0): 1})}
    for i in range(graph.crossing_count):
        ends = tuple(range(4 * i, 4 * i + 4))
        ends_set = set(ends)
        next_states: Dict[Pairing, Counter] = {}
        for key, counter in states.items():
            conn: Dict[int, int] = {}
            for x, y in key:
                conn[x], conn[y] = y, x
            link = {e: conn.get(e, arc[e]) for e in ends}
            base = {x: y for x, y in conn.items() if x not in ends_set and y not in ends_set}
            for oriented in (True, False):
                step = 1 if oriented == oriented_is_alpha[i] else -1
                smooth: Dict[int, int] = {}
                for a, b in _smoothing_pairs(i, oriented):
                    smooth[a], smooth[b] = b, a
                visited = set()
                new_conn = dict(base)
                for e in ends:
                    if e in visited or link[e] in ends_set:
                        continue
                    x, cur = link[e], e
                    while True:
                        visited.add(cur)
                        nxt = smooth[cur]
                        visited.add(nxt)
                        y = link[nxt]
                        if y not in ends_set:
                            break
                        cur = y
                    new_conn[x], new_conn[y] = y, x
                loops = 0
                for e in ends:
                    if e in visited:
                        continue
                    loops += 1
                    cur = e
                    while cur not in visited:
                        visited.add(cur)
                        nxt = smooth[cur]
                        visited.add(nxt)
                        cur = link[nxt]
                new_key = tuple(sorted((x, y) for x, y in new_conn.items() if x < y))
                bucket = next_states.setdefault(new_key, Counter())
                for (e_, l_), n in counter.items():
                    bucket[(e_ + step, l_ + loops)] += n
        states = next_states
    logger.debug(f"State sum over {graph.crossing_count} crossing(s): {len(states)} terminal pairing(s)")

    terminal_arcs = tuple((t, arc[t]) for t in graph.terminals if arc[t] in graph.terminals and t < arc[t])
    if terminal_arcs:
        states = {tuple(sorted(key + terminal_arcs)): c for key, c in states.items()}
    return states


def count_cycles(pairs: Iterable[Tuple[int, int]]) -> int:
    """Connected pieces of the graph whose edges are ``pairs``."""
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pieces = 0
    for a, b in pairs:
        for v in (a, b):
            if v not in parent:
                parent[v] = v
                pieces += 1
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            pieces -= 1
    return pieces


def close_states(states: Dict[Pairing, Counter], matching: Iterable[Tuple[int, int]] = (),
                 free_loops: int = 0) -> Counter:
    """Join terminals by ``matching`` and fold the extra loops into the counts."""
    matching = list(matching)
    total: Counter = Counter()
    for key, counter in states.items():
        extra = free_loops + count_cycles(list(key) + matching)
        for (e, l), n in counter.items():
            total[(e, l + extra)] += n
    return total


def state_counts(graph: StateGraph, orientation: int = 1, budget: Optional[int] = None) -> Counter:
    """Counter of (A-exponent, loop count) over all 2^c states of a graph without terminals."""
    return close_states(connectivity_states(graph, orientation, budget), free_loops=graph.free_loops)


def counts_value(counts: Counter, ctx=None, shift: int = 0):
    """
    Sum of A^e d^(loops + shift), computed exactly over the integers.

    At a root of unity the exact polynomial is reduced before it is evaluated,
    since the individual state terms are far larger than their sum.
    """
    by_loops: Dict[int, Dict[int, int]] = {}
    for (e, loops), n in counts.items():
        terms = by_loops.setdefault(loops + shift, {})
        terms[e] = terms.get(e, 0) + n
    total = LaurentPoly()
    for k, terms in by_loops.items():
        total = total + LaurentPoly(terms) * _d_power(k)
    return ctx.lift(total) if isinstance(ctx, RootParams) else total


@lru_cache(maxsize=None)
def _d_power(k: int) -> LaurentPoly:
    return D_POLY ** k


def _orientation(orientation: Optional[int]) -> int:
    if orientation is not None:
        return orientation
    from virtual_wrt.invariants.conventions import current_conventions
    return current_conventions().bracket_orientation


def loops(diagram: VirtualLinkDiagram, state: SmoothingState, orientation: Optional[int] = None) -> int:
    """Closed curves left after smoothing every classical crossing as ``state`` says."""
    orientation = _orientation(orientation)
    if len(state.choices) != diagram.crossing_count:
        raise ValueError(f"state has {len(state.choices)} choices for {diagram.crossing_count} crossings")
    graph, _ = StateGraph.from_diagram(diagram)
    parent = list(range(graph.node_count))
    for a, b in graph.edges:
        parent[_find(parent, a)] = _find(parent, b)
    for i, choice in enumerate(state.choices):
        alpha_oriented = graph.signs[i] * orientation > 0
        oriented = (choice == "a") == alpha_oriented
        for a, b in _smoothing_pairs(i, oriented):
            parent[_find(parent, a)] = _find(parent, b)
    roots = {_find(parent, x) for x in range(graph.node_count)}
    return len(roots) + graph.free_loops


def bracket_unreduced(diagram: VirtualLinkDiagram, ctx=None, orientation: Optional[int] = None,
                      budget: Optional[int] = None):
    """Sum of A^c(s) d^|s|; the empty diagram gives 1."""
    graph, _ = StateGraph.from_diagram(diagram)
    return counts_value(state_counts(graph, _orientation(orientation), budget), ctx)


def bracket_reduced(diagram: VirtualLinkDiagram, ctx=None, orientation: Optional[int] = None,
                    budget: Optional[int] = None):
    """Sum of A^c(s) d^(|s|-1); unknot and empty diagram give 1."""
    graph, _ = StateGraph.from_diagram(diagram)
    if graph.node_count == 0 and graph.free_loops == 0:
        return 1 + 0j if isinstance(ctx, RootParams) else LaurentPoly.constant(1)
    return counts_value(state_counts(graph, _orientation(orientation), budget), ctx, shift=-1)


def f_poly(diagram: VirtualLinkDiagram, orientation: Optional[int] = None) -> LaurentPoly:
    """Writhe-normalized bracket (-A)^(-3w) <K>, invariant under all Reidemeister moves."""
    orientation = _orientation(orientation)
    w = writhe(diagram) * orientation
    norm = LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1)
    return norm * bracket_reduced(diagram, orientation=orientation)


def jones(diagram: VirtualLinkDiagram, orientation: Optional[int] = None) -> JonesPoly:
    """f_poly under A = t^(-1/4)."""
    return JonesPoly.from_bracket_variable(f_poly(diagram, orientation))
