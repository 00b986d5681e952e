"""
Fundamental group and 3-manifold group of a virtual link diagram.

An arc runs from one underpass to the next along its component, passing
through over-crossings and virtual crossings. Each arc is a generator; each
classical crossing contributes one conjugation relator. The 3-manifold group
adds the longitude of every component as a relator.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from loguru import logger
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from virtual_wrt.diagram.codec import VirtualLinkDiagram
from virtual_wrt.errors import DomainError

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def _format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in word)


def reduce_word(word: Sequence[Letter]) -> Word:
    """Free reduction: cancel adjacent g^e g^-e."""
    out: List[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g:
            total = out[-1][1] + e
            out.pop()
            if total:
                out.append((g, total))
        else:
            out.append((g, e))
    return tuple(out)


def invert(word: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


@dataclass
class GroupPresentation:
    generators: List[str]
    relators: List[Word] = field(default_factory=list)

    def __post_init__(self):
        known = set(self.generators)
        for rel in self.relators:
            for g, _ in rel:
                if g not in known:
                    raise ValueError(f"relator uses undeclared generator {g!r}")

    def with_relators(self, extra: Sequence[Word]) -> "GroupPresentation":
        return GroupPresentation(list(self.generators), list(self.relators) + list(extra))

    def exponent_matrix(self) -> List[List[int]]:
        index = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for rel in self.relators:
            row = [0] * len(self.generators)
            for g, e in rel:
                row[index[g]] += e
            rows.append(row)
        return rows

    def to_dict(self) -> Dict[str, object]:
        return {
            "generators": list(self.generators),
            "relators": [_format_word(rel) for rel in self.relators],
        }

    def __str__(self):
        gens = ", ".join(self.generators)
        rels = ", ".join(_format_word(rel) for rel in self.relators)
        return f"< {gens} | {rels} >"


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    factors: Tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.factors

    def __str__(self):
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "1"


# --- arcs ---

@dataclass(frozen=True)
class ArcData:
    """Generator names plus, for every classical crossing, its over arc and incoming/outgoing under arcs."""

    names: Tuple[str, ...]
    over: Dict[int, str]
    under_in: Dict[int, str]
    under_out: Dict[int, str]


def arcs(diagram: VirtualLinkDiagram) -> ArcData:
    names: List[str] = []
    over: Dict[int, str] = {}
    under_in: Dict[int, str] = {}
    under_out: Dict[int, str] = {}

    for comp in diagram.components:
        unders = [pos for pos, ref in enumerate(comp) if ref.role == "U"]
        if not unders:
            name = f"x{len(names) + 1}"
            names.append(name)
            for ref in comp:
                over[ref.id] = name
            continue
        comp_names = [f"x{len(names) + k + 1}" for k in range(len(unders))]
        names.extend(comp_names)
        # arc k starts at underpass unders[k] and ends at unders[k + 1]
        n = len(comp)
        for k, start in enumerate(unders):
            name = comp_names[k]
            under_out[comp[start].id] = name
            pos = (start + 1) % n
            while comp[pos].role != "U":
                over[comp[pos].id] = name
                pos = (pos + 1) % n
            under_in[comp[pos].id] = name
    return ArcData(tuple(names), over, under_in, under_out)


def wirtinger(diagram: VirtualLinkDiagram) -> GroupPresentation:
    """
    One generator per arc; crossing c with over arc o, incoming under arc a
    and outgoing under arc b gives o a o^-1 b^-1 when positive and
    o^-1 a o b^-1 when negative.
    """
    data = arcs(diagram)
    signs = diagram.signs()
    relators: List[Word] = []
    for cid in diagram.crossing_ids:
        o, a, b = data.over[cid], data.under_in[cid], data.under_out[cid]
        s = signs[cid]
        relators.append(reduce_word(((o, s), (a, 1), (o, -s), (b, -1))))
    presentation = GroupPresentation(list(data.names), relators)
    logger.debug(f"Wirtinger presentation: {len(data.names)} generator(s), {len(relators)} relator(s)")
    return presentation


def longitude(diagram: VirtualLinkDiagram, component: int) -> Word:
    """Over-arc labels met at each underpass of the component, with the crossing sign as exponent."""
    if not 0 <= component < len(diagram.components):
        raise IndexError(f"component index {component} out of range")
    data = arcs(diagram)
    word = [(data.over[ref.id], ref.sign) for ref in diagram.components[component] if ref.role == "U"]
    return tuple(word)


def three_manifold_group(diagram: VirtualLinkDiagram) -> GroupPresentation:
    base = wirtinger(diagram)
    longitudes = [reduce_word(longitude(diagram, i)) for i in range(len(diagram.components))]
    return base.with_relators(longitudes)


def abelianization(presentation: GroupPresentation) -> AbelianInvariants:
    """Invariant factors of the relator exponent matrix (Smith normal form)."""
    ngen = len(presentation.generators)
    rows = presentation.exponent_matrix()
    if not rows or ngen == 0:
        return AbelianInvariants(free_rank=ngen)
    factors = [abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ)]
    rank = sum(1 for f in factors if f != 0)
    torsion = tuple(sorted(f for f in factors if f > 1))
    return AbelianInvariants(free_rank=ngen - rank, factors=torsion)


def count_homomorphisms(presentation: GroupPresentation, n: int) -> int:
    """Homomorphisms into the symmetric group S_n, by backtracking over generator images."""
    if not 1 <= n <= 4:
        raise DomainError(f"homomorphism counting supports S_1..S_4, got S_{n}")
    elements = list(itertools.permutations(range(n)))
    identity = tuple(range(n))

    def compose(p, q):
        # apply q, then p
        return tuple(p[q[i]] for i in range(n))

    def inverse(p):
        out = [0] * n
        for i, x in enumerate(p):
            out[x] = i
        return tuple(out)

    gens = presentation.generators
    position = {g: i for i, g in enumerate(gens)}
    # check each relator as soon as its last generator is assigned
    ready: Dict[int, List[Word]] = {}
    for rel in presentation.relators:
        if not rel:
            continue
        last = max(position[g] for g, _ in rel)
        ready.setdefault(last, []).append(rel)

    images: List[Tuple[int, ...]] = []

    def holds(rel: Word) -> bool:
        value = identity
        for g, e in rel:
            p = images[position[g]]
            step = p if e > 0 else inverse(p)
            for _ in range(abs(e)):
                value = compose(value, step)
        return value == identity

    def search(k: int) -> int:
        if k == len(gens):
            return 1
        count = 0
        for p in elements:
            images.append(p)
            if all(holds(rel) for rel in ready.get(k, [])):
                count += search(k + 1)
            images.pop()
        return count

    return search(0)


def handle_slide_longitude(diagram: VirtualLinkDiagram, source: int, target: int,
                           sign: int = 1) -> Word:
    """
    Longitude of ``source`` after it is slid over ``target``: the old
    longitude followed by the target's longitude (inverted for a band of the
    opposite orientation).
    """
    if source == target:
        raise ValueError("a component cannot slide over itself")
    extra = longitude(diagram, target)
    return reduce_word(longitude(diagram, source) + (extra if sign > 0 else invert(extra)))

