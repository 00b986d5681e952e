"""
Rewriting moves on signed Gauss codes.

Positions are gaps: position p on a component sits just before entry p (and,
cyclically, after the last entry). Virtual crossings are implicit, so any
two gaps can be brought next to each other by detour moves and R2 insertions
may join arbitrary gaps. Handle-slide bands may not: a band has to run inside
one face of the cabled diagram's ribbon surface, or join two pieces of the
diagram that share no classical crossing.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from virtual_wrt.diagram.codec import (
    CrossingRef,
    LinkingMatrix,
    VirtualLinkDiagram,
    cable,
    disjoint_union,
    parse_diagram,
    relabel,
)
from virtual_wrt.errors import MoveError

KINDS = ("R1+", "R1-", "R2", "R3", "kirby-add+", "kirby-add-", "kirby-delete", "handle-slide")
FRAMED_KINDS = ("R2", "R3")
KIRBY_KINDS = ("kirby-add+", "kirby-add-", "kirby-delete", "handle-slide")

Entry = Tuple[int, str]  # (crossing id, role)


@dataclass(frozen=True)
class MoveSite:
    """
    Where a move applies.

    R1 and R2 sites insert new crossings at gaps unless ``inverse`` is set, in
    which case ``crossings`` names the kink or bigon to remove. R3 sites name
    the triangle ``(a, b, c)``: a joins top and middle strand, b top and
    bottom, c middle and bottom. A handle slide bands gap ``position`` of
    ``component`` to gap ``other_position`` of a parallel copy of
    ``other_component``; ``sign`` -1 reverses the copy.
    """

    kind: str
    component: Optional[int] = None
    position: int = 0
    other_component: Optional[int] = None
    other_position: int = 0
    crossings: Tuple[int, ...] = ()
    sign: int = 1
    same_order: bool = True
    inverse: bool = False

    def __str__(self):
        parts = [self.kind + (" (remove)" if self.inverse else "")]
        if self.crossings:
            parts.append(f"crossings={list(self.crossings)}")
        if self.component is not None and not self.crossings:
            parts.append(f"at {self.component}:{self.position}")
        if self.other_component is not None:
            parts.append(f"with {self.other_component}:{self.other_position}")
        if self.kind in ("R2", "handle-slide") and not self.inverse:
            parts.append(f"sign={self.sign:+d}")
        return " ".join(parts)


# --- helpers ---

def _fresh_id(diagram: VirtualLinkDiagram, k: int = 0) -> int:
    return max(diagram.crossing_ids, default=0) + 1 + k


def _components(diagram: VirtualLinkDiagram) -> List[List[CrossingRef]]:
    return [list(c) for c in diagram.components]


def _gaps(comp: Sequence[CrossingRef]) -> range:
    return range(max(1, len(comp)))


def _check_gap(diagram: VirtualLinkDiagram, component: Optional[int], position: int) -> None:
    if component is None or not 0 <= component < len(diagram.components):
        raise MoveError(f"component {component} does not exist")
    if position not in _gaps(diagram.components[component]):
        raise MoveError(f"gap {position} does not exist on component {component}")


def _adjacent(where: Dict[Entry, Tuple[int, int]], diagram: VirtualLinkDiagram,
              first: Entry, second: Entry) -> Optional[bool]:
    """True if ``second`` directly follows ``first``, False if it directly precedes it, None otherwise."""
    c1, p1 = where[first]
    c2, p2 = where[second]
    if c1 != c2:
        return None
    n = len(diagram.components[c1])
    if n < 3:
        return None
    if p2 == (p1 + 1) % n:
        return True
    if p1 == (p2 + 1) % n:
        return False
    return None


def _without(diagram: VirtualLinkDiagram, ids: Sequence[int]) -> VirtualLinkDiagram:
    drop = set(ids)
    comps = [tuple(ref for ref in comp if ref.id not in drop) for comp in diagram.components]
    return VirtualLinkDiagram(tuple(comps))


# --- R1 ---

def _r1_add(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    _check_gap(diagram, site.component, site.position)
    sign = 1 if site.kind == "R1+" else -1
    cid = _fresh_id(diagram)
    comps = _components(diagram)
    comp = comps[site.component]
    comp[site.position:site.position] = [CrossingRef(cid, "O", sign), CrossingRef(cid, "U", sign)]
    return VirtualLinkDiagram(tuple(tuple(c) for c in comps))


def _kinks(diagram: VirtualLinkDiagram) -> List[int]:
    out = []
    for comp in diagram.components:
        n = len(comp)
        for p in range(n):
            nxt = comp[(p + 1) % n]
            if n >= 2 and comp[p].id == nxt.id and comp[p].role != nxt.role and (n > 2 or p == 0):
                out.append(comp[p].id)
    return out


def _r1_remove(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    (cid,) = site.crossings
    if cid not in _kinks(diagram):
        raise MoveError(f"crossing {cid} is not a removable kink")
    sign = diagram.signs()[cid]
    if (sign > 0) != (site.kind == "R1+"):
        raise MoveError(f"kink {cid} has sign {sign:+d}, not {site.kind}")
    return _without(diagram, [cid])


# --- R2 ---

def _r2_add(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    _check_gap(diagram, site.component, site.position)
    _check_gap(diagram, site.other_component, site.other_position)
    a, b = _fresh_id(diagram), _fresh_id(diagram, 1)
    s = 1 if site.sign > 0 else -1
    over = [CrossingRef(a, "O", s), CrossingRef(b, "O", -s)]
    under = [CrossingRef(a, "U", s), CrossingRef(b, "U", -s)]
    if not site.same_order:
        under.reverse()

    comps = _components(diagram)
    c1, p1, c2, p2 = site.component, site.position, site.other_component, site.other_position
    if c1 != c2:
        comps[c1][p1:p1] = over
        comps[c2][p2:p2] = under
    elif p1 == p2:
        comps[c1][p1:p1] = over + under
    elif p1 < p2:
        comps[c1][p2:p2] = under
        comps[c1][p1:p1] = over
    else:
        comps[c1][p1:p1] = over
        comps[c1][p2:p2] = under
    return VirtualLinkDiagram(tuple(tuple(c) for c in comps))


def _bigons(diagram: VirtualLinkDiagram) -> List[Tuple[int, int]]:
    where = diagram.locate()
    signs = diagram.signs()
    out = []
    ids = diagram.crossing_ids
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if signs[a] == signs[b]:
                continue
            if _pair_adjacent(diagram, where, (a, "O"), (b, "O")) and \
                    _pair_adjacent(diagram, where, (a, "U"), (b, "U")):
                out.append((a, b))
    return out


def _pair_adjacent(diagram, where, first: Entry, second: Entry) -> bool:
    c1, p1 = where[first]
    c2, p2 = where[second]
    if c1 != c2:
        return False
    n = len(diagram.components[c1])
    return p2 == (p1 + 1) % n or p1 == (p2 + 1) % n


def _r2_remove(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    pair = tuple(sorted(site.crossings))
    if pair not in _bigons(diagram):
        raise MoveError(f"crossings {list(site.crossings)} do not bound a removable bigon")
    return _without(diagram, pair)


# --- R3 ---

def _r3_valid(diagram: VirtualLinkDiagram, a: int, b: int, c: int) -> bool:
    if len({a, b, c}) != 3:
        return False
    where = diagram.locate()
    signs = diagram.signs()
    top = _adjacent(where, diagram, (a, "O"), (b, "O"))
    middle = _adjacent(where, diagram, (a, "U"), (c, "O"))
    bottom = _adjacent(where, diagram, (b, "U"), (c, "U"))
    if top is None or middle is None or bottom is None:
        return False
    e_top, e_mid, e_bot = (1 if x else -1 for x in (top, middle, bottom))
    return signs[b] == signs[a] * e_mid * e_bot and signs[c] == signs[a] * e_top * e_bot


def _triangles(diagram: VirtualLinkDiagram) -> List[Tuple[int, int, int]]:
    ids = diagram.crossing_ids
    return [(a, b, c) for a in ids for b in ids for c in ids if _r3_valid(diagram, a, b, c)]


def _r3(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    if len(site.crossings) != 3 or not _r3_valid(diagram, *site.crossings):
        raise MoveError(f"crossings {list(site.crossings)} do not form an R3 triangle")
    a, b, c = site.crossings
    where = diagram.locate()
    comps = _components(diagram)
    for first, second in (((a, "O"), (b, "O")), ((a, "U"), (c, "O")), ((b, "U"), (c, "U"))):
        (ci, pi), (_, pj) = where[first], where[second]
        comps[ci][pi], comps[ci][pj] = comps[ci][pj], comps[ci][pi]
    return VirtualLinkDiagram(tuple(tuple(x) for x in comps))


# --- Kirby moves ---

def _kirby_add(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    unknot = parse_diagram("O1+U1+" if site.kind == "kirby-add+" else "O1-U1-")
    return disjoint_union(diagram, unknot)


def _framed_unknots(diagram: VirtualLinkDiagram) -> List[int]:
    return [
        i for i, comp in enumerate(diagram.components)
        if len(comp) == 2 and comp[0].id == comp[1].id
    ]


def _kirby_delete(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    if site.component not in _framed_unknots(diagram):
        raise MoveError(f"component {site.component} is not an isolated +-1-framed unknot")
    comps = [c for i, c in enumerate(diagram.components) if i != site.component]
    return VirtualLinkDiagram(tuple(comps))


def _block_start(diagram: VirtualLinkDiagram, counts: Sequence[int], component: int, gap: int) -> int:
    """Position in the cabled component of the image of ``gap``."""
    where = diagram.locate()
    start = 0
    for ref in diagram.components[component][:gap]:
        other_role = "U" if ref.role == "O" else "O"
        start += counts[where[(ref.id, other_role)][0]]
    return start


Dart = Tuple[int, int, bool]  # (component, gap, traversed along the orientation)

# counterclockwise order of (role, end) around a crossing, over strand outgoing first
_ROTATION = {
    1: (("O", "out"), ("U", "out"), ("O", "in"), ("U", "in")),
    -1: (("O", "out"), ("U", "in"), ("O", "in"), ("U", "out")),
}


def _next_dart(diagram: VirtualLinkDiagram, where: Dict[Entry, Tuple[int, int]],
               signs: Dict[int, int], dart: Dart) -> Dart:
    ci, gap, forward = dart
    comp = diagram.components[ci]
    ref = comp[gap % len(comp)] if forward else comp[(gap - 1) % len(comp)]
    rotation = _ROTATION[signs[ref.id]]
    k = rotation.index((ref.role, "in" if forward else "out"))
    role, end = rotation[(k - 1) % 4]
    cj, pj = where[(ref.id, role)]
    if end == "out":
        return cj, (pj + 1) % len(diagram.components[cj]), True
    return cj, pj, False


def ribbon_faces(diagram: VirtualLinkDiagram) -> Dict[Tuple[int, int, str], int]:
    """
    Faces of the diagram drawn on its ribbon surface.

    Every side of every gap is keyed as ``(component, gap, "L" | "R")`` relative
    to the orientation and mapped to a face id. Faces are traced by keeping the
    face on the left and turning clockwise at each classical crossing, so
    virtual crossings never separate two sides.
    """
    where = diagram.locate()
    signs = diagram.signs()
    face: Dict[Tuple[int, int, str], int] = {}
    count = 0
    for ci, comp in enumerate(diagram.components):
        for gap in _gaps(comp):
            for forward in (True, False):
                key = (ci, gap, "L" if forward else "R")
                if key in face:
                    continue
                if not comp:
                    face[key] = count
                    count += 1
                    continue
                dart: Dart = (ci, gap, forward)
                while (dart[0], dart[1], "L" if dart[2] else "R") not in face:
                    face[(dart[0], dart[1], "L" if dart[2] else "R")] = count
                    dart = _next_dart(diagram, where, signs, dart)
                count += 1
    return face


def _linked_pieces(diagram: VirtualLinkDiagram) -> List[int]:
    """Component -> representative, joining components that share a classical crossing."""
    parent = list(range(len(diagram.components)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    where = diagram.locate()
    for cid in diagram.crossing_ids:
        a, b = find(where[(cid, "O")][0]), find(where[(cid, "U")][0])
        parent[a] = b
    return [find(i) for i in range(len(diagram.components))]


def _slide_frame(diagram: VirtualLinkDiagram, target: int) -> Tuple[VirtualLinkDiagram, List[int], List[int]]:
    counts = [2 if i == target else 1 for i in range(len(diagram.components))]
    first: List[int] = []
    offset = 0
    for n in counts:
        first.append(offset)
        offset += n
    return cable(diagram, counts), counts, first


def legal_slides(diagram: VirtualLinkDiagram, source: int, target: int) -> Set[Tuple[int, int, int]]:
    """
    ``(position, other_position, sign)`` triples for which a band from the source
    gap to the parallel copy of the target crosses nothing.

    The band is untwisted, so with the copy kept it leaves both strands on the
    same side, and with the copy reversed on opposite sides.
    """
    cabled, counts, first = _slide_frame(diagram, target)
    a_index, b_index = first[source], first[target] + 1
    pieces = _linked_pieces(cabled)
    apart = pieces[a_index] != pieces[b_index]
    faces = None if apart else ribbon_faces(cabled)

    def edge(index: int, component: int, gap: int) -> int:
        n = len(cabled.components[index])
        return _block_start(diagram, counts, component, gap) % n if n else 0

    legal = set()
    for p in _gaps(diagram.components[source]):
        ea = edge(a_index, source, p)
        for q in _gaps(diagram.components[target]):
            eb = edge(b_index, target, q)
            for sign in (1, -1):
                if apart or any(
                    faces[(a_index, ea, side)] == faces[(b_index, eb, side if sign > 0 else other)]
                    for side, other in (("L", "R"), ("R", "L"))
                ):
                    legal.add((p, q, sign))
    return legal


def _handle_slide(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    source, target = site.component, site.other_component
    _check_gap(diagram, source, site.position)
    _check_gap(diagram, target, site.other_position)
    if source == target:
        raise MoveError("a component cannot slide over itself")
    sign = 1 if site.sign > 0 else -1
    if (site.position, site.other_position, sign) not in legal_slides(diagram, source, target):
        raise MoveError(f"{site}: every band between these gaps crosses the diagram")

    cabled, counts, first = _slide_frame(diagram, target)
    comps = _components(cabled)
    a_comp = comps[first[source]]
    copy = comps[first[target] + 1]

    a_start = _block_start(diagram, counts, source, site.position)
    b_start = _block_start(diagram, counts, target, site.other_position)
    a_part = a_comp[a_start:] + a_comp[:a_start]
    b_part = copy[b_start:] + copy[:b_start]

    if site.sign < 0:
        # reversing the copy flips every crossing it shares with another strand
        own = [ref.id for ref in copy]
        mixed = {cid for cid in own if own.count(cid) == 1}

        def flip(ref: CrossingRef) -> CrossingRef:
            return CrossingRef(ref.id, ref.role, -ref.sign) if ref.id in mixed else ref

        comps = [[flip(ref) for ref in comp] for comp in comps]
        a_part = [flip(ref) for ref in a_part]
        b_part = [flip(ref) for ref in reversed(b_part)]

    result = [
        tuple(a_part + b_part) if i == source else tuple(comps[first[i]])
        for i in range(len(diagram.components))
    ]
    return relabel(VirtualLinkDiagram(tuple(result)))


def slide_linking_matrix(matrix: LinkingMatrix, source: int, target: int, sign: int = 1) -> LinkingMatrix:
    """Linking matrix after sliding ``source`` over ``target``: basis change e_s -> e_s + sign * e_t."""
    n = matrix.size
    basis = np.eye(n, dtype=np.int64)
    basis[source, target] = 1 if sign > 0 else -1
    m = np.array(matrix.to_list(), dtype=np.int64).reshape(n, n)
    out = basis @ m @ basis.T
    return LinkingMatrix(tuple(tuple(int(x) for x in row) for row in out))


# --- public API ---

def apply(diagram: VirtualLinkDiagram, site: MoveSite) -> VirtualLinkDiagram:
    if site.kind in ("R1+", "R1-"):
        result = _r1_remove(diagram, site) if site.inverse else _r1_add(diagram, site)
    elif site.kind == "R2":
        result = _r2_remove(diagram, site) if site.inverse else _r2_add(diagram, site)
    elif site.kind == "R3":
        result = _r3(diagram, site)
    elif site.kind in ("kirby-add+", "kirby-add-"):
        result = _kirby_add(diagram, site)
    elif site.kind == "kirby-delete":
        result = _kirby_delete(diagram, site)
    elif site.kind == "handle-slide":
        result = _handle_slide(diagram, site)
    else:
        raise MoveError(f"unknown move kind {site.kind!r}; expected one of {', '.join(KINDS)}")
    logger.debug(f"Applied {site}: {diagram.crossing_count} -> {result.crossing_count} crossing(s)")
    return result


def enumerate_sites(diagram: VirtualLinkDiagram, kind: str) -> List[MoveSite]:
    comps = diagram.components
    gaps = [(ci, p) for ci, comp in enumerate(comps) for p in _gaps(comp)]
    signs = diagram.signs()

    if kind in ("R1+", "R1-"):
        sites = [MoveSite(kind, ci, p) for ci, p in gaps]
        want = 1 if kind == "R1+" else -1
        sites += [MoveSite(kind, crossings=(cid,), inverse=True) for cid in _kinks(diagram) if signs[cid] == want]
        return sites
    if kind == "R2":
        sites = [
            MoveSite("R2", c1, p1, c2, p2, sign=s, same_order=order)
            for c1, p1 in gaps for c2, p2 in gaps for s in (1, -1) for order in (True, False)
        ]
        sites += [MoveSite("R2", crossings=pair, inverse=True) for pair in _bigons(diagram)]
        return sites
    if kind == "R3":
        return [MoveSite("R3", crossings=t) for t in _triangles(diagram)]
    if kind in ("kirby-add+", "kirby-add-"):
        return [MoveSite(kind)]
    if kind == "kirby-delete":
        return [MoveSite(kind, component=i) for i in _framed_unknots(diagram)]
    if kind == "handle-slide":
        return [
            MoveSite("handle-slide", c1, p1, c2, p2, sign=s)
            for c1 in range(len(comps)) for c2 in range(len(comps)) if c1 != c2
            for p1, p2, s in sorted(legal_slides(diagram, c1, c2))
        ]
    raise MoveError(f"unknown move kind {kind!r}; expected one of {', '.join(KINDS)}")


def random_walk(diagram: VirtualLinkDiagram, kinds: Sequence[str], steps: int, seed: int,
                max_crossings: Optional[int] = None) -> VirtualLinkDiagram:
    """
    Apply ``steps`` uniformly chosen applicable moves, reproducibly from ``seed``.

    A step whose result would exceed ``max_crossings`` leaves the diagram
    unchanged.
    """
    rng = np.random.default_rng(seed)
    current = diagram
    for step in range(steps):
        options = [(k, s) for k in kinds for s in [enumerate_sites(current, k)] if s]
        if not options:
            logger.info(f"Walk step {step}: no applicable move among {list(kinds)}")
            break
        kind, sites = options[int(rng.integers(len(options)))]
        site = sites[int(rng.integers(len(sites)))]
        candidate = apply(current, site)
        if max_crossings is not None and candidate.crossing_count > max_crossings:
            logger.info(f"Walk step {step}: {site} skipped ({candidate.crossing_count} crossings)")
            continue
        logger.info(f"Walk step {step}: {site}")
        current = candidate
    return current
