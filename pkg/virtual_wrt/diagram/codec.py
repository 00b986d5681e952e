"""
Virtual link diagrams as signed extended Gauss codes.

Virtual crossings carry no combinatorial data and are not stored: two planar
pictures that differ by virtual Reidemeister moves or detour moves parse to the
same ``VirtualLinkDiagram``.

Text grammar::

    component := ( ("O" | "U") <positive int> ("+" | "-") )*
    diagram   := component ( ";" component )*

Whitespace is ignored. JSON alternative::

    {"name": str, "components": [[{"id": 1, "role": "O", "sign": 1}, ...], ...]}
"""

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from virtual_wrt.errors import DiagramSyntaxError, DiagramValidationError

_TOKEN = re.compile(r"([OU])(\d+)([+-])")


@dataclass(frozen=True)
class CrossingRef:
    id: int
    role: str  # "O" or "U"
    sign: int

    def __str__(self):
        return f"{self.role}{self.id}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class VirtualLinkDiagram:
    components: Tuple[Tuple[CrossingRef, ...], ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(tuple(c) for c in self.components))
        _validate(self.components)

    @property
    def crossing_ids(self) -> List[int]:
        return sorted({ref.id for comp in self.components for ref in comp})

    @property
    def crossing_count(self) -> int:
        return sum(len(c) for c in self.components) // 2

    def signs(self) -> Dict[int, int]:
        return {ref.id: ref.sign for comp in self.components for ref in comp}

    def locate(self) -> Dict[Tuple[int, str], Tuple[int, int]]:
        """(crossing id, role) -> (component index, position)."""
        where = {}
        for ci, comp in enumerate(self.components):
            for pos, ref in enumerate(comp):
                where[(ref.id, ref.role)] = (ci, pos)
        return where

    def with_name(self, name: Optional[str]) -> "VirtualLinkDiagram":
        return VirtualLinkDiagram(self.components, name=name)

    def __str__(self):
        return serialize(self)


@dataclass(frozen=True)
class LinkingMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.rows]


def _validate(components: Sequence[Sequence[CrossingRef]]) -> None:
    seen: Dict[int, List[CrossingRef]] = {}
    for comp in components:
        for ref in comp:
            if ref.role not in ("O", "U"):
                raise DiagramValidationError(f"crossing {ref.id}: role must be O or U, got {ref.role!r}")
            if ref.sign not in (1, -1):
                raise DiagramValidationError(f"crossing {ref.id}: sign must be +1 or -1, got {ref.sign!r}")
            if ref.id <= 0:
                raise DiagramValidationError(f"crossing ids must be positive, got {ref.id}")
            seen.setdefault(ref.id, []).append(ref)
    for cid, refs in seen.items():
        roles = sorted(r.role for r in refs)
        if roles != ["O", "U"]:
            raise DiagramValidationError(
                f"crossing {cid} must appear once over and once under, found {''.join(roles)}"
            )
        if refs[0].sign != refs[1].sign:
            raise DiagramValidationError(f"crossing {cid} has mismatched signs")


# --- parsing / serialization ---

def parse_diagram(text: str, name: Optional[str] = None) -> VirtualLinkDiagram:
    """Parse an extended Gauss code, or the JSON form when the text starts with '{'."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return from_json(stripped, name=name)

    components: List[List[CrossingRef]] = [[]]
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ";":
            components.append([])
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if not match:
            raise DiagramSyntaxError(f"unexpected {ch!r} in Gauss code", position=pos)
        role, cid, sign = match.groups()
        components[-1].append(CrossingRef(int(cid), role, 1 if sign == "+" else -1))
        pos = match.end()

    diagram = VirtualLinkDiagram(tuple(tuple(c) for c in components), name=name)
    logger.debug(f"Parsed diagram with {len(diagram.components)} component(s), {diagram.crossing_count} crossing(s)")
    return diagram


def serialize(diagram: VirtualLinkDiagram) -> str:
    return ";".join("".join(str(ref) for ref in comp) for comp in diagram.components)


def to_json(diagram: VirtualLinkDiagram) -> str:
    payload = {
        "name": diagram.name,
        "components": [
            [{"id": ref.id, "role": ref.role, "sign": ref.sign} for ref in comp]
            for comp in diagram.components
        ],
    }
    return json.dumps(payload)


def from_json(text: str, name: Optional[str] = None) -> VirtualLinkDiagram:
    try:
        payload = json.loads(text)
        components = [
            tuple(CrossingRef(int(item["id"]), str(item["role"]), int(item["sign"])) for item in comp)
            for comp in payload["components"]
        ]
    except json.JSONDecodeError as e:
        raise DiagramSyntaxError(f"invalid JSON diagram: {e.msg}", position=e.pos) from e
    except (KeyError, TypeError, ValueError) as e:
        raise DiagramSyntaxError(f"malformed JSON diagram: {e}") from e
    if not components:
        raise DiagramValidationError("a diagram needs at least one component")
    return VirtualLinkDiagram(tuple(components), name=name or payload.get("name"))


# --- combinatorial measures ---

def writhe(diagram: VirtualLinkDiagram) -> int:
    return sum(diagram.signs().values())


def self_writhe(diagram: VirtualLinkDiagram, component: int) -> int:
    _check_index(diagram, component)
    counts = Counter(ref.id for ref in diagram.components[component])
    signs = diagram.signs()
    return sum(signs[cid] for cid, n in counts.items() if n == 2)


def linking_number(diagram: VirtualLinkDiagram, i: int, j: int) -> Fraction:
    """Half the signed count of crossings between components i and j."""
    _check_index(diagram, i)
    _check_index(diagram, j)
    if i == j:
        raise IndexError("linking number needs two distinct components")
    ids_i = {ref.id for ref in diagram.components[i]}
    ids_j = {ref.id for ref in diagram.components[j]}
    signs = diagram.signs()
    return Fraction(sum(signs[cid] for cid in ids_i & ids_j), 2)


def linking_matrix(diagram: VirtualLinkDiagram) -> LinkingMatrix:
    n = len(diagram.components)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(self_writhe(diagram, i))
                continue
            lk = linking_number(diagram, i, j)
            if lk.denominator != 1:
                raise DiagramValidationError(
                    f"linking number lk({i},{j}) = {lk} is not an integer; signature is undefined"
                )
            row.append(int(lk))
        rows.append(tuple(row))
    return LinkingMatrix(tuple(rows))


def _check_index(diagram: VirtualLinkDiagram, i: int) -> None:
    if not 0 <= i < len(diagram.components):
        raise IndexError(f"component index {i} out of range (diagram has {len(diagram.components)})")


# --- constructions ---

def mirror(diagram: VirtualLinkDiagram) -> VirtualLinkDiagram:
    comps = tuple(tuple(CrossingRef(r.id, r.role, -r.sign) for r in comp) for comp in diagram.components)
    return VirtualLinkDiagram(comps, name=diagram.name)


def relabel(diagram: VirtualLinkDiagram, start: int = 1) -> VirtualLinkDiagram:
    """Renumber crossings start, start+1, ... in order of first appearance."""
    mapping: Dict[int, int] = {}
    for comp in diagram.components:
        for ref in comp:
            if ref.id not in mapping:
                mapping[ref.id] = start + len(mapping)
    comps = tuple(tuple(CrossingRef(mapping[r.id], r.role, r.sign) for r in comp) for comp in diagram.components)
    return VirtualLinkDiagram(comps, name=diagram.name)


def disjoint_union(first: VirtualLinkDiagram, second: VirtualLinkDiagram) -> VirtualLinkDiagram:
    left = relabel(first)
    right = relabel(second, start=left.crossing_count + 1)
    return VirtualLinkDiagram(left.components + right.components)


def cable(diagram: VirtualLinkDiagram, n: Union[int, Sequence[int]]) -> VirtualLinkDiagram:
    """
    Blackboard-framed cabling.

    ``n`` is a strand count for every component or one count per component.
    Component i becomes copies ``(i, 0) .. (i, n_i - 1)`` listed consecutively;
    copies are offset to the right of the strand's direction. A crossing c
    whose over strand has n_o copies and under strand n_u copies becomes an
    n_o x n_u grid; grid crossing (j, k) joins over copy j with under copy k and
    gets id ``base(c) + j * n_u + k + 1``, bases allocated in crossing-id order.
    Along over copy j the under copies are met in increasing k for a positive
    crossing and decreasing k for a negative one; along under copy k the over
    copies are met in decreasing j for a positive crossing, increasing j for a
    negative one. Copy count 0 deletes the component.
    """
    ncomp = len(diagram.components)
    counts = [n] * ncomp if isinstance(n, int) else list(n)
    if len(counts) != ncomp:
        raise ValueError(f"need {ncomp} strand counts, got {len(counts)}")
    if any(c < 0 for c in counts):
        raise ValueError("strand counts must be non-negative")

    where = diagram.locate()
    signs = diagram.signs()
    base: Dict[int, int] = {}
    next_base = 0
    for cid in diagram.crossing_ids:
        base[cid] = next_base
        next_base += counts[where[(cid, "O")][0]] * counts[where[(cid, "U")][0]]

    components: List[Tuple[CrossingRef, ...]] = []
    for ci, comp in enumerate(diagram.components):
        for copy in range(counts[ci]):
            seq: List[CrossingRef] = []
            for ref in comp:
                n_o = counts[where[(ref.id, "O")][0]]
                n_u = counts[where[(ref.id, "U")][0]]
                sign = signs[ref.id]
                if ref.role == "O":
                    if n_u == 0:
                        continue
                    order = range(n_u) if sign > 0 else range(n_u - 1, -1, -1)
                    for k in order:
                        seq.append(CrossingRef(base[ref.id] + copy * n_u + k + 1, "O", sign))
                else:
                    if n_o == 0:
                        continue
                    order = range(n_o - 1, -1, -1) if sign > 0 else range(n_o)
                    for j in order:
                        seq.append(CrossingRef(base[ref.id] + j * n_u + copy + 1, "U", sign))
            components.append(tuple(seq))

    result = VirtualLinkDiagram(tuple(components), name=diagram.name)
    logger.debug(f"Cabled {diagram.crossing_count} crossing(s) with counts {counts} -> {result.crossing_count}")
    return result
