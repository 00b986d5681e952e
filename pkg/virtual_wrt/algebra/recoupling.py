"""
Recoupling theory at level r: theta and tetrahedral nets, twist, fusion,
recoupling and crossing coefficients, and the worked two-crossing example sums.

Every closed form has a brute-force counterpart in ``evaluate_network``, which
expands each colored edge of a planar trivalent network into its Jones-Wenzl
projector and counts loops.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Literal, Optional, Tuple

from loguru import logger

from virtual_wrt.algebra.poly import GENERIC, Context, RootParams, qfact
from virtual_wrt.algebra.tangle import jw
from virtual_wrt.errors import DomainError
from virtual_wrt.invariants.bracket import count_cycles

Variant = Literal["K", "Khat"]


def admissible(a: int, b: int, c: int, r: Optional[int] = None) -> bool:
    """Non-negative, even sum, triangle inequalities, and a+b+c <= 2r-4 at level r."""
    if min(a, b, c) < 0:
        return False
    if (a + b + c) % 2:
        return False
    if a > b + c or b > a + c or c > a + b:
        return False
    if r is not None and a + b + c > 2 * r - 4:
        return False
    return True


def _level(ctx: Context) -> Optional[int]:
    return ctx.r if isinstance(ctx, RootParams) else None


def _require(a: int, b: int, c: int, ctx: Context) -> None:
    if not admissible(a, b, c, _level(ctx)):
        raise DomainError(f"({a}, {b}, {c}) is not an admissible triple" +
                          (f" at level r={ctx.r}" if isinstance(ctx, RootParams) else ""))


def _qf(m: int, ctx: Context):
    value = qfact(m, ctx)
    return value if isinstance(ctx, RootParams) else ctx.lift(value)


@lru_cache(maxsize=None)
def theta(a: int, b: int, c: int, ctx: Context = GENERIC):
    """
    theta(a,b,c) = (-1)^(m+n+p) [m+n+p+1]! [m]! [n]! [p]! / ([m+n]! [n+p]! [p+m]!)

    with m = (a+b-c)/2, n = (b+c-a)/2, p = (a+c-b)/2.
    """
    _require(a, b, c, ctx)
    m, n, p = (a + b - c) // 2, (b + c - a) // 2, (a + c - b) // 2
    sign = -1 if (m + n + p) % 2 else 1
    numerator = _qf(m + n + p + 1, ctx) * _qf(m, ctx) * _qf(n, ctx) * _qf(p, ctx)
    denominator = _qf(m + n, ctx) * _qf(n + p, ctx) * _qf(p + m, ctx)
    return sign * numerator / denominator


@lru_cache(maxsize=None)
def tet(a: int, b: int, e: int, c: int, d: int, f: int, ctx: Context = GENERIC):
    """
    Tet[a b e; c d f], the tetrahedral net with vertex triples
    (a,d,e), (b,c,e), (a,b,f), (c,d,f).

        Tet = (I!/E!) sum_{m<=s<=M} (-1)^s [s+1]! / (prod_i [s-a_i]! prod_j [b_j-s]!)

    a_i are the half-perimeters of the four faces, b_j the three sums of
    opposite-edge pairs halved, m = max a_i, M = min b_j,
    I! = prod_{i,j} [b_j - a_i]! and E! = [a]![b]![c]![d]![e]![f]!.
    """
    for triple in ((a, d, e), (b, c, e), (a, b, f), (c, d, f)):
        _require(*triple, ctx)
    faces = [(a + d + e) // 2, (b + c + e) // 2, (a + b + f) // 2, (c + d + f) // 2]
    pairs = [(b + d + e + f) // 2, (a + c + e + f) // 2, (a + b + c + d) // 2]
    lo, hi = max(faces), min(pairs)

    inner = ctx.one
    for bj in pairs:
        for ai in faces:
            inner = inner * _qf(bj - ai, ctx)
    edges = ctx.one
    for label in (a, b, c, d, e, f):
        edges = edges * _qf(label, ctx)

    total = ctx.zero
    for s in range(lo, hi + 1):
        # [r] = 0, so [s+1]! vanishes once s+1 reaches the level
        if isinstance(ctx, RootParams) and s + 1 > ctx.r - 1:
            continue
        term = _qf(s + 1, ctx)
        for ai in faces:
            term = term / _qf(s - ai, ctx)
        for bj in pairs:
            term = term / _qf(bj - s, ctx)
        total = total + (-1 if s % 2 else 1) * term
    return inner / edges * total


def lambda_twist(a: int, b: int, c: int, ctx: Context = GENERIC, conjugate: bool = False):
    """lambda^{ab}_c = (-1)^((a+b-c)/2) A^((a(a+2)+b(b+2)-c(c+2))/2); ``conjugate`` inverts A."""
    _require(a, b, c, ctx)
    exponent = (a * (a + 2) + b * (b + 2) - c * (c + 2)) // 2
    if conjugate:
        exponent = -exponent
    sign = -1 if ((a + b - c) // 2) % 2 else 1
    return sign * ctx.A ** exponent


def fusion_coeff(a: int, b: int, i: int, ctx: Context = GENERIC):
    _require(a, b, i, ctx)
    return ctx.delta(i) / theta(a, b, i, ctx)


def recoupling_coeff(a: int, b: int, c: int, d: int, i: int, j: int, ctx: Context = GENERIC):
    """
    Weight of the i-channel when the j-channel network is recoupled:

        {a b i; c d j} = Tet[a b i; c d j] Delta_i / (theta(a,d,i) theta(b,c,i))

    With j = 0 this is the fusion coefficient.
    """
    return tet(a, b, i, c, d, j, ctx) * ctx.delta(i) / (theta(a, d, i, ctx) * theta(b, c, i, ctx))


def crossing_coeff(a: int, b: int, i: int, ctx: Context = GENERIC, conjugate: bool = False):
    """X_i = Delta_i lambda^{ab}_i / theta(a,b,i)."""
    return ctx.delta(i) * lambda_twist(a, b, i, ctx, conjugate) / theta(a, b, i, ctx)


def bead_removal_coeff(a: int, b: int, c: int, ctx: Context = GENERIC):
    """A bubble with edges a, b on a strand of color c collapses to theta(a,b,c)/Delta_c times the strand."""
    _require(a, b, c, ctx)
    dc = ctx.delta(c)
    if ctx.is_zero(dc):
        raise DomainError(f"Delta_{c} vanishes; bead on a {c}-strand cannot be removed")
    return theta(a, b, c, ctx) / dc


# --- closed diagrams by recoupling ---

HOPF_CODE = "O1+U2+;U1+O2+"


def hopf_closure(a: int, b: int, ctx: Context = GENERIC):
    """
    Hopf link with components colored a and b, by recoupling.

    One crossing is expanded along the strands and the other across them, so
    the two fusion edges are opposite edges of a tetrahedral net:

        <Hopf^(a,b)> = sum_{i,j} X_i Xbar_j Tet[a b i; a b j]

    Swapping the two expansions only relabels the net.
    """
    level = _level(ctx)
    channels = [i for i in range(abs(a - b), a + b + 1, 2) if admissible(a, b, i, level)]
    total = ctx.zero
    for i, j in itertools.product(channels, repeat=2):
        coeff = crossing_coeff(a, b, i, ctx) * crossing_coeff(a, b, j, ctx, conjugate=True)
        total = total + coeff * tet(a, b, i, a, b, j, ctx)
    return total


# --- brute-force network evaluation ---

@dataclass
class Network:
    """
    Planar trivalent network.

    ``bands[k] = (color, start_vertex, end_vertex)``. ``vertices[v]`` lists the
    incident band ends counterclockwise as ``(band, "start" | "end")``. Strand
    positions run left to right across a band in its direction of travel.
    """

    bands: List[Tuple[int, str, str]] = field(default_factory=list)
    vertices: Dict[str, List[Tuple[int, str]]] = field(default_factory=dict)

    def add_band(self, color: int, start: str, end: str) -> int:
        self.bands.append((color, start, end))
        return len(self.bands) - 1


def theta_net(a: int, b: int, c: int) -> Network:
    net = Network()
    ba, bb, bc = (net.add_band(x, "u", "v") for x in (a, b, c))
    net.vertices["u"] = [(ba, "start"), (bb, "start"), (bc, "start")]
    net.vertices["v"] = [(ba, "end"), (bc, "end"), (bb, "end")]
    return net


def tet_net(a: int, b: int, e: int, c: int, d: int, f: int) -> Network:
    net = Network()
    ba = net.add_band(a, "v1", "v3")
    bb = net.add_band(b, "v2", "v3")
    bc = net.add_band(c, "v2", "v4")
    bd = net.add_band(d, "v1", "v4")
    be = net.add_band(e, "v1", "v2")
    bf = net.add_band(f, "v3", "v4")
    net.vertices["v1"] = [(be, "start"), (bd, "start"), (ba, "start")]
    net.vertices["v2"] = [(bb, "start"), (bc, "start"), (be, "end")]
    net.vertices["v3"] = [(ba, "end"), (bf, "start"), (bb, "end")]
    net.vertices["v4"] = [(bd, "end"), (bc, "end"), (bf, "end")]
    return net


def evaluate_network(net: Network, ctx: Context = GENERIC):
    """Bracket value of the network with a projector on every band."""
    node_ids: Dict[Tuple[int, str, int], int] = {}

    def node(band: int, side: str, pos: int) -> int:
        return node_ids.setdefault((band, side, pos), len(node_ids))

    def ccw_points(band: int, side: str) -> List[int]:
        n = net.bands[band][0]
        order = range(n - 1, -1, -1) if side == "start" else range(n)
        return [node(band, side, p) for p in order]

    arcs: List[Tuple[int, int]] = []
    for v, ends in net.vertices.items():
        if len(ends) != 3:
            raise ValueError(f"vertex {v} has {len(ends)} incident bands, expected 3")
        colors = [net.bands[band][0] for band, _ in ends]
        if not admissible(*colors, _level(ctx)):
            raise DomainError(f"vertex {v} carries inadmissible colors {colors}")
        points = [ccw_points(band, side) for band, side in ends]
        for k in range(3):
            x, y, z = colors[k], colors[(k + 1) % 3], colors[(k + 2) % 3]
            here, there = points[k], points[(k + 1) % 3]
            for t in range((x + y - z) // 2):
                arcs.append((here[x - 1 - t], there[t]))

    factors = []
    for k, (n, _, _) in enumerate(net.bands):
        terms = []
        for diagram, coeff in jw(n, ctx).terms.items():
            pairs = [(_band_point(node, k, n, p), _band_point(node, k, n, q)) for p, q in diagram.pairs()]
            terms.append((coeff, pairs))
        factors.append(terms)

    total = ctx.zero
    for choice in itertools.product(*factors):
        coeff = ctx.one
        pairs = list(arcs)
        for c, p in choice:
            coeff = coeff * c
            pairs.extend(p)
        total = total + coeff * ctx.d ** count_cycles(pairs)
    logger.debug(f"Evaluated network with {len(net.bands)} band(s), {len(arcs)} vertex arc(s)")
    return total


def _band_point(node, band: int, n: int, p: int) -> int:
    # projector top p sits at the band start, bottom n+q at the band end
    return node(band, "start", p) if p < n else node(band, "end", p - n)


# --- worked example sums ---

# <G'> at each admissible (i, a) cell as a power of d; absent cells are 0
_EXAMPLE_TABLES: Dict[int, Dict[Tuple[int, int], int]] = {
    3: {(0, 0): 0, (0, 1): 1},
    4: {(0, 0): 0, (0, 1): 1, (0, 2): 2, (2, 1): 1},
}


def example_table(r: int) -> Dict[Tuple[int, int], complex]:
    if r not in _EXAMPLE_TABLES:
        raise DomainError(f"example tables exist only for r in {sorted(_EXAMPLE_TABLES)}, got {r}")
    d = RootParams(r).d
    return {cell: d ** k for cell, k in _EXAMPLE_TABLES[r].items()}


def example_sums(variant: Variant, r: int, form: Optional[str] = None,
                 conjugate: Optional[bool] = None) -> complex:
    """
    <K^omega> and <K-hat^omega> of the two-crossing virtual examples, summed
    from the tabulated reduced graph values.

    ``form="displayed"`` weights each cell by Delta_i^2 lambda^2 / theta(a,a,i);
    ``form="general"`` by Delta_a Delta_i lambda^2 / theta(a,a,i). K-hat carries
    one extra lambda^{aa}_0. Defaults come from the convention ledger.
    """
    if variant not in ("K", "Khat"):
        raise ValueError(f"variant must be 'K' or 'Khat', got {variant!r}")
    if form is None or conjugate is None:
        from virtual_wrt.invariants.conventions import current_conventions
        ledger = current_conventions()
        form = ledger.example_sum_form if form is None else form
        conjugate = ledger.conjugate_twist if conjugate is None else conjugate
    if form not in ("displayed", "general"):
        raise ValueError(f"form must be 'displayed' or 'general', got {form!r}")

    ctx = RootParams(r)
    table = example_table(r)
    total = 0j
    for (i, a), graph_value in table.items():
        if not admissible(a, a, i, r):
            continue
        lam = lambda_twist(a, a, i, ctx, conjugate)
        weight = ctx.delta(i) ** 2 if form == "displayed" else ctx.delta(a) * ctx.delta(i)
        term = weight * lam ** 2 * graph_value / theta(a, a, i, ctx)
        if variant == "Khat":
            term *= lambda_twist(a, a, 0, ctx, conjugate)
        total += term
    logger.debug(f"example_sums({variant}, r={r}, form={form}) = {total}")
    return total
