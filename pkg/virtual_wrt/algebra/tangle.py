"""
Brauer-diagram model of n-tangles with virtual crossings.

Boundary points 0..n-1 run left to right along the top, n..2n-1 left to right
along the bottom. Planar matchings span the Temperley-Lieb algebra; matchings
with crossings are the virtual (permutation) parts. Products stack the first
factor on top of the second, each closed loop contributing a factor d.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from loguru import logger

from virtual_wrt.algebra.poly import Context, RootParams
from virtual_wrt.errors import DomainError


@dataclass(frozen=True)
class BrauerDiagram:
    n: int
    partner: Tuple[int, ...]

    def __post_init__(self):
        if len(self.partner) != 2 * self.n:
            raise ValueError(f"matching on {len(self.partner)} points for n={self.n}")
        for p, q in enumerate(self.partner):
            if q == p or self.partner[q] != p:
                raise ValueError(f"not a perfect matching: {self.partner}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "BrauerDiagram":
        partner = [-1] * (2 * n)
        for a, b in pairs:
            partner[a], partner[b] = b, a
        return cls(n, tuple(partner))

    def pairs(self) -> List[Tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.partner) if p < q]

    def is_planar(self) -> bool:
        # boundary order around the disc: top left->right, bottom right->left
        n = self.n
        order = {p: p for p in range(n)}
        order.update({n + i: 2 * n - 1 - i for i in range(n)})
        chords = [tuple(sorted((order[a], order[b]))) for a, b in self.pairs()]
        for (a, b), (c, e) in itertools.combinations(chords, 2):
            if a < c < b < e or c < a < e < b:
                return False
        return True

    def tensor_identity(self) -> "BrauerDiagram":
        """Add one straight strand on the right."""
        n = self.n
        shift = lambda p: p if p < n else p + 1
        pairs = [(shift(a), shift(b)) for a, b in self.pairs()]
        pairs.append((n, 2 * n + 1))
        return BrauerDiagram.from_pairs(n + 1, pairs)

    def compose(self, other: "BrauerDiagram") -> Tuple["BrauerDiagram", int]:
        """Stack self on top of other; returns the product diagram and the closed-loop count."""
        if self.n != other.n:
            raise ValueError(f"cannot multiply tangles on {self.n} and {other.n} strands")
        n = self.n
        # nodes: top 0..n-1, middle n..2n-1, bottom 2n..3n-1
        adjacency: List[List[int]] = [[] for _ in range(3 * n)]
        for a, b in self.pairs():
            adjacency[a].append(b)
            adjacency[b].append(a)
        for a, b in other.pairs():
            a, b = a + n, b + n
            adjacency[a].append(b)
            adjacency[b].append(a)

        visited = [False] * (3 * n)
        partner = [-1] * (2 * n)
        outer = lambda v: v if v < n else v - n
        for start in list(range(n)) + list(range(2 * n, 3 * n)):
            if visited[start]:
                continue
            prev, cur = -1, start
            visited[cur] = True
            while True:
                options = [v for v in adjacency[cur] if v != prev] or adjacency[cur]
                prev, cur = cur, options[0]
                visited[cur] = True
                if cur < n or cur >= 2 * n:
                    break
            partner[outer(start)] = outer(cur)
            partner[outer(cur)] = outer(start)

        loops = 0
        for m in range(n, 2 * n):
            if visited[m]:
                continue
            loops += 1
            stack = [m]
            while stack:
                v = stack.pop()
                if visited[v]:
                    continue
                visited[v] = True
                stack.extend(adjacency[v])
        return BrauerDiagram(n, tuple(partner)), loops

    def closure_loops(self) -> int:
        """Loops after joining top i to bottom i."""
        n = self.n
        parent = list(range(2 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.pairs() + [(i, n + i) for i in range(n)]:
            parent[find(a)] = find(b)
        return len({find(x) for x in range(2 * n)})


def identity(n: int) -> BrauerDiagram:
    return BrauerDiagram.from_pairs(n, [(i, n + i) for i in range(n)])


def cup_cap(n: int, i: int) -> BrauerDiagram:
    """U_i for 1 <= i <= n-1: cap on top points i-1, i and cup on the bottom ones."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"U_{i} needs 1 <= i <= {n - 1}")
    pairs = [(i - 1, i), (n + i - 1, n + i)]
    pairs += [(k, n + k) for k in range(n) if k not in (i - 1, i)]
    return BrauerDiagram.from_pairs(n, pairs)


def virtual_swap(n: int, i: int) -> BrauerDiagram:
    """E_i: strands i-1 and i (0-based points) exchanged through a virtual crossing."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"E_{i} needs 1 <= i <= {n - 1}")
    pairs = [(i - 1, n + i), (i, n + i - 1)]
    pairs += [(k, n + k) for k in range(n) if k not in (i - 1, i)]
    return BrauerDiagram.from_pairs(n, pairs)


def permutation(perm: Tuple[int, ...]) -> BrauerDiagram:
    """Pure virtual tangle sending top point k to bottom point perm[k]."""
    n = len(perm)
    return BrauerDiagram.from_pairs(n, [(k, n + perm[k]) for k in range(n)])


def virtual_permutations(n: int) -> Iterator[BrauerDiagram]:
    for perm in itertools.permutations(range(n)):
        yield permutation(perm)


class BrauerElement:
    """Finite formal sum of Brauer diagrams with coefficients from a context."""

    def __init__(self, n: int, terms: Optional[Dict[BrauerDiagram, object]] = None, ctx: Optional[Context] = None):
        self.n = n
        self.ctx = ctx
        self.terms: Dict[BrauerDiagram, object] = {}
        for diagram, coeff in (terms or {}).items():
            if diagram.n != n:
                raise ValueError(f"diagram on {diagram.n} strands in an element on {n}")
            if ctx is not None and ctx.is_zero(coeff):
                continue
            self.terms[diagram] = coeff

    @classmethod
    def of(cls, diagram: BrauerDiagram, ctx: Context, coeff=None) -> "BrauerElement":
        return cls(diagram.n, {diagram: ctx.one if coeff is None else coeff}, ctx)

    def __add__(self, other: "BrauerElement") -> "BrauerElement":
        out = dict(self.terms)
        for diagram, coeff in other.terms.items():
            out[diagram] = out[diagram] + coeff if diagram in out else coeff
        return BrauerElement(self.n, out, self.ctx or other.ctx)

    def scale(self, c) -> "BrauerElement":
        return BrauerElement(self.n, {b: c * v for b, v in self.terms.items()}, self.ctx)

    def __sub__(self, other: "BrauerElement") -> "BrauerElement":
        return self + other.scale(-1)

    def is_planar(self) -> bool:
        return all(b.is_planar() for b in self.terms)

    def equals(self, other: "BrauerElement") -> bool:
        ctx = self.ctx or other.ctx
        diff = self - other
        return all(ctx.is_zero(c) for c in diff.terms.values())

    def __repr__(self):
        return f"BrauerElement(n={self.n}, terms={len(self.terms)})"


def multiply(x: BrauerElement, y: BrauerElement, ctx: Context) -> BrauerElement:
    if x.n != y.n:
        raise ValueError(f"cannot multiply elements on {x.n} and {y.n} strands")
    out: Dict[BrauerDiagram, object] = {}
    d = ctx.d
    for bx, cx in x.terms.items():
        for by, cy in y.terms.items():
            product, loops = bx.compose(by)
            coeff = cx * cy * d ** loops
            out[product] = out[product] + coeff if product in out else coeff
    return BrauerElement(x.n, out, ctx)


def closure(x: BrauerElement, ctx: Context):
    """Join top i to bottom i; each loop counts d (unreduced normalization)."""
    d = ctx.d
    total = ctx.zero
    for diagram, coeff in x.terms.items():
        total = total + coeff * d ** diagram.closure_loops()
    return total


def tensor_identity(x: BrauerElement) -> BrauerElement:
    return BrauerElement(x.n + 1, {b.tensor_identity(): c for b, c in x.terms.items()}, x.ctx)


@lru_cache(maxsize=None)
def jw(n: int, ctx: Context) -> BrauerElement:
    """
    Jones-Wenzl projector T_n by the Wenzl recursion

        T_n = T_{n-1} (x) 1 - (Delta_{n-2}/Delta_{n-1}) (T_{n-1} (x) 1) U_{n-1} (T_{n-1} (x) 1)
    """
    if n < 0:
        raise DomainError(f"projector index must be non-negative, got {n}")
    if isinstance(ctx, RootParams) and n > ctx.r - 1:
        raise DomainError(f"T_{n} does not exist at level r={ctx.r} (needs n <= {ctx.r - 1})")
    if n <= 1:
        return BrauerElement.of(identity(n), ctx)
    prev = tensor_identity(jw(n - 1, ctx))
    u = BrauerElement.of(cup_cap(n, n - 1), ctx)
    correction = multiply(multiply(prev, u, ctx), prev, ctx)
    ratio = ctx.delta(n - 2) / ctx.delta(n - 1)
    result = prev - correction.scale(ratio)
    logger.debug(f"Built T_{n} with {len(result.terms)} planar terms")
    return result


def partial_trace_factor(n: int, ctx: Context):
    """d - Delta_{n-2}/Delta_{n-1} = Delta_n/Delta_{n-1}: closing the last strand of T_n."""
    return ctx.d - ctx.delta(n - 2) / ctx.delta(n - 1)


def lemma_product(n: int, ctx: Context):
    """Reduced closure <cl(T_n E_1)> (closure divided by d)."""
    if n < 2:
        raise ValueError("lemma_product needs n >= 2")
    x = multiply(jw(n, ctx), BrauerElement.of(virtual_swap(n, 1), ctx), ctx)
    return closure(x, ctx) / ctx.d


def lemma_formula(n: int, ctx: Context):
    """
    Closed form of <cl(T_n E_1)>:

        d <cl(T_n E)> = (d - Delta_{n-2}/Delta_{n-1}) ... (d - Delta_1/Delta_2) (d - 1)

    obtained by peeling one strand at a time with ``partial_trace_factor``.
    """
    if n < 2:
        raise ValueError("lemma_formula needs n >= 2")
    value = ctx.d - 1
    for k in range(3, n + 1):
        value = value * partial_trace_factor(k, ctx)
    return value / ctx.d
