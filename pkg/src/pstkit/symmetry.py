"""
Automorphism and isomorphism search for small weighted graphs.

Both searches run on the disjoint union of the two graphs (G with itself for
automorphisms). A vertex on the left and a candidate image on the right get the
same fresh colour and the joint colouring is refined; a branch dies as soon as
some colour has different counts on the two sides.

Weights are compared after rounding to SEARCH_DECIMALS decimals rather than as
exact radicands, so weights that agree to 9 decimals count as equal during the
search. Every permutation found is then checked entry by entry within WEIGHT_TOL.
"""
from __future__ import annotations

from typing import Optional, Sequence

import logging

import numpy as np

from .errors import GuardError, InputError
from .graph import Graph, check_vertex
from .partition import Partition, dense_colors, quotient, stable_colors


logger = logging.getLogger(__name__)

SETTINGS = {
    'search_guard' : 64,
}

# Weights are compared at this many decimals during refinement
SEARCH_DECIMALS = 9
WEIGHT_TOL      = 1e-9


class VertexPermutation():
    """
    image[u] = τ(u)
    """

    def __init__(self, image: Sequence[int]):
        image = tuple(int(x) for x in image)
        if sorted(image) != list(range(len(image))):
            raise InputError(f'Not a permutation of 0..{len(image) - 1}: {image}')

        self.image = image


    @property
    def n(self) -> int:
        return len(self.image)


    def __call__(self, u: int) -> int:
        return self.image[u]


    def compose(self, other: VertexPermutation) -> VertexPermutation:
        """
        self after other
        """
        return VertexPermutation([ self.image[x] for x in other.image ])


    def preserves(self, a: np.ndarray, b: Optional[np.ndarray] = None, tol: float = WEIGHT_TOL) -> bool:
        """
        B[τ(u)][τ(v)] == A[u][v] for all u, v (B defaults to A)
        """
        b   = a if isinstance(b, type(None)) else b
        idx = np.array(self.image)
        return bool(np.all(np.abs(b[np.ix_(idx, idx)] - a) <= tol))


    def is_identity(self) -> bool:
        return self.image == tuple(range(self.n))


    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexPermutation):
            return NotImplemented

        return self.image == other.image


    def __hash__(self) -> int:
        return hash(self.image)


    def __repr__(self) -> str:
        return f'VertexPermutation({list(self.image)})'



class AutomorphismResult():
    """
    `order` is the exact group order; `permutations` holds at most `limit`
    elements in search order, `complete` tells whether that is all of them
    """

    def __init__(self, permutations: list[VertexPermutation], order: int):
        self.permutations = permutations
        self.order        = order
        self.complete     = len(permutations) == order



class _JointSearch():
    """
    Backtracking over the joint colouring of left ⊕ right
    """

    def __init__(self, left: Graph, right: Graph):
        n = left.n

        adj = np.zeros((2*n, 2*n))
        adj[:n, :n] = left.adjacency
        adj[n:, n:] = right.adjacency

        seeds = _vertex_invariants(left) + _vertex_invariants(right)

        self.n      = n
        self.left   = left.adjacency
        self.right  = right.adjacency
        self.adj    = adj
        self.root   = stable_colors(adj, dense_colors(seeds), SEARCH_DECIMALS)
        self.nodes  = 0


    def refine(self, colors: list[int]) -> Optional[list[int]]:
        colors = stable_colors(self.adj, colors, SEARCH_DECIMALS)
        n      = self.n

        if sorted(colors[:n]) != sorted(colors[n:]):
            return None

        return colors


    def individualize(self, colors: list[int], u: int, v: int) -> Optional[list[int]]:
        """
        Left vertex u and right vertex v (0-based within the right graph) share a fresh colour
        """
        self.nodes += 1
        if colors[u] != colors[self.n + v]:
            return None

        fresh = list(colors)
        fresh[u] = fresh[self.n + v] = max(colors) + 1
        return self.refine(dense_colors(fresh))


    def target_cell(self, colors: list[int]) -> Optional[int]:
        """
        Colour of the smallest non-singleton left cell, ties by colour index
        """
        counts = {}
        for c in colors[:self.n]:
            counts[c] = counts.get(c, 0) + 1

        open_cells = [ (size, c) for c, size in counts.items() if size > 1 ]
        return min(open_cells)[1] if len(open_cells) > 0 else None


    def leaf(self, colors: list[int]) -> Optional[VertexPermutation]:
        n     = self.n
        right = { colors[n + y] : y for y in range(n) }
        tau   = VertexPermutation([ right[colors[x]] for x in range(n) ])

        return tau if tau.preserves(self.left, self.right) else None


    def first(self, colors: Optional[list[int]]) -> Optional[VertexPermutation]:
        """
        Depth-first search for any leaf below `colors`
        """
        if isinstance(colors, type(None)):
            return None

        cell = self.target_cell(colors)
        if isinstance(cell, type(None)):
            return self.leaf(colors)

        n = self.n
        u = min(x for x in range(n) if colors[x] == cell)
        for v in [ y for y in range(n) if colors[n + y] == cell ]:
            tau = self.first(self.individualize(colors, u, v))
            if not isinstance(tau, type(None)):
                return tau

        return None


    def enumerate(self, colors: Optional[list[int]], found: list[VertexPermutation], limit: int):
        if isinstance(colors, type(None)) or len(found) >= limit:
            return

        cell = self.target_cell(colors)
        if isinstance(cell, type(None)):
            tau = self.leaf(colors)
            if not isinstance(tau, type(None)):
                found.append(tau)
            return

        n = self.n
        u = min(x for x in range(n) if colors[x] == cell)
        for v in [ y for y in range(n) if colors[n + y] == cell ]:
            self.enumerate(self.individualize(colors, u, v), found, limit)



def _check_guard(g: Graph):
    guard = SETTINGS['search_guard']
    if g.n > guard:
        raise GuardError(f'Search is limited to {guard} vertices, graph has {g.n}')


def triangle_census(g: Graph) -> np.ndarray:
    """
    count[v] = number of triangles through v in the 0/1 support of the off-diagonal weights
    """
    s = g.support().astype(np.int64)
    return np.diag(s @ s @ s)//2


def _vertex_invariants(g: Graph) -> list[tuple]:
    loops = np.round(np.diag(g.adjacency), SEARCH_DECIMALS) + 0.0
    tri   = triangle_census(g)
    return [ (float(loops[x]), int(tri[x])) for x in range(g.n) ]


def _orbit(u: int, generators: list[VertexPermutation]) -> set[int]:
    orbit = { u }
    queue = [ u ]
    while len(queue) > 0:
        x = queue.pop()
        for tau in generators:
            y = tau(x)
            if y not in orbit:
                orbit.add(y)
                queue.append(y)

    return orbit


def group_order(g: Graph) -> int:
    """
    |Aut(G)| as the product of orbit sizes along a chain of point stabilizers
    """
    _check_guard(g)

    search = _JointSearch(g, g)
    colors = search.root
    order  = 1

    while True:
        cell = search.target_cell(colors)
        if isinstance(cell, type(None)):
            break

        n    = search.n
        u    = min(x for x in range(n) if colors[x] == cell)
        gens = []

        for v in [ y for y in range(n) if colors[n + y] == cell ]:
            if v in _orbit(u, gens):
                continue

            tau = search.first(search.individualize(colors, u, v))
            if not isinstance(tau, type(None)):
                gens.append(tau)

        order *= len(_orbit(u, gens))
        colors = search.individualize(colors, u, u)

    logger.debug(f'group order of {g.name}: {order} ({search.nodes} search nodes)')
    return order


def automorphisms(g: Graph, limit: int = 1000) -> AutomorphismResult:
    """
    Params
    ======
    limit: int
        Maximum number of permutations returned; the order is exact regardless
    """
    _check_guard(g)
    if limit < 1:
        raise InputError(f'Limit must be positive, got {limit}')

    search = _JointSearch(g, g)
    found  = []
    search.enumerate(search.root, found, limit)

    return AutomorphismResult(found, group_order(g))


def find_swap(g: Graph, a: int, b: int) -> Optional[VertexPermutation]:
    """
    An automorphism mapping a to b, or None
    """
    _check_guard(g)
    check_vertex(g, a, 'source')
    check_vertex(g, b, 'target')
    if a == b:
        raise InputError('exists_swap needs two distinct vertices')

    search = _JointSearch(g, g)
    tau    = search.first(search.individualize(search.root, a, b))

    logger.debug(f'swap search {a}->{b} on {g.name}: {search.nodes} nodes, found: {tau is not None}')
    return tau


def exists_swap(g: Graph, a: int, b: int) -> bool:
    return not isinstance(find_swap(g, a, b), type(None))


def find_isomorphism(g: Graph, h: Graph) -> Optional[VertexPermutation]:
    """
    τ with A(H)[τ(u)][τ(v)] == A(G)[u][v], or None
    """
    _check_guard(g)
    _check_guard(h)

    if g.n != h.n:
        return None

    if sorted(triangle_census(g)) != sorted(triangle_census(h)):
        return None

    search = _JointSearch(g, h)
    if isinstance(search.refine(search.root), type(None)):
        return None

    return search.first(search.root)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return not isinstance(find_isomorphism(g, h), type(None))


def is_reduction(g1: Graph, pi1: Partition, g2: Graph, pi2: Partition) -> bool:
    """
    True iff G1/π1 and G2/π2 are isomorphic as weighted graphs
    """
    return is_isomorphic(quotient(g1, pi1).quotient, quotient(g2, pi2).quotient)
