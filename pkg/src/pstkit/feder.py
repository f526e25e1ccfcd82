"""
k-boson secondary graphs and S_k-orbit quotients of Cartesian powers.

Tuples of V(G)^k are indexed row-major (first coordinate most significant),
matching the Kronecker layout of `graph.cartesian_product`.
"""
from __future__ import annotations

from typing import Sequence

import math
import logging
import itertools

import numpy as np

from .errors import GuardError, InputError, NumericError, PreconditionError
from .graph import Graph, cartesian_power, cartesian_product, check_vertex
from .partition import Partition, partition_matrix, product_partition, pulled_back, quotient
from .spectral import eigendecompose, propagator
from .walk import is_periodic, verify_pst


logger = logging.getLogger(__name__)

SETTINGS = {
    'product_guard' : 4096,
}

# Explicit permutation sums are only built up to this k
EXPLICIT_SYMMETRIZER_MAX_K = 5


class OccupationVector():

    def __init__(self, counts: Sequence[int]):
        counts = tuple(int(c) for c in counts)
        if any(c < 0 for c in counts):
            raise InputError(f'Occupation counts must be nonnegative: {counts}')

        self.counts = counts
        self.k      = sum(counts)


    def moved(self, u: int, v: int) -> OccupationVector:
        """
        n - e_u + e_v
        """
        counts = list(self.counts)
        counts[u] -= 1
        counts[v] += 1
        return OccupationVector(counts)


    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OccupationVector):
            return NotImplemented

        return self.counts == other.counts


    def __hash__(self) -> int:
        return hash(self.counts)


    def __repr__(self) -> str:
        return f'OccupationVector({list(self.counts)})'



class OrbitPartition():
    """
    Cells of V(G)^k under coordinate permutation. `keys[j]` is the sorted tuple
    naming cell j; cells follow occupation_vectors order.
    """

    def __init__(self, partition: Partition, keys: list[tuple[int, ...]]):
        self.partition = partition
        self.keys      = keys



class ComposeReport():

    def __init__(self, residual: float, w_is_partition_matrix: bool):
        self.residual              = residual
        self.ok                    = residual < 1e-10
        self.w_is_partition_matrix = w_is_partition_matrix



def _check_guard(n: int, k: int):
    guard = SETTINGS['product_guard']
    if k < 1:
        raise InputError(f'Power must be at least 1, got {k}')

    if n**k > guard:
        raise GuardError(f'Product space has {n}^{k} = {n**k} vertices, guard is {guard}')


def multisets(n: int, k: int) -> list[tuple[int, ...]]:
    """
    Sorted k-tuples over range(n), ascending
    """
    return list(itertools.combinations_with_replacement(range(n), k))


def occupation_vectors(n: int, k: int) -> list[OccupationVector]:
    """
    All count vectors over n sites with total k, ordered by their sorted vertex
    multisets ascending. F(G, 1) keeps the vertex order of G and F(K2, k) lists
    counts (k, 0), (k-1, 1), ..., (0, k).
    """
    if n < 1 or k < 1:
        raise InputError(f'Need n >= 1 and k >= 1, got n={n}, k={k}')

    vectors = []
    for key in multisets(n, k):
        counts = [ 0 ]*n
        for x in key:
            counts[x] += 1

        vectors.append(OccupationVector(counts))

    return vectors


def feder_graph(g: Graph, k: int) -> tuple[Graph, list[OccupationVector]]:
    """
    Secondary graph of G with k bosons: n -> n - e_u + e_v weighted sqrt(n_u (n_v + 1))
    for every edge uv of G
    """
    if not g.is_unweighted():
        raise InputError('Boson walks are defined on unweighted primary graphs')

    if np.any(np.diag(g.adjacency) != 0):
        raise InputError('Boson walks are defined on loop-free primary graphs')

    vectors = occupation_vectors(g.n, k)
    index   = { vec : i for i, vec in enumerate(vectors) }
    adj     = np.zeros((len(vectors), len(vectors)))

    arcs = [ (u, v) for u, v, _ in g.edges() ] + [ (v, u) for u, v, _ in g.edges() ]
    for i, vec in enumerate(vectors):
        for u, v in arcs:
            nu = vec.counts[u]
            if nu < 1:
                continue

            j = index[vec.moved(u, v)]
            w = math.sqrt(nu*(vec.counts[v] + 1))

            if adj[j, i] != 0 and adj[j, i] != w:
                raise NumericError(f'Boson weight mismatch between {vec} and {vectors[j]}: {w} vs {adj[j, i]}')

            adj[i, j] = w

    name = None if g.name is None else f'F({g.name},{k})'
    logger.debug(f'feder graph {name}: {len(vectors)} occupation vectors')

    return Graph(adj, name), vectors


def _tuple_digits(n: int, k: int) -> tuple[np.ndarray, ...]:
    return np.unravel_index(np.arange(n**k), (n,)*k)


def orbit_partition(g: Graph, k: int) -> OrbitPartition:
    _check_guard(g.n, k)

    keys  = multisets(g.n, k)
    index = { key : j for j, key in enumerate(keys) }

    digits  = np.stack(_tuple_digits(g.n, k), axis=1)
    cell_of = [ index[tuple(sorted(int(x) for x in row))] for row in digits ]

    return OrbitPartition(Partition(cell_of), keys)


def _orbit_average(orbits: OrbitPartition) -> np.ndarray:
    pi   = orbits.partition
    size = np.array(pi.sizes(), dtype=float)
    ind  = pi.indicator()
    return (ind/size) @ ind.T


def _explicit_symmetrizer(n: int, k: int) -> np.ndarray:
    """
    (1/k!) sum over σ in S_k of the coordinate permutation matrices
    """
    digits = _tuple_digits(n, k)
    total  = n**k
    rows   = np.arange(total)
    sym    = np.zeros((total, total))

    for sigma in itertools.permutations(range(k)):
        cols = np.ravel_multi_index([ digits[s] for s in sigma ], (n,)*k)
        sym[rows, cols] += 1.0

    return sym/math.factorial(k)


def symmetrizer_check(g: Graph, k: int) -> tuple[float, float]:
    """
    Returns
    =======
    (max |S - QQ^T|, max |SA - AS|) with A = A(G^□k)
    """
    _check_guard(g.n, k)

    orbits = orbit_partition(g, k)
    q      = partition_matrix(orbits.partition).entries
    a      = cartesian_power(g, k).adjacency

    if k <= EXPLICIT_SYMMETRIZER_MAX_K:
        sym = _explicit_symmetrizer(g.n, k)
    else:
        sym = _orbit_average(orbits)

    return float(np.max(np.abs(sym - q @ q.T))), float(np.max(np.abs(sym @ a - a @ sym)))


def verify_feder_iso(g: Graph, k: int) -> tuple[bool, float]:
    """
    Compares G^□k / orbits against F(G, k) with cells matched to occupation
    vectors through their vertex counts
    """
    _check_guard(g.n, k)

    fg, vectors = feder_graph(g, k)
    orbits      = orbit_partition(g, k)
    quot        = quotient(cartesian_power(g, k), orbits.partition).quotient

    index = { vec : i for i, vec in enumerate(vectors) }
    phi   = np.zeros(len(vectors), dtype=int)
    for j, key in enumerate(orbits.keys):
        counts = np.bincount(np.array(key), minlength=g.n)
        phi[j] = index[OccupationVector(counts)]

    matched = np.zeros_like(quot.adjacency)
    matched[np.ix_(phi, phi)] = quot.adjacency

    deviation = float(np.max(np.abs(matched - fg.adjacency)))
    return deviation < 1e-12, deviation


def compose_quotients(g: Graph, m1: int, pi1: Partition, m2: int, pi2: Partition) -> ComposeReport:
    """
    (G^□m1/π1)^□m2/π2 against W^T A(G^□(m1 m2)) W with W = Q1^{⊗m2} Q2
    """
    _check_guard(g.n, m1*m2)

    h1     = cartesian_power(g, m1)
    first  = quotient(h1, pi1).quotient
    h2     = cartesian_power(first, m2)
    second = quotient(h2, pi2).quotient

    q1 = partition_matrix(pi1).entries
    q2 = partition_matrix(pi2).entries

    w = np.ones((1, 1))
    for _ in range(m2):
        w = np.kron(w, q1)
    w = w @ q2

    big   = cartesian_power(g, m1*m2).adjacency
    right = w.T @ big @ w

    residual = float(np.max(np.abs(second.adjacency - right)))

    pi3     = pulled_back([ pi1 ]*m2, pi2)
    matches = pi3.m == w.shape[1] and bool(np.allclose(partition_matrix(pi3).entries, w, atol=1e-12))

    logger.debug(f'compose m1={m1} m2={m2}: residual {residual:.3e}, W is partition matrix: {matches}')
    return ComposeReport(residual, matches)


def _product(graphs: Sequence[Graph]) -> Graph:
    total = math.prod(h.n for h in graphs)
    guard = SETTINGS['product_guard']
    if total > guard:
        raise GuardError(f'Product has {total} vertices, guard is {guard}')

    result = graphs[0]
    for h in graphs[1:]:
        result = cartesian_product(result, h)

    return result


def product_of_quotients(pairs: Sequence[tuple[Graph, Partition]]) -> tuple[bool, float]:
    """
    □_k (G_k/π_k) against (□_k G_k)/π with π the product of the cell maps
    """
    if len(pairs) == 0:
        raise InputError('product_of_quotients needs at least one factor')

    left  = _product([ quotient(h, pi).quotient for h, pi in pairs ])
    right = quotient(_product([ h for h, _ in pairs ]), product_partition([ pi for _, pi in pairs ])).quotient

    residual = float(np.max(np.abs(left.adjacency - right.adjacency)))
    return residual < 1e-10, residual


def product_pst(pairs: Sequence[tuple[Graph, int, int]], t: float, tol: float = 1e-8) -> bool:
    """
    PST between (a_1, ..., a_r) and (b_1, ..., b_r) in the product. Every factor
    must itself transfer (a_k != b_k) or be periodic (a_k == b_k) at t.
    """
    if len(pairs) == 0:
        raise InputError('product_pst needs at least one factor')

    if all(a == b for _, a, b in pairs):
        raise PreconditionError('At least one factor must transfer between distinct vertices', None)

    for i, (h, a, b) in enumerate(pairs):
        check_vertex(h, a, 'source')
        check_vertex(h, b, 'target')

        ok = is_periodic(h, a, t, tol) if a == b else verify_pst(h, a, b, t, tol)
        if not ok:
            what = 'periodic' if a == b else 'PST'
            raise PreconditionError(f'Factor {i} ({h.name}) is not {what} at t={t}', i)

    dims  = tuple(h.n for h, _, _ in pairs)
    prod  = _product([ h for h, _, _ in pairs ])
    src   = int(np.ravel_multi_index([ a for _, a, _ in pairs ], dims))
    dst   = int(np.ravel_multi_index([ b for _, _, b in pairs ], dims))

    return verify_pst(prod, src, dst, t, tol)


def propagator_identity(g: Graph, k: int, times: Sequence[float]) -> float:
    """
    max over t of |Q^T exp(-itA(G^□k)) Q - exp(-it Q^T A(G^□k) Q)|
    """
    _check_guard(g.n, k)

    pi   = orbit_partition(g, k).partition
    q    = partition_matrix(pi).entries
    big  = eigendecompose(cartesian_power(g, k))
    quot = eigendecompose(quotient(cartesian_power(g, k), pi).quotient)

    residual = 0.0
    for t in times:
        lhs = q.T @ propagator(big, t).matrix @ q
        rhs = propagator(quot, t).matrix
        residual = max(residual, float(np.max(np.abs(lhs - rhs))))

    return residual
