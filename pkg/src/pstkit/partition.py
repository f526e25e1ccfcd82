"""
Equitable partitions, normalized partition matrices and quotient graphs.

Equitability is taken over weight sums: for cells V_j, V_k the sum
d_jk = sum_{y in V_k} A[x][y] must not depend on the choice of x in V_j.
"""
from __future__ import annotations

from typing import Optional, Sequence

import json
import logging

import numpy as np

from .errors import InputError, PreconditionError
from .graph import Graph, check_vertex, hop_distances


logger = logging.getLogger(__name__)

# Weight sums are rounded to this many decimals before they are compared
SIGNATURE_DECIMALS = 12


class Partition():
    """
    `cell_of[x]` is the cell index of vertex x; cells are exactly 0..m-1 and nonempty
    """

    def __init__(self, cell_of: Sequence[int]):
        cell_of = tuple(int(c) for c in cell_of)
        if len(cell_of) == 0:
            raise InputError('Partition must cover at least one vertex')

        m = max(cell_of) + 1
        if min(cell_of) < 0 or set(cell_of) != set(range(m)):
            raise InputError(f'Cell indices must be exactly 0..{m - 1} with every cell nonempty')

        self.__cell_of = cell_of
        self.__m       = m


    @staticmethod
    def from_cells(cells: Sequence[Sequence[int]], n: Optional[int] = None) -> Partition:
        flat = [ int(x) for cell in cells for x in cell ]
        n    = len(flat) if n is None else n

        if sorted(flat) != list(range(n)):
            raise InputError(f'Cells must cover 0..{n - 1} exactly once')

        if any(len(cell) == 0 for cell in cells):
            raise InputError('Cells must be nonempty')

        cell_of = [ 0 ]*n
        for j, cell in enumerate(cells):
            for x in cell:
                cell_of[x] = j

        return Partition(cell_of)


    @staticmethod
    def singletons(n: int) -> Partition:
        return Partition(range(n))


    @staticmethod
    def unit(n: int) -> Partition:
        return Partition([ 0 ]*n)


    @property
    def cell_of(self) -> tuple[int, ...]:
        return self.__cell_of


    @property
    def m(self) -> int:
        return self.__m


    @property
    def n(self) -> int:
        return len(self.__cell_of)


    def cells(self) -> list[list[int]]:
        cells = [ [] for _ in range(self.__m) ]
        for x, c in enumerate(self.__cell_of):
            cells[c].append(x)

        return cells


    def sizes(self) -> list[int]:
        return [ len(cell) for cell in self.cells() ]


    def canonical(self) -> Partition:
        """
        Same cells, numbered by ascending smallest vertex
        """
        order = {}
        for c in self.__cell_of:
            if c not in order:
                order[c] = len(order)

        return Partition([ order[c] for c in self.__cell_of ])


    def refines(self, other: Partition) -> bool:
        """
        True iff every cell of self lies inside one cell of `other`
        """
        image = {}
        for mine, theirs in zip(self.__cell_of, other.cell_of):
            if image.setdefault(mine, theirs) != theirs:
                return False

        return True


    def is_singleton(self, v: int) -> bool:
        return self.__cell_of.count(self.__cell_of[v]) == 1


    def indicator(self) -> np.ndarray:
        """
        n x m 0/1 matrix P with P[x][k] = [x in V_k]
        """
        ind = np.zeros((self.n, self.__m))
        ind[np.arange(self.n), self.__cell_of] = 1.0
        return ind


    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented

        return self.__cell_of == other.cell_of


    def __hash__(self) -> int:
        return hash(self.__cell_of)


    def __repr__(self) -> str:
        return f'Partition({self.cells()})'


    def to_json(self) -> str:
        cells = sorted(sorted(cell) for cell in self.cells())
        return json.dumps({ 'm' : self.__m, 'cells' : cells }) + '\n'


    def map_json(self) -> str:
        """
        Vertex to cell map; `cells[j]` lists the vertices behind quotient vertex j
        """
        return json.dumps({ 'm' : self.__m, 'cell_of' : list(self.__cell_of), 'cells' : self.cells() }) + '\n'


    @staticmethod
    def from_json(text: str, n: Optional[int] = None) -> Partition:
        try: data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f'Partition document is not valid JSON: {e}') from e

        if not isinstance(data, dict) or not isinstance(data.get('cells'), list):
            raise InputError('Partition document must be an object with a "cells" array')

        cells = data['cells']
        if not all(isinstance(cell, list) and all(isinstance(x, int) for x in cell) for cell in cells):
            raise InputError('Partition cells must be arrays of vertex indices')

        if 'm' in data and data['m'] != len(cells):
            raise InputError(f'"m" is {data["m"]} but {len(cells)} cells are listed')

        cells = sorted(sorted(cell) for cell in cells)
        return Partition.from_cells(cells, n)



class NormalizedPartitionMatrix():
    """
    Q[x][k] = |V_k|^(-1/2) if x in V_k else 0
    """

    def __init__(self, partition: Partition):
        sizes = np.array(partition.sizes(), dtype=float)

        entries = partition.indicator() / np.sqrt(sizes)
        entries.flags.writeable = False

        self.partition = partition
        self.entries   = entries


    def projector(self) -> np.ndarray:
        """
        QQ^T, block diagonal with |V_k|^-1 J blocks
        """
        return self.entries @ self.entries.T



class QuotientResult():

    def __init__(self, quotient: Graph, cell_map: Partition, d: np.ndarray):
        self.quotient = quotient
        self.cell_map = cell_map
        self.d        = d



class PartitionIdentityReport():
    """
    Max residuals of the four partition-matrix identities:
        Q^T Q = I,  QQ^T = blockdiag(|V_k|^-1 J),  QQ^T A = A QQ^T,  A(G/π) = Q^T A Q
    """

    def __init__(self, orthonormal: float, block_diagonal: float, commutator: float, quotient: float):
        self.orthonormal    = orthonormal
        self.block_diagonal = block_diagonal
        self.commutator     = commutator
        self.quotient       = quotient


    def max_residual(self) -> float:
        return max(self.orthonormal, self.block_diagonal, self.commutator, self.quotient)


    def as_dict(self) -> dict:
        return {
            'orthonormal'    : self.orthonormal,
            'block_diagonal' : self.block_diagonal,
            'commutator'     : self.commutator,
            'quotient'       : self.quotient,
        }



def _check_cover(g: Graph, pi: Partition):
    if pi.n != g.n:
        raise InputError(f'Partition covers {pi.n} vertices but the graph has {g.n}')


def cell_sums(g: Graph, pi: Partition) -> np.ndarray:
    """
    n x m matrix: weight from each vertex into each cell
    """
    _check_cover(g, pi)
    return g.adjacency @ pi.indicator()


def is_equitable(g: Graph, pi: Partition, tol: float = 1e-9) -> tuple[bool, Optional[tuple[int, int]]]:
    """
    Returns
    =======
    (True, None) when equitable, else (False, (vertex, cell)) where `vertex` has the
    smallest weight sum into `cell` among the vertices of its own cell
    """
    sums  = cell_sums(g, pi)
    cells = pi.cells()

    for cell in cells:
        block = sums[cell, :]
        spread = block.max(axis=0) - block.min(axis=0)

        for k in range(pi.m):
            if spread[k] > tol:
                x = cell[int(np.argmin(block[:, k]))]
                return False, (x, k)

    return True, None


def stable_colors(adj: np.ndarray, colors: Sequence[int], decimals: int = SIGNATURE_DECIMALS) -> list[int]:
    """
    Iterates colour refinement to a fixed point. New colours are ranks of the
    signature (old colour, rounded weight sums into each colour), so the result
    does not depend on vertex labels.
    """
    colors = list(colors)
    n      = len(colors)
    count  = len(set(colors))

    rounds = 0
    while True:
        ind = np.zeros((n, count))
        ind[np.arange(n), colors] = 1.0
        sums = np.round(adj @ ind, decimals) + 0.0

        sigs = [ (colors[x], tuple(sums[x])) for x in range(n) ]
        rank = { sig : i for i, sig in enumerate(sorted(set(sigs))) }
        new  = [ rank[sig] for sig in sigs ]

        rounds += 1
        if len(rank) == count:
            logger.debug(f'refinement stable after {rounds} rounds, {count} cells')
            return new

        colors = new
        count  = len(rank)


def dense_colors(colors: Sequence[int]) -> list[int]:
    rank = { c : i for i, c in enumerate(sorted(set(colors))) }
    return [ rank[c] for c in colors ]


def refine(g: Graph, initial: Partition) -> Partition:
    """
    Coarsest equitable refinement of `initial`, cells numbered by smallest vertex
    """
    _check_cover(g, initial)
    colors = stable_colors(g.adjacency, dense_colors(initial.cell_of))
    return Partition(colors).canonical()


def seeded_partition(g: Graph, a: int, b: int) -> Partition:
    """
    refine(G, {{a}, {b}, rest}); a and b stay singletons
    """
    check_vertex(g, a)
    check_vertex(g, b)
    if a == b:
        raise InputError('Seeded partition needs two distinct vertices')

    cell_of = [ 2 ]*g.n
    cell_of[a] = 0
    cell_of[b] = 1
    if g.n == 2:
        cell_of = [ 0, 1 ] if a == 0 else [ 1, 0 ]

    return refine(g, Partition(cell_of))


def distance_partition(g: Graph, a: int, b: Optional[int] = None) -> Partition:
    """
    Cells are the classes of equal (d_a(x), d_b(x)) (or d_a(x) alone). Not
    necessarily equitable; check with is_equitable.
    """
    da = hop_distances(g, a)
    db = hop_distances(g, b) if b is not None else np.zeros(g.n)

    if not (np.all(np.isfinite(da)) and np.all(np.isfinite(db))):
        raise InputError('Distance partition needs a connected graph')

    keys = [ (int(da[x]), int(db[x])) for x in range(g.n) ]
    return Partition(dense_colors(keys)).canonical()


def partition_matrix(pi: Partition) -> NormalizedPartitionMatrix:
    return NormalizedPartitionMatrix(pi)


def quotient(g: Graph, pi: Partition, tol: float = 1e-9) -> QuotientResult:
    """
    A(G/π)[j][k] = sqrt(d_jk * d_kj), loops d_jj; equals Q^T A Q for equitable π
    """
    ok, witness = is_equitable(g, pi, tol)
    if not ok:
        raise PreconditionError(f'Partition is not equitable: vertex {witness[0]} into cell {witness[1]}', witness)

    sizes = np.array(pi.sizes(), dtype=float)
    d = (pi.indicator().T @ cell_sums(g, pi)) / sizes[:, None]

    adj = np.sqrt(np.clip(d*d.T, 0.0, None))
    np.fill_diagonal(adj, np.diag(d))

    name = None if g.name is None else f'{g.name}/π'
    return QuotientResult(Graph(adj, name), pi, d)


def verify_partition_identities(g: Graph, pi: Partition) -> PartitionIdentityReport:
    result = quotient(g, pi)

    q    = partition_matrix(pi).entries
    a    = g.adjacency
    proj = q @ q.T

    block = np.zeros_like(proj)
    for cell in pi.cells():
        block[np.ix_(cell, cell)] = 1.0/len(cell)

    return PartitionIdentityReport(
        orthonormal    = float(np.max(np.abs(q.T @ q - np.eye(pi.m)))),
        block_diagonal = float(np.max(np.abs(proj - block))),
        commutator     = float(np.max(np.abs(proj @ a - a @ proj))),
        quotient       = float(np.max(np.abs(result.quotient.adjacency - q.T @ a @ q))),
    )


def distance_minimal(g: Graph, a: int, b: int) -> bool:
    """
    True iff x -> (d_a(x), d_b(x)) is injective (hop counts on the support)
    """
    check_vertex(g, a)
    check_vertex(g, b)
    if a == b:
        raise InputError('distance_minimal needs two distinct vertices')

    da = hop_distances(g, a)
    db = hop_distances(g, b)
    if not (np.all(np.isfinite(da)) and np.all(np.isfinite(db))):
        raise InputError('distance_minimal needs a connected graph')

    pairs = { (int(x), int(y)) for x, y in zip(da, db) }
    return len(pairs) == g.n


def product_partition(partitions: Sequence[Partition]) -> Partition:
    """
    Partition of a Cartesian product whose cells are tuples of factor cells, numbered
    row-major; its normalized matrix is the Kronecker product of the factor matrices
    """
    cell_of = [ 0 ]
    m = 1
    for pi in partitions:
        cell_of = [ c*pi.m + d for c in cell_of for d in pi.cell_of ]
        m *= pi.m

    return Partition(cell_of)


def pulled_back(partitions: Sequence[Partition], outer: Partition) -> Partition:
    """
    Composes a product of cell maps with a partition of the product's cells:
    vertex x lands in outer cell of (π_1(x_1), ..., π_r(x_r))
    """
    inner = product_partition(partitions)
    if inner.m != outer.n:
        raise InputError(f'Outer partition covers {outer.n} cells, product has {inner.m}')

    return Partition(dense_colors([ outer.cell_of[c] for c in inner.cell_of ]))
