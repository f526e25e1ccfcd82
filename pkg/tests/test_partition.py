import math

import numpy as np
import pytest

from pstkit import graph, partition
from pstkit.errors import InputError, PreconditionError
from pstkit.partition import Partition


def test_partition_needs_dense_cells():
    with pytest.raises(InputError):
        Partition([ 0, 2, 2 ])

    with pytest.raises(InputError):
        Partition.from_cells([[ 0, 1 ], [ 1, 2 ]])

    pi = Partition.from_cells([[ 2 ], [ 0, 1 ]])
    assert pi.cell_of == (1, 1, 0)
    assert pi.canonical().cell_of == (0, 0, 1)
    assert pi.sizes() == [ 1, 2 ]


def test_refinement_order():
    fine   = Partition([ 0, 1, 2, 2 ])
    coarse = Partition([ 0, 0, 1, 1 ])

    assert fine.refines(coarse)
    assert not coarse.refines(fine)
    assert Partition.singletons(4).refines(Partition.unit(4))


def test_partition_json():
    pi   = Partition([ 1, 0, 1, 2 ])
    text = pi.to_json()

    assert text == '{"m": 3, "cells": [[0, 2], [1], [3]]}\n'
    assert Partition.from_json(text, 4) == Partition.from_json(text, 4).canonical()
    assert Partition.from_json(text, 4).to_json() == text

    with pytest.raises(InputError):
        Partition.from_json('{"m": 2, "cells": [[0, 1, 2]]}', 3)


def test_equitable_witness():
    g  = graph.path(3)
    pi = Partition([ 0, 0, 1 ])

    ok, witness = partition.is_equitable(g, pi)
    assert not ok
    assert witness == (0, 1)

    with pytest.raises(PreconditionError) as e:
        partition.quotient(g, pi)
    assert e.value.witness == (0, 1)


def test_star_quotient():
    g      = graph.star(4)
    result = partition.quotient(g, Partition([ 0, 1, 1, 1 ]))

    assert result.quotient.n == 2
    assert result.quotient.adjacency[0, 1] == pytest.approx(math.sqrt(3))
    assert result.d.tolist() == [[ 0.0, 3.0 ], [ 1.0, 0.0 ]]


def test_quotient_keeps_loops():
    pi     = Partition([ 0, 1, 1, 2 ])
    result = partition.quotient(graph.cycle(4), pi)

    assert np.diag(result.quotient.adjacency).tolist() == [ 0.0, 0.0, 0.0 ]

    result = partition.quotient(graph.complete(4), Partition([ 0, 1, 1, 1 ]))
    assert result.quotient.adjacency[1, 1] == 2.0


def test_hypercube_distance_quotient_is_weighted_path():
    q3 = graph.hypercube(3)
    pi = partition.distance_partition(q3, 0, 7)

    assert partition.is_equitable(q3, pi)[0]
    assert pi == partition.seeded_partition(q3, 0, 7)

    quot = partition.quotient(q3, pi).quotient
    assert np.allclose(quot.adjacency, graph.christandl_path(3).adjacency)


def test_seeded_partition_keeps_endpoints_apart():
    g, a, b = graph.godsil_family(2)
    pi      = partition.seeded_partition(g, a, b)

    assert pi.m == 4
    assert pi.is_singleton(a) and pi.is_singleton(b)

    s15  = math.sqrt(15)
    want = np.array([
        [ 0,   s15, 0,   0   ],
        [ s15, 6,   8,   0   ],
        [ 0,   8,   6,   s15 ],
        [ 0,   0,   s15, 0   ],
    ])
    assert np.allclose(partition.quotient(g, pi).quotient.adjacency, want)

    with pytest.raises(InputError):
        partition.seeded_partition(g, a, a)


def test_refine_is_coarsest_equitable():
    g  = graph.path(5)
    pi = partition.refine(g, Partition.unit(5))

    assert pi.cells() == [[ 0, 4 ], [ 1, 3 ], [ 2 ]]
    assert partition.refine(graph.cycle(6), Partition.unit(6)) == Partition.unit(6)


def test_partition_identities():
    for g, pi in (
        (graph.hypercube(3), partition.distance_partition(graph.hypercube(3), 0, 7)),
        (graph.path(5), partition.refine(graph.path(5), Partition.unit(5))),
        (graph.star(5), Partition([ 0, 1, 1, 1, 1 ])),
    ):
        report = partition.verify_partition_identities(g, pi)
        assert report.max_residual() < 1e-12
        assert set(report.as_dict()) == { 'orthonormal', 'block_diagonal', 'commutator', 'quotient' }


def test_normalized_matrix():
    q = partition.partition_matrix(Partition([ 0, 1, 1, 0 ]))
    assert q.entries[0, 0] == pytest.approx(1/math.sqrt(2))
    assert np.allclose(q.projector(), [
        [ 0.5, 0, 0, 0.5 ],
        [ 0, 0.5, 0.5, 0 ],
        [ 0, 0.5, 0.5, 0 ],
        [ 0.5, 0, 0, 0.5 ],
    ])


def test_distance_minimal():
    assert partition.distance_minimal(graph.path(4), 0, 3)
    assert not partition.distance_minimal(graph.hypercube(3), 0, 7)

    with pytest.raises(InputError):
        partition.distance_minimal(graph.disjoint_union(graph.path(2), graph.path(2)), 0, 1)


def test_product_partition_matches_kronecker():
    p1 = Partition([ 0, 1, 1 ])
    p2 = Partition([ 0, 0, 1 ])
    pp = partition.product_partition([ p1, p2 ])

    assert pp.n == 9 and pp.m == 4
    q = np.kron(partition.partition_matrix(p1).entries, partition.partition_matrix(p2).entries)
    assert np.allclose(partition.partition_matrix(pp).entries, q)


def test_pulled_back():
    inner = Partition([ 0, 1, 1 ])
    outer = Partition([ 0, 1, 1, 0 ])

    pi = partition.pulled_back([ inner, inner ], outer)
    assert pi.n == 9
    assert pi.cell_of[0] == pi.cell_of[4] == 0
    assert pi.cell_of[1] == pi.cell_of[3] == 1

    with pytest.raises(InputError):
        partition.pulled_back([ inner ], outer)


def test_map_json():
    pi = Partition([ 1, 0, 1, 2 ])
    assert pi.map_json() == '{"m": 3, "cell_of": [1, 0, 1, 2], "cells": [[1], [0, 2], [3]]}\n'


def set_partitions(n: int):
    """
    Every partition of range(n) as a cell_of tuple in restricted-growth form
    """
    def grow(prefix: list[int], m: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return

        for c in range(m + 1):
            yield from grow(prefix + [ c ], max(m, c + 1))

    yield from grow([ 0 ], 1)


def coarsest_equitable(g: graph.Graph) -> Partition:
    best = None
    for cell_of in set_partitions(g.n):
        pi = Partition(cell_of)
        if not partition.is_equitable(g, pi)[0]:
            continue

        if best is None or pi.m < best.m:
            best = pi

    return best


def random_connected(rng: np.random.Generator, n: int) -> graph.Graph:
    while True:
        upper = np.triu(rng.random((n, n)) < 0.5, 1).astype(float)
        g     = graph.Graph(upper + upper.T)
        if np.all(np.isfinite(graph.hop_distances(g, 0))):
            return g


def oracle_graphs() -> list[graph.Graph]:
    rng    = np.random.default_rng(20110407)
    graphs = [ random_connected(rng, int(rng.integers(2, 7))) for _ in range(200) ]

    graphs += [ graph.path(n) for n in range(2, 8) ]
    graphs += [ graph.cycle(n) for n in range(3, 8) ]
    graphs += [ graph.complete(n) for n in range(2, 8) ]
    return graphs


def test_refine_matches_brute_force():
    for g in oracle_graphs():
        expected = coarsest_equitable(g)
        found    = partition.refine(g, Partition.unit(g.n))

        assert found.canonical().cell_of == expected.canonical().cell_of, g


def test_refine_is_idempotent_and_refines_start():
    rng = np.random.default_rng(5)

    for _ in range(50):
        n     = int(rng.integers(2, 9))
        g     = random_connected(rng, n)
        start = Partition(partition.dense_colors(rng.integers(0, 3, n).tolist()))

        once  = partition.refine(g, start)
        twice = partition.refine(g, once)

        assert once.refines(start)
        assert partition.is_equitable(g, once)[0]
        assert twice.canonical().cell_of == once.canonical().cell_of


def test_partition_identities_on_random_samples():
    rng = np.random.default_rng(11)

    for _ in range(50):
        n = int(rng.integers(2, 8))
        w = np.triu(rng.uniform(0.5, 2.0, (n, n))*(rng.random((n, n)) < 0.6), 1)
        g = graph.Graph(w + w.T + np.diag(rng.uniform(0.0, 1.0, n)*(rng.random(n) < 0.3)))

        a, b = (int(x) for x in rng.choice(n, 2, replace=False))
        for pi in (partition.seeded_partition(g, a, b), partition.refine(g, Partition.unit(n))):
            assert partition.verify_partition_identities(g, pi).max_residual() < 1e-10
