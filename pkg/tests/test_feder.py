import math

import numpy as np
import pytest

from pstkit import feder, graph, partition
from pstkit.errors import GuardError, InputError, PreconditionError
from pstkit.partition import Partition


def test_occupation_vectors_order():
    vectors = feder.occupation_vectors(2, 3)
    assert [ vec.counts for vec in vectors ] == [ (3, 0), (2, 1), (1, 2), (0, 3) ]

    vectors = feder.occupation_vectors(3, 2)
    assert len(vectors) == math.comb(4, 2)
    assert vectors[0].counts == (2, 0, 0)
    assert all(vec.k == 2 for vec in vectors)

    assert feder.OccupationVector([ 2, 0, 1 ]).moved(0, 1).counts == (1, 1, 1)


def test_single_boson_is_the_primary_graph():
    g = graph.star(4)
    assert feder.feder_graph(g, 1)[0] == g


def test_k2_bosons_give_weighted_paths():
    for n in range(1, 7):
        fg, _ = feder.feder_graph(graph.complete(2), n)
        assert np.allclose(fg.adjacency, graph.christandl_path(n).adjacency, atol=0, rtol=0)


def test_feder_needs_simple_graphs():
    with pytest.raises(InputError):
        feder.feder_graph(graph.weighted_p5(math.sqrt(2), 1.0), 2)

    with pytest.raises(InputError):
        feder.feder_graph(graph.complete(3), 0)


def test_orbit_partition_counts():
    orbits = feder.orbit_partition(graph.path(3), 3)

    assert orbits.partition.n == 27
    assert orbits.partition.m == math.comb(5, 3)
    assert orbits.keys[0] == (0, 0, 0)
    assert orbits.partition.sizes()[orbits.keys.index((0, 1, 2))] == 6


@pytest.mark.parametrize('g, k', [
    (graph.complete(2), 4),
    (graph.path(3), 2),
    (graph.path(3), 3),
    (graph.complete(3), 2),
    (graph.cycle(4), 2),
])
def test_orbit_quotient_is_feder_graph(g, k):
    ok, deviation = feder.verify_feder_iso(g, k)
    assert ok
    assert deviation < 1e-12


def test_symmetrizer_is_orbit_projector():
    sym, comm = feder.symmetrizer_check(graph.path(3), 3)
    assert sym < 1e-12
    assert comm < 1e-12


def test_compose_quotients():
    k2    = graph.complete(2)
    pi1   = feder.orbit_partition(k2, 2).partition
    first = partition.quotient(graph.cartesian_power(k2, 2), pi1).quotient
    pi2   = feder.orbit_partition(first, 2).partition

    report = feder.compose_quotients(k2, 2, pi1, 2, pi2)
    assert report.ok
    assert report.residual < 1e-10

    singles = feder.compose_quotients(k2, 1, Partition.singletons(2), 1, Partition.singletons(2))
    assert singles.ok
    assert singles.w_is_partition_matrix


def test_product_of_quotients():
    q3 = graph.hypercube(3)
    ok, residual = feder.product_of_quotients([
        (q3, partition.distance_partition(q3, 0, 7)),
        (graph.complete(4), Partition.unit(4)),
    ])
    assert ok and residual < 1e-10

    with pytest.raises(InputError):
        feder.product_of_quotients([])


def test_product_pst():
    k2 = graph.complete(2)
    k4 = graph.complete(4)

    assert feder.product_pst([ (k2, 0, 1), (k2, 0, 1) ], math.pi/2)
    assert feder.product_pst([ (k2, 0, 1), (k4, 2, 2) ], math.pi/2)

    with pytest.raises(PreconditionError) as e:
        feder.product_pst([ (k2, 0, 1), (k2, 1, 1) ], math.pi/2)
    assert e.value.witness == 1

    with pytest.raises(PreconditionError):
        feder.product_pst([ (k2, 0, 0) ], math.pi)


def test_propagator_identity():
    times = np.random.default_rng(5).uniform(0.0, 8.0, 6)
    assert feder.propagator_identity(graph.path(3), 2, times) < 1e-10


def test_product_guard():
    with pytest.raises(GuardError):
        feder.orbit_partition(graph.complete(2), 13)

    feder.SETTINGS['product_guard'] = 10
    with pytest.raises(GuardError):
        feder.symmetrizer_check(graph.path(4), 2)
