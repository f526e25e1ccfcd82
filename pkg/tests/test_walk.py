import math

import numpy as np
import pytest

from pstkit import feder, graph, partition, spectral, walk
from pstkit.errors import InputError, NumericError, PreconditionError
from pstkit.partition import Partition


def test_golden_section_finds_vertex():
    t, f = walk.golden_section_max(lambda x: -(x - 1.2)**2, 0.0, 3.0, 1e-10, 200)
    assert t == pytest.approx(1.2, abs=1e-6)
    assert f == pytest.approx(0.0, abs=1e-10)


def test_scan_finds_k2_transfer():
    series = walk.fidelity_scan(graph.complete(2), 0, 1, 3.0, steps=301)
    peak   = series.top()

    assert peak.t == pytest.approx(math.pi/2, abs=1e-9)
    assert peak.fidelity == pytest.approx(1.0, abs=1e-12)
    assert len(series.times) == 301


def test_scan_peaks_sorted_by_fidelity():
    series = walk.fidelity_scan(graph.path(4), 0, 3, 20.0, steps=2000)
    fids   = [ peak.fidelity for peak in series.peaks ]

    assert fids == sorted(fids, reverse=True)
    assert fids[0] < 0.999


def test_scan_csv_and_peaks_json():
    series = walk.fidelity_scan(graph.complete(2), 0, 1, 1.0, steps=3)
    lines  = series.to_csv().splitlines()

    assert lines[0] == 't,fidelity'
    assert lines[1].startswith('0,')
    assert len(lines) == 4
    assert series.peaks_json().startswith('[')


def test_scan_rejects_bad_window():
    with pytest.raises(InputError):
        walk.fidelity_scan(graph.complete(2), 0, 1, 0.0)

    with pytest.raises(InputError):
        walk.fidelity_scan(graph.complete(2), 0, 1, 1.0, steps=1)

    with pytest.raises(InputError):
        walk.fidelity_scan(graph.complete(2), 0, 2, 1.0)


def test_coarse_scan_warns():
    with pytest.warns(UserWarning, match='peaks may be missed'):
        walk.fidelity_scan(graph.path(4), 0, 3, 100.0, steps=10)


def test_series_validation():
    with pytest.raises(NumericError):
        walk.FidelitySeries(np.array([ 0.0, 0.0 ]), np.array([ 0.5, 0.5 ]), [])

    with pytest.raises(NumericError):
        walk.FidelitySeries(np.array([ 0.0, 1.0 ]), np.array([ 0.5, 1.5 ]), [])


def test_worker_pool_matches_serial():
    g = graph.hypercube(3)

    walk.SETTINGS['workers'] = 1
    serial = walk.fidelity_scan(g, 0, 7, 6.0, steps=5000).values

    walk.SETTINGS['workers'] = 3
    pooled = walk.fidelity_scan(g, 0, 7, 6.0, steps=5000).values

    assert np.array_equal(serial, pooled)


def test_pst_times_on_hypercube():
    hits = walk.pst_times(graph.hypercube(3), 0, 7, 5.0, steps=2001)

    assert [ hit.t for hit in hits ] == pytest.approx([ math.pi/2, 3*math.pi/2 ], abs=1e-7)


def test_refined_times_match_symbolic_forms():
    d6, _ = feder.feder_graph(graph.path(3), 2)
    hit   = walk.pst_times(d6, 0, 5, 3.0, steps=3001)[0]

    assert hit.t == pytest.approx(math.pi/math.sqrt(2), abs=1e-9)
    assert walk.symbolic_time(hit.t) == '√2π/2'

    g, a, b = graph.godsil_family(2)
    hit     = walk.pst_times(g, a, b, 1.0, steps=1001)[0]

    assert hit.t == pytest.approx(math.pi/4, abs=1e-9)
    assert walk.symbolic_time(hit.t) == 'π/4'


def test_refine_peak_falls_back_without_bracket():
    spectrum = spectral.eigendecompose(graph.complete(2))

    # |cos t| falls across [0.2, 1.2], so the maximum sits at the left end
    t = walk.refine_peak(spectrum, 0, 1, 0.2, 1.2)
    assert t == pytest.approx(0.2, abs=1e-6)


def test_verify_pst_and_periodicity():
    assert walk.verify_pst(graph.christandl_path(5), 0, 5, math.pi/2)
    assert not walk.verify_pst(graph.path(5), 0, 4, math.pi/2)
    assert walk.is_periodic(graph.complete(2), 0, math.pi)


def test_equivalence_on_seeded_quotient():
    g, a, b = graph.godsil_family(2)
    pi      = partition.seeded_partition(g, a, b)
    times   = np.random.default_rng(3).uniform(0.0, 8.0, 25)

    assert walk.verify_equivalence(g, pi, a, b, times) < 1e-10


def test_equivalence_needs_singleton_endpoints():
    q3 = graph.hypercube(3)
    pi = partition.distance_partition(q3, 0)

    with pytest.raises(PreconditionError) as e:
        walk.verify_equivalence(q3, pi, 0, 1, [ 1.0 ])
    assert e.value.witness == 1

    with pytest.raises(InputError):
        walk.verify_equivalence(q3, Partition.singletons(8), 0, 7, [])


def test_symbolic_time():
    assert walk.symbolic_time(math.pi/4) == 'π/4'
    assert walk.symbolic_time(math.pi/2) == 'π/2'
    assert walk.symbolic_time(3*math.pi/4) == '3π/4'
    assert walk.symbolic_time(math.sqrt(15)*math.pi/4) == '√15π/4'
    assert walk.symbolic_time(1.0) is None
    assert walk.symbolic_time(-1.0) is None
