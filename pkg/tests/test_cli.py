import json
import math

from core.Workbench import Workbench
from pstkit import graph


PI_2 = repr(math.pi/2)


def build(wb: Workbench, path, family: str, *params: str) -> int:
    argv = [ 'build', '--family', family, '--out', str(path) ]
    for param in params:
        argv += [ '--param', param ]
    return wb.run(argv)


def test_build_writes_canonical_json(bench, tmp_path):
    wb, stdout = bench
    out = tmp_path/'q3.json'

    assert build(wb, out, 'hypercube', 'd=3') == Workbench.EXIT_OK
    assert out.read_text() == graph.to_json(graph.hypercube(3))
    assert stdout.getvalue() == ''


def test_build_to_stdout(bench):
    wb, stdout = bench

    assert wb.run([ 'build', '--family', 'path', '--param', 'n=3' ]) == Workbench.EXIT_OK
    assert graph.from_json(stdout.getvalue()) == graph.path(3)


def test_existing_output_needs_force(bench, tmp_path):
    wb, _ = bench
    out = tmp_path/'g.json'
    out.write_text('keep me')

    assert build(wb, out, 'path', 'n=3') == Workbench.EXIT_INPUT
    assert out.read_text() == 'keep me'

    assert wb.run([ 'build', '--family', 'path', '--param', 'n=3', '--out', str(out), '--force' ]) == Workbench.EXIT_OK
    assert graph.from_json(out.read_text()) == graph.path(3)


def test_graph_json_passes_through_unchanged(bench, tmp_path):
    wb, _ = bench
    src = tmp_path/'cp.json'
    dst = tmp_path/'cp_scaled.json'

    assert build(wb, src, 'christandl_path', 'n=4') == Workbench.EXIT_OK
    assert wb.run([ 'scale', '--graph', str(src), '--factor', '1', '--out', str(dst) ]) == Workbench.EXIT_OK
    assert dst.read_bytes() == src.read_bytes()


def test_input_errors_exit_2(bench, tmp_path):
    wb, _ = bench

    assert wb.run([ 'build', '--family', 'lattice', '--param', 'n=3' ]) == Workbench.EXIT_INPUT
    assert wb.run([ 'build', '--family', 'path', '--param', 'n' ]) == Workbench.EXIT_INPUT
    assert wb.run([ 'fidelity', '--graph', str(tmp_path/'missing.json'), '--from', '0', '--to', '1', '--time', '1' ]) == Workbench.EXIT_INPUT
    assert wb.run([ 'no-such-command' ]) == Workbench.EXIT_INPUT
    assert wb.run([ 'fidelity', '--graph' ]) == Workbench.EXIT_INPUT


def test_guard_errors_exit_3(bench, tmp_path):
    wb, _ = bench
    k2 = tmp_path/'k2.json'
    build(wb, k2, 'complete', 'n=2')

    assert wb.run([ 'orbit-quotient', '--graph', str(k2), '--k', '13' ]) == Workbench.EXIT_NUMERIC


def test_product_and_power(bench, tmp_path):
    wb, _ = bench
    k2  = tmp_path/'k2.json'
    out = tmp_path/'q3.json'
    build(wb, k2, 'complete', 'n=2')

    assert wb.run([ 'product', '--graph', str(k2), '--power', '3', '--out', str(out) ]) == Workbench.EXIT_OK
    assert graph.from_json(out.read_text()) == graph.hypercube(3)


def test_refine_and_quotient(bench, tmp_path):
    wb, stdout = bench
    q3   = tmp_path/'q3.json'
    part = tmp_path/'pi.json'
    quot = tmp_path/'quot.json'
    build(wb, q3, 'hypercube', 'd=3')

    assert wb.run([ 'refine', '--graph', str(q3), '--from', '0', '--to', '7', '--out', str(part) ]) == Workbench.EXIT_OK
    assert json.loads(part.read_text()) == { 'm' : 4, 'cells' : [[ 0 ], [ 1, 2, 4 ], [ 3, 5, 6 ], [ 7 ]] }

    cells = tmp_path/'cells.json'
    argv  = [ 'quotient', '--graph', str(q3), '--partition', str(part), '--out', str(quot), '--map', str(cells) ]
    assert wb.run(argv) == Workbench.EXIT_OK

    q    = graph.from_json(quot.read_text())
    cmap = json.loads(cells.read_text())
    assert cmap['m'] == q.n == 4
    assert sorted(cmap['cells']) == [[ 0 ], [ 1, 2, 4 ], [ 3, 5, 6 ], [ 7 ]]
    assert all(cmap['cell_of'][x] == j for j, cell in enumerate(cmap['cells']) for x in cell)

    cell_of = cmap['cell_of']
    assert q.adjacency[cell_of[1], cell_of[3]] == 2.0


def test_quotient_reports_witness(bench, tmp_path):
    wb, stdout = bench
    p3   = tmp_path/'p3.json'
    part = tmp_path/'pi.json'
    build(wb, p3, 'path', 'n=3')
    part.write_text('{"m": 2, "cells": [[0, 1], [2]]}')

    assert wb.run([ 'quotient', '--graph', str(p3), '--partition', str(part) ]) == Workbench.EXIT_INPUT
    assert json.loads(stdout.getvalue()) == { 'equitable' : False, 'vertex' : 0, 'cell' : 1 }


def test_walk_commands(bench, tmp_path):
    wb, stdout = bench
    q3    = tmp_path/'q3.json'
    csv   = tmp_path/'scan.csv'
    peaks = tmp_path/'peaks.json'
    build(wb, q3, 'hypercube', 'd=3')

    assert wb.run([ 'pst-verify', '--graph', str(q3), '--from', '0', '--to', '7', '--time', PI_2 ]) == Workbench.EXIT_OK
    assert wb.run([ 'pst-verify', '--graph', str(q3), '--from', '0', '--to', '3', '--time', PI_2 ]) == Workbench.EXIT_FALSE
    assert stdout.getvalue().split() == [ 'true', 'false' ]

    argv = [ 'scan', '--graph', str(q3), '--from', '0', '--to', '7', '--tmax', '2', '--steps', '500', '--out', str(csv), '--peaks', str(peaks) ]
    assert wb.run(argv) == Workbench.EXIT_OK
    assert csv.read_text().splitlines()[0] == 't,fidelity'
    assert abs(json.loads(peaks.read_text())[0]['t'] - math.pi/2) < 1e-6


def test_fidelity_json(bench, tmp_path):
    wb, stdout = bench
    k2 = tmp_path/'k2.json'
    build(wb, k2, 'complete', 'n=2')

    assert wb.run([ 'fidelity', '--graph', str(k2), '--from', '0', '--to', '1', '--time', PI_2, '--json' ]) == Workbench.EXIT_OK
    doc = json.loads(stdout.getvalue())
    assert abs(doc['fidelity'] - 1.0) < 1e-12


def test_feder_commands(bench, tmp_path):
    wb, stdout = bench
    k2   = tmp_path/'k2.json'
    fed  = tmp_path/'f.json'
    vecs = tmp_path/'map.json'
    build(wb, k2, 'complete', 'n=2')

    assert wb.run([ 'feder', '--graph', str(k2), '--k', '3', '--out', str(fed), '--map', str(vecs) ]) == Workbench.EXIT_OK
    assert graph.from_json(fed.read_text()) == graph.christandl_path(3)
    assert [ entry['counts'] for entry in json.loads(vecs.read_text()) ] == [[ 3, 0 ], [ 2, 1 ], [ 1, 2 ], [ 0, 3 ]]

    assert wb.run([ 'compose', '--graph', str(k2), '--m1', '2', '--m2', '2' ]) == Workbench.EXIT_OK
    assert json.loads(stdout.getvalue())['pass'] is True


def test_cubelike_command(bench):
    wb, stdout = bench

    assert wb.run([ 'cubelike', '--generators', '100,010,001,011' ]) == Workbench.EXIT_OK
    doc = json.loads(stdout.getvalue())
    assert (doc['omega'], doc['case'], doc['target'], doc['certified']) == ('100', 'omega', '100', True)

    assert wb.run([ 'cubelike', '--generators', '100,010' ]) == Workbench.EXIT_INPUT


def test_symmetry_commands(bench, tmp_path):
    wb, stdout = bench
    p4 = tmp_path/'p4.json'
    c5 = tmp_path/'c5.json'
    build(wb, p4, 'path', 'n=4')
    build(wb, c5, 'cycle', 'n=5')

    assert wb.run([ 'aut', '--graph', str(c5) ]) == Workbench.EXIT_OK
    assert wb.run([ 'aut', '--graph', str(p4), '--swap', '0', '1' ]) == Workbench.EXIT_FALSE
    assert wb.run([ 'iso', '--left', str(p4), '--right', str(c5) ]) == Workbench.EXIT_FALSE
    assert stdout.getvalue().split() == [ '10', 'false', 'false' ]


def test_verify_unknown_suite_is_usage_error(bench):
    wb, _ = bench
    assert wb.run([ 'verify', '--suite', 'nope' ]) == Workbench.EXIT_INPUT


def test_reports_store_disabled(bench):
    wb, stdout = bench
    assert wb.run([ 'reports' ]) == Workbench.EXIT_OK
    assert stdout.getvalue() == ''
