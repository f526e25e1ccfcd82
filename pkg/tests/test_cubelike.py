import math

import pytest

from pstkit import cubelike, graph
from pstkit.cubelike import BinaryCode, CubelikeSpec
from pstkit.errors import GuardError, InputError


def test_spec_from_bitstrings():
    spec = CubelikeSpec.from_bitstrings('100, 010, 001, 011')
    assert spec.d == 3
    assert spec.generators == (4, 2, 1, 3)
    assert spec.bits(3) == '011'

    with pytest.raises(InputError):
        CubelikeSpec.from_bitstrings('10,011')

    with pytest.raises(InputError):
        CubelikeSpec.from_bitstrings('000,011')

    with pytest.raises(GuardError):
        CubelikeSpec(21, [ 1 ])


def test_omega_prediction():
    spec = CubelikeSpec.from_bitstrings('100,010,001,011')
    pred = cubelike.predict_pst(spec)

    assert cubelike.omega(spec) == 0b100
    assert (pred.source, pred.target, pred.time, pred.case) == (0, 0b100, math.pi/2, 'omega')


def test_hypercube_prediction_is_antipode():
    pred = cubelike.predict_pst(CubelikeSpec(4, [ 1, 2, 4, 8 ]))
    assert pred.target == 0b1111


def test_disconnected_spec_rejected():
    with pytest.raises(InputError):
        cubelike.predict_pst(CubelikeSpec.from_bitstrings('100,010'))


def test_gf2_rank():
    assert cubelike.gf2_rank([ 0b011, 0b101, 0b110 ]) == 2
    assert cubelike.gf2_rank([ 1, 2, 4 ]) == 3
    assert cubelike.gf2_rank([]) == 0


def test_code_rows_follow_generator_order():
    spec = CubelikeSpec.from_bitstrings('100,010,001,011')
    code = cubelike.code_of(spec)

    # row i holds bit i of each generator, generator j at position j
    assert code.rows == (0b1100, 0b1010, 0b0001)
    assert code.dimension == 3
    assert sorted(code.codewords()) == sorted({ a ^ b ^ c for a in (0, 0b1100) for b in (0, 0b1010) for c in (0, 0b0001) })


def test_code_weights_and_orthogonality():
    code = BinaryCode([ 0b1111, 0b0011 ], 4)

    assert cubelike.weight_gcd(code) == 2
    assert cubelike.is_self_orthogonal(code)
    assert cubelike.periodic_target(code) == 0b10

    assert cubelike.weight_gcd(BinaryCode([], 3)) == 0
    assert not cubelike.is_self_orthogonal(BinaryCode([ 0b101, 0b011 ], 3))


def test_certify_omega_case():
    cert = cubelike.certify(CubelikeSpec.from_bitstrings('100,010,001,011'))

    assert cert.certified
    assert cert.target == 0b100
    assert cert.fidelity == pytest.approx(1.0, abs=1e-10)
    assert cert.as_dict() == {
        'omega'     : '100',
        'case'      : 'omega',
        'target'    : '100',
        'time'      : math.pi/2,
        'fidelity'  : cert.fidelity,
        'certified' : True,
    }


def test_certify_without_prediction():
    # X(Z_2^2, {01, 10, 11}) is K4
    spec = CubelikeSpec.from_bitstrings('01,10,11')
    assert spec.graph() == graph.complete(4)
    assert cubelike.predict_pst(spec) is None

    cert = cubelike.certify(spec)
    assert cert.certified
    assert cert.target is None
    assert cert.as_dict()['case'] is None


def test_generating_sets():
    specs = list(cubelike.generating_sets(2))

    # every subset of {01, 10, 11} with two or more elements spans Z_2^2
    assert len(specs) == 4
    assert all(cubelike.gf2_rank(spec.generators) == 2 for spec in specs)


def test_all_omega_sets_transfer():
    for spec in cubelike.generating_sets(3):
        pred = cubelike.predict_pst(spec)
        if cubelike.omega(spec) != 0:
            assert pred.case == 'omega'
            assert cubelike.certify(spec).certified


def brute_code(spec: CubelikeSpec) -> set[int]:
    """
    Codewords as x -> (<x, g_j> mod 2)_j over every x in Z_2^d
    """
    words = set()
    for x in range(1 << spec.d):
        words.add(sum(((x & g).bit_count() % 2) << j for j, g in enumerate(spec.generators)))

    return words


@pytest.mark.parametrize('d, stride', [ (2, 1), (3, 1), (4, 37) ])
def test_code_and_weight_gcd_match_brute_force(d, stride):
    for spec in list(cubelike.generating_sets(d))[::stride]:
        words = brute_code(spec)
        code  = cubelike.code_of(spec)

        assert set(code.codewords()) == words
        assert code.dimension == d

        expected = 0
        for word in words:
            expected = math.gcd(expected, word.bit_count())
        assert cubelike.weight_gcd(code) == expected


def test_self_orthogonal_case_transfers():
    spec = CubelikeSpec.from_bitstrings(
        '110101,001010,010000,011110,110100,011101,000100,010010,100001,000110,100000,001001'
    )
    code = cubelike.code_of(spec)

    assert cubelike.omega(spec) == 0
    assert cubelike.weight_gcd(code) == 2
    assert cubelike.is_self_orthogonal(code)

    prediction = cubelike.predict_pst(spec)
    assert prediction.case == 'self-orthogonal'
    assert prediction.time == pytest.approx(math.pi/4)
    assert spec.bits(prediction.target) == '010100'

    cert = cubelike.certify(spec)
    assert cert.certified
    assert cert.fidelity == pytest.approx(1.0, abs=1e-9)
    assert cert.as_dict()['target'] == '010100'
