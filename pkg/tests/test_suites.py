import json

import pytest

from pstkit import suites
from pstkit.errors import InputError


def test_check_helpers():
    assert suites.Check('x', 1e-12, 1e-10).passed
    assert not suites.Check('x', 1e-8, 1e-10).passed
    assert suites.Check.flag('holds', True).passed
    assert not suites.Check.flag('holds', False).passed
    assert suites.Check.reached('peak', 1 - 1e-12, 1e-10).residual == pytest.approx(1e-12)
    assert suites.Check('forced', 5.0, 0.0, True).as_dict() == {
        'name' : 'forced', 'residual' : 5.0, 'tolerance' : 0.0, 'pass' : True,
    }


def test_report_text_and_json():
    report = suites.SuiteReport('demo', 7)
    report.add(suites.Check('good', 0.0, 1e-10))
    report.add(suites.Check('bad', 1.0, 1e-10))
    report.note('something to say')

    assert not report.passed
    assert report.text().splitlines()[0] == 'suite demo (seed 7)'
    assert report.text().splitlines()[-1] == '1/2 checks passed'
    assert 'note  something to say' in report.text()

    doc = json.loads(report.to_json())
    assert doc['seed'] == 7
    assert [ check['pass'] for check in doc['checks'] ] == [ True, False ]


def test_unknown_suite():
    with pytest.raises(InputError):
        suites.run_suite('nope')


def test_p4_family_weights():
    a, b = suites.p4_family_weights(2)
    assert a == pytest.approx(8/15**0.5)
    assert b == pytest.approx(6/15**0.5)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(suites.SUITES))
def test_suite_passes(name):
    report = suites.run_suite(name)

    assert report.seed == 20110407
    assert report.passed, report.text()


@pytest.mark.slow
def test_suite_is_seed_deterministic():
    first  = suites.run_suite('thm32', seed=5)
    second = suites.run_suite('thm32', seed=5)

    assert first.to_json() == second.to_json()
