# pylint: disable=missing-docstring
import json

import pytest


QUADRATIC = '{"sigma": 1.4142135623730951}'


def test_describe(cli):
    result = cli('mechanism', 'describe', '-m', QUADRATIC, '--lam', '2')

    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data['criticality'] == 'critical'
    assert data['rho'] == 0
    assert data['values'][0]['psi'] == pytest.approx(4.0)
    assert data['regularity']['almost_sure_extinction'] is True


def test_describe_reads_the_config(cli):
    assert cli('init').exit_code == 0

    result = cli('mechanism', 'describe')

    assert result.exit_code == 0
    assert json.loads(result.output)['criticality'] == 'subcritical'


def test_missing_mechanism_is_a_config_error(cli):
    result = cli('mechanism', 'describe')

    assert result.exit_code == 2
    assert "invalid config value 'mechanism'" in result.output


@pytest.mark.parametrize('mech,code', [
    (QUADRATIC, 0),
    ('{"a": 1, "sigma": 1}', 2),
    ('{"a": -1}', 2),
])
def test_validate(cli, mech, code):
    assert cli('mechanism', 'validate', '-m', mech).exit_code == code


def test_mechanism_from_a_file(cli, tmp_path):
    (tmp_path / 'mech.json').write_text(QUADRATIC)

    assert cli('mechanism', 'validate', '-m', 'mech.json').exit_code == 0
