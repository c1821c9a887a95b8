# pylint: disable=missing-docstring
import pytest


def test_commands_are_registered_when_main_is_imported():
    from csbp.main import csbp_cli

    assert sorted(csbp_cli.commands) == [
        'condition', 'init', 'lamperti', 'laplace', 'mechanism', 'simulate', 'verify',
    ]
    assert sorted(csbp_cli.commands['mechanism'].commands) == ['describe', 'validate']


@pytest.mark.parametrize('name', ['init', 'laplace', 'verify', 'simulate'])
def test_every_command_has_help(name):
    from csbp.main import csbp_cli

    assert csbp_cli.commands[name].help
