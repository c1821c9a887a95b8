# pylint: disable=missing-docstring
import pytest

from csbp.core import exc
from csbp.core.conf import RunConfig, apply_overrides, from_context
from csbp.testing import patch_context, write_config


FELLER = '{"a": -1, "sigma": 1.4142135623730951}'


def test_apply_overrides():
    config = apply_overrides(RunConfig(), {'sim.dt': 0.01, 'x': None, 'paths': 50})

    assert config.sim.dt == 0.01
    assert config.x == 1.0
    assert config.paths == 50


def test_overrides_are_validated():
    with pytest.raises(exc.ConfigError) as info:
        apply_overrides(RunConfig(), {'sim.eps': 2.0})

    assert info.value.field == 'sim.eps'


def test_config_file_then_flags(tmp_path):
    path = write_config(tmp_path, {'x': 2.0, 'paths': 100, 'sim': {'seed': 1}})

    @patch_context(config=path, seed=5, out_dir='reports')
    def run():
        return from_context(FELLER, {'paths': 20})

    config = run()
    assert config.x == 2.0
    assert config.paths == 20
    assert config.sim.seed == 5
    assert config.output.out_dir == 'reports'
    assert config.mechanism.rho == pytest.approx(1.0)


def test_command_seed_wins(tmp_path):
    path = write_config(tmp_path, {})

    @patch_context(config=path, seed=5)
    def run():
        return from_context(overrides={'sim.seed': 8})

    assert run().sim.seed == 8


def test_mechanism_file_may_be_a_whole_config(tmp_path):
    mech_file = write_config(tmp_path, {'mechanism': {'a': 0, 'sigma': 1}}, 'other.json')
    path = write_config(tmp_path, {})

    @patch_context(config=path)
    def run():
        return from_context(mech_file)

    assert run().mechanism.sigma == 1.0


@pytest.mark.parametrize('mech', ['{"a": ', 'no-such-file.json'])
def test_bad_mechanism_option(tmp_path, mech):
    path = write_config(tmp_path, {})

    @patch_context(config=path)
    def run():
        return from_context(mech)

    with pytest.raises(exc.ConfigError) as info:
        run()

    assert info.value.field == 'mech'
