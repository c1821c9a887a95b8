# pylint: disable=missing-docstring
import os

import pytest

from csbp.core import exc
from csbp.core.conf import discover_config, load_config, resolve_config
from csbp.testing import write_config


def test_json(tmp_path):
    path = write_config(tmp_path, {'x': 3.0})

    config = load_config(path)
    assert config.x == 3.0
    assert config.path == path


def test_yaml(tmp_path):
    path = tmp_path / 'csbp.yaml'
    path.write_text("x: 2.5\nsim:\n  dt: 0.01\n")

    config = load_config(str(path))
    assert config.x == 2.5
    assert config.sim.dt == 0.01


def test_empty_yaml_is_all_defaults(tmp_path):
    path = tmp_path / 'csbp.yaml'
    path.write_text("")

    assert load_config(str(path)).x == 1.0


def test_pyproject(tmp_path):
    path = tmp_path / 'pyproject.toml'
    path.write_text("[tool.csbp]\nx = 4.0\n\n[tool.csbp.sim]\nseed = 9\n")

    config = load_config(str(path))
    assert config.x == 4.0
    assert config.sim.seed == 9


def test_unknown_format(tmp_path):
    with pytest.raises(exc.ConfigError):
        load_config(str(tmp_path / 'csbp.ini'))


def test_discover_walks_up(tmp_path):
    path = write_config(tmp_path, {})
    nested = tmp_path / 'a' / 'b'
    nested.mkdir(parents=True)

    assert discover_config(str(nested)) == path


def test_discover_skips_pyproject_without_table(tmp_path):
    nested = tmp_path / 'project'
    nested.mkdir()
    (nested / 'pyproject.toml').write_text("[tool.black]\nline-length = 90\n")
    path = write_config(tmp_path, {})

    assert discover_config(str(nested)) == path


def test_discover_prefers_json(tmp_path):
    (tmp_path / 'csbp.yaml').write_text("x: 2\n")
    path = write_config(tmp_path, {})

    assert discover_config(str(tmp_path)) == path


def test_resolve_falls_back_to_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    # Only if no parent of tmp_path holds a config either.
    if discover_config() is None:
        assert resolve_config().path is None


def test_resolve_missing_file(tmp_path):
    with pytest.raises(exc.ConfigError) as info:
        resolve_config(os.path.join(str(tmp_path), 'nope.json'))

    assert info.value.field == 'config'
