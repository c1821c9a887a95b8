# Import all fixtures
import pytest
from click.testing import CliRunner

from csbp.testing.fixtures import *   # noqa pylint: disable=wildcard-import unused-import unused-wildcard-import


@pytest.fixture
def cli(tmp_path, monkeypatch):
    """ Invoke the CLI inside an empty temporary directory. """
    from csbp.main import csbp_cli

    monkeypatch.chdir(tmp_path)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(csbp_cli, list(args), catch_exceptions=False)

    yield invoke
