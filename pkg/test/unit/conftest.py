# Import all fixtures
from csbp.testing.fixtures import *  # noqa pylint: disable=wildcard-import unused-import unused-wildcard-import
