"""
.. module:: csbp.core.context
    :synopsis: Values of the global CLI options for the current run.

The CLI stores its global options here once they are parsed: ``verbose``,
``config``, ``seed``, ``threads`` and ``out_dir``. Library code reads them
with a default, so it behaves the same when called outside of the CLI:

    >>> from csbp.core import context
    >>>
    >>> context.get('threads', 1)
    1
"""
from typing import Any, Dict, Optional


OPTIONS = frozenset({'verbose', 'config', 'seed', 'threads', 'out_dir'})


class UnknownOption(KeyError):
    """ Only the global CLI options live in the context. """
    def __init__(self, name: str):
        super(UnknownOption, self).__init__(
            f"'{name}' is not a global option, pick one of {', '.join(sorted(OPTIONS))}"
        )


class RunContext(object):
    """ The context of the process.

    ``RunContext()`` always returns the same instance. Tests swap its
    ``values`` to run with a given context.
    """
    _instance: Optional['RunContext'] = None
    values: Dict[str, Any]

    def __new__(cls) -> 'RunContext':
        if cls._instance is None:
            cls._instance = super(RunContext, cls).__new__(cls)
            cls._instance.values = {}
        return cls._instance

    def get(self, name: str, *default: Any) -> Any:
        """ The value of *name*, or *default* when it was not set.

        Raises:
            AttributeError: not set and no *default* given.
        """
        if name in self.values:
            return self.values[name]
        if default:
            return default[0]

        raise AttributeError(f"context value '{name}' is not set")

    def has(self, name: str) -> bool:
        return name in self.values

    def set(self, name: str, value: Any) -> None:
        if name not in OPTIONS:
            raise UnknownOption(name)
        self.values[name] = value

    def clear(self) -> None:
        self.values = {}


def has(name: str) -> bool:
    return RunContext().has(name)


def get(name: str, *default: Any) -> Any:
    return RunContext().get(name, *default)


def set(name: str, value: Any) -> None:   # pylint: disable=redefined-builtin
    RunContext().set(name, value)


def clear() -> None:
    RunContext().clear()
