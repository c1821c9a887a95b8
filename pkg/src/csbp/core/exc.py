import dataclasses
from typing import Any, Dict, Optional, Tuple


@dataclasses.dataclass
class ExcValues:
    args: Tuple
    kwargs: Dict[str, Any]


class CsbpError(Exception):
    msg: str = "csbp error"
    exit_code: int = 2

    def __init__(
        self,
        detail: Optional[str] = None,
        *args,
        **kw
    ):
        message = self.msg.format(*args, **kw) + (f": {detail}" if detail else '')
        super(CsbpError, self).__init__(message)

        self.detail = detail
        # self.args is already used by Exception
        self.values = ExcValues(args, kw)


class DomainError(CsbpError):
    """ An argument is outside the domain of the operation. """
    msg = "domain error"


class UnsupportedError(CsbpError):
    """ The operation is not defined for the given (e.g. supercritical) input. """
    msg = "unsupported"


class ConfigError(CsbpError):
    """ Invalid run configuration. ``field`` is the dotted path to the bad value. """
    msg = "invalid config value '{field}'"

    def __init__(self, detail: Optional[str] = None, *, field: str = '<root>'):
        super(ConfigError, self).__init__(detail, field=field)
        self.field = field


class NumericalError(CsbpError):
    msg = "numerical error"
    exit_code = 3


class ResourceError(CsbpError):
    msg = "resource limit exceeded"
    exit_code = 3


class StatisticalError(CsbpError):
    msg = "statistical error"
    exit_code = 1
