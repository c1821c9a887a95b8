"""
.. module:: csbp.core.conf
    :synopsis: Run configuration: loading, discovery and validation.

A run config is a JSON document (YAML and a ``[tool.csbp]`` table in
``pyproject.toml`` are accepted too)::

    {
        "mechanism": {"a": -1.0, "sigma": 1.4142135623730951, "levy": {"kind": "zero"}},
        "x": 1.0,
        "paths": 10000,
        "multiplier": 3.0,
        "sim": {"horizon": 1.0, "dt": 0.001, "eps": 0.01, "seed": 0},
        "laplace": {"thetas": [0.5, 1.0, 2.0], "times": [0.5, 1.0, 2.0]},
        "condition": {"mode": "weight", "t": 1.0, "theta": 1.0},
        "lamperti": {"direction": "roundtrip"},
        "output": {"out_dir": "."}
    }

Every section is optional and filled with defaults. Unknown keys and values
outside their range are rejected with a `ConfigError` naming the dotted path
of the offending field, e.g. ``mechanism.sigma``.
"""
import dataclasses
import json
import math
import os
from typing import Any, Dict, List, Optional, Type, TypeVar, Union

from . import context, exc, log, util
from .mechanism import BranchingMechanism, LevyKind, LevyMeasure
from .simulate import SimConfig


ConfigDict = Dict[str, Any]
T = TypeVar('T')
CONFIG_FILES = ('csbp.json', 'csbp.yaml', 'pyproject.toml')
CONDITION_MODES = ('weight', 'mark', 'reject')
LAMPERTI_DIRECTIONS = ('lz', 'zl', 'roundtrip')
OUTPUT_FORMATS = ('binary', 'csv')


@dataclasses.dataclass(frozen=True)
class LaplaceOptions:
    thetas: List[float] = dataclasses.field(default_factory=lambda: [0.5, 1.0, 2.0])
    times: List[float] = dataclasses.field(default_factory=lambda: [0.5, 1.0, 2.0])


@dataclasses.dataclass(frozen=True)
class ConditionOptions:
    """ Options of the ``condition`` command.

    ``s`` empty means the whole s-ladder for the mechanism.
    """
    mode: str = 'weight'
    t: float = 1.0
    theta: float = 1.0
    s: List[float] = dataclasses.field(default_factory=list)


@dataclasses.dataclass(frozen=True)
class LampertiOptions:
    direction: str = 'roundtrip'
    t: float = 1.0
    theta: float = 1.0


@dataclasses.dataclass(frozen=True)
class OutputOptions:
    out_dir: str = '.'
    format: str = 'binary'


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """ Everything a run needs besides the command line. """
    mechanism: Optional[BranchingMechanism] = None
    x: float = 1.0
    paths: int = 10000
    multiplier: float = 3.0
    sim: SimConfig = dataclasses.field(default_factory=SimConfig)
    laplace: LaplaceOptions = dataclasses.field(default_factory=LaplaceOptions)
    condition: ConditionOptions = dataclasses.field(default_factory=ConditionOptions)
    lamperti: LampertiOptions = dataclasses.field(default_factory=LampertiOptions)
    output: OutputOptions = dataclasses.field(default_factory=OutputOptions)
    path: Optional[str] = dataclasses.field(default=None, compare=False)

    def require_mechanism(self) -> BranchingMechanism:
        if self.mechanism is None:
            raise exc.ConfigError("a mechanism is required", field='mechanism')
        return self.mechanism

    def to_dict(self) -> ConfigDict:
        """ The file representation, with every default spelled out. """
        return {
            'mechanism': self.mechanism.to_dict() if self.mechanism else None,
            'x': self.x,
            'paths': self.paths,
            'multiplier': self.multiplier,
            'sim': self.sim.to_dict(),
            'laplace': dataclasses.asdict(self.laplace),
            'condition': dataclasses.asdict(self.condition),
            'lamperti': dataclasses.asdict(self.lamperti),
            'output': dataclasses.asdict(self.output),
        }

    def stamp(self, seed: Optional[int] = None) -> ConfigDict:
        """ Version stamp embedded in every report and path dump. """
        from csbp import __version__

        return {
            'version': __version__,
            'mechanism': self.mechanism.to_dict() if self.mechanism else None,
            'config': self.to_dict(),
            'seed': self.sim.seed if seed is None else seed,
        }

    @classmethod
    def from_config(cls: Type['RunConfig'], conf: ConfigDict, path: Optional[str] = None):
        if not isinstance(conf, dict):
            raise exc.ConfigError("the config must be a mapping")

        fields = {f.name for f in dataclasses.fields(cls)} - {'path'}
        _reject_unknown(conf, fields, '')

        mechanism = conf.get('mechanism')
        x = _number(conf, 'x', 1.0, '', lambda v: v > 0)
        paths = int(_number(
            conf, 'paths', 10000, '', lambda v: v >= 2 and float(v).is_integer()
        ))
        multiplier = _number(conf, 'multiplier', 3.0, '', lambda v: v > 0)

        return cls(
            mechanism=None if mechanism is None else parse_mechanism(mechanism),
            x=x,
            paths=paths,
            multiplier=multiplier,
            sim=SimConfig.from_config(_section(conf, 'sim'), path='sim'),
            laplace=_load_section(LaplaceOptions, conf, 'laplace'),
            condition=_load_section(ConditionOptions, conf, 'condition'),
            lamperti=_load_section(LampertiOptions, conf, 'lamperti'),
            output=_load_section(OutputOptions, conf, 'output'),
            path=path,
        )


def parse_config(data: Union[str, bytes], path: Optional[str] = None) -> RunConfig:
    """ Parse and validate a JSON run config.

    Raises:
        ConfigError: malformed JSON or an invalid value.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as ex:
            raise exc.ConfigError(f"not UTF-8: {ex}")

    try:
        values = json.loads(data)
    except json.JSONDecodeError as ex:
        raise exc.ConfigError(f"invalid JSON at line {ex.lineno}: {ex.msg}")

    return RunConfig.from_config(values, path)


def load_config(path: str) -> RunConfig:
    """ Load a run config, picking the format by file name. """
    log.dbg("loading config from {}", path)

    if path.endswith('.json'):
        with open(path, 'rb') as fp:
            return parse_config(fp.read(), path)

    elif path.endswith(('.yaml', '.yml')):
        with open(path) as fp:
            values = util.yaml_load(fp) or {}

    elif path.endswith('pyproject.toml'):
        values = util.toml_load(path).get('tool', {}).get('csbp', {})

    else:
        raise exc.ConfigError(f"unsupported config file {path}")

    return RunConfig.from_config(values, path)


def discover_config(start: Optional[str] = None) -> Optional[str]:
    """ Find a config file in *start* (default: cwd) or any of its parents.

    ``pyproject.toml`` only counts when it has a ``[tool.csbp]`` table.
    """
    curr = os.path.abspath(start or os.getcwd())

    while True:
        for name in CONFIG_FILES:
            candidate = os.path.join(curr, name)
            if not os.path.isfile(candidate):
                continue
            if name != 'pyproject.toml' or _has_tool_table(candidate):
                return candidate

        parent = os.path.dirname(curr)
        if parent == curr:
            return None
        curr = parent


def resolve_config(path: Optional[str] = None) -> RunConfig:
    """ Load *path*, the discovered config or the defaults, in that order. """
    path = path or discover_config()
    if path is None:
        log.dbg("no config file found, using defaults")
        return RunConfig()

    if not os.path.isfile(path):
        raise exc.ConfigError(f"no such file {path}", field="config")

    return load_config(path)


def apply_overrides(config: RunConfig, overrides: ConfigDict) -> RunConfig:
    """ Replace values by dotted name and validate the result again.

    ``None`` values are skipped so unset command line flags keep the config.

    Examples:

        >>> from csbp.core.conf import RunConfig, apply_overrides
        >>> apply_overrides(RunConfig(), {"sim.dt": 0.01, "x": None}).sim.dt
        0.01
    """
    values = config.to_dict()
    for name, value in overrides.items():
        if value is None:
            continue
        try:
            util.set_in_dict(values, name, value)
        except KeyError as ex:
            raise exc.ConfigError("expected a table", field=ex.args[0])

    return RunConfig.from_config(values, config.path)


def from_context(
    mech: Optional[str] = None,
    overrides: Optional[ConfigDict] = None,
) -> RunConfig:
    """ The run config of a CLI command.

    Starts from `resolve_config` with the ``--config`` path, then applies
    ``--mech``, the command flags in *overrides* and finally the global
    ``--seed`` and ``--out-dir`` when the command did not set them.

    Args:
        mech (str):
            Mechanism as inline JSON or the path of a JSON file.
        overrides (dict):
            Dotted config names mapped to flag values, ``None`` for unset.
    """
    config = resolve_config(context.get('config', None))
    values = dict(overrides or {})

    if mech:
        values['mechanism'] = _mechanism_option(mech)
    if values.get('sim.seed') is None:
        values['sim.seed'] = context.get('seed', None)
    if values.get('output.out_dir') is None:
        values['output.out_dir'] = context.get('out_dir', None)

    return apply_overrides(config, values)


def parse_mechanism(conf: ConfigDict, path: str = 'mechanism') -> BranchingMechanism:
    """ Build a mechanism, validating every field before construction. """
    if not isinstance(conf, dict):
        raise exc.ConfigError("expected a mapping", field=path)

    _reject_unknown(conf, {'a', 'sigma', 'levy'}, path)
    a = _number(conf, 'a', 0.0, path, math.isfinite)
    sigma = _number(conf, 'sigma', 0.0, path, lambda v: v >= 0 and math.isfinite(v))

    levy_conf = conf.get('levy', {'kind': 'zero'})
    levy_path = f"{path}.levy"
    if not isinstance(levy_conf, dict):
        raise exc.ConfigError("expected a mapping", field=levy_path)

    kind = levy_conf.get('kind', 'zero')
    if kind not in {k.value for k in LevyKind}:
        raise exc.ConfigError(f"unknown kind {kind!r}", field=f"{levy_path}.kind")

    if kind == LevyKind.STABLE.value:
        _reject_unknown(levy_conf, {'kind', 'k', 'alpha'}, levy_path)
        _number(levy_conf, 'k', None, levy_path, lambda v: v > 0 and math.isfinite(v))
        _number(levy_conf, 'alpha', None, levy_path, lambda v: 1 < v < 2)
    elif kind == LevyKind.EXPJUMPS.value:
        _reject_unknown(levy_conf, {'kind', 'c', 'b'}, levy_path)
        _number(levy_conf, 'c', None, levy_path, lambda v: v > 0 and math.isfinite(v))
        _number(levy_conf, 'b', None, levy_path, lambda v: v > 0 and math.isfinite(v))
    else:
        _reject_unknown(levy_conf, {'kind'}, levy_path)

    try:
        return BranchingMechanism(a=a, sigma=sigma, levy=LevyMeasure.from_dict(levy_conf))
    except exc.DomainError as ex:
        raise exc.ConfigError(str(ex), field=path)


def _mechanism_option(value: str) -> ConfigDict:
    text = value
    if not value.lstrip().startswith('{'):
        if not os.path.isfile(value):
            raise exc.ConfigError(
                f"not inline JSON and no such file: {value}", field='mech'
            )
        with open(value) as fp:
            text = fp.read()

    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise exc.ConfigError(f"invalid JSON at line {ex.lineno}: {ex.msg}", field='mech')

    # Accept a whole run config too and take its mechanism.
    if isinstance(data, dict) and 'mechanism' in data:
        data = data['mechanism']
    return data


def _load_section(cls: Type[T], conf: ConfigDict, name: str) -> T:
    """ Generic loader for the flat option sections. """
    section = _section(conf, name)
    fields = {f.name: f for f in dataclasses.fields(cls)}   # type: ignore
    _reject_unknown(section, set(fields), name)

    values: Dict[str, Any] = {}
    for fname, field in fields.items():
        default = (
            field.default_factory()     # type: ignore
            if field.default is dataclasses.MISSING else field.default
        )
        raw = section.get(fname, default)
        dotted = f"{name}.{fname}"

        if isinstance(default, list):
            if not isinstance(raw, list):
                raw = [raw]
            try:
                values[fname] = [float(v) for v in raw]
            except (TypeError, ValueError):
                raise exc.ConfigError(
                    f"expected a list of numbers, got {raw!r}", field=dotted
                )
            if any(not math.isfinite(v) or v < 0 for v in values[fname]):
                raise exc.ConfigError("values must be finite and >= 0", field=dotted)

        elif isinstance(default, float):
            values[fname] = _number(section, fname, default, name, lambda v: v >= 0)

        else:
            if not isinstance(raw, str):
                raise exc.ConfigError(f"expected a string, got {raw!r}", field=dotted)
            values[fname] = raw

    choices = {
        'condition.mode': CONDITION_MODES,
        'lamperti.direction': LAMPERTI_DIRECTIONS,
        'output.format': OUTPUT_FORMATS,
    }
    for fname, value in values.items():
        allowed = choices.get(f"{name}.{fname}")
        if allowed and value not in allowed:
            raise exc.ConfigError(
                f"{value!r} is not one of {', '.join(allowed)}", field=f"{name}.{fname}"
            )

    return cls(**values)    # type: ignore


def _section(conf: ConfigDict, name: str) -> ConfigDict:
    section = conf.get(name) or {}
    if not isinstance(section, dict):
        raise exc.ConfigError("expected a mapping", field=name)
    return section


def _number(conf: ConfigDict, name: str, default: Any, path: str, check) -> float:
    dotted = f"{path}.{name}" if path else name
    raw = conf.get(name, default)

    if raw is None:
        raise exc.ConfigError("missing value", field=dotted)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise exc.ConfigError(f"expected a number, got {raw!r}", field=dotted)
    if not check(raw):
        raise exc.ConfigError(f"out of range: {raw!r}", field=dotted)

    return float(raw)


def _reject_unknown(conf: ConfigDict, known, path: str) -> None:
    for key in conf:
        if key not in known:
            raise exc.ConfigError("unknown key", field=f"{path}.{key}" if path else key)


def _has_tool_table(path: str) -> bool:
    try:
        return 'csbp' in util.toml_load(path).get('tool', {})
    except Exception:   # pylint: disable=broad-except
        return False
