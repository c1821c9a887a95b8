""" Types shared by the simulation engine, the ensembles and path I/O. """
import dataclasses
import enum
import math
from typing import Any, Dict, List, Type

import numpy as np

from csbp.core import exc


SimConf = Dict[str, Any]


class PathKind(str, enum.Enum):
    CSBP = 'csbp'
    QPROCESS = 'qprocess'
    LEVY = 'levy'


class AtomSource(str, enum.Enum):
    """ Which driving measure produced a jump. """
    CSBP = 'csbp'
    STAR = 'star'
    LEVY = 'levy'


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """ Discretization and randomness of a single path.

    Attributes:
        horizon (float):
            Simulate on ``[0, horizon]``.
        dt (float):
            Euler step. The last step is shortened to end at the horizon.
        eps (float):
            Jumps smaller than this are dropped, in ``(0, 1]``.
        seed (int):
            Run seed, shared by every path of an ensemble.
        path_index (int):
            Selects the random streams of this path.
        max_jumps (int):
            Cap on the number of jumps recorded in one path.
        record_rejected (bool):
            Keep the thinned candidates in ``SimPath.atoms``.
    """
    horizon: float = 1.0
    dt: float = 1e-3
    eps: float = 1e-2
    seed: int = 0
    path_index: int = 0
    max_jumps: int = 1_000_000
    record_rejected: bool = False

    def __post_init__(self):
        if not 0 < self.dt <= self.horizon:
            raise exc.DomainError(
                f"need 0 < dt <= horizon, got dt={self.dt}, horizon={self.horizon}"
            )
        if not 0 < self.eps <= 1:
            raise exc.DomainError(f"need 0 < eps <= 1, got {self.eps}")
        if self.max_jumps <= 0:
            raise exc.DomainError(f"max_jumps must be > 0, got {self.max_jumps}")
        if self.seed < 0 or self.path_index < 0:
            raise exc.DomainError("seed and path_index must be non-negative")

    @property
    def num_steps(self) -> int:
        return max(1, int(math.ceil(self.horizon / self.dt - 1e-9)))

    def step_times(self) -> np.ndarray:
        """ Euler step boundaries, ``0 = t_0 < ... < t_n = horizon``. """
        grid = np.arange(self.num_steps + 1, dtype=float) * self.dt
        grid[-1] = self.horizon
        return grid

    def for_path(self, path_index: int) -> 'SimConfig':
        return dataclasses.replace(self, path_index=path_index)

    def to_dict(self) -> SimConf:
        return dataclasses.asdict(self)

    @classmethod
    def from_config(
        cls: Type['SimConfig'],
        conf: SimConf,
        path: str = 'sim',
    ) -> 'SimConfig':
        """ Load from a config dict, reporting bad values by their dotted path. """
        fields = {f.name: f for f in dataclasses.fields(cls)}

        for name in conf:
            if name not in fields:
                raise exc.ConfigError("unknown key", field=f"{path}.{name}")

        values: Dict[str, Any] = {}
        for name, field in fields.items():
            raw = conf.get(name, field.default)
            conv = type(field.default)
            try:
                if conv is bool and not isinstance(raw, bool):
                    raise TypeError(f"expected a boolean, got {raw!r}")
                if conv is int and not _is_integral(raw):
                    raise TypeError(f"expected an integer, got {raw!r}")
                values[name] = conv(raw)
            except (TypeError, ValueError) as ex:
                raise exc.ConfigError(str(ex), field=f"{path}.{name}")

        checks = {
            'horizon': values['horizon'] > 0,
            'dt': 0 < values['dt'] <= values['horizon'],
            'eps': 0 < values['eps'] <= 1,
            'seed': values['seed'] >= 0,
            'path_index': values['path_index'] >= 0,
            'max_jumps': values['max_jumps'] > 0,
        }
        for name, ok in checks.items():
            if not ok:
                raise exc.ConfigError(
                    f"out of range: {values[name]!r}", field=f"{path}.{name}"
                )

        return cls(**values)


@dataclasses.dataclass(frozen=True)
class JumpAtom:
    """ One atom of a driving Poisson measure.

    Attributes:
        t (float):
            Epoch, in ``(0, horizon]``.
        nu (float):
            Selection coordinate compared against ``Z_{t-}``. ``nan`` for
            atoms that are not thinned (immigration and Levy jumps).
        r (float):
            Jump size, ``>= eps``.
        u (float):
            Uniform mark used by the marking rule. ``nan`` for immigration.
        source (AtomSource):
            The measure the atom came from.
        z_before (float):
            State just before the epoch.
        z_after (float):
            State at the epoch, ``z_before + r`` when accepted.
        accepted (bool):
            False for thinned candidates (``nu > z_before``).
    """
    t: float
    nu: float
    r: float
    u: float
    source: AtomSource
    z_before: float
    z_after: float
    accepted: bool = True


@dataclasses.dataclass
class SimPath:
    """ A simulated cadlag path on a grid containing every jump epoch.

    ``values[i]`` is the state at ``times[i]`` and ``left_values[i]`` its left
    limit; they differ only at jump epochs. ``brownian_increments[i]`` drove the
    interval ``(times[i], times[i + 1]]`` and ``atom_ids[i]`` is the index into
    ``atoms`` of the jump at ``times[i]`` or -1.
    """
    kind: PathKind
    x: float
    config: SimConfig
    times: np.ndarray
    values: np.ndarray
    left_values: np.ndarray
    brownian_increments: np.ndarray
    atom_ids: np.ndarray
    atoms: List[JumpAtom] = dataclasses.field(default_factory=list)
    absorption_time: float = math.inf

    @property
    def horizon(self) -> float:
        return self.config.horizon

    @property
    def absorbed(self) -> bool:
        return math.isfinite(self.absorption_time)

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    def value_at(self, t: float) -> float:
        """ ``Z_t`` of the cadlag step interpolation of the path. """
        if not 0 <= t <= self.horizon * (1 + 1e-12):
            raise exc.DomainError(f"t={t} is outside [0, {self.horizon}]")

        idx = int(np.searchsorted(self.times, t, side='right')) - 1
        return float(self.values[max(idx, 0)])

    def atoms_from(
        self,
        source: AtomSource,
        accepted_only: bool = True,
    ) -> List[JumpAtom]:
        return [
            atom for atom in self.atoms
            if atom.source == source and (atom.accepted or not accepted_only)
        ]


def _is_integral(value: Any) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    return isinstance(value, float) and value.is_integer()
