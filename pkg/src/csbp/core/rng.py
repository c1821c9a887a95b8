"""
.. module:: csbp.core.rng
    :synopsis: Counter based random streams keyed by (seed, path, stream).

Every simulated path owns a fixed set of independent streams. Each stream is a
numpy ``Philox`` generator whose 128 bit key packs the run seed in the low
word and ``(path_index, stream_id)`` in the high word, so the draws for one
path do not depend on how many paths were simulated before it, on which
worker it ran, or on how many draws the other streams consumed.
"""
import dataclasses
import enum
from typing import Dict, List

import numpy as np

from . import exc


SEED_MASK = (1 << 64) - 1
STREAM_BITS = 8


class Stream(enum.IntEnum):
    BROWNIAN = 0
    EPOCHS = 1
    SIZES = 2
    NU = 3
    MARKS = 4
    IMMIGRATION_EPOCHS = 5
    IMMIGRATION_SIZES = 6


def stream_key(seed: int, path_index: int, stream: Stream) -> int:
    if seed < 0 or path_index < 0:
        raise exc.DomainError("seed and path_index must be non-negative")

    high = (path_index << STREAM_BITS) | int(stream)
    if high > SEED_MASK:
        raise exc.DomainError(f"path_index {path_index} is too large")

    return (high << 64) | (seed & SEED_MASK)


def generator(seed: int, path_index: int, stream: Stream) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=stream_key(seed, path_index, stream)))


class BufferedDraws:
    """ Hands out scalar draws from a generator in blocks.

    Scalar calls into numpy cost more than the arithmetic of an Euler step, so
    draws are made ``block`` at a time and served from a python list. The
    sequence of values is the same whatever the consumption pattern.
    """
    def __init__(self, gen: np.random.Generator, kind: str, block: int = 1024):
        self.gen = gen
        self.kind = kind
        self.block = block
        self._buf: List[float] = []
        self._pos = 0

    def next(self) -> float:
        if self._pos >= len(self._buf):
            self._refill()

        value = self._buf[self._pos]
        self._pos += 1
        return value

    def _refill(self) -> None:
        if self.kind == 'normal':
            values = self.gen.standard_normal(self.block)
        elif self.kind == 'exponential':
            values = self.gen.standard_exponential(self.block)
        else:
            values = self.gen.random(self.block)

        self._buf = values.tolist()
        self._pos = 0


@dataclasses.dataclass
class PathStreams:
    """ All random streams used to simulate one path. """
    seed: int
    path_index: int
    brownian: BufferedDraws
    epochs: BufferedDraws
    sizes: BufferedDraws
    nu: BufferedDraws
    marks: BufferedDraws
    immigration_epochs: BufferedDraws
    immigration_sizes: BufferedDraws

    @classmethod
    def create(cls, seed: int, path_index: int) -> 'PathStreams':
        kinds: Dict[Stream, str] = {
            Stream.BROWNIAN: 'normal',
            Stream.EPOCHS: 'exponential',
            Stream.SIZES: 'uniform',
            Stream.NU: 'uniform',
            Stream.MARKS: 'uniform',
            Stream.IMMIGRATION_EPOCHS: 'exponential',
            Stream.IMMIGRATION_SIZES: 'uniform',
        }
        draws = {
            stream.name.lower(): BufferedDraws(generator(seed, path_index, stream), kind)
            for stream, kind in kinds.items()
        }
        return cls(seed=seed, path_index=path_index, **draws)
