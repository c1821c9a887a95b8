# pylint: disable=missing-docstring
import numpy as np
import pytest

from csbp.core.rng import BufferedDraws, PathStreams, Stream, generator


@pytest.mark.parametrize('kind', ['normal', 'exponential', 'uniform'])
def test_block_size_does_not_change_the_sequence(kind):
    small = BufferedDraws(generator(3, 4, Stream.SIZES), kind, block=3)
    large = BufferedDraws(generator(3, 4, Stream.SIZES), kind, block=1024)

    assert [small.next() for _ in range(10)] == [large.next() for _ in range(10)]


def test_uniforms_lie_in_unit_interval():
    draws = BufferedDraws(generator(0, 0, Stream.MARKS), 'uniform', block=64)
    values = np.array([draws.next() for _ in range(200)])

    assert np.all((values >= 0) & (values < 1))


def test_path_streams_are_reproducible():
    first = PathStreams.create(11, 2)
    second = PathStreams.create(11, 2)

    assert first.brownian.next() == second.brownian.next()
    assert first.immigration_sizes.next() == second.immigration_sizes.next()


def test_streams_do_not_interfere():
    consumed = PathStreams.create(11, 2)
    for _ in range(5000):
        consumed.brownian.next()

    fresh = PathStreams.create(11, 2)
    assert consumed.sizes.next() == fresh.sizes.next()


def test_paths_get_different_draws():
    first, second = PathStreams.create(1, 0), PathStreams.create(1, 1)
    assert first.epochs.next() != second.epochs.next()
