# pylint: disable=missing-docstring
import pytest

from csbp.core import exc
from csbp.core.rng import Stream, stream_key


def test_keys_are_distinct():
    keys = {
        stream_key(seed, idx, stream)
        for seed in (0, 1, 2 ** 63)
        for idx in (0, 1, 1000)
        for stream in Stream
    }

    assert len(keys) == 3 * 3 * len(Stream)


def test_seed_goes_in_the_low_word():
    assert stream_key(5, 0, Stream.BROWNIAN) == 5
    assert stream_key(5, 1, Stream.EPOCHS) == ((1 << 8 | 1) << 64) | 5


@pytest.mark.parametrize('seed,idx', [(-1, 0), (0, -1), (0, 1 << 60)])
def test_rejects_out_of_range(seed, idx):
    with pytest.raises(exc.DomainError):
        stream_key(seed, idx, Stream.SIZES)
