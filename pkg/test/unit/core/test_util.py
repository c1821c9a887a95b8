# pylint: disable=missing-docstring
import io
import json
from unittest.mock import Mock, patch

import pytest

from csbp.core import util


@patch('time.perf_counter', Mock(side_effect=[10.0, 11.5]))
def test_timed_block():
    with util.timed_block() as t:
        pass

    assert t.elapsed == 1.5
    assert t.elapsed_s == 1.5


class TestInBatches:
    @pytest.mark.parametrize('size,expected', [
        (3, [[0, 1, 2], [3, 4, 5], [6]]),
        (7, [[0, 1, 2, 3, 4, 5, 6]]),
        (10, [[0, 1, 2, 3, 4, 5, 6]]),
    ])
    def test_splits_into_contiguous_batches(self, size, expected):
        assert list(util.in_batches(range(7), size)) == expected

    def test_empty_input_gives_no_batches(self):
        assert list(util.in_batches([], 3)) == []

    def test_batch_size_must_be_positive(self):
        with pytest.raises(ValueError):
            list(util.in_batches(range(3), 0))


class TestSetInDict:
    def test_can_set_root_value(self):
        d = {}
        util.set_in_dict(d, 'x', 2.0)

        assert d == {'x': 2.0}

    def test_creates_missing_tables(self):
        d = {'sim': {'dt': 0.1}}
        util.set_in_dict(d, 'sim.seed', 3)
        util.set_in_dict(d, 'output.out_dir', 'reports')

        assert d == {'sim': {'dt': 0.1, 'seed': 3}, 'output': {'out_dir': 'reports'}}

    def test_raises_KeyError_if_part_of_the_path_is_not_a_table(self):
        d = {'sim': 'value'}

        with pytest.raises(KeyError) as ex:
            util.set_in_dict(d, 'sim.seed', 3)

        assert ex.value.args[0] == 'sim'


class TestJsonDump:
    def test_keys_are_sorted(self):
        assert util.json_dump({'b': 1, 'a': 2}, indent=None) == '{"a": 2, "b": 1}'

    def test_output_is_identical_for_equal_dicts(self):
        first = util.json_dump({'x': 1.0, 'sim': {'seed': 1, 'dt': 0.1}})
        second = util.json_dump({'sim': {'dt': 0.1, 'seed': 1}, 'x': 1.0})

        assert first == second
        assert json.loads(first) == {'x': 1.0, 'sim': {'seed': 1, 'dt': 0.1}}

    def test_nan_is_allowed(self):
        assert util.json_dump({'band': float('nan')}, indent=None) == '{"band": NaN}'


def test_yaml_load():
    data = util.yaml_load('mechanism:\n  a: -1.0\n  sigma: 1.5\npaths: 10\n')

    assert data == {'mechanism': {'a': -1.0, 'sigma': 1.5}, 'paths': 10}


class TestTomlLoad:
    def test_returns_plain_dicts(self):
        doc = io.StringIO('[tool.csbp]\nx = 2.0\n\n[tool.csbp.sim]\nseed = 3\n')

        data = util.toml_load(doc)

        assert data == {'tool': {'csbp': {'x': 2.0, 'sim': {'seed': 3}}}}
        assert type(data['tool']['csbp']['sim']) is dict

    def test_reads_a_path(self, tmp_path):
        path = tmp_path / 'pyproject.toml'
        path.write_text('[tool.csbp]\npaths = 50\n')

        assert util.toml_load(str(path)) == {'tool': {'csbp': {'paths': 50}}}
