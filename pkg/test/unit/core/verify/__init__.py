# pylint: disable=missing-docstring
