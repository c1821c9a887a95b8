# pylint: disable=missing-docstring
import math

import pytest

from csbp.core import exc
from csbp.core.conditioning import MarkKind, immigrant_atoms, mark_jumps, retained_atoms
from csbp.core.simulate import AtomSource, JumpAtom
from csbp.testing import make_path


def atom(t, u, z_before=1.0, r=1.0, nu=0.5, accepted=True, source=AtomSource.CSBP):
    z_after = z_before + r if accepted else z_before
    return JumpAtom(t, nu, r, u, source, z_before, z_after, accepted)


def path_with(atoms):
    return make_path([0.0, 1.0], [1.0, 1.0], atoms=atoms)


def test_immigrant_when_the_mark_exceeds_the_ratio():
    (marked,) = mark_jumps(path_with([atom(0.2, u=0.7)]))

    assert marked.kind == MarkKind.IMMIGRANT
    assert marked.delta_star == 1.0
    assert marked.delta_big == (0.0, 0.0)


def test_retained_otherwise():
    (marked,) = mark_jumps(path_with([atom(0.2, u=0.3, nu=0.25)]))

    assert marked.kind == MarkKind.RETAINED
    assert marked.delta_big == (1.0, 0.25)
    assert marked.delta_star == 0.0


def test_thinned_candidates_are_retained():
    (marked,) = mark_jumps(path_with([atom(0.2, u=0.99, nu=3.0, accepted=False)]))

    assert marked.kind == MarkKind.RETAINED
    assert not marked.accepted


def test_candidates_at_zero_are_null():
    (marked,) = mark_jumps(path_with([atom(0.2, u=0.5, z_before=0.0, accepted=False)]))

    assert marked.kind == MarkKind.NULL


def test_immigration_atoms_are_skipped():
    star = JumpAtom(0.3, math.nan, 1.0, math.nan, AtomSource.STAR, 1.0, 2.0)

    assert mark_jumps(path_with([star])) == []


def test_needs_the_uniform_mark():
    with pytest.raises(exc.DomainError):
        mark_jumps(path_with([atom(0.2, u=math.nan)]))


def test_atoms_up_to_t():
    marked = mark_jumps(path_with([
        atom(0.2, u=0.9, r=2.0),
        atom(0.4, u=0.1, r=3.0),
        atom(0.5, u=0.1, r=4.0, nu=5.0, accepted=False),
        atom(0.8, u=0.9, r=5.0),
    ]))

    assert immigrant_atoms(marked, 0.5) == [(0.2, 2.0)]
    assert immigrant_atoms(marked, 1.0) == [(0.2, 2.0), (0.8, 5.0)]
    assert retained_atoms(marked, 1.0) == [(0.4, 3.0)]
