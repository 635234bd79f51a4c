import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncts.errors import BelowPath, NotAdmissible, OutOfWindow
from ncts.lattice import (InitialPath, LatticePoint, classical_mutation_value, fundamental_path, mutate,
                          parse_path, point, points_above, projections)

from .strategies import paths

EXAMPLE = InitialPath(0, (2, 1, 0, 1, 0, 1))


class TestPaths:
    def test_fundamental(self):
        assert fundamental_path(1, 5).heights == (1, 0, 1, 0, 1)
        assert fundamental_path(0, 1).heights == (0, 1)
        assert fundamental_path(-3, 3).heights == (1, 0, 1, 0, 1, 0, 1)

    def test_fundamental_needs_lo_below_hi(self):
        with pytest.raises(ValueError):
            fundamental_path(2, 2)

    def test_parity_enforced(self):
        with pytest.raises(NotAdmissible):
            InitialPath(0, (1, 0))

    def test_zigzag_enforced(self):
        with pytest.raises(NotAdmissible):
            InitialPath(0, (0, 2))

    def test_parse_formats(self):
        assert parse_path("flat:1..5") == fundamental_path(1, 5)
        assert parse_path("j0=0; heights=2,1,0,1,0,1") == EXAMPLE
        assert parse_path(EXAMPLE.to_json()) == EXAMPLE
        with pytest.raises(ValueError):
            parse_path("zigzag")

    def test_json_keeps_labels_and_stale(self):
        p = mutate(fundamental_path(0, 4), 2, 1)
        q = InitialPath.from_json_obj(json.loads(p.to_json()))
        assert q == p and q.stale == {2}

    def test_point_parity(self):
        assert point(3, 3) == LatticePoint(3, 3)
        with pytest.raises(ValueError):
            point(3, 4)


class TestProjections:
    def test_flat_example(self):
        assert projections(fundamental_path(1, 5), (3, 3)) == (1, 5)

    def test_example_path(self):
        assert projections(EXAMPLE, (2, 4)) == (0, 5)

    @given(paths())
    def test_points_on_path(self, path):
        for j in path.sites:
            assert projections(path, (j, path.height(j))) == (j, j)

    def test_flat_width(self):
        path = fundamental_path(-12, 12)
        for k in range(1, 10):
            for j in range(-3, 4):
                if (j + k) % 2 == 0:
                    j0, j1 = projections(path, (j, k))
                    assert j1 - j0 == 2 * k - 2 and j0 <= j <= j1

    def test_errors(self):
        path = fundamental_path(1, 5)
        with pytest.raises(BelowPath):
            projections(path, (2, -2))
        with pytest.raises(OutOfWindow):
            projections(path, (3, 5))
        with pytest.raises(ValueError):
            projections(path, (3, 4))

    @given(paths())
    def test_points_above_have_valid_projections(self, path):
        for q in points_above(path):
            j0, j1 = projections(path, q)
            assert path.height(j0) - j0 == q.k - q.j and path.height(j1) + j1 == q.k + q.j


class TestMutation:
    def test_up(self):
        assert mutate(fundamental_path(0, 4), 2, 1).heights == (0, 1, 2, 1, 0)

    def test_down_not_admissible(self):
        with pytest.raises(NotAdmissible):
            mutate(fundamental_path(0, 4), 2, -1)

    def test_round_trip(self):
        p = fundamental_path(0, 4)
        assert mutate(mutate(p, 2, 1), 2, -1).heights == p.heights

    @given(paths(), st.integers(0, 11), st.sampled_from((1, -1)))
    def test_never_silently_inadmissible(self, path, i, d):
        site = path.lo + i % len(path.heights)
        try:
            q = mutate(path, site, d)
        except NotAdmissible:
            return
        assert all(abs(a - b) == 1 for a, b in zip(q.heights, q.heights[1:]))

    def test_classical_value(self):
        assert classical_mutation_value(1, 1, 1) == 2
        assert classical_mutation_value(1, 2, 1) == 1
        assert classical_mutation_value(2, 1, 3) == 7
        assert classical_mutation_value(Fraction(1, 2), 3, 4) == 1
        with pytest.raises(ZeroDivisionError):
            classical_mutation_value(1, 0, 1)
