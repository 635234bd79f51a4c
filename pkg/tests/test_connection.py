import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncts.connection import (ConnectionMatrix, chip_U, chip_V, path_product, reflect, solve, solve_below,
                             solve_bullet)
from ncts.errors import BelowPath, NotAdmissible, NotOnPath, OutOfWindow
from ncts.lattice import InitialPath, fundamental_path, mutate, points_above
from ncts.ncalgebra import NCPolynomial, is_well_ordered
from ncts.oracle import NumericSolution, evaluate, sample_scene, transport_scene

from .strategies import paths

P = NCPolynomial.parse
T33 = P("t1 t2^-1 t3 t4^-1 t5 + t1 t2^-1 t4*^-1 + t2*^-1 t4^-1 t5 + t2*^-1 t3^-1 t4*^-1 + t3*^-1")


class TestChips:
    def test_V(self):
        v = chip_V(1, 2)
        assert v.entry(1, 1) == P("t1 t2^-1")
        assert v.entry(1, 2) == P("t2*^-1")
        assert v.entry(2, 1) == NCPolynomial.zero()
        assert v.entry(2, 2) == NCPolynomial.one()

    def test_U(self):
        u = chip_U(2, 3)
        assert u.entry(2, 2) == P("t2* t3*^-1")
        assert u.entry(2, 1) == P("t3^-1")
        assert u.entry(1, 2) == NCPolynomial.zero()
        assert u.entry(1, 1) == NCPolynomial.one()


class TestPathProduct:
    def test_flat(self):
        m = path_product(fundamental_path(1, 5), 1, 5)
        assert m == chip_V(1, 2) * chip_U(2, 3) * chip_V(3, 4) * chip_U(4, 5)
        assert m.entry(1, 1) * P("t5") == T33
        assert len(m.entry(1, 1)) == 5

    def test_empty_is_identity(self):
        assert path_product(fundamental_path(1, 5), 3, 3) == ConnectionMatrix.identity()

    def test_chain_UUVUV(self):
        path = InitialPath(1, (1, 2, 3, 2, 3, 2))
        w = chip_U(1, 2) * chip_U(2, 3) * chip_V(3, 4) * chip_U(4, 5) * chip_V(5, 6)
        assert path_product(path, 1, 6) == w
        assert w.nonnegative()

    def test_errors(self):
        path = fundamental_path(1, 5)
        with pytest.raises(OutOfWindow):
            path_product(path, 0, 3)
        with pytest.raises(ValueError):
            path_product(path, 4, 3)

    @given(paths(min_width=2, max_width=9))
    def test_entries_nonnegative(self, path):
        assert path_product(path, path.lo, path.hi).nonnegative()


class TestSolve:
    def test_flat_T33(self):
        assert solve(fundamental_path(1, 5), (3, 3)) == T33

    def test_on_path(self):
        path = fundamental_path(1, 5)
        for j in path.sites:
            assert solve(path, (j, path.height(j))) == NCPolynomial.atom(j)
            assert solve_bullet(path, (j, path.height(j))) == NCPolynomial.atom(j, bullet=True)

    def test_bullet(self):
        path = fundamental_path(1, 5)
        assert solve_bullet(path, (3, 3)) == T33.involution()
        assert solve_bullet(path, (3, 3)).involution() == solve(path, (3, 3))

    def test_below_raises(self):
        with pytest.raises(BelowPath):
            solve(fundamental_path(1, 5), (3, -1))

    @given(paths())
    def test_positive_and_well_ordered(self, path):
        key = path.site_key
        for q in points_above(path):
            t = solve(path, q)
            assert t.has_nonnegative_coefficients() and is_well_ordered(t, key)

    def test_translation_covariance(self):
        base = fundamental_path(-9, 9)
        shifted = fundamental_path(-7, 11)
        for q in points_above(base, k_max=6):
            got = solve(shifted, (q.j + 2, q.k))
            assert got == solve(base, q).relabel({i: i + 2 for i in range(-9, 10)})


class TestReflection:
    def test_flat_reflection(self):
        path = fundamental_path(-3, 5)
        r = reflect(path, 1, 1)
        assert r.heights == tuple(1 - path.height(1 - j) for j in r.sites)
        assert r.labels == tuple(1 - j for j in r.sites)
        assert all(h == abs(j) % 2 for j, h in zip(r.sites, r.heights))

    def test_example_path(self):
        r = reflect(InitialPath(0, (2, 1, 0, 1, 0, 1)), 0, 2)
        assert (r.lo, r.heights, r.labels) == (-5, (1, 2, 1, 2, 1, 0), (5, 4, 3, 2, 1, 0))

    @given(paths(), st.data())
    def test_twice_is_identity(self, path, data):
        a = data.draw(st.sampled_from(list(path.sites)))
        b = path.height(a)
        back = reflect(reflect(path, a, b), a, b, require_vertex=False)
        assert (back.lo, back.heights, back.labels) == (path.lo, path.heights, path.labels)

    def test_not_on_path(self):
        with pytest.raises(NotOnPath):
            reflect(fundamental_path(1, 5), 1, 3)

    @settings(max_examples=25)
    @given(paths(min_width=6), st.integers(0, 2**20))
    def test_solution_below_matches_numeric(self, path, seed):
        scene = sample_scene(path, d=3, seed=seed)
        sol = NumericSolution(scene, path)
        checked = 0
        for j in path.sites:
            for k in range(path.height(j) - 2, path.height(j) - 12, -2):
                try:
                    poly = solve_below(path, (j, k))
                except OutOfWindow:
                    break
                assert evaluate(scene, poly) == sol.T(j, k)
                assert poly.has_nonnegative_coefficients()
                checked += 1

    def test_flat_solution_below(self):
        path = fundamental_path(-10, 10)
        scene = sample_scene(path, d=3, seed=7)
        sol = NumericSolution(scene, path)
        for j in range(-4, 5):
            for k in range(path.height(j) - 2, -7, -2):
                assert evaluate(scene, solve_below(path, (j, k))) == sol.T(j, k)


class TestLocalExchange:
    @settings(max_examples=25)
    @given(paths(min_width=3), st.integers(0, 2**20))
    def test_VU_equals_UV_after_mutation(self, path, seed):
        from ncts.oracle import block_matrix
        scene = sample_scene(path, d=3, seed=seed)
        for j in range(path.lo + 1, path.hi):
            if path.step(j - 1) == -1 and path.step(j) == 1:
                new = mutate(path, j, 1)
                moved = transport_scene(scene, path, new)
                lhs = block_matrix(scene, path_product(path, j - 1, j + 1))
                rhs = block_matrix(moved, path_product(new, j - 1, j + 1))
                assert lhs == rhs


class TestPathIndependence:
    @settings(max_examples=40)
    @given(paths(min_width=5), st.integers(0, 2**20), st.data())
    def test_mutations_do_not_change_values(self, path, seed, data):
        scene = sample_scene(path, d=3, seed=seed)
        sol = NumericSolution(scene, path)
        new, moved = path, scene
        for _ in range(data.draw(st.integers(1, 4))):
            site = data.draw(st.sampled_from(list(new.sites)[1:-1]))
            try:
                cand = mutate(new, site, data.draw(st.sampled_from((1, -1))))
            except NotAdmissible:
                continue
            moved = transport_scene(scene, path, cand)
            new = cand
        checked = 0
        for q in points_above(new, k_max=max(new.heights) + 4):
            try:
                expected = sol.T(*q)
            except OutOfWindow:
                continue  # the original path's data cannot reach this point
            assert evaluate(moved, solve(new, q)) == expected
            checked += 1
        assert checked >= len(new.heights)


def test_flat_k12_term_count():
    path = fundamental_path(-12, 12)
    assert len(solve(path, (0, 12))) == 28657
