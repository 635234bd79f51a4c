from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncts import reductions as rd
from ncts.errors import UndefinedCommutation
from ncts.oracle import inverse


@pytest.fixture(scope="module")
def states():
    return [rd.qsystem_iterate(rd.qsystem_initial(seed, d=3), 12) for seed in range(4)]


def by_name(report, key="identities"):
    return {i["name"]: i for i in report[key]}


class TestQSystem:
    def test_scalar_sequence(self):
        R = rd.qsystem_scalar(8)
        assert R[:7] == [1, 1, 2, 5, 13, 34, 89]
        assert all(R[n + 1] * R[n - 1] == R[n] ** 2 + 1 for n in range(1, 8))

    def test_scalar_general_start(self):
        R = rd.qsystem_scalar(6, Fraction(2), Fraction(3, 7))
        assert all(R[n + 1] * R[n - 1] == R[n] ** 2 + 1 for n in range(1, 6))

    def test_recursion_and_conservation(self, states):
        for s in states:
            rep = rd.check_qsystem(s)
            assert rep["ok"] and rep["n_max"] == 12
            assert all(i["checked"] >= 11 for i in rep["identities"])

    def test_C_K_definitions(self, states):
        s = states[0]
        r0, r1 = s.R[0], s.R[1]
        assert s.C == inverse(r1) * r0 * r1 * inverse(r0)
        assert s.K == r1 * inverse(r0) + inverse(r1) * inverse(r0) + inverse(r1) * r0

    def test_iterate_extends(self, states):
        longer = rd.qsystem_iterate(states[0], 14)
        assert longer.R[:13] == states[0].R and len(longer.R) == 15


class TestExponents:
    def test_values(self):
        assert (rd.a_exp(0, 0), rd.b_exp(0, 0), rd.c_exp(0, 0), rd.d_exp(0, 0)) == (0, 0, 0, 0)
        assert rd.b_exp(1, 3) - rd.c_exp(1, 1) == 1
        assert rd.b_exp(1, 2) - rd.c_exp(1, 0) == 1

    def test_alpha_beta(self):
        t = rd.ExponentTables()
        assert t.alpha(1, 2) == Fraction(9, 8) == t.beta(3, 2)
        assert t.alpha(0, 0) == Fraction(1, 4)

    def test_system(self):
        rep = rd.check_exponent_system(20)
        assert rep["ok"]
        assert len(rep["identities"]) == len(rd._SYSTEM) + len(rd._CONSERVED) + 1

    @given(st.integers(-200, 200), st.integers(-200, 200))
    def test_period_four(self, j, k):
        assert rd.a_exp(j + 4, k) == rd.a_exp(j, k) - 1
        assert rd.b_exp(j + 4, k) == rd.b_exp(j, k) + 1


@pytest.fixture(scope="module")
def report(states):
    return [rd.embed_qsystem(s, range(-8, 9), range(0, 13)) for s in states]


class TestEmbedding:
    @pytest.mark.parametrize("name", ["tsystem", "quasicommutation_right", "quasicommutation_left",
                                      "tsystem_conjugated", "periodicity", "periodicity_bullet",
                                      "gamma_reduction_shifted", "delta_reduction"])
    def test_holds(self, report, name):
        for rep in report:
            ident = by_name(rep)[name]
            assert ident["checked"] > 50 and ident["failed"] == 0

    def test_unshifted_gamma_formula_fails_off_period(self, report):
        # conjugating K by the same power on both sides is wrong when (j-k)/2 is odd
        for rep in report:
            g = by_name(rep)["gamma_reduction"]
            assert g["failed"] > 0
            assert all((j - k) % 4 == 2 for j, k in g["failures"])
        assert not report[0]["ok"]


class TestQuantum:
    def test_normal_order_swap(self):
        w = rd.quantum_normal_order(rd.QWord.tau(0, 2) * rd.QWord.tau(1, 1))
        assert w == rd.QWord(-8, ((1, 1, 1), (0, 2, 1)))
        assert str(w) == "q^-1 tau[1,1] tau[0,2]"

    def test_already_ordered(self):
        w = rd.QWord.tau(1, 1) * rd.QWord.tau(0, 2)
        assert rd.quantum_normal_order(w) == w

    def test_same_row_commutes(self):
        w = rd.quantum_normal_order(rd.QWord.tau(3, 1) * rd.QWord.tau(1, 1))
        assert w == rd.QWord(0, ((1, 1, 1), (3, 1, 1)))

    def test_inverse_cancels(self):
        w = rd.QWord.tau(0, 2) * rd.QWord.tau(1, 1)
        assert rd.quantum_normal_order(w * w.inverse()) == rd.QWord(0, ())

    def test_rows_two_apart(self):
        with pytest.raises(UndefinedCommutation):
            rd.quantum_normal_order(rd.QWord.tau(0, 3) * rd.QWord.tau(1, 1))

    def test_main_relation(self):
        rep = rd.check_quantum_reduction(50, 4)
        assert rep["qt_ok"]
        conds = by_name(rep, "exponent_conditions")
        assert all(c["failed"] == 0 for c in conds.values())
        patch = by_name(rep, "patch_checks")
        assert patch["qt_leading_term"]["failed"] == 0 and patch["qt_product_term"]["failed"] == 0
        assert patch["quasicommutation_right"]["failed"] == 0

    def test_left_quasicommutation_needs_other_sign(self):
        rep = rd.check_quantum_reduction(10, 4)
        left = by_name(rep, "patch_checks")["quasicommutation_left"]
        assert left["failed"] > 0 and not rep["ok"]
        assert all(j - k != -1 for j, k in left["failures"])
        # both sides carry the same letters; the q-powers differ by q^(j-k+1)
        for k in range(1, 7):
            for j in range(-6, 7):
                if (j + k) % 2:
                    lhs = rd.quantum_normal_order(rd._T(j - 1, k) * rd._T(j, k - 1).inverse())
                    rhs = rd.quantum_normal_order(rd._Tb(j, k - 1).inverse() * rd._Tb(j - 1, k))
                    assert lhs.letters == rhs.letters
                    assert lhs.q8 - rhs.q8 == 8 * (j - k + 1)
