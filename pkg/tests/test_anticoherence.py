import math

import numpy as np
import pytest

from aclab.anticoherence import (
    anticoherence_report,
    check_dicke,
    check_multipole,
    check_operator,
    check_reduced,
    clebsch_gordan,
    multipole_coeffs,
    order_of_anticoherence,
)
from aclab.search import family_state
from aclab.symstate import (
    apply_one_qubit_operator,
    dicke_basis_state,
    entanglement_entropy,
)

from conftest import load_corpus_state, random_state, random_su2

ALL_CHECKS = (check_operator, check_dicke, check_reduced, check_multipole)


class TestCheckers:
    def test_ghz_is_first_order(self, ghz):
        assert check_operator(ghz, 1, 1e-10)
        assert not check_operator(ghz, 2, 1e-10)

    def test_polarized_state_fails(self):
        s = dicke_basis_state(4, 0)
        for check in ALL_CHECKS:
            assert not check(s, 1, 1e-10)

    def test_zimba_family_third_order_from_eight(self):
        assert check_operator(family_state("zimba", n_qubits=8), 3, 1e-10)
        assert not check_operator(family_state("zimba", n_qubits=6), 3, 1e-10)

    def test_bell_dicke_conditions(self, bell):
        assert check_dicke(bell, 1, 1e-10)

    def test_tetrahedron_orders(self, tetrahedron):
        assert check_dicke(tetrahedron, 2, 1e-10)
        assert not check_dicke(tetrahedron, 3, 1e-10)

    def test_octahedron_reduced(self, octahedron):
        assert check_reduced(octahedron, 3, 1e-10)
        assert not check_reduced(dicke_basis_state(6, 0), 1, 1e-10)

    def test_42_qubit_seventh_order(self):
        s = load_corpus_state("d7d42")
        assert check_reduced(s, 7, 1e-9)
        assert not check_reduced(s, 8, 1e-9)

    def test_multipole_examples(self, octahedron):
        assert check_multipole(octahedron, 3, 1e-10)
        assert not check_multipole(dicke_basis_state(6, 1), 1, 1e-10)
        assert check_multipole(family_state("zimba", n_qubits=6), 2, 1e-10)


class TestOrder:
    def test_named_states(self, bell, ghz, tetrahedron, octahedron, icosahedron):
        assert order_of_anticoherence(bell) == 1
        assert order_of_anticoherence(ghz) == 1
        assert order_of_anticoherence(tetrahedron) == 2
        assert order_of_anticoherence(octahedron) == 3
        assert order_of_anticoherence(icosahedron) == 5

    def test_five_qubit_gallery_first_order_only(self):
        names = [
            "n5_c2_d11111",
            "n5_c2_d2111",
            "n5_c2_d221",
            "n5_c3_d11111",
            "n5_c3_d2111",
            "n5_c4",
            "n5_c5",
        ]
        for name in names:
            s = load_corpus_state(name)
            assert order_of_anticoherence(s, 1e-9) == 1, name

    def test_coherent_states_order_zero(self):
        for n in range(1, 6):
            assert order_of_anticoherence(dicke_basis_state(n, 0)) == 0

    def test_entropy_maximal_up_to_order(self, icosahedron):
        t_star = order_of_anticoherence(icosahedron)
        for k in range(1, t_star + 1):
            assert entanglement_entropy(icosahedron, k) == pytest.approx(
                math.log(k + 1), abs=1e-9
            )


class TestClebschGordan:
    def test_half_integer_basics(self):
        assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(1 / math.sqrt(2))
        assert clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0) == pytest.approx(-1 / math.sqrt(2))
        assert clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1) == pytest.approx(1.0)

    def test_against_sympy(self):
        sympy_cg = pytest.importorskip("sympy.physics.quantum.cg")
        from sympy import Rational

        rng = np.random.default_rng(7)
        for _ in range(60):
            dj1, dj2 = int(rng.integers(1, 8)), int(rng.integers(1, 8))
            dj = int(rng.integers(abs(dj1 - dj2), dj1 + dj2 + 1))
            if (dj1 + dj2 + dj) % 2:
                continue
            dm1 = int(rng.integers(-dj1, dj1 + 1))
            dm2 = int(rng.integers(-dj2, dj2 + 1))
            if (dm1 + dj1) % 2 or (dm2 + dj2) % 2:
                continue
            dm = dm1 + dm2
            if abs(dm) > dj:
                continue
            mine = clebsch_gordan(
                Rational(dj1, 2), Rational(dm1, 2),
                Rational(dj2, 2), Rational(dm2, 2),
                Rational(dj, 2), Rational(dm, 2),
            )
            ref = float(
                sympy_cg.CG(
                    Rational(dj1, 2), Rational(dm1, 2),
                    Rational(dj2, 2), Rational(dm2, 2),
                    Rational(dj, 2), Rational(dm, 2),
                ).doit()
            )
            assert mine == pytest.approx(ref, abs=1e-13)


class TestMultipoles:
    def test_normalization_coefficient(self, rng):
        for n in [2, 5, 9]:
            s = random_state(rng, n)
            table = multipole_coeffs(s, 0)
            assert table[0, 0] == pytest.approx(1 / math.sqrt(n + 1), abs=1e-12)

    def test_tensor_orthonormality(self):
        # rebuild the tensors from the same CG values and verify the pairing
        n = 4
        dj = n
        for ell in range(n + 1):
            for ellp in range(n + 1):
                for m in range(-ell, ell + 1):
                    for mp in range(-ellp, ellp + 1):
                        t1 = np.zeros((n + 1, n + 1), dtype=complex)
                        t2 = np.zeros((n + 1, n + 1), dtype=complex)
                        for k in range(n + 1):
                            kp = k - m
                            if 0 <= kp <= n:
                                t1[kp, k] = clebsch_gordan(
                                    n / 2, n / 2 - k, ell, m, n / 2, n / 2 - kp
                                )
                            kq = k - mp
                            if 0 <= kq <= n:
                                t2[kq, k] = clebsch_gordan(
                                    n / 2, n / 2 - k, ellp, mp, n / 2, n / 2 - kq
                                )
                        t1 *= math.sqrt((2 * ell + 1) / (n + 1))
                        t2 *= math.sqrt((2 * ellp + 1) / (n + 1))
                        pairing = np.trace(t1 @ t2.conj().T)
                        expect = 1.0 if (ell, m) == (ellp, mp) else 0.0
                        assert pairing == pytest.approx(expect, abs=1e-12)

    def test_conjugation_symmetry(self, rng):
        for n in [3, 6, 10]:
            s = random_state(rng, n)
            table = multipole_coeffs(s, min(n, 4))
            for ell in range(table.lmax + 1):
                for m in range(-ell, ell + 1):
                    lhs = table[ell, -m]
                    rhs = (-1) ** m * np.conj(table[ell, m])
                    assert abs(lhs - rhs) < 1e-10

    def test_polarized_dipole(self):
        table = multipole_coeffs(dicke_basis_state(4, 0), 1)
        assert abs(table[1, 0]) > 0.1

    def test_icosahedron_vanishing(self, icosahedron):
        table = multipole_coeffs(icosahedron, 5)
        for ell in range(1, 6):
            assert table.max_abs(ell) < 1e-10

    def test_bell_exact_order(self, bell):
        table = multipole_coeffs(bell, 2)
        assert table.max_abs(1) < 1e-12
        assert table.max_abs(2) > 1e-3


class TestCrossMethodAgreement:
    def test_random_states_agree(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 13))
            s = random_state(rng, n)
            for t in range(1, min(n, 4) + 1):
                answers = {check.__name__: check(s, t, 1e-9) for check in ALL_CHECKS}
                assert len(set(answers.values())) == 1, (n, t, answers)

    def test_certified_states_agree(self, icosahedron, octahedron):
        for s in (icosahedron, octahedron, load_corpus_state("dnh5_m5")):
            report = anticoherence_report(s, 1e-9)
            assert len(set(report.per_characterization.values())) == 1

    def test_monotone_in_t(self, rng, icosahedron):
        t_star = order_of_anticoherence(icosahedron)
        for t in range(1, t_star + 1):
            assert check_reduced(icosahedron, t, 1e-9)

    def test_lu_invariance_of_order(self, rng, tetrahedron, octahedron):
        for s in (tetrahedron, octahedron):
            base = order_of_anticoherence(s, 1e-8)
            for _ in range(5):
                rotated = apply_one_qubit_operator(s, random_su2(rng))
                assert order_of_anticoherence(rotated, 1e-8) == base

    def test_report_residuals(self, bell):
        report = anticoherence_report(bell, 1e-10)
        assert report.order == 1
        for method, res in report.residuals.items():
            assert res > 1e-10, method
