import math

import numpy as np
import pytest

from aclab.anticoherence import check_dicke
from aclab.errors import NoRepresentativeError
from aclab.slocc import (
    anticoherent_representative,
    apply_diagonal_ilo,
    degeneracy_configuration,
    positive_root,
    slocc_equivalent,
)
from aclab.symstate import dicke_basis_state, new_state, rotate

from conftest import load_corpus_state, random_state


class TestDiagonalOperation:
    def test_rescales_and_normalizes(self):
        s = new_state([0, 0, 1, 0, 0.8, 0])
        out = apply_diagonal_ilo(s, 1 / (math.sqrt(3) * 0.8))
        np.testing.assert_allclose(
            out.dicke.real, np.array([0, 0, math.sqrt(3), 0, 1, 0]) / 2, atol=1e-12
        )

    def test_identity(self, rng):
        s = random_state(rng, 6)
        assert apply_diagonal_ilo(s, 1.0).allclose_up_to_phase(s, 1e-14)

    def test_fourfold_example(self):
        mu = 2.5
        s = new_state([1, 0, 0, 0, mu, 0])
        out = apply_diagonal_ilo(s, (5 / (3 * mu**2)) ** 0.25)
        target = new_state([math.sqrt(3), 0, 0, 0, math.sqrt(5), 0])
        assert out.allclose_up_to_phase(target, 1e-12)

    def test_rejects_nonpositive(self, bell):
        with pytest.raises(ValueError):
            apply_diagonal_ilo(bell, -1.0)


class TestPositiveRoot:
    def test_closed_form_twofold_family(self, rng):
        for _ in range(10):
            mu = float(rng.uniform(0.2, 3.0))
            nu = float(rng.uniform(0.2, 3.0)) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            s = new_state([1, 0, mu, 0, nu, 0])
            closed = math.sqrt(
                (mu**2 + math.sqrt(mu**4 + 60 * abs(nu) ** 2)) / (6 * abs(nu) ** 2)
            )
            assert positive_root(s) == pytest.approx(closed, rel=1e-12)

    def test_band_center_balanced(self):
        assert positive_root(dicke_basis_state(2, 1)) == 1.0

    def test_threefold_n6(self, rng):
        for nu in (0.3, 1.7):
            s = new_state([1, 0, 0, math.sqrt(5 * nu / 2), 0, 0, nu])
            assert positive_root(s) == pytest.approx(nu ** (-1 / 3), rel=1e-12)

    def test_already_balanced_fixed_point(self, octahedron):
        assert positive_root(octahedron) == pytest.approx(1.0, abs=1e-12)

    def test_uniqueness_by_sign_count(self, rng):
        # exactly one sign change in the balancing coefficients
        for _ in range(30):
            n = int(rng.integers(4, 11))
            ncyc = int(rng.integers(2, n // 2 + 1))
            d = np.zeros(n + 1, dtype=complex)
            d[0::ncyc] = rng.normal(size=len(d[0::ncyc])) + 1j * rng.normal(
                size=len(d[0::ncyc])
            )
            d[0] = max(abs(d[0]), 0.3)
            d[(n // ncyc) * ncyc] = max(abs(d[(n // ncyc) * ncyc]), 0.3)
            s = new_state(d)
            coeffs = (n - 2 * np.arange(n + 1)) * np.abs(s.dicke) ** 2
            signs = [c for c in coeffs if abs(c) > 1e-20]
            changes = sum(
                1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0)
            )
            assert changes == 1
            y = positive_root(s)
            assert check_dicke(apply_diagonal_ilo(s, y), 1, 1e-9) or ncyc < 2

    def test_no_representative(self):
        for s in (dicke_basis_state(4, 0), new_state([0, 0, 0, 1, 0.4])):
            with pytest.raises(NoRepresentativeError):
                positive_root(s)


class TestRepresentative:
    def test_twofold_double_pole_family(self):
        for mu in (0.4, 1.0, 5.0):
            rep = anticoherent_representative(new_state([0, 0, 1, 0, mu, 0]))
            target = new_state([0, 0, math.sqrt(3), 0, 1, 0])
            assert rep.allclose_up_to_phase(target, 1e-10)

    def test_threefold_top_family(self):
        for mu in (0.7, 2.0):
            rep = anticoherent_representative(new_state([0, 1, 0, 0, mu, 0]))
            target = new_state([0, 1, 0, 0, 1, 0])
            assert rep.allclose_up_to_phase(target, 1e-10)

    def test_fixed_point(self, octahedron, icosahedron):
        for s in (octahedron, icosahedron, load_corpus_state("n5_c2_d221")):
            rep = anticoherent_representative(s)
            assert rep.allclose_up_to_phase(s, 1e-10)

    def test_output_is_first_order_anticoherent(self, rng):
        for _ in range(50):
            n = int(rng.integers(4, 12))
            ncyc = int(rng.integers(2, max(3, n // 3)))
            d = np.zeros(n + 1, dtype=complex)
            sites = list(range(0, n + 1, ncyc))
            amps = rng.normal(size=len(sites)) + 1j * rng.normal(size=len(sites))
            d[sites] = amps
            d[sites[0]] = max(abs(d[sites[0]]), 0.2)
            d[sites[-1]] = max(abs(d[sites[-1]]), 0.2)
            if sites[-1] <= n / 2 or sites[0] >= n / 2:
                continue
            rep = anticoherent_representative(new_state(d))
            assert check_dicke(rep, 1, 1e-9)


class TestDegeneracy:
    def test_balanced_dicke_state(self):
        assert degeneracy_configuration(dicke_basis_state(6, 3)).multiplicities == (3, 3)

    def test_ghz(self, ghz):
        assert degeneracy_configuration(ghz).multiplicities == (1, 1, 1)

    def test_coherent(self):
        cfg = degeneracy_configuration(dicke_basis_state(5, 0))
        assert cfg.multiplicities == (5,)
        assert cfg.diversity == 1

    def test_clustered_roots(self):
        # (z - 1)^2 (z + 2) with one North pole
        poly = np.poly([1.0, 1.0, -2.0])[::-1]
        d = [(-1) ** k * poly[k] / math.sqrt(math.comb(4, k)) for k in range(3 + 1)]
        cfg = degeneracy_configuration(new_state(d + [0]))
        assert cfg.multiplicities == (2, 1, 1)


class TestEquivalence:
    def test_same_class_different_parameters(self):
        a = new_state([0, 0, 1, 0, 0.5, 0])
        b = new_state([0, 0, 1, 0, 2.3, 0])
        assert slocc_equivalent(a, b)

    def test_lu_is_slocc(self, rng, tetrahedron):
        rotated = rotate(tetrahedron, 0.3, 1.2, -0.4)
        assert slocc_equivalent(tetrahedron, rotated)

    def test_diagonal_orbit(self, rng):
        s = new_state([0, 1, 0, 0, 0.8, 0])
        for y in (0.1, 0.9, 7.0):
            assert slocc_equivalent(s, apply_diagonal_ilo(s, y))

    def test_phase_family_members_inequivalent(self):
        base = [math.sqrt(2), 0, 0, math.sqrt(5), 0, 0]
        a = new_state(base + [math.sqrt(2)])
        b = new_state(base + [-math.sqrt(2)])
        c = new_state(base + [math.sqrt(2) * np.exp(1j * 0.9)])
        assert not slocc_equivalent(a, b)
        assert not slocc_equivalent(a, c)
        assert not slocc_equivalent(b, c)

    def test_octahedron_two_presentations(self, octahedron):
        threefold = new_state([math.sqrt(2), 0, 0, math.sqrt(5), 0, 0, -math.sqrt(2)])
        assert slocc_equivalent(octahedron, threefold)

    def test_no_representative_raises(self):
        with pytest.raises(NoRepresentativeError):
            slocc_equivalent(dicke_basis_state(5, 0), dicke_basis_state(5, 2))

    def test_balanced_dicke_exception(self):
        # the two-antipodal-clusters family keeps its representative
        a = dicke_basis_state(6, 3)
        assert slocc_equivalent(a, rotate(a, 0.5, 1.0, 0.1))

    def test_qubit_count_mismatch(self, bell, ghz):
        assert not slocc_equivalent(bell, ghz)
