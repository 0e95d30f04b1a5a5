import numpy as np
import pytest
import scipy.sparse as sp

from ellchain.commutator import commutator_full
from ellchain.errors import DimensionCap
from ellchain.group_algebra import AlgebraElement, ae_mul, perm_identity, perm_transposition
from ellchain.integrals import ChainConfig, build_integrals
from ellchain.spin_rep import (
    SPIN_PAIRS,
    pauli_transposition,
    relative_commutator,
    represent,
    spin_matrix_of_perm,
    verify_spin_commutators,
)

from test_group_algebra import random_element


def basis(bits):
    n = len(bits)
    v = np.zeros(2**n)
    v[int("".join(map(str, bits)), 2)] = 1
    return v


class TestPermutationMatrices:
    def test_identity(self):
        m = spin_matrix_of_perm(perm_identity(4))
        assert (m != sp.identity(16)).nnz == 0

    def test_swap_action(self):
        m = spin_matrix_of_perm(perm_transposition(1, 2, 4))
        assert np.array_equal(m @ basis([1, 0, 0, 0]), basis([0, 1, 0, 0]))

    def test_spin_moves_to_image_site(self):
        p = (2, 3, 1)  # site 1 -> 2, 2 -> 3, 3 -> 1
        m = spin_matrix_of_perm(p)
        assert np.array_equal(m @ basis([1, 0, 0]), basis([0, 1, 0]))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_matches_pauli_construction(self, n):
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                diff = spin_matrix_of_perm(perm_transposition(j, k, n)) - pauli_transposition(j, k, n)
                assert abs(diff).max() < 1e-15

    def test_cap(self):
        with pytest.raises(DimensionCap):
            spin_matrix_of_perm(perm_identity(5), max_sites=4)


class TestRepresentation:
    def test_homomorphism(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            a, b = random_element(4, 6, rng), random_element(4, 6, rng)
            lhs = represent(ae_mul(a, b)).toarray()
            rhs = (represent(a) @ represent(b)).toarray()
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))

    def test_zero_element(self):
        assert represent(AlgebraElement.zero(3)).nnz == 0

    def test_symmetry_of_H_and_J1(self):
        S = build_integrals(ChainConfig(5))
        H, J1 = represent(S.H), represent(S.J1)
        assert abs(H.imag).max() < 1e-12 * abs(H).max()
        assert abs(H - H.T).max() < 1e-12 * abs(H).max()
        assert abs(J1.imag).max() < 1e-12 * abs(J1).max()
        assert abs(J1 + J1.T).max() < 1e-12 * abs(J1).max()


class TestCommutators:
    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_vanish(self, n):
        rep = verify_spin_commutators(ChainConfig(n))
        assert set(rep.residuals) == {f"[{a},{b}]" for a, b in SPIN_PAIRS}
        assert rep.passed
        assert rep.negative_control > 1e-2
        assert rep.as_dict()["pass"] is True

    def test_verdict_agrees_with_group_algebra(self):
        cfg = ChainConfig(6, 3)
        S = build_integrals(cfg)
        rep = verify_spin_commutators(cfg, S)
        for a, b in SPIN_PAIRS:
            ga = commutator_full(S, (a, b)).residual <= 1e-9
            assert ga == (rep.residuals[f"[{a},{b}]"] <= 1e-9)

    def test_detects_broken_coefficient(self):
        cfg = ChainConfig(5)
        S = build_integrals(cfg)
        g = sorted(S.J2.terms)[0]
        S.J2.terms[g] *= 1.01
        assert relative_commutator(represent(S.J1), represent(S.J2)) > 1e-6

    def test_cap(self):
        with pytest.raises(DimensionCap):
            verify_spin_commutators(ChainConfig(7), max_sites=6)


class TestRepresentationProperties:
    def test_homomorphism_random_pairs(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            a = random_element(4, int(rng.integers(1, 8)), rng)
            b = random_element(4, int(rng.integers(1, 8)), rng)
            lhs = represent(ae_mul(a, b)).toarray()
            rhs = (represent(a) @ represent(b)).toarray()
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(rhs)), 1.0)

    def test_multiplication_table_of_s4(self):
        from itertools import permutations

        from ellchain.group_algebra import perm_compose

        group = list(permutations(range(1, 5)))
        mats = {g: spin_matrix_of_perm(g) for g in group}
        for g in group:
            for h in group:
                assert (mats[g] @ mats[h] != mats[perm_compose(g, h)]).nnz == 0

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_J0_commutes_with_transpositions(self, n):
        J0 = represent(build_integrals(ChainConfig(n)).J0)
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                assert relative_commutator(J0, spin_matrix_of_perm(perm_transposition(j, k, n))) <= 1e-14

    def test_H_preserves_magnetization(self):
        n = 6
        H = represent(build_integrals(ChainConfig(n, 3)).H).tocoo()
        weight = np.array([bin(i).count("1") for i in range(2**n)])
        assert H.nnz > 0
        assert np.array_equal(weight[H.row], weight[H.col])

    @pytest.mark.parametrize("n,kappa", [(5, 5), (6, 3)])
    def test_symmetry_types(self, n, kappa):
        S = build_integrals(ChainConfig(n, kappa))
        H, J1, J2 = (represent(x) for x in (S.H, S.J1, S.J2))
        for m, sign in ((H, -1), (J1, 1), (J2, 1)):
            norm = abs(m).max()
            assert abs(m + sign * m.T).max() <= 1e-12 * norm
