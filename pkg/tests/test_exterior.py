import numpy as np
import pytest

from conelab import (DegenerateInputError, InputError, additive_compound,
                     apply_flow, compound_matrix, mat_exp, multi_index_table,
                     plucker)

from conftest import A1, B1, EIGVECS1
from oracles import (additive_compound_oracle, compound_oracle, ksubsets,
                     plucker_oracle)


class TestMultiIndexTable:
    def test_4_2(self):
        t = multi_index_table(4, 2)
        assert t.indices == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

    def test_4_1(self):
        assert multi_index_table(4, 1).indices == ((1,), (2,), (3,), (4,))

    def test_4_4(self):
        t = multi_index_table(4, 4)
        assert t.indices == ((1, 2, 3, 4),) and t.dim == 1

    def test_positions_invert_indices(self):
        t = multi_index_table(6, 3)
        assert t.dim == 20
        for p, I in enumerate(t.indices):
            assert t.position(I) == p

    @pytest.mark.parametrize("d,k", [(1, 1), (4, 0), (4, 5), (3, -1)])
    def test_rejects_bad_ranges(self, d, k):
        with pytest.raises(InputError):
            multi_index_table(d, k)


class TestPlucker:
    def test_coordinate_plane(self):
        P = np.array([[1.0, 0], [0, 1], [0, 0], [0, 0]])
        assert np.array_equal(plucker(P).coords, [1, 0, 0, 0, 0, 0])

    def test_column_swap_flips_sign(self):
        P = np.array([[0.0, 1], [1, 0], [0, 0], [0, 0]])
        assert np.array_equal(plucker(P).coords, [-1, 0, 0, 0, 0, 0])

    def test_eigenplane_minors(self):
        # frozen from the row-minor oracle on the first two eigenvectors
        P = np.column_stack([EIGVECS1[0], EIGVECS1[1]])
        expected = plucker_oracle(P)
        assert np.array_equal(expected, [3, 5, 4, 4, 5, 3])
        assert np.allclose(plucker(P).coords, expected, atol=1e-12)

    def test_rank_deficient_rejected(self):
        P = np.array([[1.0, 2], [2, 4], [0, 0], [0, 0]])
        with pytest.raises(DegenerateInputError):
            plucker(P)

    def test_column_action_scales_by_det(self, rng=np.random.default_rng(7)):
        for _ in range(20):
            P = rng.normal(size=(5, 3))
            a = rng.normal(size=(3, 3))
            if abs(np.linalg.det(a)) < 1e-3:
                continue
            lhs = plucker(P @ a).coords
            rhs = np.linalg.det(a) * plucker(P).coords
            assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


class TestCompound:
    def test_k1_is_identity_map(self, rng=np.random.default_rng(0)):
        g = rng.normal(size=(4, 4))
        assert np.allclose(compound_matrix(g, 1).entries, g)

    def test_diagonal_products(self):
        lam = np.array([2.0, 3.0, 5.0, 7.0])
        C = compound_matrix(np.diag(lam), 2)
        expected = [lam[i] * lam[j] for i, j in ksubsets(4, 2)]
        assert np.allclose(C.entries, np.diag(expected))

    def test_matches_minor_oracle(self, rng=np.random.default_rng(1)):
        g = rng.normal(size=(5, 5))
        for k in (1, 2, 3):
            assert np.allclose(compound_matrix(g, k).entries,
                               compound_oracle(g, k), atol=1e-10)

    def test_multiplicative(self, rng=np.random.default_rng(2)):
        for _ in range(25):
            g = rng.normal(size=(4, 4))
            h = rng.normal(size=(4, 4))
            lhs = compound_matrix(g @ h, 2).entries
            rhs = compound_matrix(g, 2).entries @ compound_matrix(h, 2).entries
            assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)

    def test_equivariance_with_plucker(self, rng=np.random.default_rng(3)):
        for _ in range(25):
            g = rng.normal(size=(5, 5))
            P = rng.normal(size=(5, 2))
            lhs = compound_matrix(g, 2).entries @ plucker(P).coords
            rhs = plucker(g @ P).coords
            assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)

    def test_sylvester_franke(self, rng=np.random.default_rng(4)):
        from math import comb
        for d, k in ((4, 2), (5, 2), (5, 3)):
            g = rng.normal(size=(d, d))
            lhs = np.linalg.det(compound_matrix(g, k).entries)
            rhs = np.linalg.det(g) ** comb(d - 1, k - 1)
            assert np.isclose(lhs, rhs, rtol=1e-8)


class TestAdditiveCompound:
    def test_diagonal_pair_sums(self):
        # additive compound of diag(4,1,-2,-3) at k=2, frozen from the
        # central-difference oracle
        L = additive_compound(B1, 2)
        oracle = additive_compound_oracle(B1, 2)
        assert np.allclose(oracle, np.diag([5, 2, 1, -1, -2, -5]), atol=1e-4)
        assert np.allclose(L.entries, np.diag([5.0, 2, 1, -1, -2, -5]))

    def test_zero_matrix(self):
        assert np.array_equal(additive_compound(np.zeros((4, 4)), 2).entries,
                              np.zeros((6, 6)))

    def test_top_degree_is_trace(self, rng=np.random.default_rng(5)):
        X = rng.normal(size=(4, 4))
        L = additive_compound(X, 4)
        assert L.entries.shape == (1, 1)
        assert np.isclose(L.entries[0, 0], np.trace(X), rtol=1e-12)

    def test_matches_finite_difference(self, rng=np.random.default_rng(6)):
        for X in (A1, rng.normal(size=(4, 4)), rng.normal(size=(5, 5))):
            for k in (2, 3):
                assert np.allclose(additive_compound(X, k).entries,
                                   additive_compound_oracle(X, k), atol=1e-4)

    def test_exponential_commutation(self, rng=np.random.default_rng(8)):
        for _ in range(15):
            X = rng.normal(size=(4, 4))
            X *= min(1.0, 5.0 / np.linalg.norm(X))
            for k in (2, 3):
                lhs = compound_matrix(mat_exp(X), k).entries
                rhs = mat_exp(additive_compound(X, k).entries)
                assert np.allclose(lhs, rhs, rtol=1e-8, atol=1e-8)

    def test_linear_in_argument(self, rng=np.random.default_rng(9)):
        X, Y = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
        lhs = additive_compound(X + 3.0 * Y, 2).entries
        rhs = additive_compound(X, 2).entries + 3.0 * additive_compound(Y, 2).entries
        assert np.allclose(lhs, rhs, atol=1e-12)


class TestApplyFlow:
    def test_matches_direct_compound_for_short_arcs(self, rng=np.random.default_rng(10)):
        X = rng.normal(size=(4, 4))
        v = rng.normal(size=6)
        direct = compound_matrix(mat_exp(0.3 * X), 2).entries @ v
        direct /= np.linalg.norm(direct)
        assert np.allclose(apply_flow(X, 2, v, 0.3), direct, atol=1e-10)

    def test_long_arc_reaches_dominant_direction(self):
        # diag flow: dominant pair (1,2) at k=2
        X = np.diag([3.0, 1.0, -1.0, -3.0])
        v = np.ones(6)
        out = apply_flow(X, 2, v, 40.0)
        e12 = np.zeros(6)
        e12[0] = 1.0
        assert abs(float(out @ e12)) > 1.0 - 1e-10
