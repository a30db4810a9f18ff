import math

import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from conelab import (HullResult, InputError, bracket, mat_exp, origin_in_hull,
                     rank_tol)

from conftest import A1, A2, B1


class TestMatExp:
    def test_zero(self):
        assert np.array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))

    def test_nilpotent(self):
        X = np.array([[0.0, 1.7], [0, 0]])
        assert np.allclose(mat_exp(X), np.eye(2) + X, atol=1e-15)

    def test_block_rotation_quarter_period(self):
        # exp((pi/2) A2): rotation blocks scaled by e^{pi/2} and its inverse
        d = math.exp(math.pi / 2)
        c = (1.0 / d) * (math.sqrt(2) / 2)
        expected = np.array([[0, d, 0, 0],
                             [-d, 0, 0, 0],
                             [0, 0, c, c],
                             [0, 0, -c, c]])
        assert np.allclose(mat_exp((math.pi / 2) * A2), expected, atol=1e-10)

    def test_inverse_identity(self, rng=np.random.default_rng(0)):
        for _ in range(10):
            X = rng.normal(size=(4, 4))
            X *= min(1.0, 10.0 / np.linalg.norm(X))
            assert np.allclose(mat_exp(X) @ mat_exp(-X), np.eye(4), atol=1e-8)

    def test_det_is_exp_trace(self, rng=np.random.default_rng(1)):
        for _ in range(10):
            X = rng.normal(size=(4, 4))
            assert np.isclose(np.linalg.det(mat_exp(X)),
                              math.exp(np.trace(X)), rtol=1e-8)
        Y = A1 * 0.7
        assert np.isclose(np.linalg.det(mat_exp(Y)), 1.0, rtol=1e-8)

    def test_against_scipy(self, rng=np.random.default_rng(2)):
        for scale in (0.1, 1.0, 10.0, 40.0):
            X = rng.normal(size=(5, 5))
            X *= scale / np.linalg.norm(X)
            E = mat_exp(X)
            assert np.allclose(E, scipy_expm(X), rtol=1e-9, atol=1e-9 * np.abs(E).max())

    def test_rejects_nonsquare(self):
        with pytest.raises(InputError):
            mat_exp(np.ones((2, 3)))


class TestRankTol:
    def test_identity(self):
        assert rank_tol(np.eye(5)) == 5

    def test_zero(self):
        assert rank_tol(np.zeros((4, 4))) == 0

    def test_duplicate_row(self):
        M = np.array([[1.0, 2, 3], [1, 2, 3], [0, 1, 0]])
        assert rank_tol(M) == 2

    def test_permutation_and_scaling_invariance(self, rng=np.random.default_rng(3)):
        M = rng.normal(size=(6, 4))
        M[:, 3] = M[:, 0] + M[:, 1]          # force rank 3
        r = rank_tol(M)
        assert r == 3
        perm = rng.permutation(6)
        assert rank_tol(M[perm]) == r
        assert rank_tol(M * 1e3) == r
        assert rank_tol(M * 1e-3) == r

    def test_tall_and_wide(self):
        assert rank_tol(np.ones((7, 2))) == 1
        assert rank_tol(np.ones((2, 7))) == 1


class TestBracket:
    def test_self_bracket_vanishes(self, rng=np.random.default_rng(4)):
        X = rng.normal(size=(3, 3))
        assert np.allclose(bracket(X, X), 0.0)

    def test_sl2_relation(self):
        H = np.diag([1.0, -1.0])
        E = np.array([[0.0, 1], [0, 0]])
        assert np.allclose(bracket(H, E), 2.0 * E)

    def test_bracket_is_traceless(self, rng=np.random.default_rng(5)):
        X, Y = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
        assert abs(np.trace(bracket(X, Y))) < 1e-12

    def test_example_generators_independent(self):
        C = bracket(A1, B1)
        V = np.array([A1.ravel(), B1.ravel(), C.ravel()])
        assert rank_tol(V) == 3

    def test_shape_mismatch(self):
        with pytest.raises(InputError):
            bracket(np.eye(2), np.eye(3))


class TestOriginInHull:
    def test_two_positive_axes_outside(self):
        res = origin_in_hull([[1.0, 0], [0, 1]])
        assert not res.inside
        assert res.verify([[1.0, 0], [0, 1]])
        assert np.all(np.array([[1.0, 0], [0, 1]]) @ res.witness_functional > 0)

    def test_opposite_points_inside(self):
        pts = [[1.0, 0], [-1.0, 0]]
        res = origin_in_hull(pts)
        assert res.inside
        assert np.allclose(res.coefficients, [0.5, 0.5], atol=1e-6)
        assert res.verify(pts)

    def test_surrounding_triangle_inside(self):
        pts = [[1.0, 0], [-1, 1], [-1, -1]]
        res = origin_in_hull(pts)
        assert res.inside and res.verify(pts)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            origin_in_hull(np.empty((0, 3)))

    def test_random_certificates_self_verify(self, rng=np.random.default_rng(6)):
        for trial in range(40):
            n = int(rng.integers(2, 8))
            m = int(rng.integers(1, 30))
            pts = rng.normal(size=(m, n))
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
            if trial % 2:
                pts = np.vstack([pts, -pts[0]])   # guarantee a line
            res: HullResult = origin_in_hull(pts)
            assert res.verify(pts)

    def test_shifted_cloud_outside(self, rng=np.random.default_rng(7)):
        pts = rng.normal(size=(50, 4)) * 0.1
        pts[:, 0] += 1.0
        res = origin_in_hull(pts)
        assert not res.inside
        assert res.margin > 0.5
        assert res.verify(pts)
