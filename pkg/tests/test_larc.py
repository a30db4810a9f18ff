import numpy as np
import pytest

from conelab import InputError, bracket_closure_dim, larc_algorithm1, mat_exp

from conftest import A1, A2, B1, B2


def random_traceless(rng, d):
    X = rng.normal(size=(d, d))
    return X - np.trace(X) / d * np.eye(d)


class TestAlgorithm1:
    def test_example_systems_pass(self):
        assert larc_algorithm1(A1, B1, 15) is True
        assert larc_algorithm1(A2, B2, 15) is True

    def test_commuting_diagonal_fails(self):
        A = np.diag([1.0, -1.0, 0.0, 0.0])
        B = np.diag([0.0, 0.0, 1.0, -1.0])
        assert larc_algorithm1(A, B, 15) is False

    def test_sl2_standard_pair(self):
        E = np.array([[0.0, 1], [0, 0]])
        F = np.array([[0.0, 0], [1, 0]])
        assert larc_algorithm1(E, F, 3) is True

    def test_rejects_non_traceless(self):
        with pytest.raises(InputError):
            larc_algorithm1(np.eye(3), np.diag([1.0, -1.0, 0.0]), 8)

    def test_soundness_against_closure(self, rng=np.random.default_rng(0)):
        # whenever the search reports success, the saturation oracle must
        # confirm a full algebra
        for _ in range(15):
            d = int(rng.integers(2, 5))
            A, B = random_traceless(rng, d), random_traceless(rng, d)
            if larc_algorithm1(A, B, d * d - 1):
                assert bracket_closure_dim(A, B) == d * d - 1


class TestBracketClosure:
    def test_example_systems_full(self):
        assert bracket_closure_dim(A1, B1) == 15
        assert bracket_closure_dim(A2, B2) == 15

    def test_commuting_diagonal(self):
        A = np.diag([1.0, -1.0, 0.0, 0.0])
        B = np.diag([0.0, 0.0, 1.0, -1.0])
        assert bracket_closure_dim(A, B) == 2

    def test_sl2_triple(self):
        E = np.array([[0.0, 1], [0, 0]])
        F = np.array([[0.0, 0], [1, 0]])
        assert bracket_closure_dim(E, F) == 3

    def test_symmetric_in_arguments(self, rng=np.random.default_rng(1)):
        for _ in range(5):
            A, B = random_traceless(rng, 3), random_traceless(rng, 3)
            assert bracket_closure_dim(A, B) == bracket_closure_dim(B, A)

    def test_conjugation_invariance(self, rng=np.random.default_rng(2)):
        for _ in range(5):
            A, B = random_traceless(rng, 3), random_traceless(rng, 3)
            base = bracket_closure_dim(A, B)
            g = mat_exp(0.1 * random_traceless(rng, 3))
            gi = np.linalg.inv(g)
            assert bracket_closure_dim(g @ A @ gi, g @ B @ gi) == base

    def test_equal_generators(self):
        A = np.diag([2.0, -1.0, -1.0])
        assert bracket_closure_dim(A, A) == 1
