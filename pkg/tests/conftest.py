import json
from pathlib import Path

import numpy as np
import pytest

from conelab import Budget, SystemSpec, spec_from_dict

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Example-system matrices: symmetric A with eigenvalues 3, 2, -2, -3 and a
# diagonal B; a block-rotation A with a weakly coupled B.
A1 = np.array([[0.0, 2, 0, -1],
               [2, 0, 2, 0],
               [0, 2, 0, 2],
               [-1, 0, 2, 0]])
B1 = np.diag([4.0, 1.0, -2.0, -3.0])

A2 = np.array([[1.0, 1, 0, 0],
               [-1, 1, 0, 0],
               [0, 0, -1, 0.5],
               [0, 0, -0.5, -1]])
B2 = np.array([[2.0, 0, 0, 0],
               [0, -1.5, -0.1, 0],
               [0, 0.1, -1.5, 0],
               [0, 0, 0, 1]])

# eigenpairs of A1, transcribed fixture values
EIGVALS1 = (3.0, 2.0, -2.0, -3.0)
EIGVECS1 = (np.array([1.0, 2, 2, 1]),
            np.array([-2.0, -1, 1, 2]),
            np.array([2.0, -1, -1, 2]),
            np.array([-1.0, 2, -2, 1]))


@pytest.fixture(scope="session")
def ex1_spec() -> SystemSpec:
    return spec_from_dict(json.loads((FIXTURES / "example1.json").read_text()))


@pytest.fixture(scope="session")
def ex2_spec() -> SystemSpec:
    return spec_from_dict(json.loads((FIXTURES / "example2.json").read_text()))


@pytest.fixture(scope="session")
def small_budget() -> Budget:
    """Reduced sampling effort for tests that sweep many systems."""
    return Budget(seeds=4, words_per_seed=40, word_len=3,
                  refine_controls=(0.0, 5.0, -5.0), refine_norm=150.0)
