import numpy as np
import pytest


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform SU(2) via a random unit quaternion."""
    v = rng.normal(size=4)
    v = v / np.linalg.norm(v)
    a, b, c, d = v
    return np.array(
        [
            [a + 1j * b, c + 1j * d],
            [-c + 1j * d, a - 1j * b],
        ]
    )


def random_axis(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
