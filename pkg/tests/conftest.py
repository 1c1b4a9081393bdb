import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile("ci")


def oracle_decode(codewords: np.ndarray, uhat: np.ndarray) -> int:
    """Exhaustive minimum-distance decoder, kept independent of ml_decode.

    Scans every codeword, scores by squared Euclidean distance, and breaks
    ties toward the lowest index explicitly.
    """
    best_idx = -1
    best = np.inf
    for m in range(codewords.shape[0]):
        diff = uhat - codewords[m]
        d = float(np.dot(diff, diff))
        if d < best:
            best, best_idx = d, m
    return best_idx


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
