import os
from pathlib import Path

import numpy as np
import pytest

from gmrelax.core import Permutation
from gmrelax.random_graphs import CorrelatedPairSpec, permute_graph, sample_correlated_pair

TESTS_DIR = Path(__file__).parent
QAPLIB_FIXTURE_DIR = TESTS_DIR / "data" / "qaplib"


def qaplib_data_dir() -> Path:
    """QAPLIB instance directory: user-supplied via env var, else the checked-in fixtures."""
    override = os.environ.get("GMRELAX_QAPLIB_DIR")
    return Path(override) if override else QAPLIB_FIXTURE_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_binary_graph(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Symmetric hollow 0/1 matrix, edge probability p."""
    a = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    a[iu] = (rng.random(iu[0].size) < p).astype(float)
    return a + a.T


def aligned_instance(n: int, rho: float, alpha: float, seed: int):
    """One harness-style instance: aligned pair, random truth, relabeled A."""
    rng = np.random.default_rng(seed)
    a, b = sample_correlated_pair(
        CorrelatedPairSpec(n=n, rho=rho, alpha=alpha), rng=rng
    )
    pstar = Permutation(rng.permutation(n))
    aprime = permute_graph(a, pstar)
    return aprime, b, pstar
