import os

import numpy as np
import pytest

from lloc.config import reset_settings
from lloc.core.generators import planted_cluster_positions, uniform_positions
from lloc.core.instance import Instance, from_embedding
from lloc.core.wlloc import WllocInstance

# Test environment setup
os.environ.setdefault("LLOC_THREADS", "1")
os.environ.setdefault("LLOC_LOG_LEVEL", "INFO")



@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are a process-wide singleton; rebuild them for every test"""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def three_points() -> Instance:
    """Instance from positions (0, 1, 3): {(0,1,2), (1,0,2), (2,1,0)}"""
    return from_embedding([0.0, 1.0, 3.0])


@pytest.fixture
def cyclic_three() -> Instance:
    """
    The imperfect 3-point instance: 0 says 1 is closer, 1 says 2, 2 says 0.
    No point can be the middle one, so every embedding violates at least one.
    """
    return Instance.from_bits(np.array([[1], [0], [1]], dtype=bool))


@pytest.fixture
def six_points_positions() -> np.ndarray:
    return np.array([0.0, 1.0, 10.0, 11.0, 25.0, 26.0])


@pytest.fixture
def six_points(six_points_positions) -> Instance:
    return from_embedding(six_points_positions)


@pytest.fixture
def calibration_wlloc() -> WllocInstance:
    """
    b = 3 instance whose optimum is 4 (1-based weights):
    w(1,2,3)=5, w(1,3,2)=1, w(2,1,3)=2, w(2,3,1)=3, w(3,1,2)=4, w(3,2,1)=0
    """
    return WllocInstance.from_triples(3, [
        (0, 1, 2, 5),
        (0, 2, 1, 1),
        (1, 0, 2, 2),
        (1, 2, 0, 3),
        (2, 0, 1, 4),
        (2, 1, 0, 0),
    ])


def aligned_positions(per_cluster: int, seed: int, clusters: int = 5) -> np.ndarray:
    """
    Contiguous clusters of equal size around centers 10 * (2^k - 1), i.e.
    0, 10, 30, 70, 150, ... Distances between centers seen from any center are
    distinct by at least 10, so every pivot orders the clusters as whole
    blocks and with b = clusters each bucket is exactly one cluster.
    """
    centers = [10.0 * (2 ** k - 1) for k in range(clusters)]
    return planted_cluster_positions([per_cluster] * clusters, centers, spread=0.5, seed=seed)


@pytest.fixture
def aligned_instance_factory():
    def make(per_cluster: int, seed: int = 0, clusters: int = 5):
        positions = aligned_positions(per_cluster, seed, clusters)
        return from_embedding(positions), positions
    return make


@pytest.fixture
def planted_factory():
    def make(n: int, seed: int = 0):
        positions = uniform_positions(n, seed)
        return from_embedding(positions), positions
    return make
