from __future__ import annotations

import numpy as np
import pytest

from chshmax import RngStream, bures_qubit_qudit, decompose


def random_hermitian(seed: int, n: int, scale: float = 1.0) -> np.ndarray:
    """Seeded random Hermitian matrix (test helper, not the package RNG)."""
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (A + A.conj().T)


def random_unitary(seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(G)
    return Q * (np.diagonal(R) / np.abs(np.diagonal(R)))[None, :]


@pytest.fixture(scope="session")
def bures_pool_d2():
    """A small shared pool of random d=2 states with their decompositions."""
    states = [bures_qubit_qudit(2, RngStream(314, i)) for i in range(40)]
    return [(s, decompose(s)) for s in states]
