"""Random matrix ensembles and nonlocality statistics over them.

Sampling is fully reproducible: every stream is addressed by a
(seed, counter) pair fed to a counter-based bit generator, and Gaussian
variates are produced by an explicit Box-Muller transform on the uniform
stream, so the same pair yields the same draws on any platform.  Sample i
of a scan uses substream (seed, i), which makes per-sample work order
independent and safe to run concurrently.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import TOL, hermitian_part
from .optimizer import TSIRELSON, OptimizerConfig, max_chsh
from .states import QubitQuditState, decompose


class RngStream:
    """A reproducible random stream addressed by (seed, counter)."""

    def __init__(self, seed: int, counter: int = 0):
        self.seed = int(seed)
        self.counter = int(counter)
        key = np.array(
            [self.seed % (1 << 64), self.counter % (1 << 64)], dtype=np.uint64
        )
        self._bits = np.random.Generator(np.random.Philox(key=key))

    def uniform(self, n: int) -> np.ndarray:
        """n doubles uniform on [0, 1)."""
        return self._bits.random(n)

    def normal(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on the uniform stream."""
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs)
        radius = np.sqrt(-2.0 * np.log1p(-u[:pairs]))
        theta = 2.0 * np.pi * u[pairs:]
        z = np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])
        return z[:n]


def ginibre(D: int, rng: RngStream) -> np.ndarray:
    """D x D matrix with independent standard-normal real and imag parts."""
    if D < 1:
        raise ValueError(f"dimension must be >= 1, got {D}")
    re = rng.normal(D * D)
    im = rng.normal(D * D)
    return (re + 1j * im).reshape(D, D)


def haar_unitary(D: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary via phase-corrected QR of a Ginibre draw."""
    G = ginibre(D, rng)
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R)
    mag = np.abs(diag)
    phase = np.where(mag > 0.0, np.conj(diag) / np.where(mag > 0.0, mag, 1.0), 1.0)
    return Q * phase[None, :]


def bures_state(D: int, rng: RngStream) -> np.ndarray:
    """Random D x D density matrix from the Bures measure.

    rho = (I + U) G G^dag (I + U^dag) normalized to unit trace, with G
    Ginibre and U Haar.  A zero-trace draw (probability zero) is rejected
    and the stream simply advances.
    """
    if D < 2:
        raise ValueError(f"dimension must be >= 2, got {D}")
    eye = np.eye(D)
    while True:
        G = ginibre(D, rng)
        U = haar_unitary(D, rng)
        W = eye + U
        M = W @ (G @ G.conj().T) @ W.conj().T
        trace = float(np.trace(M).real)
        if trace > TOL.zero_trace_atol:
            return hermitian_part(M / trace)


def bures_qubit_qudit(d: int, rng: RngStream) -> QubitQuditState:
    """A random Bures state on qubit (x) qudit, dimension 2d."""
    return QubitQuditState(d=d, rho=bures_state(2 * d, rng))


@dataclass(frozen=True)
class ScanStatistics:
    """Aggregate nonlocality statistics over a random-state ensemble."""

    d: int
    n_samples: int
    p_violation: float
    bin_edges: np.ndarray     # 61 edges, uniform over [0, 2 sqrt(2)]
    counts: np.ndarray        # 60 bins
    mean: float
    stddev: float
    lower_rel_error_mean: float
    lower_rel_error_max: float


HISTOGRAM_BINS = 60


def parallel_map(fn, n: int, threads: int | None = None) -> list:
    """Order-preserving map of fn over range(n), optionally threaded.

    Results are identical for any thread count; only wall time changes.
    """
    if threads is None or threads <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))


def nonlocality_scan(
    d: int,
    n_samples: int,
    seed: int,
    config: OptimizerConfig = OptimizerConfig(),
    threads: int | None = None,
) -> ScanStatistics:
    """Sample Bures states of dimension 2d and aggregate their maxima."""
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")

    def one(i: int) -> tuple[float, float]:
        state = bures_qubit_qudit(d, RngStream(seed, i))
        result = max_chsh(decompose(state), config)
        return result.value, result.lower

    pairs = parallel_map(one, n_samples, threads)
    values = np.array([p[0] for p in pairs])
    lowers = np.array([p[1] for p in pairs])

    counts, edges = np.histogram(
        np.clip(values, 0.0, TSIRELSON), bins=HISTOGRAM_BINS, range=(0.0, TSIRELSON)
    )
    positive = values > 0.0
    rel = (values[positive] - lowers[positive]) / values[positive]
    return ScanStatistics(
        d=d,
        n_samples=n_samples,
        p_violation=float(np.mean(values > 2.0)),
        bin_edges=edges,
        counts=counts,
        mean=float(values.mean()),
        stddev=float(values.std()),
        lower_rel_error_mean=float(rel.mean()) if rel.size else 0.0,
        lower_rel_error_max=float(rel.max()) if rel.size else 0.0,
    )
