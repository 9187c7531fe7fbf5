from __future__ import annotations

import numpy as np
import pytest

from chshmax import (
    OptimizerConfig,
    RngStream,
    bures_qubit_qudit,
    bures_state,
    ginibre,
    haar_unitary,
    nonlocality_scan,
)

FAST = OptimizerConfig(grid_points=10, refine_starts=3)


# -- stream ----------------------------------------------------------------------


def test_stream_identical_for_identical_key():
    a = RngStream(12, 5).normal(100)
    b = RngStream(12, 5).normal(100)
    assert np.array_equal(a, b)


def test_stream_differs_across_counters():
    a = RngStream(12, 5).uniform(100)
    b = RngStream(12, 6).uniform(100)
    assert not np.array_equal(a, b)


def test_stream_advances_between_calls():
    rng = RngStream(3, 0)
    assert not np.array_equal(rng.uniform(10), rng.uniform(10))


def test_normal_moments():
    z = RngStream(7, 0).normal(200_000)
    assert abs(z.mean()) < 5.0 / np.sqrt(len(z))
    assert abs(z.std() - 1.0) < 5.0 / np.sqrt(len(z))


def test_normal_odd_count():
    assert RngStream(1, 1).normal(7).shape == (7,)


# -- ginibre ----------------------------------------------------------------------


def test_ginibre_entry_moments():
    draws = [ginibre(32, RngStream(100, i)) for i in range(100)]
    entries = np.concatenate([g.ravel() for g in draws])
    n = entries.size
    assert abs(entries.real.mean()) < 5.0 / np.sqrt(n)
    assert abs(entries.imag.mean()) < 5.0 / np.sqrt(n)
    # E|G_ij|^2 = 2 with Var(|G|^2) = 4, so 5 sigma is 5 * 2 / sqrt(n)
    assert abs((np.abs(entries) ** 2).mean() - 2.0) < 10.0 / np.sqrt(n)


def test_ginibre_gram_is_psd():
    for i in range(20):
        G = ginibre(5, RngStream(101, i))
        vals = np.linalg.eigvalsh(G @ G.conj().T)
        assert vals.min() >= -1e-12


# -- haar -------------------------------------------------------------------------


def test_haar_unitarity():
    for i in range(100):
        U = haar_unitary(4, RngStream(102, i))
        assert np.abs(U.conj().T @ U - np.eye(4)).max() < 1e-12


def test_haar_unit_determinant_modulus():
    for i in range(50):
        U = haar_unitary(3, RngStream(103, i))
        assert abs(np.linalg.det(U)) == pytest.approx(1.0, abs=1e-12)


def test_haar_eigenphases_uniform():
    """Kolmogorov-Smirnov test of pooled eigenvalue phases at the 1% level.

    Eigenphases of a Haar unitary are marginally uniform on the circle;
    pairwise repulsion within a draw only tightens the empirical CDF, so
    the iid KS threshold is conservative.
    """
    stats = pytest.importorskip("scipy.stats")
    phases = []
    for i in range(10_000):
        U = haar_unitary(2, RngStream(104, i))
        phases.extend(np.angle(np.linalg.eigvals(U)))
    phases = (np.asarray(phases) + 2 * np.pi) % (2 * np.pi)
    result = stats.kstest(phases / (2 * np.pi), "uniform")
    assert result.pvalue > 0.01


# -- bures ------------------------------------------------------------------------


def test_bures_trace_and_psd():
    for i in range(50):
        rho = bures_state(4, RngStream(105, i))
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() >= -1e-12


def test_bures_mean_purity_regression():
    """Mean purity at D = 4 pinned against an independent Monte Carlo oracle.

    The oracle draws the same construction through numpy's own Generator
    (PCG64 + ziggurat normals + its own QR phase fix), sharing no code with
    the package sampler; the two estimates must agree statistically, and
    the package value is frozen as a regression number.
    """
    n = 4000
    ours = np.array(
        [
            (np.abs(bures_state(4, RngStream(106, i))) ** 2).sum()
            for i in range(n)
        ]
    )

    rng = np.random.default_rng(2024)
    other = np.empty(n)
    for i in range(n):
        G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Q, R = np.linalg.qr(Z)
        U = Q * (np.diagonal(R) / np.abs(np.diagonal(R)))[None, :]
        W = np.eye(4) + U
        M = W @ (G @ G.conj().T) @ W.conj().T
        rho = M / np.trace(M).real
        other[i] = (np.abs(rho) ** 2).sum().real

    se = np.sqrt(ours.var() / n + other.var() / n)
    assert abs(ours.mean() - other.mean()) < 5.0 * se
    # frozen regression value for the seeded package stream
    assert ours.mean() == pytest.approx(0.5627789070367648, abs=1e-12)


def test_bures_qubit_qudit_validates():
    state = bures_qubit_qudit(3, RngStream(107, 0))
    assert state.d == 3
    assert state.rho.shape == (6, 6)


# -- scan -------------------------------------------------------------------------


def test_scan_deterministic_and_bitwise_identical():
    a = nonlocality_scan(2, 40, seed=5, config=FAST)
    b = nonlocality_scan(2, 40, seed=5, config=FAST)
    assert a.p_violation == b.p_violation
    assert a.mean == b.mean
    assert np.array_equal(a.counts, b.counts)


def test_scan_threading_does_not_change_results():
    a = nonlocality_scan(2, 30, seed=6, config=FAST, threads=1)
    b = nonlocality_scan(2, 30, seed=6, config=FAST, threads=2)
    assert a.mean == b.mean
    assert a.p_violation == b.p_violation
    assert np.array_equal(a.counts, b.counts)


def test_scan_statistics_invariants():
    stats = nonlocality_scan(2, 60, seed=7, config=FAST)
    assert stats.counts.sum() == stats.n_samples
    assert 0.0 <= stats.p_violation <= 1.0
    assert len(stats.bin_edges) == len(stats.counts) + 1
    assert stats.bin_edges[0] == 0.0
    assert stats.bin_edges[-1] == pytest.approx(2.0 * np.sqrt(2.0))
    assert 0.0 <= stats.lower_rel_error_mean <= 1.0
    assert stats.lower_rel_error_max >= stats.lower_rel_error_mean


def test_scan_rejects_bad_arguments():
    with pytest.raises(ValueError):
        nonlocality_scan(1, 10, seed=0)
    with pytest.raises(ValueError):
        nonlocality_scan(2, 0, seed=0)
