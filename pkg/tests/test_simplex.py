from __future__ import annotations

import numpy as np
import pytest

from chshmax.simplex import SimplexOptions, nelder_mead_batch


def quad(points):
    target = np.array([1.0, -2.0, 0.5])
    return ((points - target) ** 2).sum(axis=-1)


def rosenbrock2(points):
    x, y = points[..., 0], points[..., 1]
    return (1 - x) ** 2 + 100 * (y - x**2) ** 2


def test_quadratic_batch_converges():
    starts = np.array([[0.0, 0.0, 0.0], [3.0, 1.0, -2.0], [1.1, -2.1, 0.6]])
    xs, fs, iters = nelder_mead_batch(quad, starts, step=0.25)
    assert np.abs(xs - np.array([1.0, -2.0, 0.5])).max() < 1e-7
    assert fs.max() < 1e-13
    assert (iters > 0).all()


def test_rosenbrock_batch():
    starts = np.array([[-1.0, 1.0], [0.0, 0.0], [2.0, 2.0], [0.5, -0.5]])
    xs, fs, _ = nelder_mead_batch(
        rosenbrock2, starts, step=0.3, options=SimplexOptions(max_iter=2000)
    )
    assert np.abs(xs - 1.0).max() < 1e-5
    assert fs.max() < 1e-10


def test_matches_scipy_reference():
    scipy_opt = pytest.importorskip("scipy.optimize")
    starts = np.array([[2.0, -1.0], [-0.7, 0.9]])
    xs, fs, _ = nelder_mead_batch(
        rosenbrock2, starts, step=0.2, options=SimplexOptions(max_iter=3000)
    )
    for start, x, f in zip(starts, xs, fs):
        ref = scipy_opt.minimize(
            lambda p: float(rosenbrock2(p[None, :])[0]),
            start,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 3000},
        )
        assert f <= ref.fun + 1e-8


def test_batch_is_independent_per_simplex():
    # running one start alone gives the same answer as running it in a batch
    starts = np.array([[0.3, 0.3, 0.3], [2.5, 2.5, 2.5]])
    xs_all, fs_all, _ = nelder_mead_batch(quad, starts, step=0.1)
    for k in range(2):
        xs_one, fs_one, _ = nelder_mead_batch(quad, starts[k : k + 1], step=0.1)
        assert np.abs(xs_one[0] - xs_all[k]).max() < 1e-12
        assert abs(fs_one[0] - fs_all[k]) < 1e-12


def test_never_returns_worse_than_start():
    rng = np.random.default_rng(0)
    starts = rng.normal(size=(8, 3))
    start_vals = quad(starts)
    _, fs, _ = nelder_mead_batch(
        quad, starts, step=0.5, options=SimplexOptions(max_iter=3)
    )
    assert (fs <= start_vals + 1e-12).all()


def test_iteration_cap_respected():
    starts = np.array([[10.0, 10.0, 10.0]])
    _, _, iters = nelder_mead_batch(
        quad, starts, step=0.01, options=SimplexOptions(max_iter=7)
    )
    assert iters[0] <= 7
