from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chshmax.rotations import (
    AXIS_PERMUTATION_ANGLES,
    AXIS_PERMUTATIONS,
    RotationSO3,
    euler_grid,
    euler_rows,
)


@given(
    st.floats(-7.0, 7.0),
    st.floats(-7.0, 7.0),
    st.floats(-7.0, 7.0),
)
@settings(max_examples=60, deadline=None)
def test_to_matrix_is_special_orthogonal(a, b, g):
    R = RotationSO3(a, b, g).to_matrix()
    assert np.abs(R @ R.T - np.eye(3)).max() < 1e-12
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_from_matrix_roundtrip(seed):
    rng = np.random.default_rng(seed)
    rot = RotationSO3(*rng.uniform(0, 2 * np.pi, size=3))
    R = rot.to_matrix()
    back = RotationSO3.from_matrix(R).to_matrix()
    assert np.abs(R - back).max() < 1e-9


def test_from_matrix_gimbal_cases():
    for angles in [(0.3, 0.0, 0.0), (1.2, np.pi, 0.0), (0.0, 0.0, 2.0)]:
        R = RotationSO3(*angles).to_matrix()
        back = RotationSO3.from_matrix(R).to_matrix()
        assert np.abs(R - back).max() < 1e-9


def test_euler_rows_match_full_matrix():
    rng = np.random.default_rng(0)
    angles = rng.uniform(0, 2 * np.pi, size=(20, 3))
    rows = euler_rows(angles)
    for k in range(20):
        R = RotationSO3(*angles[k]).to_matrix()
        assert np.abs(rows[k] - R[:2]) .max() < 1e-14


def test_axis_permutations_are_rotations_with_unit_rows():
    for R in AXIS_PERMUTATIONS:
        assert np.abs(R @ R.T - np.eye(3)).max() < 1e-14
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
    # rows 1, 2 of the six cover every ordered pair of distinct axes
    pairs = {
        (int(np.argmax(np.abs(R[0]))), int(np.argmax(np.abs(R[1]))))
        for R in AXIS_PERMUTATIONS
    }
    assert pairs == {(i, j) for i in range(3) for j in range(3) if i != j}


def test_axis_permutation_angles_reproduce_matrices():
    for angles, R in zip(AXIS_PERMUTATION_ANGLES, AXIS_PERMUTATIONS):
        back = RotationSO3(*angles).to_matrix()
        assert np.abs(back - R).max() < 1e-12


def test_grid_halving_preserves_value_set():
    # even resolution: alpha sweep halves but the objective value set is
    # unchanged because the two first rows only flip sign at alpha + pi
    angles_even, rows_even = euler_grid(6)
    assert angles_even.shape == (3 * 6 * 6, 3)
    angles_odd, rows_odd = euler_grid(5)
    assert angles_odd.shape == (5 * 5 * 5, 3)
    assert np.all(angles_even[:, 0] < np.pi)


def test_grid_is_lexicographic_and_contains_identity():
    angles, _ = euler_grid(6)
    assert np.array_equal(angles, np.array(sorted(map(tuple, angles))))
    assert (angles == 0.0).all(axis=1).any()
