"""SO(3) rotations in Z-Y-Z Euler angles, plus the search grid.

With R = Rz(alpha) Ry(beta) Rz(gamma):

    R[0] = (ca*cb*cg - sa*sg,  -ca*cb*sg - sa*cg,  ca*sb)
    R[1] = (sa*cb*cg + ca*sg,  -sa*cb*sg + ca*cg,  sa*sb)
    R[2] = (-sb*cg,             sb*sg,             cb)

The trace-norm objective only reads the first two rows, so the batched
builders below produce (..., 2, 3) row stacks directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import ValidationError


@dataclass(frozen=True)
class RotationSO3:
    """A proper rotation, stored as Z-Y-Z Euler angles in radians."""

    alpha: float
    beta: float
    gamma: float

    def to_matrix(self) -> np.ndarray:
        ca, sa = np.cos(self.alpha), np.sin(self.alpha)
        cb, sb = np.cos(self.beta), np.sin(self.beta)
        cg, sg = np.cos(self.gamma), np.sin(self.gamma)
        return np.array(
            [
                [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
                [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
                [-sb * cg, sb * sg, cb],
            ]
        )

    @staticmethod
    def from_matrix(R: np.ndarray, atol: float = 1e-10) -> "RotationSO3":
        R = np.asarray(R, dtype=float)
        if R.shape != (3, 3):
            raise ValidationError(f"rotation matrix must be 3x3, got {R.shape}")
        if np.abs(R @ R.T - np.eye(3)).max() > atol or np.linalg.det(R) < 0.0:
            raise ValidationError("matrix is not a proper rotation")
        cb = float(np.clip(R[2, 2], -1.0, 1.0))
        beta = float(np.arccos(cb))
        sb = np.sin(beta)
        if sb > 1e-12:
            alpha = float(np.arctan2(R[1, 2], R[0, 2]))
            gamma = float(np.arctan2(R[2, 1], -R[2, 0]))
        elif cb > 0.0:  # beta = 0: R = Rz(alpha + gamma)
            alpha = float(np.arctan2(R[1, 0], R[0, 0]))
            gamma = 0.0
        else:  # beta = pi: R = Rz(alpha - gamma) Ry(pi)
            alpha = float(np.arctan2(-R[0, 1], -R[0, 0]))
            gamma = 0.0
        return RotationSO3(alpha, beta, gamma)


def euler_rows(angles: np.ndarray) -> np.ndarray:
    """First two rotation rows for a (..., 3) stack of Euler triples."""
    angles = np.asarray(angles, dtype=float)
    ca, sa = np.cos(angles[..., 0]), np.sin(angles[..., 0])
    cb, sb = np.cos(angles[..., 1]), np.sin(angles[..., 1])
    cg, sg = np.cos(angles[..., 2]), np.sin(angles[..., 2])
    rows = np.empty(angles.shape[:-1] + (2, 3))
    rows[..., 0, 0] = ca * cb * cg - sa * sg
    rows[..., 0, 1] = -ca * cb * sg - sa * cg
    rows[..., 0, 2] = ca * sb
    rows[..., 1, 0] = sa * cb * cg + ca * sg
    rows[..., 1, 1] = -sa * cb * sg + ca * cg
    rows[..., 1, 2] = sa * sb
    return rows


@lru_cache(maxsize=8)
def euler_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographic (alpha, beta, gamma) grid and its rotation rows.

    alpha, gamma sweep [0, 2pi) half-open; beta sweeps [0, pi] closed.  The
    objective is exactly invariant under alpha -> alpha + pi (the first two
    rows flip sign), so for even resolutions only the first half of the
    alpha range is materialized; the value set is unchanged and first-index
    argmax still realizes the lexicographically smallest maximizer.
    """
    if resolution < 2:
        raise ValidationError(f"grid resolution must be >= 2, got {resolution}")
    if resolution % 2 == 0:
        alphas = np.linspace(0.0, np.pi, resolution // 2, endpoint=False)
    else:
        alphas = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    betas = np.linspace(0.0, np.pi, resolution)
    gammas = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    grid = np.stack(
        np.meshgrid(alphas, betas, gammas, indexing="ij"), axis=-1
    ).reshape(-1, 3)
    grid.setflags(write=False)
    rows = euler_rows(grid)
    rows.setflags(write=False)
    return grid, rows


def _signed_permutations() -> np.ndarray:
    """The six rotations that permute the coordinate axes.

    Odd permutations get their third row negated to stay in SO(3); the sign
    never matters because only rows one and two feed the objective.
    """
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    out = []
    for p in perms:
        R = np.zeros((3, 3))
        for row, col in enumerate(p):
            R[row, col] = 1.0
        if np.linalg.det(R) < 0.0:
            R[2] *= -1.0
        out.append(R)
    return np.stack(out)


AXIS_PERMUTATIONS = _signed_permutations()
AXIS_PERMUTATIONS.setflags(write=False)

AXIS_PERMUTATION_ANGLES = np.stack(
    [
        np.array(
            [
                RotationSO3.from_matrix(R).alpha,
                RotationSO3.from_matrix(R).beta,
                RotationSO3.from_matrix(R).gamma,
            ]
        )
        for R in AXIS_PERMUTATIONS
    ]
)
AXIS_PERMUTATION_ANGLES.setflags(write=False)
