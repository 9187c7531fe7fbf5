"""A two-parameter qubit-qutrit family, entanglement vs nonlocality.

The family mixes three maximally entangled qubit-qutrit vectors with
weights (x, y, 1-x-y) on the closed simplex.  For 2x3 systems positivity
of the partial transpose is necessary and sufficient for separability, so
the logarithmic negativity cleanly separates the single separable point
(1/3, 1/3) from everything else, while the CHSH maximum carves out a
strictly smaller violating region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import parallel_map
from .linalg import (
    TOL,
    ValidationError,
    partial_transpose_second,
    trace_norm,
)
from .optimizer import OptimizerConfig, max_chsh
from .states import BetaDecomposition, QubitQuditState

SIMPLEX_ATOL = 1e-12


@dataclass(frozen=True)
class FamilyPoint:
    """Mixing weights (x, y) with x, y >= 0 and x + y <= 1."""

    x: float
    y: float

    def __post_init__(self):
        if (
            self.x < -SIMPLEX_ATOL
            or self.y < -SIMPLEX_ATOL
            or self.x + self.y > 1.0 + SIMPLEX_ATOL
        ):
            raise ValidationError(
                f"point ({self.x}, {self.y}) lies outside the simplex "
                "x >= 0, y >= 0, x + y <= 1"
            )

    @property
    def z(self) -> float:
        return 1.0 - self.x - self.y


def qutrit_family_state(p: FamilyPoint) -> QubitQuditState:
    """The 6x6 density matrix of the family at (x, y)."""
    x, y, z = p.x, p.y, p.z
    rho = np.zeros((6, 6), dtype=complex)
    rho[0, 0] = rho[0, 4] = rho[4, 0] = rho[4, 4] = x
    rho[1, 1] = rho[1, 5] = rho[5, 1] = rho[5, 5] = y
    rho[2, 2] = rho[2, 3] = rho[3, 2] = rho[3, 3] = z
    return QubitQuditState(d=3, rho=0.5 * rho)


def qutrit_family_betas(p: FamilyPoint) -> BetaDecomposition:
    """Closed-form decomposition blocks of the family at (x, y).

    Must agree with decompose(qutrit_family_state(p)) to rounding; the
    tests enforce that consistency on a grid.
    """
    x, y = p.x, p.y
    beta0 = 0.5 * np.diag([1.0 - y, x + y, 1.0 - x]).astype(complex)
    beta1 = 0.5 * np.array(
        [
            [0.0, x, 1.0 - x - y],
            [x, 0.0, y],
            [1.0 - x - y, y, 0.0],
        ],
        dtype=complex,
    )
    beta2 = 0.5 * np.array(
        [
            [0.0, 1j * x, 1j * (x + y - 1.0)],
            [-1j * x, 0.0, 1j * y],
            [-1j * (x + y - 1.0), -1j * y, 0.0],
        ]
    )
    beta3 = 0.5 * np.diag(
        [2.0 * x + y - 1.0, y - x, -x - 2.0 * y + 1.0]
    ).astype(complex)
    return BetaDecomposition(d=3, beta0=beta0, beta1=beta1, beta2=beta2, beta3=beta3)


def log_negativity(state: QubitQuditState) -> float:
    """log2 of the trace norm of the partial transpose; 0 for PPT states."""
    pt = partial_transpose_second(state.rho, state.d)
    return max(float(np.log2(trace_norm(pt))), 0.0)


def embed(betas: BetaDecomposition, d2: int) -> BetaDecomposition:
    """Zero-pad all four blocks into a larger qudit dimension.

    Padding only appends zero eigenvalues to every rotated block, so the
    CHSH maximum of the embedded state is unchanged.
    """
    d = betas.d
    if d2 <= d:
        raise ValidationError(f"target dimension {d2} must exceed {d}")

    def pad(M: np.ndarray) -> np.ndarray:
        out = np.zeros((d2, d2), dtype=complex)
        out[:d, :d] = M
        return out

    return BetaDecomposition(
        d=d2,
        beta0=pad(betas.beta0),
        beta1=pad(betas.beta1),
        beta2=pad(betas.beta2),
        beta3=pad(betas.beta3),
    )


@dataclass(frozen=True)
class GridRow:
    x: float
    y: float
    E: float
    B: float
    lower: float
    upper: float
    entangled: bool
    violates: bool
    excluded_by_upper: bool


def grid_scan(
    resolution: int,
    config: OptimizerConfig = OptimizerConfig(),
    threads: int | None = None,
) -> list[GridRow]:
    """Evaluate the family on a uniform simplex grid, row-major in x.

    Points with x + y > 1 are skipped; the boundary is included.
    """
    if resolution < 2:
        raise ValidationError(f"resolution must be >= 2, got {resolution}")
    axis = np.linspace(0.0, 1.0, resolution)
    points = [
        FamilyPoint(float(x), float(y))
        for x in axis
        for y in axis
        if x + y <= 1.0 + SIMPLEX_ATOL
    ]

    def one(i: int) -> GridRow:
        p = points[i]
        result = max_chsh(qutrit_family_betas(p), config)
        E = log_negativity(qutrit_family_state(p))
        return GridRow(
            x=p.x,
            y=p.y,
            E=E,
            B=result.value,
            lower=result.lower,
            upper=result.upper,
            entangled=E > TOL.entanglement_atol,
            violates=result.value > 2.0,
            excluded_by_upper=result.upper <= 2.0,
        )

    rows = parallel_map(one, len(points), threads)
    return sorted(rows, key=lambda r: (r.x, r.y))
