"""Maximal CHSH violation for qubit-qudit states.

The maximum of the Bell expectation over all dichotomic observables reduces
to a search over a single SO(3) rotation acting on the (beta1, beta2, beta3)
triple:

    B_max = 2 * max_R sqrt( ||(R beta)_1||_1^2 + ||(R beta)_2||_1^2 )

The search runs a coarse Euler-angle grid, keeps the best candidates, and
polishes them with batched simplex descent.  Closed-form lower and upper
bounds, the qubit-qubit cross-check, and the optimal observables are
derived from the same decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    PAULIS,
    TOL,
    DimensionError,
    ValidationError,
    as_complex_matrix,
    assert_hermitian,
    frobenius_norm_sq,
    kron,
    sign_involution,
    trace_norm,
    trace_norm_batch,
)
from .rotations import (
    AXIS_PERMUTATION_ANGLES,
    AXIS_PERMUTATIONS,
    RotationSO3,
    euler_grid,
    euler_rows,
)
from .simplex import SimplexOptions, nelder_mead_batch
from .states import BetaDecomposition, QubitQuditState

TSIRELSON = 2.0 * math.sqrt(2.0)


class InternalConsistencyError(RuntimeError):
    """The optimizer violated one of its own guarantees; indicates a bug."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Rotation-search controls: grid density plus simplex refinement."""

    grid_points: int = 30      # per Euler angle
    refine_starts: int = 10    # best grid candidates polished by simplex
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    simplex_tol: float = 1e-9  # vertex spread at convergence
    simplex_max_iter: int = 500

    def simplex_options(self) -> SimplexOptions:
        return SimplexOptions(
            reflection=self.reflection,
            expansion=self.expansion,
            contraction=self.contraction,
            shrink=self.shrink,
            diameter_tol=self.simplex_tol,
            max_iter=self.simplex_max_iter,
        )


@dataclass(frozen=True)
class Observable2:
    """A traceless qubit observable (1/2) r . sigma with |r| = 2."""

    matrix: np.ndarray
    axis: np.ndarray

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise ValidationError(f"axis must be a 3-vector, got shape {axis.shape}")
        if abs(np.linalg.norm(axis) - 2.0) > TOL.involution_atol:
            raise ValidationError(
                f"axis norm must be 2, got {np.linalg.norm(axis):.12g}"
            )
        M = assert_hermitian(self.matrix)
        expected = 0.5 * np.tensordot(axis, PAULIS, axes=([0], [0]))
        if np.abs(M - expected).max() > TOL.involution_atol:
            raise ValidationError("matrix does not equal (1/2) axis . sigma")
        M = M.copy()
        M.setflags(write=False)
        axis = axis.copy()
        axis.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "axis", axis)

    @staticmethod
    def from_direction(direction: np.ndarray) -> "Observable2":
        u = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(u)
        if norm < TOL.degenerate_axis:
            raise ValidationError("cannot build an observable from a zero direction")
        axis = 2.0 * u / norm
        matrix = 0.5 * np.tensordot(axis, PAULIS, axes=([0], [0]))
        return Observable2(matrix=matrix, axis=axis)


@dataclass(frozen=True)
class ObservableD:
    """A d x d Hermitian involution (eigenvalues +-1, degeneracy allowed)."""

    matrix: np.ndarray

    def __post_init__(self):
        M = assert_hermitian(self.matrix)
        defect = np.abs(M @ M - np.eye(M.shape[0])).max()
        if defect > TOL.involution_atol:
            raise ValidationError(
                f"matrix is not involutory: |M^2 - I| = {defect:.3e}"
            )
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)


@dataclass(frozen=True)
class ChshResult:
    value: float
    rotation: RotationSO3
    A: Observable2
    Aprime: Observable2
    B: ObservableD
    Bprime: ObservableD
    lower: float
    upper: float
    violates: bool


def _rotated_pair(rows: np.ndarray, triple_flat: np.ndarray, d: int) -> np.ndarray:
    """Apply (..., 2, 3) rotation rows to the flattened beta triple."""
    mixed = rows @ triple_flat
    return mixed.reshape(rows.shape[:-2] + (2, d, d))


def _objective_rows(rows: np.ndarray, triple_flat: np.ndarray, d: int) -> np.ndarray:
    tn = trace_norm_batch(_rotated_pair(rows, triple_flat, d))
    return (tn**2).sum(axis=-1)


def objective(betas: BetaDecomposition, rotation: RotationSO3) -> float:
    """||(R beta)_1||_1^2 + ||(R beta)_2||_1^2 for a single rotation."""
    R = rotation.to_matrix()
    triple = betas.triple
    first = np.tensordot(R[0], triple, axes=([0], [0]))
    second = np.tensordot(R[1], triple, axes=([0], [0]))
    return trace_norm(first) ** 2 + trace_norm(second) ** 2


def lower_bound(betas: BetaDecomposition) -> float:
    """2 sqrt(t1^2 + t2^2) from the two largest beta trace norms."""
    norms = sorted((trace_norm(b) for b in betas.triple), reverse=True)
    return 2.0 * math.hypot(norms[0], norms[1])


def upper_bound(betas: BetaDecomposition) -> float:
    """2 sqrt(d * sum_a ||beta_a||_2^2)."""
    total = sum(frobenius_norm_sq(b) for b in betas.triple)
    return 2.0 * math.sqrt(betas.d * total)


def horodecki_qubit_qubit(betas: BetaDecomposition) -> float:
    """Closed-form qubit-qubit maximum 2 sqrt(kappa1 + kappa2).

    kappa are the two largest eigenvalues of C^T C where
    C[i, j] = Tr(beta_i sigma_j).
    """
    if betas.d != 2:
        raise DimensionError(f"qubit-qubit formula requires d = 2, got d={betas.d}")
    C = np.einsum("iab,jba->ij", betas.triple, PAULIS).real
    kappa = np.linalg.eigvalsh(C.T @ C)
    return 2.0 * math.sqrt(max(kappa[-1] + kappa[-2], 0.0))


def _search(batch_objective, config: OptimizerConfig) -> tuple[np.ndarray, float]:
    """Grid + simplex maximization of a rotation-row objective.

    batch_objective maps (..., 2, 3) rotation rows to objective values.
    The identity and all axis permutations are always evaluated so that the
    closed-form lower bound can never be missed; the returned value is the
    best over raw candidates and their refinements.
    """
    grid_angles, grid_rows = euler_grid(config.grid_points)
    values = batch_objective(grid_rows)
    n_keep = min(config.refine_starts, values.shape[0])
    top = np.argsort(-values, kind="stable")[:n_keep]

    special_values = batch_objective(AXIS_PERMUTATIONS[:, :2, :])

    pool_angles = np.concatenate([grid_angles[top], AXIS_PERMUTATION_ANGLES])
    pool_values = np.concatenate([values[top], special_values])

    def negated(points: np.ndarray) -> np.ndarray:
        return -batch_objective(euler_rows(points))

    step = 0.5 * (2.0 * np.pi / config.grid_points)
    starts = np.argsort(-pool_values, kind="stable")[:n_keep]
    refined, neg_refined, _ = nelder_mead_batch(
        negated, pool_angles[starts], step, config.simplex_options()
    )

    all_angles = np.concatenate([refined, pool_angles])
    all_values = np.concatenate([-neg_refined, pool_values])
    best = int(np.argmax(all_values))
    return all_angles[best], float(all_values[best])


def max_chsh(
    betas: BetaDecomposition, config: OptimizerConfig = OptimizerConfig()
) -> ChshResult:
    """Maximize the CHSH expectation over all observables.

    Deterministic for a fixed config; the result carries the maximizing
    rotation, the observables realizing the maximum, and the closed-form
    bound sandwich.
    """
    d = betas.d
    triple_flat = betas.triple.reshape(3, d * d)

    def batch_objective(rows: np.ndarray) -> np.ndarray:
        return _objective_rows(rows, triple_flat, d)

    best_angles, _ = _search(batch_objective, config)
    rotation = RotationSO3(*(float(a) for a in best_angles))
    value = 2.0 * math.sqrt(max(objective(betas, rotation), 0.0))

    lower = lower_bound(betas)
    upper = upper_bound(betas)
    if value < lower - TOL.bound_slack:
        raise InternalConsistencyError(
            f"search returned {value:.12g} below the closed-form lower bound "
            f"{lower:.12g}"
        )
    if value > upper + TOL.bound_slack:
        raise InternalConsistencyError(
            f"search returned {value:.12g} above the closed-form upper bound "
            f"{upper:.12g}"
        )

    A, Aprime, B, Bprime = extract_observables(betas, rotation)
    certificate = bell_value_from_betas(betas, A, Aprime, B, Bprime)
    if abs(certificate - value) > TOL.certificate_atol:
        raise InternalConsistencyError(
            f"extracted observables give {certificate:.12g}, "
            f"expected {value:.12g}"
        )

    return ChshResult(
        value=value,
        rotation=rotation,
        A=A,
        Aprime=Aprime,
        B=B,
        Bprime=Bprime,
        lower=lower,
        upper=upper,
        violates=value > 2.0,
    )


def _r_vector(betas: BetaDecomposition, B: np.ndarray) -> np.ndarray:
    return np.array([np.trace(b @ B).real for b in betas.triple])


def extract_observables(
    betas: BetaDecomposition, rotation: RotationSO3
) -> tuple[Observable2, Observable2, ObservableD, ObservableD]:
    """Observables realizing the maximum at the given rotation.

    B and B' are the sign involutions of the first two rotated betas.  The
    qubit axes align with r_B +- r_B', where the r vectors are taken in the
    original Pauli frame so that the certificate holds against the input
    state itself.
    """
    R = rotation.to_matrix()
    rotated = np.tensordot(R, betas.triple, axes=([1], [0]))
    B = sign_involution(rotated[0])
    Bprime = sign_involution(rotated[1])

    r_b = _r_vector(betas, B)
    r_bp = _r_vector(betas, Bprime)
    sum_dir = r_b + r_bp
    diff_dir = r_b - r_bp
    n_sum = np.linalg.norm(sum_dir)
    n_diff = np.linalg.norm(diff_dir)

    if n_sum < TOL.degenerate_axis and n_diff < TOL.degenerate_axis:
        A = Observable2.from_direction([0.0, 0.0, 1.0])
        Aprime = Observable2.from_direction([1.0, 0.0, 0.0])
    elif n_sum < TOL.degenerate_axis:
        A = Aprime = Observable2.from_direction(diff_dir)
    elif n_diff < TOL.degenerate_axis:
        A = Aprime = Observable2.from_direction(sum_dir)
    else:
        A = Observable2.from_direction(sum_dir)
        Aprime = Observable2.from_direction(diff_dir)
    return A, Aprime, ObservableD(B), ObservableD(Bprime)


def _coerce_qubit_observable(obs) -> np.ndarray:
    if isinstance(obs, Observable2):
        return obs.matrix
    M = assert_hermitian(obs)
    if M.shape != (2, 2):
        raise DimensionError(f"qubit observable must be 2x2, got {M.shape}")
    if abs(np.trace(M)) > TOL.involution_atol:
        raise ValidationError("qubit observable must be traceless")
    if np.abs(M @ M - np.eye(2)).max() > TOL.involution_atol:
        raise ValidationError("qubit observable must square to the identity")
    return M


def _coerce_qudit_observable(obs, d: int) -> np.ndarray:
    if isinstance(obs, ObservableD):
        M = obs.matrix
    else:
        M = ObservableD(as_complex_matrix(obs)).matrix
    if M.shape != (d, d):
        raise DimensionError(f"qudit observable must be {d}x{d}, got {M.shape}")
    return M


def bell_value(state: QubitQuditState, A, Aprime, B, Bprime) -> float:
    """Tr(rho [A (x) (B + B') + A' (x) (B - B')])."""
    MA = _coerce_qubit_observable(A)
    MAp = _coerce_qubit_observable(Aprime)
    MB = _coerce_qudit_observable(B, state.d)
    MBp = _coerce_qudit_observable(Bprime, state.d)
    operator = kron(MA, MB + MBp) + kron(MAp, MB - MBp)
    return float(np.trace(state.rho @ operator).real)


def bell_value_from_betas(betas: BetaDecomposition, A, Aprime, B, Bprime) -> float:
    """The same expectation from the decomposition blocks only."""
    MA = _coerce_qubit_observable(A)
    MAp = _coerce_qubit_observable(Aprime)
    MB = _coerce_qudit_observable(B, betas.d)
    MBp = _coerce_qudit_observable(Bprime, betas.d)
    total = 0.0
    for i in range(3):
        t_plus = np.trace(betas.triple[i] @ (MB + MBp)).real
        t_minus = np.trace(betas.triple[i] @ (MB - MBp)).real
        total += np.trace(PAULIS[i] @ MA).real * t_plus
        total += np.trace(PAULIS[i] @ MAp).real * t_minus
    return float(0.5 * total)


def lemma_rotation_identity(
    v: np.ndarray,
    w: np.ndarray,
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[float, float]:
    """Both sides of the planar-rotation identity.

    lhs = (|v + w| + |v - w|)^2; rhs = 4 max_R [ (R v)_1^2 + (R w)_2^2 ]
    with the maximum located by the same grid-plus-simplex search used for
    the main optimization.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    lhs = (np.linalg.norm(v + w) + np.linalg.norm(v - w)) ** 2

    def batch_objective(rows: np.ndarray) -> np.ndarray:
        return (rows[..., 0, :] @ v) ** 2 + (rows[..., 1, :] @ w) ** 2

    _, best = _search(batch_objective, config)
    return float(lhs), float(4.0 * best)
