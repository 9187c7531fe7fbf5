"""Alternating brute-force maximization of the Bell expectation.

Independent cross-check for the rotation-search optimizer: starting from
random qubit observables, alternate the two closed-form conditional
maximizations (Bob's side given Alice's, then Alice's given Bob's) until
the value stops improving.  Each half-step is exact, so the value is
monotonically non-decreasing within a start.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import RngStream
from .linalg import TOL, sign_involution, trace_norm
from .optimizer import Observable2, ObservableD, bell_value_from_betas
from .states import BetaDecomposition, QubitQuditState, decompose

MAX_ROUNDS = 200


@dataclass(frozen=True)
class SeesawReport:
    value: float
    iterations: int
    starts: int
    converged: bool
    A: Observable2
    Aprime: Observable2
    B: ObservableD
    Bprime: ObservableD


def optimal_bs_given_as(
    state: QubitQuditState, A: Observable2, Aprime: Observable2
) -> tuple[ObservableD, ObservableD, float]:
    """Best (B, B') for fixed qubit observables, and the value attained.

    Regrouping the Bell operator as (A+A') (x) B + (A-A') (x) B', each of
    Bob's observables independently maximizes Tr(M B) over involutions,
    which the sign involution of M solves exactly.
    """
    d = state.d
    blocks = state.rho.reshape(2, d, 2, d)
    m_plus = np.einsum("ajck,ca->jk", blocks, A.matrix + Aprime.matrix)
    m_minus = np.einsum("ajck,ca->jk", blocks, A.matrix - Aprime.matrix)
    m_plus = 0.5 * (m_plus + m_plus.conj().T)
    m_minus = 0.5 * (m_minus + m_minus.conj().T)
    B = sign_involution(m_plus)
    Bprime = sign_involution(m_minus)
    value = trace_norm(m_plus) + trace_norm(m_minus)
    return ObservableD(B), ObservableD(Bprime), float(value)


def optimal_as_given_bs(
    betas: BetaDecomposition, B: ObservableD, Bprime: ObservableD
) -> tuple[Observable2, Observable2, float]:
    """Best (A, A') for fixed qudit observables, and the value attained.

    The qubit axes align with r_B + r_B' and r_B - r_B'; the value is the
    sum of those two vector norms.  If both vectors vanish the expectation
    is identically zero and canonical axes are returned.
    """
    r_b = np.array([np.trace(b @ B.matrix).real for b in betas.triple])
    r_bp = np.array([np.trace(b @ Bprime.matrix).real for b in betas.triple])
    sum_dir = r_b + r_bp
    diff_dir = r_b - r_bp
    n_sum = float(np.linalg.norm(sum_dir))
    n_diff = float(np.linalg.norm(diff_dir))

    if n_sum < TOL.degenerate_axis and n_diff < TOL.degenerate_axis:
        return (
            Observable2.from_direction([0.0, 0.0, 1.0]),
            Observable2.from_direction([1.0, 0.0, 0.0]),
            0.0,
        )
    if n_sum < TOL.degenerate_axis:
        A = Aprime = Observable2.from_direction(diff_dir)
    elif n_diff < TOL.degenerate_axis:
        A = Aprime = Observable2.from_direction(sum_dir)
    else:
        A = Observable2.from_direction(sum_dir)
        Aprime = Observable2.from_direction(diff_dir)
    return A, Aprime, n_sum + n_diff


def _random_axis(rng: RngStream) -> np.ndarray:
    while True:
        v = rng.normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm


def seesaw_max(
    state: QubitQuditState, n_starts: int = 16, seed: int = 0
) -> SeesawReport:
    """Multi-start alternating ascent; deterministic for a fixed seed."""
    if n_starts < 1:
        raise ValueError(f"n_starts must be >= 1, got {n_starts}")
    betas = decompose(state)

    best = None
    for start in range(n_starts):
        rng = RngStream(seed, start)
        A = Observable2.from_direction(_random_axis(rng))
        Aprime = Observable2.from_direction(_random_axis(rng))
        value = -np.inf
        converged = False
        rounds = 0
        for rounds in range(1, MAX_ROUNDS + 1):
            B, Bprime, _ = optimal_bs_given_as(state, A, Aprime)
            A, Aprime, new_value = optimal_as_given_bs(betas, B, Bprime)
            if new_value - value < TOL.seesaw_improvement:
                value = max(value, new_value)
                converged = True
                break
            value = new_value
        candidate = (value, rounds, converged, A, Aprime, B, Bprime)
        if best is None or candidate[0] > best[0]:
            best = candidate

    value, rounds, converged, A, Aprime, B, Bprime = best
    return SeesawReport(
        value=float(value),
        iterations=rounds,
        starts=n_starts,
        converged=converged,
        A=A,
        Aprime=Aprime,
        B=B,
        Bprime=Bprime,
    )


def seesaw_value_check(
    state: QubitQuditState, report: SeesawReport
) -> float:
    """Recompute the report's value from its observables."""
    betas = decompose(state)
    return bell_value_from_betas(
        betas, report.A, report.Aprime, report.B, report.Bprime
    )
