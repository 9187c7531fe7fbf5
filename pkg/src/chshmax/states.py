"""Validated qubit-qudit density matrices and their Pauli-block decomposition.

A 2d x 2d density matrix rho is carried together with its qudit dimension d.
The index convention is |a> (x) |b>  ->  a*d + b with a in {0, 1}.  Every
state can be expanded as

    rho = (1/2) [ I (x) beta0 + sum_i sigma_i (x) beta_i ]

with four d x d Hermitian blocks; ``decompose`` and ``reconstruct`` convert
between the two representations and are exact inverses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PAULIS,
    TOL,
    ValidationError,
    as_complex_matrix,
    assert_hermitian,
    frobenius_norm_sq,
    hermitian_part,
    kron,
)


@dataclass(frozen=True)
class StateDiagnostics:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    purity: float

    def describe(self) -> str:
        return (
            f"hermiticity defect {self.hermiticity_defect:.3e}, "
            f"trace defect {self.trace_defect:.3e}, "
            f"min eigenvalue {self.min_eigenvalue:.3e}, "
            f"purity {self.purity:.6f}"
        )


class StateValidationError(ValidationError):
    """A candidate density matrix failed validation; carries diagnostics."""

    def __init__(self, message: str, diagnostics: StateDiagnostics | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics


def diagnose(rho: np.ndarray) -> StateDiagnostics:
    """Numeric health report for a candidate density matrix."""
    A = as_complex_matrix(rho)
    herm = float(np.abs(A - A.conj().T).max())
    trace = complex(np.trace(A))
    min_eig = float(np.linalg.eigvalsh(hermitian_part(A)).min())
    purity = frobenius_norm_sq(A)
    return StateDiagnostics(
        hermiticity_defect=herm,
        trace_defect=abs(trace - 1.0),
        min_eigenvalue=min_eig,
        purity=purity,
    )


@dataclass(frozen=True)
class QubitQuditState:
    """A validated 2d x 2d density matrix on qubit (x) qudit."""

    d: int
    rho: np.ndarray

    def __post_init__(self):
        if self.d < 2:
            raise StateValidationError(f"qudit dimension must be >= 2, got {self.d}")
        A = as_complex_matrix(self.rho)
        if A.shape != (2 * self.d, 2 * self.d):
            raise StateValidationError(
                f"expected a {2 * self.d}x{2 * self.d} matrix for d={self.d}, "
                f"got shape {A.shape}"
            )
        diag = diagnose(A)
        if diag.hermiticity_defect > TOL.hermiticity_atol:
            raise StateValidationError(
                f"density matrix is not Hermitian "
                f"(defect {diag.hermiticity_defect:.3e}); {diag.describe()}",
                diag,
            )
        if diag.trace_defect > TOL.trace_atol:
            raise StateValidationError(
                f"density matrix has trace defect {diag.trace_defect:.3e}: "
                f"trace = {complex(np.trace(A)).real:.6g} "
                f"(expected 1 within {TOL.trace_atol:.1e}); {diag.describe()}",
                diag,
            )
        if diag.min_eigenvalue < -TOL.psd_atol:
            raise StateValidationError(
                f"density matrix is not positive semidefinite: "
                f"min eigenvalue {diag.min_eigenvalue:.3e} < -{TOL.psd_atol:.1e}; "
                f"{diag.describe()}",
                diag,
            )
        A = A.copy()
        A.setflags(write=False)
        object.__setattr__(self, "rho", A)

    @property
    def dim(self) -> int:
        return 2 * self.d


@dataclass(frozen=True)
class BetaDecomposition:
    """The four d x d Hermitian blocks of the qubit-side Pauli expansion."""

    d: int
    beta0: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    beta3: np.ndarray

    def __post_init__(self):
        for name in ("beta0", "beta1", "beta2", "beta3"):
            M = assert_hermitian(getattr(self, name))
            if M.shape != (self.d, self.d):
                raise ValidationError(
                    f"{name} must be {self.d}x{self.d}, got shape {M.shape}"
                )
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)
        tr0 = complex(np.trace(self.beta0))
        if abs(tr0 - 1.0) > TOL.trace_atol:
            raise ValidationError(
                f"Tr(beta0) = {tr0.real:.6g} must equal 1 within {TOL.trace_atol:.1e}"
            )

    @property
    def triple(self) -> np.ndarray:
        """The (3, d, d) stack (beta1, beta2, beta3)."""
        return np.stack([self.beta1, self.beta2, self.beta3])


def decompose(state: QubitQuditState) -> BetaDecomposition:
    """Extract (beta0, beta1, beta2, beta3) from a state.

    beta0 is Bob's reduced density matrix; beta_i is the partial trace of
    rho * (sigma_i (x) I_d) over the qubit.
    """
    d = state.d
    blocks = state.rho.reshape(2, d, 2, d)
    beta0 = blocks[0, :, 0, :] + blocks[1, :, 1, :]
    triple = np.einsum("ajck,ica->ijk", blocks, PAULIS)
    triple = 0.5 * (triple + triple.conj().transpose(0, 2, 1))
    return BetaDecomposition(
        d=d, beta0=hermitian_part(beta0),
        beta1=triple[0], beta2=triple[1], beta3=triple[2],
    )


def reconstruct(betas: BetaDecomposition) -> QubitQuditState:
    """Rebuild the density matrix (1/2)[I (x) beta0 + sum sigma_i (x) beta_i]."""
    rho = kron(np.eye(2), betas.beta0)
    for i in range(3):
        rho = rho + kron(PAULIS[i], betas.triple[i])
    return QubitQuditState(d=betas.d, rho=hermitian_part(0.5 * rho))


def purity(state: QubitQuditState) -> float:
    """Tr(rho^2), in [1/(2d), 1]."""
    return frobenius_norm_sq(state.rho)


def purity_violation_bound(state: QubitQuditState) -> tuple[float, bool]:
    """Necessary purity level for any CHSH violation.

    Returns (threshold, satisfied) with threshold = (Tr(beta0^2) + 1/d) / 2;
    a state with purity <= threshold certifiably cannot violate CHSH.
    """
    betas = decompose(state)
    threshold = 0.5 * (frobenius_norm_sq(betas.beta0) + 1.0 / state.d)
    return threshold, purity(state) > threshold


def maximally_mixed(d: int) -> QubitQuditState:
    return QubitQuditState(d=d, rho=np.eye(2 * d, dtype=complex) / (2 * d))


def bell_state() -> QubitQuditState:
    """The maximally entangled two-qubit state (|00> + |11>)/sqrt(2)."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / np.sqrt(2.0)
    return QubitQuditState(d=2, rho=np.outer(psi, psi.conj()))


def werner_state(eta: float) -> QubitQuditState:
    """The one-parameter family (1/4)(I (x) I - eta * sum sigma_i (x) sigma_i)."""
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho = rho - eta * kron(PAULIS[i], PAULIS[i])
    return QubitQuditState(d=2, rho=0.25 * rho)
