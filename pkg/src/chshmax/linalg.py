# Dense linear algebra for small complex Hermitian matrices.
#
# Everything here is a pure function of its inputs; arrays are never
# mutated in place, so values can be shared freely across threads.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ValidationError(ValueError):
    """An input failed a numeric invariant (hermiticity, trace, PSD, ...)."""


class DimensionError(ValidationError):
    """Matrix dimensions are inconsistent with the requested operation."""


@dataclass(frozen=True)
class Tolerances:
    """Central numeric tolerance configuration."""

    hermiticity_atol: float = 1e-12      # per-entry |H[i,j] - conj(H[j,i])|
    diag_imag_atol: float = 1e-12
    eig_residual_rtol: float = 1e-10     # Frobenius, relative to ||H||
    unitarity_atol: float = 1e-10
    involution_atol: float = 1e-10
    trace_atol: float = 1e-10            # density-matrix trace defect
    psd_atol: float = 1e-10              # min eigenvalue >= -psd_atol
    roundtrip_atol: float = 1e-10
    certificate_atol: float = 1e-8       # bell_value vs reported maximum
    bound_slack: float = 1e-8            # lower/upper bound sandwich slack
    horodecki_atol: float = 1e-6
    degenerate_axis: float = 1e-12       # ||r_B +- r_B'|| treated as zero
    entanglement_atol: float = 1e-9      # log-negativity threshold (bits)
    zero_trace_atol: float = 1e-12       # reject-and-resample threshold
    seesaw_improvement: float = 1e-10


TOL = Tolerances()

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])


def as_complex_matrix(M: np.ndarray) -> np.ndarray:
    """Coerce to a finite complex128 2-d array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise ValidationError("matrix contains non-finite entries")
    return A


def assert_hermitian(H: np.ndarray, atol: float = TOL.hermiticity_atol) -> np.ndarray:
    """Validate H = H^dagger entrywise; the error names the worst entry."""
    A = as_complex_matrix(H)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got shape {A.shape}")
    defect = np.abs(A - A.conj().T)
    i, j = np.unravel_index(np.argmax(defect), defect.shape)
    if defect[i, j] > atol:
        raise ValidationError(
            f"matrix is not Hermitian: worst entry ({int(i)}, {int(j)}) has "
            f"|H[i,j] - conj(H[j,i])| = {defect[i, j]:.3e} > {atol:.1e}"
        )
    return A


def hermitian_part(A: np.ndarray) -> np.ndarray:
    """Return (A + A^dagger) / 2."""
    return 0.5 * (A + A.conj().T)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the unitary of column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def eigh(H: np.ndarray, atol: float = TOL.hermiticity_atol) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, values sorted ascending."""
    A = assert_hermitian(H, atol)
    values, vectors = np.linalg.eigh(A)
    return EigenSystem(values=values, vectors=vectors)


def eigvalsh(H: np.ndarray, atol: float = TOL.hermiticity_atol) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(assert_hermitian(H, atol))


def trace_norm(H: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(eigvalsh(H)).sum())


def frobenius_norm_sq(M: np.ndarray) -> float:
    """Tr(M M^dagger), the squared 2-norm; equals sum |entries|^2."""
    A = as_complex_matrix(M)
    return float((A.real**2 + A.imag**2).sum())


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product."""
    return np.kron(as_complex_matrix(A), as_complex_matrix(B))


def _split_blocks(M: np.ndarray, d: int) -> np.ndarray:
    """Reshape a 2d x 2d matrix to block indices [a, j, c, k]."""
    A = as_complex_matrix(M)
    if d < 1:
        raise DimensionError(f"block dimension must be >= 1, got {d}")
    if A.shape != (2 * d, 2 * d):
        raise DimensionError(
            f"expected a {2 * d}x{2 * d} matrix for block dimension d={d}, "
            f"got shape {A.shape}"
        )
    return A.reshape(2, d, 2, d)


def partial_trace_first(M: np.ndarray, d: int) -> np.ndarray:
    """Trace out the leading qubit factor of a 2d x 2d matrix."""
    blocks = _split_blocks(M, d)
    return blocks[0, :, 0, :] + blocks[1, :, 1, :]


def partial_transpose_second(M: np.ndarray, d: int) -> np.ndarray:
    """Transpose the qudit factor: each d x d block is transposed in place."""
    blocks = _split_blocks(M, d)
    return blocks.transpose(0, 3, 2, 1).reshape(2 * d, 2 * d)


def sign_involution(H: np.ndarray) -> np.ndarray:
    """The involutory Hermitian matrix aligned with H.

    Replaces each eigenvalue by its sign, with sign(0) = +1 so the output
    is reproducible; maximizes Tr(H B) over involutions B.
    """
    es = eigh(H)
    signs = np.where(es.values >= 0.0, 1.0, -1.0)
    B = (es.vectors * signs) @ es.vectors.conj().T
    return hermitian_part(B)


# ---------------------------------------------------------------------------
# Batched eigenvalue helpers. These back the rotation search, where trace
# norms of many small matrices are needed at once. Closed forms cover
# d = 1, 2, 3 (with an eigvalsh fallback for ill-conditioned 3x3 cases);
# larger dimensions go straight to LAPACK.
# ---------------------------------------------------------------------------


def _eigvals2_batch(H: np.ndarray) -> np.ndarray:
    a = H[..., 0, 0].real
    b = H[..., 1, 1].real
    m = 0.5 * (a + b)
    s = np.sqrt((0.5 * (a - b)) ** 2 + np.abs(H[..., 0, 1]) ** 2)
    return np.stack([m - s, m + s], axis=-1)


def _charpoly3(H: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients of det(x I - H) = x^3 - c2 x^2 + c1 x - c0."""
    a00 = H[..., 0, 0].real
    a11 = H[..., 1, 1].real
    a22 = H[..., 2, 2].real
    a01 = H[..., 0, 1]
    a02 = H[..., 0, 2]
    a12 = H[..., 1, 2]
    c2 = a00 + a11 + a22
    c1 = (
        a00 * a11 - np.abs(a01) ** 2
        + a00 * a22 - np.abs(a02) ** 2
        + a11 * a22 - np.abs(a12) ** 2
    )
    c0 = (
        a00 * (a11 * a22 - np.abs(a12) ** 2)
        - (a01 * (a01.conj() * a22 - a12 * a02.conj())).real
        + (a02 * (a01.conj() * a12.conj() - a11 * a02.conj())).real
    )
    return c2, c1, c0


def _eigvals3_batch(H: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of stacked 3x3 Hermitian matrices.

    Trigonometric closed form polished by two Newton steps on the
    characteristic polynomial; the middle eigenvalue is recovered from the
    trace. Matrices whose spectrum is too clustered for the polynomial
    route are recomputed with LAPACK.
    """
    a00 = H[..., 0, 0].real
    a11 = H[..., 1, 1].real
    a22 = H[..., 2, 2].real
    a01 = H[..., 0, 1]
    a02 = H[..., 0, 2]
    a12 = H[..., 1, 2]
    q = (a00 + a11 + a22) / 3.0
    b00 = a00 - q
    b11 = a11 - q
    b22 = a22 - q
    off = np.abs(a01) ** 2 + np.abs(a02) ** 2 + np.abs(a12) ** 2
    p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off
    p = np.sqrt(p2 / 6.0)
    safe_p = np.where(p > 0.0, p, 1.0)
    det_shifted = (
        b00 * (b11 * b22 - np.abs(a12) ** 2)
        - (a01 * (a01.conj() * b22 - a12 * a02.conj())).real
        + (a02 * (a01.conj() * a12.conj() - b11 * a02.conj())).real
    )
    r = np.clip(0.5 * det_shifted / safe_p**3, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    hi = q + 2.0 * p * np.cos(phi)
    lo = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam = np.stack([lo, 3.0 * q - hi - lo, hi], axis=-1)

    c2, c1, c0 = _charpoly3(H)
    scale2 = np.maximum(p2, 1e-300)
    for which in (0, 2):  # polish the extremes, then rebuild the middle
        x = lam[..., which]
        for _ in range(2):
            f = ((x - c2) * x + c1) * x - c0
            fp = (3.0 * x - 2.0 * c2) * x + c1
            ok = np.abs(fp) > 1e-3 * scale2
            x = x - np.where(ok, f / np.where(ok, fp, 1.0), 0.0)
        lam[..., which] = x
    lam[..., 1] = c2 - lam[..., 0] - lam[..., 2]
    lam = np.sort(lam, axis=-1)

    # Polynomial root-finding resolves clustered spectra only to ~sqrt(eps);
    # hand those rare matrices to LAPACK.
    gap = np.minimum(lam[..., 1] - lam[..., 0], lam[..., 2] - lam[..., 1])
    width = np.maximum(lam[..., 2] - lam[..., 0], np.sqrt(scale2))
    bad = gap < 1e-6 * width
    if np.any(bad):
        lam[bad] = np.linalg.eigvalsh(H[bad])
    return lam


def eigvalsh_batch(H: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a (..., n, n) stack of Hermitian matrices."""
    n = H.shape[-1]
    if n == 1:
        return H[..., 0, 0].real[..., None].copy()
    if n == 2:
        return _eigvals2_batch(H)
    if n == 3:
        return _eigvals3_batch(H)
    return np.linalg.eigvalsh(H)


def trace_norm_batch(H: np.ndarray) -> np.ndarray:
    """Trace norms of a (..., n, n) stack of Hermitian matrices."""
    return np.abs(eigvalsh_batch(H)).sum(axis=-1)
