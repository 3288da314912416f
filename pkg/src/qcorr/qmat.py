"""Dense complex linear algebra for one- and two-qubit operators.

Everything works on plain numpy arrays: density matrices are 4x4 complex
ndarrays for two qubits and 2x2 for single-qubit marginals. Entropies are
in bits (base-2 logarithms) throughout.
"""

import numpy as np

from .errors import (
    EntropyDomainError,
    InvalidStateError,
    NegativeEigenvalueError,
    NotHermitianError,
)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Bell basis kets, ordered (|phi+>, |phi->, |psi+>, |psi->).
KET_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
KET_PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
KET_PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
KET_PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
BELL_KETS = (KET_PHI_PLUS, KET_PHI_MINUS, KET_PSI_PLUS, KET_PSI_MINUS)


def projector(ket):
    """Rank-1 projector |k><k| from a (normalized) state vector."""
    k = np.asarray(ket, dtype=complex)
    k = k / np.linalg.norm(k)
    return np.outer(k, k.conj())


BELL_PROJECTORS = tuple(projector(k) for k in BELL_KETS)


def kron(a, b):
    """Tensor (Kronecker) product of two operators."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_defect(m):
    """Max absolute deviation of m from its conjugate transpose."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigen(m, tol=1e-8):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with real eigenvalues sorted in
    decreasing order and the matching orthonormal eigenvectors as columns.

    Raises NotHermitianError when m deviates from m^dagger by more than tol.
    """
    m = np.asarray(m, dtype=complex)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(
            f"matrix deviates from Hermitian symmetry by {defect:.3e} (tolerance {tol:.1e})"
        )
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def matrix_sqrt_psd(m, tol=1e-8, neg_tol=1e-6):
    """Hermitian square root of a positive semidefinite matrix.

    Slightly negative eigenvalues (down to -neg_tol) are clipped to zero;
    anything more negative raises NegativeEigenvalueError.
    """
    vals, vecs = hermitian_eigen(m, tol=tol)
    if vals[-1] < -neg_tol:
        raise NegativeEigenvalueError(
            f"matrix has eigenvalue {vals[-1]:.3e} < -{neg_tol:.1e}, not positive semidefinite"
        )
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def partial_trace(rho, keep):
    """Reduced 2x2 state of one qubit of a 4x4 two-qubit density matrix.

    keep selects the retained subsystem: "A" (first qubit) or "B" (second).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"partial_trace expects a 4x4 matrix, got shape {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("abcb->ac", r)
    if keep == "B":
        return np.einsum("abad->bd", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho):
    """Von Neumann entropy of a density matrix, in bits."""
    vals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    vals = np.clip(vals.real, 0.0, 1.0)
    nz = vals[vals > 0]
    return float(-(nz * np.log2(nz)).sum())


def shannon_entropy(p):
    """Shannon entropy of a probability vector, in bits (0 log 0 taken as 0)."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def binary_entropy(x, tol=1e-12):
    """H(x) = -x log2(x) - (1-x) log2(1-x); arguments just outside [0,1] are clamped."""
    x = float(x)
    if x < -tol or x > 1 + tol:
        raise EntropyDomainError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def check_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-10, eig_tol=1e-9):
    """Validate density-matrix invariants, returning the matrix on success.

    Raises InvalidStateError with a message naming the violated invariant:
    finiteness, hermiticity (within herm_tol), unit trace (within trace_tol)
    or positive semidefiniteness (eigenvalues >= -eig_tol).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix contains NaN or Inf entries")
    defect = hermiticity_defect(rho)
    if defect > herm_tol:
        raise InvalidStateError(
            f"not Hermitian: max |rho - rho^dagger| = {defect:.3e} exceeds {herm_tol:.1e}"
        )
    tr = complex(np.trace(rho))
    if abs(tr - 1) > trace_tol:
        raise InvalidStateError(f"trace is {tr:.12g}, not 1 within {trace_tol:.1e}")
    lam_min = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0])
    if lam_min < -eig_tol:
        raise InvalidStateError(
            f"not positive semidefinite: smallest eigenvalue {lam_min:.3e} < -{eig_tol:.1e}"
        )
    return rho
