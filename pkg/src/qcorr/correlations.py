"""Correlation measures for arbitrary two-qubit density matrices.

Concurrence and the entanglement of formation follow the Hill-Wootters
spin-flip construction. Quantum discord is computed by explicit
minimization of the measured conditional entropy over rank-1 projective
measurements on one side: a deterministic coarse grid over the measurement
Bloch sphere followed by Nelder-Mead refinement. Bell-diagonal input is
recognised and routed to the closed forms in :mod:`qcorr.bell_geometry`.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from . import bell_geometry, qmat
from .bell_geometry import BellDiagonalState, DiscordBranch, RegionLabel


class ReportSource(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement direction on the Bloch sphere.

    The projectors are |n><n| and 1 - |n><n| with
    |n> = (cos(theta/2), e^{i phi} sin(theta/2)).
    """

    theta: float
    phi: float

    def kets(self):
        """The two orthogonal measurement kets, shape (2, 2)."""
        ct, st = math.cos(self.theta / 2), math.sin(self.theta / 2)
        ph = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[ct, ph * st], [st, -ph * ct]], dtype=complex)

    def projectors(self):
        kets = self.kets()
        return tuple(np.outer(k, k.conj()) for k in kets)

    def bloch_axis(self):
        st, ct = math.sin(self.theta), math.cos(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), ct])


@dataclass(frozen=True)
class OptimizerConfig:
    grid_theta: int = 64
    grid_phi: int = 128
    refine_iterations: int = 200
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.grid_theta < 16 or self.grid_phi < 32:
            raise ValueError("optimizer grid must be at least 16 x 32")
        if self.refine_iterations < 1:
            raise ValueError("refine_iterations must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("optimizer tolerance must be positive")


@dataclass(frozen=True)
class NumericDiscord:
    """Result of the discord minimization: value, argmin basis, convergence flag."""

    value: float
    basis: MeasurementBasis
    converged: bool


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation measures of one state, plus geometry when available."""

    concurrence: float
    eof: float
    discord: float
    mutual_information: float
    classical_correlation: float
    source: ReportSource
    branch: DiscordBranch | None = None
    discord_branch_values: tuple | None = None
    region: RegionLabel | None = None


def concurrence(rho):
    """Hill-Wootters concurrence of a two-qubit density matrix.

    Uses the Hermitian reduction: with s = sqrt(rho), the eigenvalues of
    rho (sy x sy) rho* (sy x sy) equal those of W W^dagger for
    W = s (sy x sy) conj(s), so the needed square roots sqrt(lambda_i) are
    the singular values of W. This avoids taking sqrt of eigenvalues that
    are zero up to solver noise.
    """
    rho = np.asarray(rho, dtype=complex)
    s = qmat.matrix_sqrt_psd(rho)
    yy = qmat.kron(qmat.PAULI_Y, qmat.PAULI_Y)
    lam = np.linalg.svd(s @ yy @ s.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def entanglement_of_formation(rho):
    """Entanglement of formation H((1 + sqrt(1 - C^2)) / 2)."""
    con = concurrence(rho)
    return qmat.binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - con * con))) / 2.0)


def mutual_information(rho):
    """Quantum mutual information S(A) + S(B) - S(AB), in bits."""
    rho = np.asarray(rho, dtype=complex)
    sa = qmat.von_neumann_entropy(qmat.partial_trace(rho, "A"))
    sb = qmat.von_neumann_entropy(qmat.partial_trace(rho, "B"))
    return sa + sb - qmat.von_neumann_entropy(rho)


def _kets_batch(thetas, phis):
    """Measurement kets for a batch of Bloch directions, shape (n, 2, 2)."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    ct, st = np.cos(thetas / 2), np.sin(thetas / 2)
    ph = np.exp(1j * phis)
    kets = np.empty((thetas.size, 2, 2), dtype=complex)
    kets[:, 0, 0] = ct
    kets[:, 0, 1] = ph * st
    kets[:, 1, 0] = st
    kets[:, 1, 1] = -ph * ct
    return kets


def _conditional_entropy_batch(rho4, kets, side):
    """Average conditional entropy after measuring `side`, for each direction.

    rho4 is the density matrix reshaped to (2, 2, 2, 2); kets has shape
    (n, 2, 2) holding the two orthogonal measurement kets per direction.
    Outcomes with probability below 1e-12 contribute nothing.
    """
    if side == "B":
        cond = np.einsum("nkb,abcd,nkd->nkac", kets.conj(), rho4, kets)
    elif side == "A":
        cond = np.einsum("nka,abcd,nkc->nkbd", kets.conj(), rho4, kets)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    q = np.real(cond[..., 0, 0] + cond[..., 1, 1])  # (n, 2) outcome probabilities
    det = np.real(
        cond[..., 0, 0] * cond[..., 1, 1] - cond[..., 0, 1] * cond[..., 1, 0]
    )
    disc = np.sqrt(np.clip(q * q - 4.0 * det, 0.0, None))
    total = np.zeros(kets.shape[0])
    safe = q > 1e-12
    qs = np.where(safe, q, 1.0)
    for lam in ((q + disc) / 2.0, (q - disc) / 2.0):
        x = np.clip(lam / qs, 0.0, 1.0)
        term = np.where(x > 0.0, -x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)
        total += np.where(safe, q * term, 0.0).sum(axis=1)
    return total


def conditional_entropy_after_measurement(rho, basis, side="B"):
    """sum_k q_k S(rho_k) for the two outcomes of a projective measurement.

    The measurement acts on `side`; rho_k is the post-measurement state of
    the other qubit and q_k the outcome probability.
    """
    rho4 = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    kets = basis.kets()[np.newaxis, :, :]
    return float(_conditional_entropy_batch(rho4, kets, side)[0])


def _canonical_angles(theta, phi):
    theta = theta % (2.0 * math.pi)
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
        phi += math.pi
    return theta, phi % (2.0 * math.pi)


def discord_numeric(rho, side="B", config=None):
    """Quantum discord by minimization over projective measurements on `side`.

    D = S(rho_side) - S(rho) + min_basis sum_k q_k S(rho_k), minimized with
    a grid_theta x grid_phi scan of the measurement Bloch sphere followed
    by Nelder-Mead refinement from the best cell. When refinement hits the
    iteration cap a RuntimeWarning is issued and the best value found is
    returned with converged=False.
    """
    cfg = config or OptimizerConfig()
    rho = np.asarray(rho, dtype=complex)
    rho4 = rho.reshape(2, 2, 2, 2)

    thetas = np.linspace(0.0, math.pi, cfg.grid_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, cfg.grid_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    grid_vals = _conditional_entropy_batch(
        rho4, _kets_batch(tt.ravel(), pp.ravel()), side
    )
    best = int(grid_vals.argmin())
    x0 = np.array([tt.ravel()[best], pp.ravel()[best]])

    def objective(x):
        return _conditional_entropy_batch(rho4, _kets_batch(x[:1], x[1:]), side)[0]

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "fatol": cfg.tolerance,
            "xatol": 1e-7,
            "maxiter": cfg.refine_iterations,
            "disp": False,
        },
    )
    converged = bool(res.success)
    if not converged:
        warnings.warn(
            "discord refinement stopped at the iteration cap; returning best value found",
            RuntimeWarning,
        )
    if res.fun <= grid_vals[best]:
        min_cond, (theta, phi) = float(res.fun), res.x
    else:
        min_cond, (theta, phi) = float(grid_vals[best]), x0

    marginal = qmat.partial_trace(rho, keep=side)
    value = qmat.von_neumann_entropy(marginal) - qmat.von_neumann_entropy(rho) + min_cond
    theta, phi = _canonical_angles(float(theta), float(phi))
    return NumericDiscord(
        value=max(0.0, float(value)),
        basis=MeasurementBasis(theta, phi),
        converged=converged,
    )


def fidelity(rho, sigma):
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Evaluated as the squared nuclear norm of sqrt(rho) sqrt(sigma), which
    equals the trace above but keeps full accuracy when either state is
    nearly pure.
    """
    s = qmat.matrix_sqrt_psd(np.asarray(rho, dtype=complex))
    t = qmat.matrix_sqrt_psd(np.asarray(sigma, dtype=complex))
    return float(np.linalg.svd(s @ t, compute_uv=False).sum() ** 2)


def bell_diagonal_coefficients(rho, tol=1e-9):
    """Bloch coefficients (c1,c2,c3) if rho is Bell-diagonal within tol, else None.

    The threshold is strict on purpose: reconstructed matrices are close to
    but not exactly of this form and must not silently take the fast path.
    """
    rho = np.asarray(rho, dtype=complex)
    c = np.array(
        [np.trace(rho @ qmat.kron(s, s)).real for s in qmat.PAULIS]
    )
    rebuilt = np.eye(4, dtype=complex)
    for ci, sigma in zip(c, qmat.PAULIS):
        rebuilt += ci * qmat.kron(sigma, sigma)
    rebuilt /= 4.0
    if float(np.max(np.abs(rho - rebuilt))) <= tol:
        return c
    return None


def report_bell_diagonal(state, region_tol=1e-9):
    """Analytic CorrelationReport for a Bell-diagonal state."""
    d = bell_geometry.discord_bd(state)
    info = bell_geometry.mutual_information_bd(state)
    return CorrelationReport(
        concurrence=bell_geometry.concurrence_bd(state),
        eof=bell_geometry.eof_bd(state),
        discord=d.value,
        mutual_information=info,
        classical_correlation=info - d.value,
        source=ReportSource.ANALYTIC,
        branch=d.branch,
        discord_branch_values=d.branch_values,
        region=bell_geometry.classify_region(state, region_tol),
    )


def full_report(rho, config=None, region_tol=1e-9, bd_tol=1e-9, force_numeric=False):
    """CorrelationReport for an arbitrary two-qubit density matrix.

    Bell-diagonal input (within bd_tol) gets the analytic closed forms;
    anything else, or any input when force_numeric is set, goes through the
    general path with the discord minimized over measurements on either
    side. Geometry labels are attached whenever the state is Bell-diagonal.
    """
    rho = np.asarray(rho, dtype=complex)
    c = bell_diagonal_coefficients(rho, tol=bd_tol)
    if c is not None and not force_numeric:
        state = BellDiagonalState.from_c(c, project_tol=1e-9)
        return report_bell_diagonal(state, region_tol=region_tol)

    con = concurrence(rho)
    eof = qmat.binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - con * con))) / 2.0)
    info = mutual_information(rho)
    d = min(
        discord_numeric(rho, "A", config).value,
        discord_numeric(rho, "B", config).value,
    )
    region = None
    if c is not None:
        state = BellDiagonalState.from_c(c, project_tol=1e-9)
        region = bell_geometry.classify_region(state, region_tol)
    return CorrelationReport(
        concurrence=con,
        eof=eof,
        discord=d,
        mutual_information=info,
        classical_correlation=info - d,
        source=ReportSource.NUMERIC,
        region=region,
    )
