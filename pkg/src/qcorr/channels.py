"""State preparation and noise models for the Bell-diagonal family.

Statistical mixing reproduces the acquisition-time method of preparation:
the target state is a convex sum of the four Bell projectors with weights
given by the normalized acquisition-time fractions. White-noise admixture
and per-axis Bloch scaling model the decoherence acting on these states;
both map the Bell-diagonal family onto itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .bell_geometry import BellDiagonalState
from .errors import InvalidProbabilitiesError


@dataclass(frozen=True)
class MixtureSpec:
    """Normalized weights over the Bell basis plus optional pump-phase jitter (radians)."""

    weights: tuple
    phase_jitter: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.shape != (4,):
            raise InvalidProbabilitiesError(f"expected 4 weights, got {w.shape}")
        if w.min() < -1e-12:
            raise InvalidProbabilitiesError(f"negative weight {w.min():.3e}")
        total = w.sum()
        if total <= 0:
            raise InvalidProbabilitiesError("weights sum to zero")
        if self.phase_jitter < 0:
            raise ValueError("phase_jitter must be nonnegative")
        w = np.clip(w, 0.0, None)
        object.__setattr__(self, "weights", tuple(w / w.sum()))


@dataclass(frozen=True)
class NoiseSpec:
    """White-noise admixture fraction nu in [0, 1]."""

    nu: float

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")


def mix_statistical(spec):
    """Convex mixture of the four Bell projectors.

    With phase_jitter > 0 the |phi+-> projectors are replaced by their
    Gaussian phase averages, which damps their coherences by
    exp(-jitter^2 / 2); the result stays Bell-diagonal.
    """
    projectors = [p.copy() for p in qmat.BELL_PROJECTORS]
    if spec.phase_jitter > 0.0:
        damp = math.exp(-spec.phase_jitter**2 / 2.0)
        for k in (0, 1):
            projectors[k][0, 3] *= damp
            projectors[k][3, 0] *= damp
    rho = np.zeros((4, 4), dtype=complex)
    for w, proj in zip(spec.weights, projectors):
        rho += w * proj
    return rho


def apply_white_noise(rho, spec):
    """Mix a state with the maximally mixed one: (1 - nu) rho + nu I/4."""
    rho = np.asarray(rho, dtype=complex)
    return (1.0 - spec.nu) * rho + spec.nu * np.eye(4, dtype=complex) / 4.0


def apply_white_noise_bd(state, spec):
    """White noise in Bloch coordinates: every ci contracts by (1 - nu)."""
    c = (1.0 - spec.nu) * state.c
    return BellDiagonalState(c[0], c[1], c[2])


def bell_diagonal_scaling(state, factors):
    """Componentwise contraction ci -> fi * ci of the Bloch coefficients.

    factors must lie in [-1, 1]. A phase-flip channel of strength gamma on
    both qubits is factors (q^2, q^2, 1) with q = 1 - 2 gamma, contracting
    the two axes transverse to the dephasing axis. Raises
    OutOfTetrahedronError when the scaled point is not a state.
    """
    f = np.asarray(factors, dtype=float).ravel()
    if f.shape != (3,):
        raise ValueError(f"expected 3 scaling factors, got {f.shape}")
    if np.abs(f).max() > 1.0 + 1e-12:
        raise ValueError(f"scaling factors must lie in [-1, 1], got {tuple(f)}")
    c = f * state.c
    return BellDiagonalState(c[0], c[1], c[2])
