"""Shared test helpers: seeded random states and unitaries."""

import numpy as np

from qcorr.bell_geometry import from_probabilities


def random_density_matrix(rng, dim=4):
    """Ginibre-induced random density matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim=4):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2


def random_unitary(rng, dim):
    """Haar-ish random unitary via phase-fixed QR of a Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_bd_state(rng):
    """Uniform random Bell-diagonal state (Dirichlet over the Bell simplex)."""
    return from_probabilities(rng.dirichlet(np.ones(4)))
