"""Bell-diagonal two-qubit states in Bloch coordinates and their geometry.

A Bell-diagonal state is fixed by three correlation coefficients
c = (c1, c2, c3), equivalently by the probabilities (p1..p4) of the four
Bell projectors. Valid c fill the tetrahedron with vertices (1,-1,1),
(-1,1,1), (1,1,-1) and (-1,-1,-1). The separable states form the inscribed
octahedron (all p_i <= 1/2, i.e. |c1|+|c2|+|c3| <= 1); the four corner
tetrahedra tau_i (p_i > 1/2) carry entanglement. Quantum discord splits
the tetrahedron into three branch domains by the planes |ci| = |cj|,
selecting the branch of the largest |ci|.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import qmat
from .errors import InvalidProbabilitiesError, OutOfTetrahedronError

# p = (1 + SIGNS @ c) / 4, with rows ordered like the Bell kets
# (phi+, phi-, psi+, psi-).
_SIGNS = np.array(
    [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ]
)

TETRAHEDRON_VERTICES = (
    (1.0, -1.0, 1.0),
    (-1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0),
    (-1.0, -1.0, -1.0),
)

BRANCH_PLANES = ("|c1|=|c2|", "|c2|=|c3|", "|c3|=|c1|")
_PLANE_PAIRS = ((0, 1, "|c1|=|c2|"), (1, 2, "|c2|=|c3|"), (2, 0, "|c3|=|c1|"))


class EntanglementRegion(str, Enum):
    SEPARABLE_OCTAHEDRON = "separable_octahedron"
    TAU1 = "tau1"
    TAU2 = "tau2"
    TAU3 = "tau3"
    TAU4 = "tau4"
    OCTAHEDRON_BOUNDARY = "octahedron_boundary"


class DiscordBranch(str, Enum):
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"

    @property
    def index(self):
        return int(self.value[1]) - 1


@dataclass(frozen=True)
class RegionLabel:
    """Geometric classification of a Bell-diagonal state."""

    entanglement_region: EntanglementRegion
    discord_branch: DiscordBranch
    on_branch_boundary: frozenset


@dataclass(frozen=True)
class DiscordResultBD:
    """Closed-form discord: minimum value, active branch and all branch values."""

    value: float
    branch: DiscordBranch
    branch_values: tuple


def probabilities_from_c(c):
    """Bell probabilities (p1..p4) from Bloch coefficients (c1,c2,c3)."""
    return (1.0 + _SIGNS @ np.asarray(c, dtype=float)) / 4.0


def c_from_probabilities(p):
    """Bloch coefficients (c1,c2,c3) from Bell probabilities (p1..p4)."""
    return _SIGNS.T @ np.asarray(p, dtype=float)


@dataclass(frozen=True)
class BellDiagonalState:
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        c = (float(self.c1), float(self.c2), float(self.c3))
        if not all(math.isfinite(x) for x in c):
            raise OutOfTetrahedronError(f"non-finite Bloch coefficients {c}")
        p = probabilities_from_c(c)
        if p.min() < -1e-12:
            i = int(p.argmin())
            raise OutOfTetrahedronError(
                f"c = {c} lies outside the tetrahedron: p{i + 1} = {p[i]:.3e} < 0"
            )
        object.__setattr__(self, "c1", c[0])
        object.__setattr__(self, "c2", c[1])
        object.__setattr__(self, "c3", c[2])

    @property
    def c(self):
        return np.array([self.c1, self.c2, self.c3])

    @classmethod
    def from_c(cls, c, project_tol=0.0):
        """Build a state from Bloch coefficients.

        With project_tol > 0, points that miss the tetrahedron by at most
        project_tol (as reconstruction noise does) are first projected to
        the nearest valid point.
        """
        c = np.asarray(c, dtype=float)
        if project_tol > 0.0:
            p = probabilities_from_c(c)
            if -project_tol <= p.min() < 0.0:
                c = c_from_probabilities(_project_simplex(p))
        return cls(c[0], c[1], c[2])


def _project_simplex(p):
    """Euclidean projection of a real 4-vector onto the probability simplex."""
    u = np.sort(np.asarray(p, dtype=float))[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, u.size + 1)
    k = idx[u - css / idx > 0][-1]
    theta = css[k - 1] / k
    return np.clip(p - theta, 0.0, None)


def from_probabilities(p):
    """State from Bell probabilities; negatives beyond 1e-12 or a bad sum raise."""
    p = np.asarray(p, dtype=float).ravel()
    if p.shape != (4,):
        raise InvalidProbabilitiesError(f"expected 4 probabilities, got {p.shape}")
    if p.min() < -1e-12:
        i = int(p.argmin())
        raise InvalidProbabilitiesError(f"negative probability p{i + 1} = {p[i]:.3e}")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise InvalidProbabilitiesError(f"probabilities sum to {total:.12g}, not 1")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    c = c_from_probabilities(p)
    return BellDiagonalState(c[0], c[1], c[2])


def to_probabilities(state):
    return probabilities_from_c(state.c)


def to_density_matrix(state):
    """4x4 density matrix (1 + sum_i ci sigma_i x sigma_i) / 4."""
    rho = np.eye(4, dtype=complex)
    for ci, sigma in zip(state.c, qmat.PAULIS):
        rho += ci * qmat.kron(sigma, sigma)
    return rho / 4.0


def concurrence_bd(state):
    """Concurrence max(0, 2 max_i p_i - 1), the closed form for Bell-diagonal states."""
    p = to_probabilities(state)
    return float(max(0.0, 2.0 * p.max() - 1.0))


def eof_bd(state):
    """Entanglement of formation H((1 + sqrt(1 - C^2)) / 2) from the concurrence."""
    con = concurrence_bd(state)
    return qmat.binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - con * con))) / 2.0)


def entropy_bd(state):
    """Von Neumann entropy, directly from the Bell spectrum."""
    return qmat.shannon_entropy(to_probabilities(state))


def mutual_information_bd(state):
    """Quantum mutual information; both marginals are maximally mixed, so I = 2 - S."""
    return 2.0 - entropy_bd(state)


def dominant_branch_index(c):
    """Index of the active discord branch: largest |ci|, lowest index on ties.

    The branch values decrease monotonically in |ci|, so this is exactly
    the argmin branch of the closed-form discord.
    """
    absc = np.abs(np.asarray(c, dtype=float))
    return max(range(3), key=lambda i: (absc[i], -i))


def discord_bd(state):
    """Quantum discord of a Bell-diagonal state (Luo's closed form).

    Each branch value is
        D_i = sum_k p_k log2(4 p_k)
              - [(1 - ci) log2(1 - ci) + (1 + ci) log2(1 + ci)] / 2
    and the discord is the branch minimum. Ties are resolved toward the
    branch with the largest |ci|, then the lowest index.
    """
    p = to_probabilities(state)
    nz = p[p > 0]
    base = float((nz * np.log2(4.0 * nz)).sum())
    values = []
    for ci in state.c:
        bracket = 0.0
        if 1.0 - ci > 0.0:
            bracket += (1.0 - ci) * math.log2(1.0 - ci)
        if 1.0 + ci > 0.0:
            bracket += (1.0 + ci) * math.log2(1.0 + ci)
        values.append(base - bracket / 2.0)
    branch_idx = dominant_branch_index(state.c)
    value = min(max(min(values), 0.0), 1.0)
    return DiscordResultBD(
        value=value,
        branch=DiscordBranch(f"D{branch_idx + 1}"),
        branch_values=tuple(values),
    )


def classical_correlation_bd(state):
    """Classical correlation J = I - D."""
    return mutual_information_bd(state) - discord_bd(state).value


def classify_region(state, tol=1e-9):
    """Locate a state in the tetrahedron geometry.

    The entanglement label is tau_i when p_i > 1/2 + tol, the octahedron
    boundary when the state sits within tol of the octahedron surface
    (either max p_i = 1/2 or, on the tetrahedron faces, min p_i = 0), and
    the separable octahedron otherwise. The discord branch is the largest
    |ci| (lowest index on ties); every branch plane |ci| = |cj| passing
    through the point at the shared maximum is reported as active.
    """
    p = to_probabilities(state)
    pmax = float(p.max())
    if pmax > 0.5 + tol:
        region = EntanglementRegion(f"tau{int(p.argmax()) + 1}")
    elif pmax >= 0.5 - tol or p.min() <= tol:
        region = EntanglementRegion.OCTAHEDRON_BOUNDARY
    else:
        region = EntanglementRegion.SEPARABLE_OCTAHEDRON

    absc = np.abs(state.c)
    top = [i for i in range(3) if absc.max() - absc[i] <= tol]
    branch = DiscordBranch(f"D{top[0] + 1}")
    planes = frozenset(
        name for i, j, name in _PLANE_PAIRS if i in top and j in top
    )
    return RegionLabel(region, branch, planes)


def octahedron_signed_distance(state):
    """Euclidean distance to the octahedron surface; positive inside (separable)."""
    return float((1.0 - np.abs(state.c).sum()) / math.sqrt(3.0))


def branch_plane_distances(state):
    """Euclidean distance from the state to each branch-boundary plane."""
    a = np.abs(state.c)
    return {
        name: float(abs(a[i] - a[j]) / math.sqrt(2.0)) for i, j, name in _PLANE_PAIRS
    }


def is_axis_state(state, tol=1e-9):
    """True when at most one Bloch coefficient is nonzero (discord vanishes there)."""
    return int((np.abs(state.c) > tol).sum()) <= 1
