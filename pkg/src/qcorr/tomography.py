"""Simulated two-photon polarization tomography.

Coincidence counts for an informationally complete polarization projector
set are drawn from Poisson statistics (one independent, seed-derived
substream per projector, so parallel and serial generation agree), the
density matrix is recovered by linear inversion (least squares for the
overcomplete set), and the estimate is projected back onto the physical
state space by clipping its spectrum to the probability simplex.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .bell_geometry import DiscordBranch, EntanglementRegion, RegionLabel
from .correlations import CorrelationReport, ReportSource, fidelity, full_report
from .errors import SingularDesignError

_SQ = 1.0 / math.sqrt(2.0)
POLARIZATION_KETS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([_SQ, _SQ], dtype=complex),
    "A": np.array([_SQ, -_SQ], dtype=complex),
    "R": np.array([_SQ, 1j * _SQ], dtype=complex),
    "L": np.array([_SQ, -1j * _SQ], dtype=complex),
}

MINIMAL_LABELS = ("H", "V", "D", "R")
OVERCOMPLETE_LABELS = ("H", "V", "D", "A", "R", "L")


@dataclass(frozen=True)
class ProjectorSet:
    """Named set of two-qubit polarization projectors |a b><a b|."""

    name: str
    labels: tuple
    matrices: tuple

    @classmethod
    def _from_single_labels(cls, name, singles):
        labels = []
        matrices = []
        for a in singles:
            for b in singles:
                labels.append((a, b))
                matrices.append(
                    qmat.projector(np.kron(POLARIZATION_KETS[a], POLARIZATION_KETS[b]))
                )
        return cls(name=name, labels=tuple(labels), matrices=tuple(matrices))

    @classmethod
    def minimal16(cls):
        return cls._from_single_labels("minimal16", MINIMAL_LABELS)

    @classmethod
    def overcomplete36(cls):
        return cls._from_single_labels("overcomplete36", OVERCOMPLETE_LABELS)

    def design_matrix(self):
        """Rows vec(P^T), so that design @ vec(rho) = [Tr(P rho)]."""
        return np.array([p.T.ravel() for p in self.matrices])


def projector_set(name):
    """Projector set from a name: '16'/'minimal16' or '36'/'overcomplete36'."""
    key = str(name).lower()
    if key in ("16", "minimal16", "minimal"):
        return ProjectorSet.minimal16()
    if key in ("36", "overcomplete36", "overcomplete"):
        return ProjectorSet.overcomplete36()
    raise ValueError(f"unknown projector set {name!r}")


def simulate_counts(truth, pset, mean_per_projector, seed):
    """Poisson coincidence counts for each projector.

    count_k ~ Poisson(mean_per_projector * Tr(P_k truth)), drawn from the
    k-th child stream of SeedSequence(seed); deterministic per (seed, k).
    """
    if mean_per_projector < 1:
        raise ValueError("mean_per_projector must be at least 1")
    truth = np.asarray(truth, dtype=complex)
    children = np.random.SeedSequence(seed).spawn(len(pset.matrices))
    counts = np.empty(len(pset.matrices), dtype=np.int64)
    for k, (proj, child) in enumerate(zip(pset.matrices, children)):
        mean = mean_per_projector * max(0.0, float(np.trace(proj @ truth).real))
        counts[k] = np.random.Generator(np.random.PCG64(child)).poisson(mean)
    return counts


def reconstruct(counts, pset, mean_per_projector):
    """Density matrix from counts by linear inversion plus physicality projection.

    Solves Tr(P_k rho) = counts_k / mean_per_projector in the least-squares
    sense, Hermitizes the result, and projects its eigenvalue vector onto
    the probability simplex, which yields the closest matrix that satisfies
    the density-matrix invariants exactly.
    """
    counts = np.asarray(counts, dtype=float)
    design = pset.design_matrix()
    if counts.shape != (design.shape[0],):
        raise ValueError(
            f"expected {design.shape[0]} counts for set {pset.name}, got {counts.shape}"
        )
    solution, _, rank, _ = np.linalg.lstsq(design, counts / mean_per_projector, rcond=None)
    if rank < 16:
        raise SingularDesignError(
            f"projector set {pset.name} spans only {rank} of 16 operator dimensions"
        )
    rho = solution.reshape(4, 4)
    rho = (rho + rho.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(rho)
    vals = _project_simplex(vals)
    rho = (vecs * vals) @ vecs.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return rho / np.trace(rho).real


def _project_simplex(v):
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, u.size + 1)
    k = idx[u - css / idx > 0][-1]
    return np.clip(v - css[k - 1] / k, 0.0, None)


@dataclass(frozen=True)
class TomographyRun:
    """One simulated prepare-measure-reconstruct cycle."""

    truth: np.ndarray
    set_name: str
    mean_per_projector: int
    seed: int
    counts: np.ndarray
    reconstructed: np.ndarray
    fidelity: float
    report: CorrelationReport | None = None

    def to_json(self):
        payload = {
            "truth": _matrix_to_pairs(self.truth),
            "set": self.set_name,
            "mean_per_projector": int(self.mean_per_projector),
            "seed": int(self.seed),
            "counts": [int(c) for c in self.counts],
            "reconstructed": _matrix_to_pairs(self.reconstructed),
            "fidelity": float(self.fidelity),
            "report": report_to_dict(self.report) if self.report is not None else None,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        report = payload.get("report")
        return cls(
            truth=_matrix_from_pairs(payload["truth"]),
            set_name=payload["set"],
            mean_per_projector=int(payload["mean_per_projector"]),
            seed=int(payload["seed"]),
            counts=np.asarray(payload["counts"], dtype=np.int64),
            reconstructed=_matrix_from_pairs(payload["reconstructed"]),
            fidelity=float(payload["fidelity"]),
            report=report_from_dict(report) if report is not None else None,
        )


def _matrix_to_pairs(m):
    m = np.asarray(m, dtype=complex).ravel()
    return [[float(x.real), float(x.imag)] for x in m]


def _matrix_from_pairs(pairs):
    flat = np.array([complex(re, im) for re, im in pairs])
    return flat.reshape(4, 4)


def report_to_dict(report):
    region = None
    if report.region is not None:
        region = {
            "entanglement_region": report.region.entanglement_region.value,
            "discord_branch": report.region.discord_branch.value,
            "on_branch_boundary": sorted(report.region.on_branch_boundary),
        }
    return {
        "concurrence": report.concurrence,
        "eof": report.eof,
        "discord": report.discord,
        "mutual_information": report.mutual_information,
        "classical_correlation": report.classical_correlation,
        "source": report.source.value,
        "branch": report.branch.value if report.branch is not None else None,
        "discord_branch_values": (
            list(report.discord_branch_values)
            if report.discord_branch_values is not None
            else None
        ),
        "region": region,
    }


def report_from_dict(payload):
    region = None
    if payload.get("region") is not None:
        r = payload["region"]
        region = RegionLabel(
            entanglement_region=EntanglementRegion(r["entanglement_region"]),
            discord_branch=DiscordBranch(r["discord_branch"]),
            on_branch_boundary=frozenset(r["on_branch_boundary"]),
        )
    branch = payload.get("branch")
    values = payload.get("discord_branch_values")
    return CorrelationReport(
        concurrence=payload["concurrence"],
        eof=payload["eof"],
        discord=payload["discord"],
        mutual_information=payload["mutual_information"],
        classical_correlation=payload["classical_correlation"],
        source=ReportSource(payload["source"]),
        branch=DiscordBranch(branch) if branch is not None else None,
        discord_branch_values=tuple(values) if values is not None else None,
        region=region,
    )


def run_tomography(truth, pset, mean_per_projector, seed, include_report=True, config=None):
    """Simulate counts, reconstruct, and score one tomography run.

    The attached report analyses the reconstructed matrix with the general
    (numeric) machinery unless it happens to be exactly Bell-diagonal.
    """
    truth = qmat.check_density_matrix(truth)
    counts = simulate_counts(truth, pset, mean_per_projector, seed)
    reconstructed = reconstruct(counts, pset, mean_per_projector)
    report = full_report(reconstructed, config=config) if include_report else None
    return TomographyRun(
        truth=truth,
        set_name=pset.name,
        mean_per_projector=int(mean_per_projector),
        seed=int(seed),
        counts=counts,
        reconstructed=reconstructed,
        fidelity=fidelity(truth, reconstructed),
        report=report,
    )
