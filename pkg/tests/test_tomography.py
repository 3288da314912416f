"""Tests for the simulated tomography pipeline."""

import numpy as np
import pytest
from conftest import random_density_matrix

from qcorr import bell_geometry as bg
from qcorr import qmat, tomography as tomo
from qcorr.correlations import fidelity
from qcorr.errors import InvalidStateError, SingularDesignError

BELL_MIX = bg.to_density_matrix(bg.BellDiagonalState(0.7, -1.0, 0.7))


def expected_counts(truth, pset, mean):
    return np.array([mean * np.trace(p @ truth).real for p in pset.matrices])


class TestProjectorSets:
    def test_names_and_sizes(self):
        assert len(tomo.projector_set("16").matrices) == 16
        assert len(tomo.projector_set("36").matrices) == 36
        assert tomo.projector_set("minimal16").name == "minimal16"
        with pytest.raises(ValueError):
            tomo.projector_set("25")

    def test_minimal_set_is_informationally_complete(self):
        design = tomo.projector_set("16").design_matrix()
        assert np.linalg.matrix_rank(design) == 16

    def test_overcomplete_set_spans(self):
        design = tomo.projector_set("36").design_matrix()
        assert np.linalg.matrix_rank(design) == 16

    def test_projectors_are_rank_one(self):
        for pset in (tomo.ProjectorSet.minimal16(), tomo.ProjectorSet.overcomplete36()):
            for p in pset.matrices:
                assert np.trace(p).real == pytest.approx(1.0, abs=1e-12)
                assert np.allclose(p @ p, p, atol=1e-12)


class TestSimulateCounts:
    def test_deterministic_per_seed(self):
        pset = tomo.projector_set("16")
        a = tomo.simulate_counts(BELL_MIX, pset, 1000, 42)
        b = tomo.simulate_counts(BELL_MIX, pset, 1000, 42)
        assert np.array_equal(a, b)
        c = tomo.simulate_counts(BELL_MIX, pset, 1000, 43)
        assert not np.array_equal(a, c)

    def test_orthogonal_projector_gets_zero(self):
        pset = tomo.projector_set("16")
        hh = qmat.kron(np.diag([1.0, 0.0]), np.diag([1.0, 0.0])).astype(complex)
        counts = tomo.simulate_counts(hh, pset, 10**6, 0)
        idx_hh = pset.labels.index(("H", "H"))
        idx_vv = pset.labels.index(("V", "V"))
        assert counts[idx_vv] == 0
        assert abs(counts[idx_hh] - 10**6) < 5000

    def test_maximally_mixed_quarter_rate(self):
        pset = tomo.projector_set("16")
        counts = tomo.simulate_counts(np.eye(4, dtype=complex) / 4, pset, 10**6, 7)
        assert np.all(np.abs(counts - 2.5e5) < 5000)

    def test_bell_mix_hh_rate(self):
        # HH diagonal entry of the Bloch form is (1 + c3)/4
        pset = tomo.projector_set("16")
        counts = tomo.simulate_counts(BELL_MIX, pset, 10**6, 11)
        idx_hh = pset.labels.index(("H", "H"))
        assert abs(counts[idx_hh] - 4.25e5) < 5000

    def test_rejects_zero_budget(self):
        with pytest.raises(ValueError):
            tomo.simulate_counts(BELL_MIX, tomo.projector_set("16"), 0, 0)


class TestReconstruct:
    def test_noiseless_counts_recover_truth(self):
        for name in ("16", "36"):
            pset = tomo.projector_set(name)
            counts = expected_counts(BELL_MIX, pset, 10**6)
            rec = tomo.reconstruct(counts, pset, 10**6)
            assert np.max(np.abs(rec - BELL_MIX)) <= 1e-9

    def test_output_satisfies_invariants(self):
        rng = np.random.default_rng(5)
        pset = tomo.projector_set("16")
        for seed in range(20):
            truth = random_density_matrix(rng)
            counts = tomo.simulate_counts(truth, pset, 2000, seed)
            rec = tomo.reconstruct(counts, pset, 2000)
            qmat.check_density_matrix(rec)

    def test_count_length_mismatch(self):
        with pytest.raises(ValueError):
            tomo.reconstruct(np.ones(10), tomo.projector_set("16"), 100)

    def test_rank_deficient_set_rejected(self):
        base = tomo.projector_set("16")
        degenerate = tomo.ProjectorSet(
            name="degenerate",
            labels=(base.labels[0],) * 16,
            matrices=(base.matrices[0],) * 16,
        )
        with pytest.raises(SingularDesignError):
            tomo.reconstruct(np.ones(16), degenerate, 100)

    def test_high_count_maximally_mixed(self):
        pset = tomo.projector_set("16")
        truth = np.eye(4, dtype=complex) / 4
        counts = tomo.simulate_counts(truth, pset, 10**6, 3)
        rec = tomo.reconstruct(counts, pset, 10**6)
        assert fidelity(truth, rec) >= 0.999


class TestRunTomography:
    def test_bell_state_end_to_end(self):
        run = tomo.run_tomography(qmat.BELL_PROJECTORS[0], tomo.projector_set("16"), 10**6, 0)
        assert run.fidelity > 0.998
        assert abs(run.report.discord - 1.0) <= 0.02

    def test_maximally_mixed_noise_floor(self):
        run = tomo.run_tomography(np.eye(4, dtype=complex) / 4, tomo.projector_set("16"), 10**6, 1)
        assert run.report.concurrence < 0.02
        assert run.report.eof < 0.02
        assert run.report.discord < 0.02

    def test_frozen_line_grid(self):
        pset = tomo.projector_set("16")
        for i, c1 in enumerate(np.linspace(0.7, 1.0, 8)):
            truth = bg.to_density_matrix(bg.BellDiagonalState(c1, c1 - 1.7, 0.7))
            run = tomo.run_tomography(truth, pset, 10**5, seed=100 + i)
            assert abs(run.report.eof - 0.5918574071706773) <= 0.03

    def test_rejects_invalid_truth(self):
        with pytest.raises(InvalidStateError):
            tomo.run_tomography(np.eye(4, dtype=complex), tomo.projector_set("16"), 1000, 0)

    def test_fidelity_improves_with_budget(self):
        rng = np.random.default_rng(13)
        pset = tomo.projector_set("16")
        for t in range(10):
            truth = random_density_matrix(rng)
            medians = []
            for budget in (10**3, 10**4, 10**5, 10**6):
                fids = [
                    fidelity(
                        truth,
                        tomo.reconstruct(
                            tomo.simulate_counts(truth, pset, budget, 1000 * t + s),
                            pset,
                            budget,
                        ),
                    )
                    for s in range(50)
                ]
                medians.append(np.median(fids))
            assert all(b >= a - 1e-12 for a, b in zip(medians, medians[1:]))

    def test_overcomplete_beats_minimal_at_equal_total_budget(self):
        total = 16 * 3000
        truths = [
            BELL_MIX,
            bg.to_density_matrix(bg.BellDiagonalState(0.4, -0.4, 0.2)),
            np.eye(4, dtype=complex) / 4,
        ]
        for t, truth in enumerate(truths):
            med = {}
            for name in ("16", "36"):
                pset = tomo.projector_set(name)
                budget = total // len(pset.matrices)
                fids = [
                    fidelity(
                        truth,
                        tomo.reconstruct(
                            tomo.simulate_counts(truth, pset, budget, 500 * t + s),
                            pset,
                            budget,
                        ),
                    )
                    for s in range(50)
                ]
                med[name] = np.median(fids)
            assert med["36"] >= med["16"]

    def test_reconstructed_discord_bias_bound(self):
        # loose empirical bound at a noisy budget; at high budgets the
        # discord error scales like sqrt(1-F) and outgrows any linear bound
        rng = np.random.default_rng(17)
        pset = tomo.projector_set("16")
        for seed in range(8):
            state = bg.from_probabilities(rng.dirichlet(np.ones(4)))
            truth = bg.to_density_matrix(state)
            run = tomo.run_tomography(truth, pset, 10**3, seed=seed)
            d_truth = bg.discord_bd(state).value
            assert abs(run.report.discord - d_truth) <= 5.0 * (1.0 - run.fidelity) + 1e-6


class TestSerialization:
    def test_json_round_trip(self):
        run = tomo.run_tomography(BELL_MIX, tomo.projector_set("16"), 10**4, 9)
        back = tomo.TomographyRun.from_json(run.to_json())
        assert np.allclose(back.truth, run.truth)
        assert np.allclose(back.reconstructed, run.reconstructed)
        assert np.array_equal(back.counts, run.counts)
        assert back.fidelity == run.fidelity
        assert back.set_name == run.set_name
        assert back.seed == run.seed
        assert back.report.discord == run.report.discord
        assert back.report.source == run.report.source

    def test_json_without_report(self):
        run = tomo.run_tomography(
            BELL_MIX, tomo.projector_set("16"), 10**4, 9, include_report=False
        )
        back = tomo.TomographyRun.from_json(run.to_json())
        assert back.report is None
