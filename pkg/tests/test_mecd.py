"""Indefinite directivity constraint, quadric projection, and the two
iterative solvers for the maximum-efficiency design."""

import numpy as np
import pytest

import oracles
from cdbeam.linalg import generalized_eig
from cdbeam.mecd import (
    DivergenceError,
    InfeasibleTau,
    build_constraint,
    mecd_dm,
    mecd_pa,
    project_onto_quadric,
)


def feasible_instance(rng, n, mix=0.5):
    """Random PSD pair with a target placed inside the feasible interval."""
    a = oracles.random_psd(rng, n)
    r = oracles.random_psd(rng, n) + 0.2 * np.eye(n)
    pair = generalized_eig(a, r)
    tau = pair.values[0] + mix * (pair.values[-1] - pair.values[0])
    return a, r, 10.0 * np.log10(tau)


class TestBuildConstraint:
    def test_quadratic_form_at_generalized_eigenvectors(self):
        # In the r-orthonormal eigenbasis the constraint form evaluates to
        # the eigenvalue minus the target.
        rng = np.random.default_rng(1)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        pair = generalized_eig(a, r)
        for value, vec in zip(pair.values, pair.vectors.T):
            form = float((vec.conj() @ constraint.d @ vec).real)
            np.testing.assert_allclose(form, value - constraint.tau, atol=1e-10)

    def test_indefinite_between_extremes(self):
        rng = np.random.default_rng(2)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        assert constraint.eig.values[0] < 0.0 < constraint.eig.values[-1]

    def test_infeasible_above_and_below(self):
        rng = np.random.default_rng(3)
        a = oracles.random_psd(rng, 4)
        r = oracles.random_psd(rng, 4) + 0.2 * np.eye(4)
        values = generalized_eig(a, r).values
        with pytest.raises(InfeasibleTau):
            build_constraint(a, r, 10.0 * np.log10(values[-1] * 2.0))
        with pytest.raises(InfeasibleTau) as info:
            build_constraint(a, r, 10.0 * np.log10(max(values[0], 1e-12) / 2.0))
        assert info.value.feasible[0] <= info.value.feasible[1]

    def test_clamp_recovers_excess_target(self):
        rng = np.random.default_rng(4)
        a, r, _ = feasible_instance(rng, 4)
        top = generalized_eig(a, r).values[-1]
        constraint = build_constraint(a, r, 10.0 * np.log10(top * 4.0), clamp=True)
        np.testing.assert_allclose(constraint.tau, (1.0 - 1e-6) * top, rtol=1e-9)

    def test_tau_converted_from_db(self):
        rng = np.random.default_rng(5)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        np.testing.assert_allclose(constraint.tau, 10.0 ** (tau_db / 10.0), rtol=1e-12)


class TestProjection:
    def test_lands_on_quadric(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            a, r, tau_db = feasible_instance(rng, 5, mix=float(rng.uniform(0.2, 0.8)))
            constraint = build_constraint(a, r, tau_db)
            w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
            v, _ = project_onto_quadric(w, constraint)
            point = w + v
            residual = abs(float((point.conj() @ constraint.d @ point).real))
            assert residual <= 1e-9 * constraint.spectral_norm * float((point.conj() @ point).real)

    def test_no_smaller_feasible_perturbation(self):
        rng = np.random.default_rng(9)
        a, r, tau_db = feasible_instance(rng, 3)
        constraint = build_constraint(a, r, tau_db)
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v, _ = project_onto_quadric(w, constraint)
        ours = float(np.linalg.norm(v))
        samples = oracles.cone_unit_samples(
            rng, constraint.eig.values, constraint.eig.vectors, 200_000
        )
        # Distance from w to each sampled ray of the feasible cone.
        cross = samples.conj() @ w
        distances = np.sqrt(
            np.maximum(float((w.conj() @ w).real) - np.abs(cross) ** 2, 0.0)
        )
        assert ours <= distances.min() + 1e-9

    def test_feasible_point_needs_no_correction(self):
        rng = np.random.default_rng(11)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        start = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v, _ = project_onto_quadric(start, constraint)
        on_quadric = start + v
        v2, _ = project_onto_quadric(on_quadric, constraint)
        assert np.linalg.norm(v2) <= 1e-6 * np.linalg.norm(on_quadric)

    def test_blind_vector_rescued_by_nudge(self):
        # A vector with no component on one sign of the spectrum still
        # projects, via a single nudge toward the missing side.
        rng = np.random.default_rng(13)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        top = constraint.eig.vectors[:, -1]
        v, _ = project_onto_quadric(top, constraint)
        point = top + v
        residual = abs(float((point.conj() @ constraint.d @ point).real))
        assert residual <= 1e-8 * constraint.spectral_norm

    def test_zero_vector_rejected(self):
        rng = np.random.default_rng(15)
        a, r, tau_db = feasible_instance(rng, 3)
        constraint = build_constraint(a, r, tau_db)
        with pytest.raises(ValueError):
            project_onto_quadric(np.zeros(3), constraint)


class TestProjectedAscent:
    def test_iterates_feasible_and_unit_norm(self):
        rng = np.random.default_rng(17)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 5)
        res = mecd_pa(c, constraint)
        assert res.converged
        np.testing.assert_allclose(np.linalg.norm(res.weights), 1.0, rtol=1e-12)
        form = abs(float((res.weights.conj() @ constraint.d @ res.weights).real))
        assert form <= 1e-9 * constraint.spectral_norm

    def test_objective_monotone_after_first_step(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            a, r, tau_db = feasible_instance(rng, 4)
            constraint = build_constraint(a, r, tau_db)
            c = oracles.random_psd(rng, 4)
            res = mecd_pa(c, constraint, max_iters=200)
            objectives = [entry[1] for entry in res.trace]
            assert np.all(np.diff(objectives) >= -1e-12)

    def test_identity_objective_converges_immediately(self):
        rng = np.random.default_rng(21)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        res = mecd_pa(np.eye(4), constraint)
        assert res.converged
        assert len(res.trace) <= 3
        np.testing.assert_allclose(res.objective, 1.0, rtol=1e-12)

    def test_residual_target_stop(self):
        rng = np.random.default_rng(23)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 5)
        res = mecd_pa(c, constraint, residual_target=1e-6)
        assert res.converged
        assert res.trace[-1][2] <= 1e-6

    def test_budget_exhaustion_flags_not_raises(self):
        rng = np.random.default_rng(25)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 5)
        res = mecd_pa(c, constraint, max_iters=1)
        assert not res.converged
        assert len(res.trace) == 1

    def test_phase_convention(self):
        rng = np.random.default_rng(27)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        res = mecd_pa(oracles.random_psd(rng, 4), constraint)
        top = res.weights[np.argmax(np.abs(res.weights))]
        assert top.real > 0.0 and abs(top.imag) <= 1e-12 * abs(top)

    def test_gdi_matches_target(self):
        rng = np.random.default_rng(29)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        res = mecd_pa(oracles.random_psd(rng, 5), constraint)
        np.testing.assert_allclose(res.gdi_achieved, constraint.tau, rtol=1e-8)

    def test_near_optimal_against_cone_sampling(self):
        rng = np.random.default_rng(31)
        for _ in range(5):
            a, r, tau_db = feasible_instance(rng, 3)
            constraint = build_constraint(a, r, tau_db)
            c = oracles.random_psd(rng, 3)
            res = mecd_pa(c, constraint, max_iters=500)
            samples = oracles.cone_unit_samples(
                rng, constraint.eig.values, constraint.eig.vectors, 100_000
            )
            best = float(np.max(np.einsum("ki,ij,kj->k", samples.conj(), c, samples).real))
            assert res.objective >= best * (1.0 - 1e-4)

    def test_rejects_nonpositive_step(self):
        rng = np.random.default_rng(33)
        a, r, tau_db = feasible_instance(rng, 3)
        constraint = build_constraint(a, r, tau_db)
        with pytest.raises(ValueError):
            mecd_pa(np.eye(3), constraint, alpha=0.0)


class TestDifferentialMultipliers:
    def test_reaches_residual_target(self):
        rng = np.random.default_rng(35)
        a, r, tau_db = feasible_instance(rng, 5)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 5)
        res = mecd_dm(c, constraint, max_iters=20000, residual_target=1e-6)
        assert res.converged
        assert res.trace[-1][2] <= 1e-6

    def test_much_slower_than_projected_ascent(self):
        rng = np.random.default_rng(37)
        a, r, tau_db = feasible_instance(rng, 6)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 6)
        pa = mecd_pa(c, constraint, residual_target=1e-6)
        dm = mecd_dm(c, constraint, max_iters=20000, residual_target=1e-6)
        assert len(dm.trace) >= 5 * len(pa.trace)

    def test_zero_steps_hold_still(self):
        rng = np.random.default_rng(39)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 4)
        res = mecd_dm(c, constraint, alpha_w=0.0, alpha_lambda=0.0, max_iters=50)
        start = np.ones(4) / 2.0
        np.testing.assert_allclose(res.weights, start, atol=1e-15)
        assert not res.converged

    def test_divergence_raises_with_trace(self):
        # Renormalization keeps w bounded, so the divergent channel is the
        # multiplier: a huge multiplier step blows up the next w update.
        # The partial trace rides on the exception and holds only finite
        # entries (the non-finite iterate is never appended).
        rng = np.random.default_rng(41)
        a, r, tau_db = feasible_instance(rng, 4)
        constraint = build_constraint(a, r, tau_db)
        c = oracles.random_psd(rng, 4)
        with pytest.raises(DivergenceError) as info:
            mecd_dm(c, constraint, alpha_lambda=1e300, max_iters=500)
        assert len(info.value.trace) >= 1
        for entry in info.value.trace:
            assert np.isfinite(entry).all()
