"""
Tests for the Euler-Maruyama simulator and the Monte Carlo ensemble.
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy.linalg import expm

from petic.analysis import check_zeno, decay_check, trigger_report, verify_scenario
from petic.config import update_config
from petic.errors import ConfigurationError, EnsembleFailureError, NumericalBlowupError
from petic.scenario import ScenarioDocument, build_scenario, load_scenario
from petic.simulator import (
    SimParams,
    arun_ensemble,
    em_step,
    initial_state,
    reduce_runs,
    run_ensemble,
    run_trajectory,
)
from petic.utils.rng import derive_run_seed
from tests.toy import oscillator_document, toy_scenario


class TestSimParams:
    """Tests for integration settings."""

    def test_step_count(self):
        assert SimParams(step=0.01, horizon=1.0).n_steps == 100
        assert SimParams(step=0.003, horizon=5.0).n_steps == 1666

    @pytest.mark.parametrize(
        "kwargs,path",
        [
            ({"step": 0.0, "horizon": 1.0}, "sim.step"),
            ({"step": 0.1, "horizon": 1.0, "n_runs": 0}, "sim.runs"),
            ({"step": 0.1, "horizon": 1.0, "record_stride": 0}, "sim.record_stride"),
            ({"step": 2.0, "horizon": 1.0}, "sim.step"),
        ],
    )
    def test_invalid(self, kwargs, path):
        with pytest.raises(ConfigurationError) as excinfo:
            SimParams(**kwargs)
        assert excinfo.value.field_path == path


class TestEulerStep:
    """Tests for a single integrator step."""

    def test_deterministic_step(self, stable_scenario):
        y = em_step(np.array([1.0]), 0.0, 0.1, 0.0, stable_scenario.system)
        np.testing.assert_allclose(y, [0.9])

    def test_noise_enters_linearly(self):
        sys = toy_scenario(c=-1.0, d=0.5).system
        y = em_step(np.array([1.0]), 0.0, 0.1, 0.2, sys)
        np.testing.assert_allclose(y, [1.0])

    def test_converges_to_matrix_exponential(self):
        """Each halving of the step roughly halves the worst error along the noise-free flow."""
        errors = []
        for step in (0.01, 0.005, 0.0025):
            scenario = build_scenario(ScenarioDocument.model_validate(oscillator_document(step)))
            path = run_trajectory(scenario, 1, mode="none")
            C = scenario.agents[0].C
            exact = np.array([expm(C * t) @ np.array([1.0, 0.0]) for t in path.times])
            errors.append(float(np.abs(path.states - exact).max()))
        assert errors[0] < 0.02
        for coarse, fine in zip(errors, errors[1:]):
            assert 0.4 * coarse < fine < 0.6 * coarse


class TestRunTrajectory:
    """Tests for single sample paths."""

    def test_same_seed_same_path(self, noisy_scenario):
        first = run_trajectory(noisy_scenario, 42)
        second = run_trajectory(noisy_scenario, 42)
        np.testing.assert_array_equal(first.states, second.states)
        np.testing.assert_array_equal(first.events.times, second.events.times)

    def test_different_seeds_differ(self, noisy_scenario):
        first = run_trajectory(noisy_scenario, 1)
        second = run_trajectory(noisy_scenario, 2)
        assert not np.array_equal(first.states, second.states)

    def test_recorded_grid(self, stable_scenario):
        path = run_trajectory(stable_scenario, 0)
        assert path.times.shape == (101,)
        assert path.times[0] == 0.0
        assert path.times[-1] == pytest.approx(1.0)
        np.testing.assert_allclose(path.sq_norm, np.sum(path.states**2, axis=1))

    def test_record_stride_keeps_final_step(self):
        scenario = toy_scenario(stride=30)
        path = run_trajectory(scenario, 0)
        np.testing.assert_allclose(path.times, [0.0, 0.3, 0.6, 0.9, 1.0])

    def test_events_lie_on_sampling_grid(self, noisy_scenario):
        for seed in range(5):
            log = run_trajectory(noisy_scenario, seed).events
            assert check_zeno(log, 0.1) == 0
            times = log.times
            assert np.all(np.diff(times) > 0)
            assert times.size == 0 or times[0] >= 0.1 - 1e-12

    def test_unstable_system_fires(self, delayed_scenario):
        path = run_trajectory(delayed_scenario, 3)
        assert len(path.events) > 0
        assert all(r.w_ratio > 1.2 for r in path.events.records[:1])

    def test_delayed_jump_reads_buffered_state(self, delayed_scenario):
        """The post-jump state is the gain times the state five steps earlier."""
        path = run_trajectory(delayed_scenario, 3)
        for record in path.events:
            index = int(round(record.time / 0.01))
            np.testing.assert_allclose(
                path.states[index], 0.3 * path.states[index - 5], rtol=1e-12
            )

    def test_periodic_schedule_fires_every_period(self, stable_scenario):
        path = run_trajectory(stable_scenario, 0, schedule="periodic")
        assert len(path.events) == 10
        np.testing.assert_allclose(path.events.gaps, 0.1)

    def test_uncontrolled_has_no_events(self, stable_scenario):
        path = run_trajectory(stable_scenario, 0, mode="none")
        assert len(path.events) == 0
        assert path.states[-1, 0] == pytest.approx(0.99**100)

    def test_zero_coupling_matches_open_loop(self, noisy_scenario):
        """With H = 0 every impulse is the identity."""
        silent = dataclasses.replace(
            noisy_scenario,
            system=noisy_scenario.system.with_information_matrix(np.zeros((1, 1))),
        )
        controlled = run_trajectory(silent, 9)
        open_loop = run_trajectory(noisy_scenario, 9, mode="none")
        np.testing.assert_array_equal(controlled.states, open_loop.states)

    def test_unknown_schedule(self, stable_scenario):
        with pytest.raises(ConfigurationError):
            run_trajectory(stable_scenario, 0, schedule="hourly")

    def test_blowup(self):
        scenario = toy_scenario(c=80.0)
        with pytest.raises(NumericalBlowupError) as excinfo:
            run_trajectory(scenario, 0)
        assert 0.0 < excinfo.value.t <= 1.0
        assert excinfo.value.last_event is not None

    def test_blowup_threshold_from_config(self, stable_scenario):
        update_config("numerics", blowup_threshold=0.5)
        with pytest.raises(NumericalBlowupError) as excinfo:
            run_trajectory(stable_scenario, 0, mode="none")
        assert excinfo.value.t == pytest.approx(0.01)
        assert excinfo.value.last_event is None

    def test_absolute_positions(self):
        scenario = toy_scenario(leader_c=0.0)
        path = run_trajectory(scenario, 0, mode="none")
        np.testing.assert_allclose(path.leader, 0.0)
        np.testing.assert_allclose(path.followers[0], path.errors[0])

    def test_energy_is_recorded(self):
        scenario = toy_scenario(tau0=0.1, beta=0.5)
        path = run_trajectory(scenario, 0)
        np.testing.assert_allclose(path.energy[:, 0], 0.1 + 0.5 * path.times)


class TestInitialState:
    """Tests for the lifted initial condition."""

    def test_fixed_initial_state(self, stable_scenario):
        np.testing.assert_array_equal(initial_state(stable_scenario), [1.0])

    def test_perturbation_is_seeded(self, stable_scenario):
        first = initial_state(stable_scenario, run_seed=5, perturbation=0.1)
        second = initial_state(stable_scenario, run_seed=5, perturbation=0.1)
        np.testing.assert_array_equal(first, second)
        assert first[0] != 1.0


class TestEnsemble:
    """Tests for Monte Carlo ensembles."""

    def test_matches_sequential_runs(self, noisy_scenario):
        stats = run_ensemble(noisy_scenario)
        paths = [
            run_trajectory(noisy_scenario, derive_run_seed(noisy_scenario.sim.master_seed, i))
            for i in range(4)
        ]
        expected = reduce_runs(paths, 4)
        np.testing.assert_array_equal(stats.mean_sq, expected.mean_sq)
        np.testing.assert_array_equal(stats.single_path, paths[0].sq_norm)
        assert stats.counts == [len(p.events) for p in paths]

    def test_independent_of_worker_count(self, noisy_scenario):
        update_config("ensemble", max_workers=1)
        serial = run_ensemble(noisy_scenario)
        update_config("ensemble", max_workers=4)
        parallel = run_ensemble(noisy_scenario)
        np.testing.assert_array_equal(serial.mean_sq, parallel.mean_sq)

    async def test_async_ensemble(self, noisy_scenario):
        sim = dataclasses.replace(noisy_scenario.sim, n_runs=2)
        stats = await arun_ensemble(noisy_scenario, sim=sim)
        assert stats.n_runs == 2
        assert len(stats.counts) == 2

    def test_reduce_excludes_diverged_runs(self, stable_scenario):
        path = run_trajectory(stable_scenario, 0)
        failure = NumericalBlowupError("diverged", t=0.5)
        stats = reduce_runs([path] * 9 + [failure], 10)
        assert stats.excluded == [9]
        np.testing.assert_allclose(stats.mean_sq, path.sq_norm)

    def test_reduce_fails_when_too_many_diverge(self, stable_scenario):
        path = run_trajectory(stable_scenario, 0)
        failure = NumericalBlowupError("diverged", t=0.5)
        with pytest.raises(EnsembleFailureError) as excinfo:
            reduce_runs([path] * 8 + [failure] * 2, 10)
        assert excinfo.value.excluded == [8, 9]

    def test_gap_statistics(self, stable_scenario):
        periodic = run_trajectory(stable_scenario, 0, schedule="periodic")
        stats = reduce_runs([periodic, periodic], 2)
        assert stats.gap_min == pytest.approx(0.1)
        assert stats.gap_max == pytest.approx(0.1)
        assert math.isclose(stats.gap_mean, 0.1)


class TestDecayVerdict:
    """Mean-square bound on ensembles of the scalar follower."""

    def test_controlled_ensemble_meets_bound(self):
        scenario = toy_scenario(d=0.3, runs=16)
        report = verify_scenario(scenario)
        assert report.feasible
        stats = run_ensemble(scenario)
        decay = decay_check(stats, report.gamma, report.M)
        assert decay.passed
        assert decay.fitted_rate > report.gamma

    def test_uncontrolled_ensemble_violates_bound(self):
        scenario = toy_scenario(c=1.0, runs=4)
        report = verify_scenario(scenario)
        stats = run_ensemble(scenario, mode="none")
        np.testing.assert_allclose(stats.mean_sq[-1], math.exp(2.0), rtol=0.05)
        assert not decay_check(stats, report.gamma, report.M).passed


@pytest.mark.slow
class TestBundledEnsembles:
    """Observed behaviour of the shipped UAV/UGV scenarios over 20 runs."""

    def test_no_delay_jump_amplifies(self):
        sys = load_scenario("uav_ugv_no_delay").system
        jump = np.eye(sys.dim) + sys.K @ sys.H_tilde @ sys.projector
        assert np.diag(jump).max() > 7.0
        assert np.abs(np.linalg.eigvals(jump)).max() > 1.0

    def test_no_delay_controlled_ensemble_diverges(self):
        scenario = load_scenario("uav_ugv_no_delay")
        sim = dataclasses.replace(scenario.sim, n_runs=20)
        with pytest.raises(EnsembleFailureError) as excinfo:
            run_ensemble(scenario, sim=sim)
        assert len(excinfo.value.excluded) > 2
        assert all(e.t < scenario.sim.horizon for e in excinfo.value.errors)

    def test_no_delay_uncontrolled_stays_finite(self):
        scenario = load_scenario("uav_ugv_no_delay")
        seed = derive_run_seed(scenario.sim.master_seed, 0)
        path = run_trajectory(scenario, seed, mode="none")
        assert len(path.events) == 0
        assert np.isfinite(path.sq_norm).all()

    def test_delayed_event_counts(self):
        scenario = load_scenario("uav_ugv_delayed")
        sim = dataclasses.replace(scenario.sim, n_runs=20)
        stats = run_ensemble(scenario, sim=sim)
        delta = scenario.trigger.delta
        report = trigger_report(stats.logs, delta, sim.horizon)
        assert report.baseline == 55
        assert 40 < report.mean_count <= 55
        assert report.reduction < 0.3
        assert report.zeno_violations == 0
        assert stats.gap_min >= delta * (1 - 1e-9)
