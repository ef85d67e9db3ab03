"""
Tests for stability certificates and simulation post-processing.
"""

import math

import numpy as np
import pytest

from petic.analysis import (
    certify_delayed,
    certify_no_delay,
    check_zeno,
    compute_lambda,
    compute_lambda1,
    compute_lambda1_tilde,
    decay_check,
    generalized_eigenvalues,
    generalized_max_eigenvalue,
    overshoot_constant,
    trigger_report,
    verify_scenario,
)
from petic.config import update_config
from petic.control import TriggerParams
from petic.errors import ConfigurationError, UsageError
from petic.models import EnsembleStats, EventLog
from petic.scenario import load_scenario
from tests.toy import toy_scenario


def make_log(*times):
    log = EventLog()
    for t in times:
        log.append(t, 2.0)
    return log


def make_stats(times, mean_sq):
    times = np.asarray(times, dtype=float)
    mean_sq = np.asarray(mean_sq, dtype=float)
    return EnsembleStats(
        times=times,
        mean_sq=mean_sq,
        single_path=mean_sq,
        counts=[0],
        logs=[EventLog()],
        gap_mean=None,
        gap_min=None,
        gap_max=None,
        n_runs=1,
    )


def params(**kwargs):
    values = dict(delta=0.1, psi1=1.2, psi2=1.0, gamma=0.1, P=np.eye(1))
    values.update(kwargs)
    return TriggerParams(**values)


class TestGeneralizedEigenvalues:
    """Tests for the symmetric-definite pencil solver."""

    def test_matches_congruence_transform(self):
        """mu_max(S, P) equals the largest eigenvalue of P^-1/2 S P^-1/2."""
        rng = np.random.default_rng(2024)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            A = rng.standard_normal((n, n))
            P = A @ A.T + n * np.eye(n)
            B = rng.standard_normal((n, n))
            S = B + B.T
            w, V = np.linalg.eigh(P)
            root = V @ np.diag(w**-0.5) @ V.T
            expected = np.linalg.eigvalsh(root @ S @ root)
            np.testing.assert_allclose(generalized_eigenvalues(S, P), expected, rtol=0, atol=1e-9)
            assert generalized_max_eigenvalue(S, P) == pytest.approx(expected[-1], abs=1e-9)

    def test_scaling_invariance(self):
        rng = np.random.default_rng(8)
        B = rng.standard_normal((4, 4))
        S = B + B.T
        P = np.diag([1.0, 2.0, 3.0, 4.0])
        np.testing.assert_allclose(
            generalized_eigenvalues(7.5 * S, 7.5 * P), generalized_eigenvalues(S, P)
        )

    def test_ascending_order(self):
        values = generalized_eigenvalues(np.diag([3.0, -1.0, 2.0]), np.eye(3))
        np.testing.assert_allclose(values, [-1.0, 2.0, 3.0])

    def test_p_must_be_positive_definite(self):
        with pytest.raises(ConfigurationError):
            generalized_max_eigenvalue(np.eye(2), -np.eye(2))


class TestConstants:
    """Tests for lambda, lambda1 and lambda1~ on scalar systems."""

    def test_lambda_trivial(self):
        """C = D = 0, P = I: only the P^T P term remains."""
        sys = toy_scenario(c=0.0).system
        assert compute_lambda(sys, np.eye(1)) == pytest.approx(1.0)

    def test_lambda_scalar_formula(self):
        """lambda = 2c + d^2 + p for a scalar system without nonlinearity."""
        sys = toy_scenario(c=0.2, d=0.5).system
        assert compute_lambda(sys, 2.0 * np.eye(1)) == pytest.approx(0.4 + 0.25 + 2.0)

    def test_lambda_clipped_at_zero(self):
        sys = toy_scenario(c=-5.0).system
        assert compute_lambda(sys, np.eye(1)) == 0.0

    @pytest.mark.parametrize("gain,expected", [(-0.5, 0.25), (-2.0, 1.0)])
    def test_lambda1(self, gain, expected):
        sys = toy_scenario(gain=gain).system
        assert compute_lambda1(sys, np.eye(1), 1.0, 0.0) == pytest.approx(expected)

    def test_lambda1_energy_shift(self):
        sys = toy_scenario(gain=-0.5).system
        value = compute_lambda1(sys, np.eye(1), 2.0, 0.25)
        assert value == pytest.approx((math.exp(0.5) - 0.5) ** 2)

    def test_lambda1_independent_of_p_scale(self):
        sys = toy_scenario(gain=-0.5).system
        assert compute_lambda1(sys, 9.0 * np.eye(1), 1.0, 0.0) == pytest.approx(0.25)

    @pytest.mark.parametrize("gain,expected", [(0.55, 0.3025), (0.0, 0.0)])
    def test_lambda1_tilde(self, gain, expected):
        sys = toy_scenario(gain=gain, mode="delayed", delay=0.05).system
        assert compute_lambda1_tilde(sys, np.eye(1)) == pytest.approx(expected)

    def test_p_size_mismatch(self):
        sys = toy_scenario().system
        with pytest.raises(ConfigurationError) as excinfo:
            compute_lambda(sys, np.eye(2))
        assert excinfo.value.field_path == "trigger.P"


class TestCertificates:
    """Tests for the feasibility conditions."""

    def test_no_delay_rate(self):
        result = certify_no_delay(1.0, 0.25, params(), alpha=1.0, tau=0.0)
        assert result.gamma_bar == pytest.approx((math.log(4.0) - 0.1) / 0.1)
        assert result.feasible
        assert result.gamma_certified

    def test_no_delay_boundary_is_infeasible(self):
        result = certify_no_delay(0.0, 1.0, params(), alpha=1.0, tau=0.0)
        assert result.gamma_bar == 0.0
        assert not result.feasible
        assert not result.gamma_certified

    def test_no_delay_decreases_with_lambda(self):
        rates = [certify_no_delay(lam, 0.5, params(), 1.0, 0.0).gamma_bar for lam in (0, 1, 2)]
        assert rates[0] > rates[1] > rates[2]

    def test_energy_floor_helps(self):
        low = certify_no_delay(1.0, 0.5, params(), 1.0, 0.0).gamma_bar
        high = certify_no_delay(1.0, 0.5, params(), 1.0, 0.1).gamma_bar
        assert high == pytest.approx(low + 2.0)

    def test_annihilating_jump_is_capped(self):
        result = certify_no_delay(1.0, 0.0, params(), 1.0, 0.0)
        assert result.gamma_bar == 1e3
        assert result.feasible

    def test_cap_from_config(self):
        update_config("numerics", gamma_bar_cap=50.0)
        assert certify_delayed(1.0, 0.0, params(), 1.0, 0.0).gamma_bar == 50.0

    def test_delayed_rate(self):
        result = certify_delayed(1.0, 0.5, params(psi2=1.1), alpha=10.0, beta=0.1)
        expected = ((2.0 - 1.0) * 0.1 - math.log(1.1) - math.log(0.5)) / 0.2
        assert result.gamma_bar == pytest.approx(expected)

    def test_uncertified_gamma(self, caplog):
        result = certify_no_delay(1.0, 0.25, params(gamma=50.0), 1.0, 0.0)
        assert result.feasible
        assert not result.gamma_certified
        assert "exceeds the certified rate" in caplog.text

    def test_overshoot_constant(self):
        p = params(P=np.diag([1.0, 4.0]), psi1=1.5, gamma=0.2)
        assert overshoot_constant(0.8, p) == pytest.approx(1.5 * math.exp(0.1) * 4.0)


class TestDecayCheck:
    """Tests for the mean-square bound."""

    def test_margin_equals_slack_on_exact_decay(self):
        times = np.linspace(0.0, 2.0, 21)
        stats = make_stats(times, np.exp(-times))
        result = decay_check(stats, gamma=1.0, M=1.0, slack=1.5, initial=1.0)
        assert result.passed
        assert result.margin == pytest.approx(1.5)
        assert result.fitted_rate == pytest.approx(1.0)

    def test_growth_fails(self):
        times = np.linspace(0.0, 1.0, 11)
        stats = make_stats(times, np.exp(times))
        result = decay_check(stats, gamma=0.5, M=1.0, slack=1.0)
        assert not result.passed
        assert result.margin < 1.0

    def test_default_slack_from_config(self):
        stats = make_stats([0.0, 1.0], [1.0, 0.1])
        assert decay_check(stats, gamma=0.1, M=1.0).slack == 1.5

    def test_all_zero_curve(self):
        stats = make_stats([0.0, 1.0], [0.0, 0.0])
        result = decay_check(stats, gamma=1.0, M=1.0)
        assert result.margin == math.inf
        assert result.fitted_rate is None

    def test_empty(self):
        with pytest.raises(UsageError):
            decay_check(make_stats([], []), gamma=1.0, M=1.0)


class TestTriggerStatistics:
    """Tests for Zeno checks and the fixed-period comparison."""

    def test_grid_aligned_log(self):
        assert check_zeno(make_log(0.1, 0.3, 0.4), 0.1) == 0

    def test_short_and_misaligned_gaps(self):
        assert check_zeno(make_log(0.05, 0.2, 0.4), 0.1) == 2

    def test_report(self):
        report = trigger_report([make_log(0.1, 0.3), make_log(0.2)], delta=0.1, horizon=1.0)
        assert report.baseline == 10
        assert report.counts == [2, 1]
        assert report.mean_count == 1.5
        assert report.reduction == pytest.approx(0.85)
        assert report.min_gap == pytest.approx(0.1)
        assert report.zeno_violations == 0

    def test_no_events(self):
        report = trigger_report([EventLog()], delta=0.09, horizon=5.0)
        assert report.baseline == 55
        assert report.reduction == 1.0
        assert report.min_gap is None

    def test_baseline_counts(self):
        assert trigger_report([EventLog()], delta=0.009, horizon=5.0).baseline == 555

    def test_requires_logs(self):
        with pytest.raises(UsageError):
            trigger_report([], delta=0.1, horizon=1.0)

    def test_horizon_shorter_than_delta(self):
        with pytest.raises(UsageError):
            trigger_report([EventLog()], delta=2.0, horizon=1.0)


class TestVerifyScenario:
    """Tests for the full assumption check."""

    def test_stable_toy_passes(self, stable_scenario):
        report = verify_scenario(stable_scenario)
        assert report.passed
        assert report.lambda_ == 0.0
        assert report.lambda1 == pytest.approx(0.25)
        assert report.gamma_bar == pytest.approx((math.log(4.0) - math.log(1.2)) / 0.1)
        assert report.recompute_gamma_bar() == pytest.approx(report.gamma_bar)
        names = {check.name for check in report.assumptions}
        assert {"matching[a1]", "embedding[a1]", "energy_floor", "negative_gains"} <= names

    def test_matching_failure_only_fatal_when_strict(self):
        scenario = toy_scenario(leader_c=0.0)
        assert verify_scenario(scenario).passed
        assert not verify_scenario(scenario, strict=True).passed

    def test_delayed_checks(self, delayed_scenario):
        report = verify_scenario(delayed_scenario)
        names = {check.name for check in report.assumptions}
        assert {"energy_slope", "delay_below_delta"} <= names
        assert report.lambda1 is None
        assert report.lambda1_tilde == pytest.approx(0.09)

    def test_report_serializes(self, stable_scenario):
        data = verify_scenario(stable_scenario).to_dict()
        assert data["mode"] == "no_delay"
        assert data["feasible"] is True
        assert all("passed" in check for check in data["assumptions"])


class TestBundledCertificates:
    """Certificate constants of the shipped UAV/UGV scenarios."""

    def test_no_delay(self):
        report = verify_scenario(load_scenario("uav_ugv_no_delay"))
        assert report.lambda_ == pytest.approx(10.98332, abs=1e-4)
        assert report.lambda1 >= 61.0
        assert not report.feasible
        assert report.gamma_bar < 0

    def test_delayed(self):
        report = verify_scenario(load_scenario("uav_ugv_delayed"))
        assert report.lambda_ == pytest.approx(10.770166, abs=1e-5)
        assert report.lambda1_tilde == pytest.approx(1.1695, abs=3e-3)
        assert report.feasible
        assert report.gamma_bar == pytest.approx(2.6155, abs=0.02)
        assert report.M == pytest.approx(3.17, abs=0.01)
        assert report.gamma_certified

    def test_matching_residuals_are_reported(self):
        report = verify_scenario(load_scenario("uav_ugv_delayed"))
        matching = {c.name: c for c in report.assumptions if c.name.startswith("matching")}
        assert matching["matching[uav1]"].residual == pytest.approx(1.89)
        assert matching["matching[ugv3]"].residual == pytest.approx(1.9)
        assert not any(c.mandatory for c in matching.values())
