#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Periodic event-triggered impulsive consensus for heterogeneous stochastic agents
#
# Copyright (C) 2025 The petic developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Stability certificates and post-processing of simulations.

The certificate constants are largest generalized eigenvalues mu of symmetric pencils
(S, P), i.e. the largest mu with S v = mu P v. They equal the largest eigenvalue of the
product S P^{-1} but are computed with a symmetric-definite solver.
"""

import logging
import math
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np
from scipy.linalg import eigh

from .config import get_setting
from .control import TriggerParams
from .errors import ConfigurationError, UsageError
from .models import (
    AssumptionCheck,
    CertificateReport,
    CertificateResult,
    DecayResult,
    EnsembleStats,
    EventLog,
    TriggerReport,
)
from .system import (
    StackedSystem,
    check_embedding,
    check_lipschitz,
    check_matching,
    diffusion_bound_ratio,
)
from .topology import check_energy_floor, check_energy_slope
from .validators import validate_positive_definite

if TYPE_CHECKING:
    from .scenario import Scenario

logger = logging.getLogger("petic.analysis")


def generalized_eigenvalues(S: np.ndarray, P: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of the symmetric-definite pencil (S, P), in ascending order.

    Raises:
        ConfigurationError: If P is not symmetric positive definite
    """
    P = validate_positive_definite(np.asarray(P, dtype=float), "trigger.P")
    S = np.asarray(S, dtype=float)
    return eigh(0.5 * (S + S.T), P, eigvals_only=True)


def generalized_max_eigenvalue(S: np.ndarray, P: np.ndarray) -> float:
    """Largest eigenvalue of the pencil (S, P)."""
    return float(generalized_eigenvalues(S, P)[-1])


def drift_bracket(sys: StackedSystem, P: np.ndarray) -> np.ndarray:
    """
    Symmetric matrix bounding the generator of W along the flow.

    S = P A + A^T P + B^T P B + P^T P + (L_f Phi Theta)^T (L_f Phi Theta), with
    A = Phi C Theta and B = Phi D Theta.
    """
    A = sys.drift_matrix
    B = sys.diffusion_matrix
    lip = sys.L_f @ sys.projector
    return P @ A + A.T @ P + B.T @ P @ B + P.T @ P + lip.T @ lip


def compute_lambda(sys: StackedSystem, P: np.ndarray) -> float:
    """
    Drift growth constant lambda = max(0, mu_max(S, P)).

    Raises:
        ConfigurationError: If P is not positive definite or does not match the system
    """
    _check_size(sys, P)
    return max(0.0, generalized_max_eigenvalue(drift_bracket(sys, P), P))


def _jump_contraction(J: np.ndarray, P: np.ndarray) -> float:
    return max(0.0, generalized_max_eigenvalue(J.T @ P @ J, P))


def compute_lambda1(sys: StackedSystem, P: np.ndarray, alpha: float, tau: float) -> float:
    """
    Jump contraction constant of the delay-free impulse.

    lambda1 = mu_max(J^T P J, P) with J = exp(alpha tau) I + K H~ Phi Theta, where tau is
    the floor of the energy consumption.
    """
    _check_size(sys, P)
    J = math.exp(alpha * tau) * np.eye(sys.dim) + sys.K @ sys.H_tilde @ sys.projector
    return _jump_contraction(J, P)


def compute_lambda1_tilde(sys: StackedSystem, P: np.ndarray) -> float:
    """Jump contraction constant of the delayed impulse, J = K~ H~ Phi Theta."""
    _check_size(sys, P)
    return _jump_contraction(sys.K @ sys.H_tilde @ sys.projector, P)


def _check_size(sys: StackedSystem, P: np.ndarray) -> None:
    if np.shape(P) != (sys.dim, sys.dim):
        raise ConfigurationError(
            f"P must be {sys.dim}x{sys.dim} for this system, got "
            f"{'x'.join(str(s) for s in np.shape(P))}",
            field_path="trigger.P",
        )


def overshoot_constant(lam: float, params: TriggerParams) -> float:
    """M = psi1 exp((lambda + gamma) delta) lambda_max(P) / lambda_min(P)."""
    spectrum = np.linalg.eigvalsh(params.P)
    condition = spectrum[-1] / spectrum[0]
    return params.psi1 * math.exp((lam + params.gamma) * params.delta) * condition


def _certificate(gamma_bar: float, lam: float, params: TriggerParams) -> CertificateResult:
    certified = 0 < params.gamma <= gamma_bar
    if gamma_bar > 0 and not certified:
        logger.warning(
            "Configured gamma=%g exceeds the certified rate %.6g", params.gamma, gamma_bar
        )
    return CertificateResult(
        feasible=gamma_bar > 0,
        gamma_bar=gamma_bar,
        M=overshoot_constant(lam, params),
        gamma=params.gamma,
        gamma_certified=certified,
    )


def certify_no_delay(
    lam: float, lam1: float, params: TriggerParams, alpha: float, tau: float
) -> CertificateResult:
    """
    Certified rate of the delay-free controller.

    gamma_bar = (2 alpha tau - ln psi2 - ln lambda1 - lambda delta) / delta; feasible iff
    gamma_bar > 0. A jump that annihilates the state (lambda1 = 0) is reported as
    feasible with gamma_bar capped at config["numerics"]["gamma_bar_cap"].
    """
    if lam1 <= 0:
        gamma_bar = float(get_setting("numerics", "gamma_bar_cap"))
    else:
        gamma_bar = (
            2 * alpha * tau - math.log(params.psi2) - math.log(lam1) - lam * params.delta
        ) / params.delta
    return _certificate(gamma_bar, lam, params)


def certify_delayed(
    lam: float, lam1_tilde: float, params: TriggerParams, alpha: float, beta: float
) -> CertificateResult:
    """
    Certified rate of the delayed controller.

    gamma_bar' = ((2 alpha beta - lambda) delta - ln psi2 - ln lambda1~) / (2 delta), with
    beta the largest minimum-power slope over the agents.
    """
    if lam1_tilde <= 0:
        gamma_bar = float(get_setting("numerics", "gamma_bar_cap"))
    else:
        gamma_bar = (
            (2 * alpha * beta - lam) * params.delta
            - math.log(params.psi2)
            - math.log(lam1_tilde)
        ) / (2 * params.delta)
    return _certificate(gamma_bar, lam, params)


def decay_check(
    stats: EnsembleStats,
    gamma: float,
    M: float,
    slack: Optional[float] = None,
    initial: Optional[float] = None,
) -> DecayResult:
    """
    Check the mean-square bound E|y(t)|^2 <= slack M exp(-gamma t) E|y(0)|^2 on the grid.

    Args:
        stats: Ensemble statistics
        gamma: Decay rate
        M: Overshoot constant
        slack: Multiplicative allowance for Monte Carlo error (config default 1.5)
        initial: E|y(0)|^2; defaults to the first point of the mean-square curve

    Returns:
        Verdict with the smallest ratio bound / observed as margin

    Raises:
        UsageError: If the statistics are empty
    """
    if stats.mean_sq.size == 0:
        raise UsageError("decay_check needs a nonempty mean-square curve")
    slack = get_setting("ensemble", "decay_slack") if slack is None else slack
    initial = float(stats.mean_sq[0]) if initial is None else initial

    bound = slack * M * np.exp(-gamma * stats.times) * initial
    observed = stats.mean_sq
    positive = observed > 0
    margin = float(np.min(bound[positive] / observed[positive])) if positive.any() else math.inf

    fitted: Optional[float] = None
    if positive.sum() >= 2:
        slope = np.polyfit(stats.times[positive], np.log(observed[positive]), 1)[0]
        fitted = float(-slope)

    return DecayResult(passed=margin >= 1.0, margin=margin, slack=slack, fitted_rate=fitted)


def check_zeno(log: EventLog, delta: float) -> int:
    """
    Count gaps of an event log that break the sampling grid.

    A gap violates the grid when it is shorter than delta or not an integer multiple of
    it (relative tolerance 1e-6); the first gap is measured from t = 0.

    Returns:
        Number of violations
    """
    violations = 0
    for gap in log.gaps:
        periods = gap / delta
        if periods < 1 - 1e-6 or abs(periods - round(periods)) > 1e-6:
            violations += 1
    return violations


def trigger_report(logs: Sequence[EventLog], delta: float, horizon: float) -> TriggerReport:
    """
    Event counts against the fixed-period controller updating at every sampling instant.

    Raises:
        UsageError: If no logs are given or the horizon is shorter than delta
    """
    if not logs:
        raise UsageError("trigger_report needs at least one event log")
    baseline = int(math.floor(horizon / delta + 1e-9))
    if baseline < 1:
        raise UsageError(f"horizon {horizon} is shorter than delta {delta}")
    counts = [len(log) for log in logs]
    mean_count = float(np.mean(counts))
    gaps = [log.gaps.min() for log in logs if len(log)]
    return TriggerReport(
        counts=counts,
        mean_count=mean_count,
        baseline=baseline,
        reduction=1.0 - mean_count / baseline,
        min_gap=float(min(gaps)) if gaps else None,
        zeno_violations=sum(check_zeno(log, delta) for log in logs),
    )


def verify_scenario(scenario: "Scenario", strict: bool = False) -> CertificateReport:
    """
    Check every assumption of the scenario and compute its stability certificate.

    Args:
        scenario: Validated scenario
        strict: Make a failed matching check fail the verification

    Returns:
        Certificate report; report.passed tells whether every mandatory check holds
    """
    sys = scenario.system
    params = scenario.trigger
    checks: List[AssumptionCheck] = []

    for agent in sys.agents:
        matching = check_matching(agent, sys.leader)
        matching.mandatory = strict
        if not matching.passed:
            log = logger.error if strict else logger.warning
            log("Matching condition fails for %s: %s", agent.name, matching.detail)
        checks.append(matching)
        checks.append(check_embedding(agent))
        checks.append(check_lipschitz(agent.f, agent.n, name=agent.name))
    checks.append(check_lipschitz(sys.leader.f, sys.leader.n0, name="leader"))

    grid = np.linspace(0.0, scenario.sim.horizon, 101)
    tau_floor = min(p.tau0 for p in sys.energy)
    beta = max(p.beta for p in sys.energy)
    mode = scenario.mode

    if mode == "delayed":
        passed, shortfall = check_energy_slope(sys.energy, grid)
        checks.append(AssumptionCheck("energy_slope", passed, shortfall))
        delay_ok = 0 <= scenario.actuation_delay < params.delta
        checks.append(
            AssumptionCheck(
                "delay_below_delta",
                delay_ok,
                max(scenario.actuation_delay - params.delta, 0.0),
                "" if delay_ok else "actuation delay must be shorter than delta",
            )
        )
        lam = compute_lambda(sys, params.P)
        lam1 = None
        lam1_tilde = compute_lambda1_tilde(sys, params.P)
        result = certify_delayed(lam, lam1_tilde, params, sys.alpha, beta)
    else:
        passed, shortfall = check_energy_floor(sys.energy, tau_floor, grid)
        checks.append(AssumptionCheck("energy_floor", passed, shortfall))
        gains_ok = bool(np.all(sys.gains < 0))
        checks.append(
            AssumptionCheck(
                "negative_gains",
                gains_ok,
                max(float(np.max(sys.gains)), 0.0),
                "" if gains_ok else "the delay-free impulse needs every gain < 0",
            )
        )
        lam = compute_lambda(sys, params.P)
        lam1 = compute_lambda1(sys, params.P, sys.alpha, tau_floor)
        lam1_tilde = None
        result = certify_no_delay(lam, lam1, params, sys.alpha, tau_floor)

    checks.append(
        AssumptionCheck(
            "gamma_certified",
            result.gamma_certified,
            max(result.gamma - result.gamma_bar, 0.0),
            "" if result.gamma_certified else "configured gamma is not certified",
            mandatory=False,
        )
    )

    report = CertificateReport(
        mode=mode,
        lambda_=lam,
        gamma_bar=result.gamma_bar,
        gamma=result.gamma,
        gamma_certified=result.gamma_certified,
        M=result.M,
        feasible=result.feasible,
        delta=params.delta,
        psi1=params.psi1,
        psi2=params.psi2,
        alpha=sys.alpha,
        tau_floor=tau_floor,
        beta=beta,
        lambda1=lam1,
        lambda1_tilde=lam1_tilde,
        assumptions=checks,
        diffusion_bounds=diffusion_bound_ratio(sys),
    )
    logger.info(
        "Certificate (%s): lambda=%.6g, gamma_bar=%.6g, feasible=%s, passed=%s",
        mode,
        lam,
        result.gamma_bar,
        result.feasible,
        report.passed,
    )
    return report
