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
Result model definitions for petic.

This module contains the data models produced by the simulator and the analysis
routines: event logs, trajectories, ensemble statistics, certificates and reports.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

import numpy as np

from .errors import InternalInvariantError
from .types import AssumptionDict, CertificateDict, DecayDict, TriggerStatsDict


@dataclass(frozen=True)
class EventRecord:
    """
    A single impulse instant selected by the triggering mechanism.

    Attributes:
        index: Event number s (0 for the first event t_0)
        time: Impulse instant t_s
        gap: t_s - t_{s-1} (t_0 - 0 for the first event)
        w_ratio: W(y(t_s^-)) / W(reference) at the trigger check
    """

    index: int
    time: float
    gap: float
    w_ratio: float


@dataclass
class EventLog:
    """Ordered list of events of one sample path."""

    records: List[EventRecord] = field(default_factory=list)

    def append(self, time: float, w_ratio: float) -> EventRecord:
        """
        Append an event, computing its index and gap.

        Args:
            time: Impulse instant
            w_ratio: W ratio observed at the trigger check

        Returns:
            The new record

        Raises:
            InternalInvariantError: If instants are not strictly increasing or t_0 is 0
        """
        previous = self.records[-1].time if self.records else 0.0
        if time <= previous:
            raise InternalInvariantError(
                f"event instants must be strictly increasing and positive "
                f"(got {time} after {previous})"
            )
        record = EventRecord(len(self.records), time, time - previous, w_ratio)
        self.records.append(record)
        return record

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.records], dtype=float)

    @property
    def gaps(self) -> np.ndarray:
        return np.array([r.gap for r in self.records], dtype=float)

    @property
    def last(self) -> Optional[EventRecord]:
        return self.records[-1] if self.records else None

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)


@dataclass
class Trajectory:
    """
    One simulated sample path.

    Attributes:
        times: Recorded time grid
        states: Virtual states y(t), one row per recorded instant
        sq_norm: |y(t)|^2 at the recorded instants
        events: Impulse instants of the path
        errors: Per-agent error states z_i(t) = Theta_i y_i(t)
        energy: Energy consumption tau_i(t), one column per agent
        leader: Leader state x_0(t), when the leader was integrated alongside
        followers: Absolute follower states x_i(t) = z_i + Xi_i x_0 + offset_i
        seed: Run seed the Brownian path was drawn from
        schedule: "event" for PETM triggering, "periodic" for the fixed-period baseline
    """

    times: np.ndarray
    states: np.ndarray
    sq_norm: np.ndarray
    events: EventLog
    errors: List[np.ndarray]
    energy: np.ndarray
    leader: Optional[np.ndarray] = None
    followers: Optional[List[np.ndarray]] = None
    seed: Optional[int] = None
    schedule: str = "event"


@dataclass
class EnsembleStats:
    """
    Monte Carlo statistics over independent runs.

    Attributes:
        times: Common recorded time grid
        mean_sq: Sample mean of |y(t)|^2 over the included runs
        single_path: |y(t)|^2 of the first included run
        counts: Event count of every included run
        logs: Event log of every included run
        gap_mean: Mean inter-event gap over all runs (None without events)
        gap_min: Smallest inter-event gap over all runs
        gap_max: Largest inter-event gap over all runs
        n_runs: Number of attempted runs
        excluded: Indices of runs excluded after diverging
    """

    times: np.ndarray
    mean_sq: np.ndarray
    single_path: np.ndarray
    counts: List[int]
    logs: List[EventLog]
    gap_mean: Optional[float]
    gap_min: Optional[float]
    gap_max: Optional[float]
    n_runs: int
    excluded: List[int] = field(default_factory=list)


@dataclass
class AssumptionCheck:
    """
    Verdict of one assumption check.

    Attributes:
        name: Short identifier, e.g. "matching[uav1]"
        passed: Whether the check holds within tolerance
        residual: Largest violation measured (0 when exact), if applicable
        detail: Human-readable explanation
        mandatory: Whether a failure makes the overall verification fail
    """

    name: str
    passed: bool
    residual: Optional[float] = None
    detail: str = ""
    mandatory: bool = True

    def to_dict(self) -> AssumptionDict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "mandatory": bool(self.mandatory),
            "residual": None if self.residual is None else float(self.residual),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CertificateResult:
    """
    Outcome of a feasibility check of the stability conditions.

    Attributes:
        feasible: Whether the certified rate is strictly positive
        gamma_bar: Largest certified decay rate
        M: Overshoot constant of the mean-square bound for the configured gamma
        gamma: Configured decay weight
        gamma_certified: Whether 0 < gamma <= gamma_bar
    """

    feasible: bool
    gamma_bar: float
    M: float
    gamma: float
    gamma_certified: bool


@dataclass
class CertificateReport:
    """
    Stability certificate of a scenario and the assumption verdicts behind it.

    lambda1 is set for the delay-free controller, lambda1_tilde for the delayed one.
    """

    mode: str
    lambda_: float
    gamma_bar: float
    gamma: float
    gamma_certified: bool
    M: float
    feasible: bool
    delta: float
    psi1: float
    psi2: float
    alpha: float
    tau_floor: float
    beta: float
    lambda1: Optional[float] = None
    lambda1_tilde: Optional[float] = None
    assumptions: List[AssumptionCheck] = field(default_factory=list)
    diffusion_bounds: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Whether the certificate is feasible and every mandatory check holds."""
        return self.feasible and all(a.passed for a in self.assumptions if a.mandatory)

    def recompute_gamma_bar(self) -> float:
        """
        Recompute the certified rate from the stored constants.

        Returns:
            gamma_bar as implied by lambda_, lambda1 (or lambda1_tilde) and the trigger data
        """
        if self.mode == "delayed":
            contraction = self.lambda1_tilde
            if not contraction:
                return self.gamma_bar
            numerator = (
                (2 * self.alpha * self.beta - self.lambda_) * self.delta
                - math.log(self.psi2)
                - math.log(contraction)
            )
            return numerator / (2 * self.delta)
        contraction = self.lambda1
        if not contraction:
            return self.gamma_bar
        numerator = (
            2 * self.alpha * self.tau_floor
            - math.log(self.psi2)
            - math.log(contraction)
            - self.lambda_ * self.delta
        )
        return numerator / self.delta

    def to_dict(self) -> CertificateDict:
        return {
            "mode": self.mode,
            "lambda_": self.lambda_,
            "lambda1": self.lambda1,
            "lambda1_tilde": self.lambda1_tilde,
            "gamma_bar": self.gamma_bar,
            "gamma": self.gamma,
            "gamma_certified": self.gamma_certified,
            "M": self.M,
            "feasible": self.feasible,
            "tau_floor": self.tau_floor,
            "beta": self.beta,
            "assumptions": [a.to_dict() for a in self.assumptions],
            "diffusion_bounds": dict(self.diffusion_bounds),
        }


@dataclass(frozen=True)
class DecayResult:
    """
    Verdict of the mean-square exponential bound on an ensemble.

    Attributes:
        passed: Whether the bound holds on the whole grid
        margin: Smallest ratio bound / observed over the grid (inf when nothing is observed)
        slack: Multiplicative slack applied to the theoretical bound
        fitted_rate: Negated least-squares slope of ln E|y(t)|^2, for diagnostics
    """

    passed: bool
    margin: float
    slack: float
    fitted_rate: Optional[float]

    def to_dict(self) -> DecayDict:
        return {
            "passed": self.passed,
            "margin": self.margin,
            "slack": self.slack,
            "fitted_rate": self.fitted_rate,
        }


@dataclass(frozen=True)
class TriggerReport:
    """
    Event counts against the fixed-period baseline.

    Attributes:
        counts: Event count of every run
        mean_count: Mean event count
        baseline: Number of updates of the fixed-period controller, floor(horizon / delta)
        reduction: 1 - mean_count / baseline
        min_gap: Smallest inter-event gap over all runs (None without events)
        zeno_violations: Number of gaps that are shorter than delta or off the grid
    """

    counts: List[int]
    mean_count: float
    baseline: int
    reduction: float
    min_gap: Optional[float]
    zeno_violations: int

    def to_dict(self) -> TriggerStatsDict:
        return {
            "counts": list(self.counts),
            "mean_count": self.mean_count,
            "baseline": self.baseline,
            "reduction": self.reduction,
            "min_gap": self.min_gap,
            "zeno_violations": self.zeno_violations,
        }
