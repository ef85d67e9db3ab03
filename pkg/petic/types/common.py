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
Common type definitions for petic.

Literal aliases used across modules and the TypedDict shapes of the JSON report.
"""

from typing import Dict, List, Literal, Optional, TypedDict

# Impulse law applied at event instants
ControlMode = Literal["no_delay", "delayed", "none"]

# Control modes a scenario file may select
ScenarioMode = Literal["no_delay", "delayed"]

# Built-in nonlinearity catalogue
NonlinearityKind = Literal["zero", "sine_bank"]

# When impulses are applied: on PETM events or at every sampling instant
TriggerSchedule = Literal["event", "periodic"]


class AssumptionDict(TypedDict):
    """Verdict of one assumption check in the JSON report."""

    name: str
    passed: bool
    mandatory: bool
    residual: Optional[float]
    detail: str


class CertificateDict(TypedDict, total=False):
    """Stability certificate section of the JSON report."""

    mode: str
    lambda_: float
    lambda1: Optional[float]
    lambda1_tilde: Optional[float]
    gamma_bar: float
    gamma: float
    gamma_certified: bool
    M: float
    feasible: bool
    tau_floor: float
    beta: float
    assumptions: List[AssumptionDict]
    diffusion_bounds: Dict[str, float]


class TriggerStatsDict(TypedDict):
    """Trigger statistics section of the JSON report."""

    counts: List[int]
    mean_count: float
    baseline: int
    reduction: float
    min_gap: Optional[float]
    zeno_violations: int


class DecayDict(TypedDict):
    """Mean-square decay verdict of the JSON report."""

    passed: bool
    margin: float
    slack: float
    fitted_rate: Optional[float]
