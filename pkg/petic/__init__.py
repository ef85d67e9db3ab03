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
petic: periodic event-triggered impulsive consensus of heterogeneous stochastic agents.

This module is the main entry point of the package. It exposes the model builders, the
controllers and their trigger, the Euler-Maruyama simulator, the stability certificate
and the scenario loader.
"""

import os

# Topology and dynamics
from .topology import (
    EnergyProfile,
    TopologySpec,
    adjacency_at,
    edge_weight,
    energy_weights,
    gamma_matrix,
    information_matrix,
    leader_weights_at,
)
from .system import (
    AgentSpec,
    LeaderSpec,
    NonlinearitySpec,
    SineTerm,
    StackedSystem,
    build_stacked,
    check_embedding,
    check_matching,
    error_state,
    eval_diffusion,
    eval_drift,
    lift,
    project,
)

# Control
from .control import (
    TriggerParams,
    get_controller,
    impulse_no_delay,
    impulse_with_delay,
    list_controllers,
    lyapunov_W,
    register_controller,
    should_trigger,
)

# Simulation and analysis
from .simulator import SimParams, arun_ensemble, em_step, run_ensemble, run_trajectory
from .analysis import (
    certify_delayed,
    certify_no_delay,
    compute_lambda,
    compute_lambda1,
    compute_lambda1_tilde,
    decay_check,
    trigger_report,
    verify_scenario,
)
from .models import CertificateReport, EnsembleStats, EventLog, Trajectory

# Scenarios and configuration
from .scenario import (
    Scenario,
    dump_scenario,
    list_bundled_scenarios,
    load_scenario,
    load_scenario_text,
)
from .config import configure_logging, get_setting, update_config

# Error handling
from .errors import (
    ConfigurationError,
    EnsembleFailureError,
    InternalInvariantError,
    NumericalBlowupError,
    PeticError,
    ScenarioParseError,
    UsageError,
    ValidationError,
)


def get_version() -> str:
    """
    Read and return the package version from the .version file.

    Returns:
        str: The current version of the package
    """
    version_file = os.path.join(os.path.dirname(__file__), ".version")
    with open(version_file, "r", encoding="utf-8") as f:
        return f.read().strip()


# Initialize package version from .version file
__version__ = get_version()

__license__ = "Apache-2.0"

# Module exports - defines the public API of the package
__all__ = [
    # Topology and dynamics
    "EnergyProfile",
    "TopologySpec",
    "edge_weight",
    "information_matrix",
    "gamma_matrix",
    "energy_weights",
    "adjacency_at",
    "leader_weights_at",
    "LeaderSpec",
    "AgentSpec",
    "NonlinearitySpec",
    "SineTerm",
    "StackedSystem",
    "build_stacked",
    "check_matching",
    "check_embedding",
    "error_state",
    "lift",
    "project",
    "eval_drift",
    "eval_diffusion",
    # Control
    "TriggerParams",
    "lyapunov_W",
    "should_trigger",
    "impulse_no_delay",
    "impulse_with_delay",
    "register_controller",
    "get_controller",
    "list_controllers",
    # Simulation and analysis
    "SimParams",
    "em_step",
    "run_trajectory",
    "run_ensemble",
    "arun_ensemble",
    "compute_lambda",
    "compute_lambda1",
    "compute_lambda1_tilde",
    "certify_no_delay",
    "certify_delayed",
    "decay_check",
    "trigger_report",
    "verify_scenario",
    "Trajectory",
    "EventLog",
    "EnsembleStats",
    "CertificateReport",
    # Scenarios and configuration
    "Scenario",
    "load_scenario",
    "load_scenario_text",
    "dump_scenario",
    "list_bundled_scenarios",
    "get_setting",
    "update_config",
    "configure_logging",
    # Error handling
    "PeticError",
    "ConfigurationError",
    "ValidationError",
    "ScenarioParseError",
    "NumericalBlowupError",
    "InternalInvariantError",
    "UsageError",
    "EnsembleFailureError",
]
