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
Energy-driven time-varying topology.

The follower graph carries base weights a_ij and leader-link weights b_i that are
attenuated by each agent's energy consumption tau_i(t):

    a_ij(t) = a_ij * exp(-alpha * tau_i(t)),    b_i(t) = b_i * exp(-alpha * tau_i(t))

Stacked quantities use the agent-major layout y = [y_1; ...; y_N]; matrices acting on
the agent index are lifted as X kron I_m. This is the same linear operator as the
component-major lift I_m kron X under the perfect-shuffle permutation between layouts.
"""

import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError
from .validators import (
    validate_matrix,
    validate_nonnegative,
    validate_positive,
    validate_vector,
)


class EnergyModel(Protocol):
    """Anything that yields a deterministic, nondecreasing energy consumption tau_i(t)."""

    tau0: float
    beta: float

    def at(self, t: float) -> float:
        ...


@dataclass(frozen=True)
class EnergyProfile:
    """
    Affine energy consumption tau_i(t) = tau0 + beta * t.

    Attributes:
        tau0: Base consumption (dimensionless, >= 0)
        beta: Minimum power slope (per second, >= 0)
    """

    tau0: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        validate_nonnegative(self.tau0, "energy.tau0")
        validate_nonnegative(self.beta, "energy.beta")

    def at(self, t: float) -> float:
        """Energy consumed at time t >= 0."""
        return self.tau0 + self.beta * t


@dataclass(frozen=True, eq=False)
class TopologySpec:
    """
    Follower graph with leader links.

    Either h_override or both abar and bbar must be given; h_override takes precedence.

    Attributes:
        n_agents: Number of followers N
        alpha: Energy sensitivity (> 0)
        abar: N x N base weights, nonnegative with zero diagonal
        bbar: Length-N leader-link weights, nonnegative and not all zero
        h_override: N x N information-exchange matrix supplied directly
    """

    n_agents: int
    alpha: float
    abar: Optional[np.ndarray] = None
    bbar: Optional[np.ndarray] = None
    h_override: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.n_agents
        if n < 1:
            raise ConfigurationError("topology must have at least one agent",
                                     field_path="topology")
        validate_positive(self.alpha, "topology.alpha")

        if self.h_override is not None:
            h = validate_matrix(self.h_override, "topology.h", shape=(n, n))
            h.setflags(write=False)
            object.__setattr__(self, "h_override", h)

        if self.abar is None and self.bbar is None:
            if self.h_override is None:
                raise ConfigurationError(
                    "topology needs either h or both abar and bbar", field_path="topology"
                )
            return
        if self.abar is None or self.bbar is None:
            raise ConfigurationError(
                "abar and bbar must be given together", field_path="topology"
            )

        abar = validate_matrix(self.abar, "topology.abar", shape=(n, n))
        bbar = validate_vector(self.bbar, "topology.bbar", length=n)
        if np.any(abar < 0):
            raise ConfigurationError("abar entries must be >= 0", field_path="topology.abar")
        if np.any(np.diag(abar) != 0):
            raise ConfigurationError("abar must have a zero diagonal", field_path="topology.abar")
        if np.any(bbar < 0):
            raise ConfigurationError("bbar entries must be >= 0", field_path="topology.bbar")
        if not np.any(bbar > 0):
            raise ConfigurationError(
                "at least one agent must be linked to the leader (bbar is all zero)",
                field_path="topology.bbar",
            )
        abar.setflags(write=False)
        bbar.setflags(write=False)
        object.__setattr__(self, "abar", abar)
        object.__setattr__(self, "bbar", bbar)


def edge_weight(abar_ij: float, alpha: float, tau_i: float) -> float:
    """
    Energy-attenuated weight a_ij(t) = a_ij * exp(-alpha * tau_i).

    The same formula yields the leader-link weight b_i(t) from b_i.

    Args:
        abar_ij: Base weight (>= 0)
        alpha: Energy sensitivity (> 0)
        tau_i: Energy consumed by the receiving agent at t (>= 0)

    Returns:
        The time-varying weight

    Raises:
        ConfigurationError: If tau_i < 0, abar_ij < 0 or alpha <= 0
    """
    if tau_i < 0:
        raise ConfigurationError(f"energy consumption cannot be negative, got {tau_i}")
    if abar_ij < 0:
        raise ConfigurationError(f"base weight must be >= 0, got {abar_ij}")
    if alpha <= 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")
    return abar_ij * math.exp(-alpha * tau_i)


def information_matrix(spec: TopologySpec) -> np.ndarray:
    """
    Information-exchange matrix H = -L + B.

    L has the row sums of abar on its diagonal and -abar_ij off the diagonal;
    B = diag(bbar). A supplied h_override is returned unchanged.

    Args:
        spec: Validated topology

    Returns:
        N x N matrix H
    """
    if spec.h_override is not None:
        return spec.h_override
    laplacian = np.diag(spec.abar.sum(axis=1)) - spec.abar
    return -laplacian + np.diag(spec.bbar)


def energy_levels(profiles: Sequence[EnergyModel], t: float) -> np.ndarray:
    """Vector (tau_1(t), ..., tau_N(t))."""
    return np.array([p.at(t) for p in profiles], dtype=float)


def energy_weights(profiles: Sequence[EnergyModel], t: float, alpha: float) -> np.ndarray:
    """
    Per-agent attenuation factors exp(-alpha * tau_i(t)).

    Raises:
        ConfigurationError: If any tau_i(t) is negative
    """
    taus = energy_levels(profiles, t)
    if np.any(taus < 0):
        raise ConfigurationError(f"energy consumption cannot be negative at t={t}")
    return np.exp(-alpha * taus)


def gamma_matrix(profiles: Sequence[EnergyModel], t: float, m: int) -> np.ndarray:
    """
    Stacked energy matrix Gamma(t) = diag(tau_i(t)) kron I_m (agent-major).

    Args:
        profiles: Energy profile of every agent
        t: Time (>= 0)
        m: Virtual state dimension

    Returns:
        mN x mN diagonal matrix
    """
    if t < 0:
        raise ConfigurationError(f"time must be >= 0, got {t}")
    return np.kron(np.diag(energy_levels(profiles, t)), np.eye(m))


def adjacency_at(spec: TopologySpec, profiles: Sequence[EnergyModel], t: float) -> np.ndarray:
    """
    Time-varying adjacency A(t); row i is attenuated by agent i's energy.

    Raises:
        ConfigurationError: If the topology was given only through h
    """
    if spec.abar is None:
        raise ConfigurationError(
            "A(t) needs base weights; this topology was given as h only", field_path="topology"
        )
    return spec.abar * energy_weights(profiles, t, spec.alpha)[:, None]


def leader_weights_at(
    spec: TopologySpec, profiles: Sequence[EnergyModel], t: float
) -> np.ndarray:
    """
    Diagonal of the time-varying leader-link matrix B(t).

    Raises:
        ConfigurationError: If the topology was given only through h
    """
    if spec.bbar is None:
        raise ConfigurationError(
            "B(t) needs leader weights; this topology was given as h only",
            field_path="topology",
        )
    return spec.bbar * energy_weights(profiles, t, spec.alpha)


def check_energy_floor(
    profiles: Sequence[EnergyModel], tau: float, times: Sequence[float]
) -> Tuple[bool, float]:
    """
    Check tau_i(t) >= tau on a time grid (minimum energy consumption).

    Returns:
        (passed, worst shortfall max(tau - tau_i(t), 0))
    """
    shortfall = 0.0
    for t in times:
        shortfall = max(shortfall, float(np.max(tau - energy_levels(profiles, t))))
    return shortfall <= 0.0, max(shortfall, 0.0)


def check_energy_slope(
    profiles: Sequence[EnergyModel], times: Sequence[float]
) -> Tuple[bool, float]:
    """
    Check tau_i(t) >= beta_i * t on a time grid (minimum power).

    Returns:
        (passed, worst shortfall max(beta_i * t - tau_i(t), 0))
    """
    shortfall = 0.0
    for t in times:
        for p in profiles:
            shortfall = max(shortfall, p.beta * t - p.at(t))
    return shortfall <= 0.0, shortfall
