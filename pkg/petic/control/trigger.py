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
Periodic event-triggering mechanism.

The weighted Lyapunov value W(t, y) = exp(gamma t) y^T P y is compared against its value
at a reference instant, but only at multiples of the sampling period delta counted from
that reference. The first reference is t = 0 with threshold psi1; after every impulse the
reference becomes the impulse instant t_s with the post-jump state and threshold psi2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import ConfigurationError, InternalInvariantError
from ..validators import (
    validate_at_least,
    validate_grid_multiple,
    validate_matrix,
    validate_positive,
    validate_positive_definite,
)

logger = logging.getLogger("petic.control.trigger")


@dataclass(frozen=True, eq=False)
class TriggerParams:
    """
    Constants of the triggering mechanism.

    Attributes:
        delta: Sampling period (seconds, > 0)
        psi1: Threshold factor of the first event (>= 1)
        psi2: Threshold factor of subsequent events (>= 1)
        gamma: Decay weight inside W (> 0)
        P: Symmetric positive definite weighting matrix
    """

    delta: float
    psi1: float
    psi2: float
    gamma: float
    P: np.ndarray

    def __post_init__(self):
        validate_positive(self.delta, "trigger.delta")
        validate_at_least(self.psi1, 1.0, "trigger.psi1")
        validate_at_least(self.psi2, 1.0, "trigger.psi2")
        validate_positive(self.gamma, "trigger.gamma")
        P = validate_matrix(self.P, "trigger.P", square=True)
        P = validate_positive_definite(P, "trigger.P")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)

    @classmethod
    def with_scalar_p(
        cls, delta: float, psi1: float, psi2: float, gamma: float, c: float, dim: int
    ) -> "TriggerParams":
        """Build parameters with P = c I_dim."""
        return cls(delta=delta, psi1=psi1, psi2=psi2, gamma=gamma, P=c * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.P.shape[0]


def lyapunov_W(t: float, y: np.ndarray, params: TriggerParams) -> float:
    """
    Weighted Lyapunov value exp(gamma t) y^T P y.

    Args:
        t: Time
        y: Stacked virtual state
        params: Trigger constants

    Returns:
        W >= 0
    """
    return math.exp(params.gamma * t) * float(y @ params.P @ y)


def should_trigger(
    t_candidate: float,
    W_now: float,
    W_ref: float,
    is_first: bool,
    params: TriggerParams,
) -> bool:
    """
    Evaluate the trigger condition at a sampling instant.

    Args:
        t_candidate: Sampling instant, reference instant plus a positive multiple of delta
        W_now: W at the sampling instant (pre-impulse)
        W_ref: W at the reference instant
        is_first: Whether the reference is t = 0 (no impulse yet)
        params: Trigger constants

    Returns:
        True iff W_now > psi W_ref, with psi = psi1 for the first event and psi2 after

    Raises:
        InternalInvariantError: If either W value is negative
    """
    if W_now < 0 or W_ref < 0:
        raise InternalInvariantError(
            f"Lyapunov values must be nonnegative (W_now={W_now}, W_ref={W_ref}) "
            f"at t={t_candidate}"
        )
    psi = params.psi1 if is_first else params.psi2
    return W_now > psi * W_ref


def w_ratio(W_now: float, W_ref: float) -> float:
    """W_now / W_ref, with 0/0 = 0 and x/0 = inf."""
    if W_ref > 0:
        return W_now / W_ref
    return 0.0 if W_now == 0 else math.inf


class PeriodicEventTrigger:
    """
    Trigger state of one sample path, working in integer integrator steps.

    Args:
        params: Trigger constants
        step: Integrator step h; delta must be a multiple of it
    """

    def __init__(self, params: TriggerParams, step: float):
        self.params = params
        self.step = step
        self.period = validate_grid_multiple(params.delta, step, "trigger.delta")
        if self.period < 1:
            raise ConfigurationError(
                f"delta={params.delta} is shorter than the integrator step {step}",
                field_path="trigger.delta",
            )
        self.ref_index = 0
        self.W_ref = 0.0
        self.is_first = True
        self.last_ratio: Optional[float] = None

    def start(self, y0: np.ndarray) -> None:
        """Take W(y(0)) as the reference of the first event."""
        self.ref_index = 0
        self.W_ref = lyapunov_W(0.0, y0, self.params)
        self.is_first = True
        self.last_ratio = None

    def is_check_step(self, index: int) -> bool:
        """Whether step index lies on the sampling grid of the current reference."""
        offset = index - self.ref_index
        return offset > 0 and offset % self.period == 0

    def check(self, index: int, y: np.ndarray) -> Tuple[bool, float]:
        """
        Evaluate the trigger on the pre-impulse state at a grid step.

        Returns:
            (fired, W ratio against the reference)
        """
        t = index * self.step
        W_now = lyapunov_W(t, y, self.params)
        fired = should_trigger(t, W_now, self.W_ref, self.is_first, self.params)
        self.last_ratio = w_ratio(W_now, self.W_ref)
        logger.debug("t=%.6g W ratio %.6g%s", t, self.last_ratio, " (fire)" if fired else "")
        return fired, self.last_ratio

    def reset(self, index: int, y_post: np.ndarray) -> None:
        """Make the impulse instant, with its post-jump state, the new reference."""
        self.ref_index = index
        self.W_ref = lyapunov_W(index * self.step, y_post, self.params)
        self.is_first = False
