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
Impulse with actuation delay.

    y(t_s) = exp(-alpha Gamma(t_s)) K~ H~ Phi Theta y(t_s^- - tau_s)

The post-impulse state replaces the current one; it depends only on the state tau_s
seconds before the impulse instant. Gains may have either sign.
"""

from typing import Optional

import numpy as np

from ..errors import ConfigurationError, InternalInvariantError
from ..system import StackedSystem
from ..topology import energy_weights
from .base import ImpulseController


def impulse_with_delay(
    y_delayed: np.ndarray,
    t_s: float,
    tau_s: float,
    sys: StackedSystem,
    delta: float,
) -> np.ndarray:
    """
    Replacement impulse exp(-alpha Gamma(t_s)) K~ H~ Phi Theta y(t_s^- - tau_s).

    Args:
        y_delayed: State at t_s - tau_s
        t_s: Impulse instant (energy is evaluated here)
        tau_s: Actuation delay
        sys: Stacked system
        delta: Sampling period of the trigger

    Returns:
        State at t_s

    Raises:
        ConfigurationError: If tau_s is negative or not shorter than delta
    """
    _check_delay(tau_s, delta)
    factor = np.repeat(energy_weights(sys.energy, t_s, sys.alpha), sys.m)
    return factor * (sys.K @ (sys.H_tilde @ (sys.projector @ y_delayed)))


def _check_delay(tau_s: float, delta: Optional[float]) -> None:
    if tau_s < 0:
        raise ConfigurationError(
            f"actuation_delay must be >= 0, got {tau_s}", field_path="control.actuation_delay"
        )
    if delta is not None and not tau_s < delta:
        raise ConfigurationError(
            f"actuation_delay={tau_s} must be shorter than delta={delta}",
            field_path="control.actuation_delay",
            assumption=8,
        )


class DelayedController(ImpulseController):
    """Impulse actuated against the state tau_s seconds before the impulse instant."""

    uses_delay = True

    def validate(self) -> None:
        super().validate()
        _check_delay(self.actuation_delay, self.delta)

    def jump(
        self, y_minus: np.ndarray, t_s: float, y_delayed: Optional[np.ndarray] = None
    ) -> np.ndarray:
        if y_delayed is None:
            raise InternalInvariantError(
                f"delayed impulse at t={t_s:.6g} called without the buffered state"
            )
        return impulse_with_delay(y_delayed, t_s, self.actuation_delay, self.system, self.delta)
