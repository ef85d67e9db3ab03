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
Delay-free additive impulse.

    y(t_s) = y(t_s^-) + exp(-alpha Gamma(t_s)) K H~ Phi Theta y(t_s^-)

Both exp(-alpha Gamma) and K are diagonal in the agent-major layout, so the energy factor
is applied as an elementwise scaling.
"""

from typing import Optional

import numpy as np

from ..errors import ConfigurationError
from ..system import StackedSystem
from ..topology import energy_weights
from .base import ImpulseController


def impulse_no_delay(y_minus: np.ndarray, t_s: float, sys: StackedSystem) -> np.ndarray:
    """
    Additive impulse (I + exp(-alpha Gamma(t_s)) K H~ Phi Theta) y^-.

    Args:
        y_minus: State just before the impulse
        t_s: Impulse instant (energy is evaluated here)
        sys: Stacked system

    Returns:
        State at t_s

    Raises:
        ConfigurationError: If any gain is not negative
    """
    if np.any(sys.gains >= 0):
        raise ConfigurationError(
            "the delay-free impulse needs every gain k_i < 0",
            field_path="agents.gain",
            assumption=6,
        )
    factor = np.repeat(energy_weights(sys.energy, t_s, sys.alpha), sys.m)
    return y_minus + factor * (sys.K @ (sys.H_tilde @ (sys.projector @ y_minus)))


class NoDelayController(ImpulseController):
    """Impulse applied at the trigger instant itself."""

    requires_negative_gains = True

    def jump(
        self, y_minus: np.ndarray, t_s: float, y_delayed: Optional[np.ndarray] = None
    ) -> np.ndarray:
        return impulse_no_delay(y_minus, t_s, self.system)
