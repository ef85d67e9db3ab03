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

"""Open-loop system: no trigger checks and no impulses."""

from typing import Optional

import numpy as np

from .base import ImpulseController


class UncontrolledController(ImpulseController):
    """Leaves the state untouched; the simulator skips trigger evaluation entirely."""

    applies_impulses = False

    def jump(
        self, y_minus: np.ndarray, t_s: float, y_delayed: Optional[np.ndarray] = None
    ) -> np.ndarray:
        return y_minus
