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
Impulse laws and the periodic event-triggering mechanism.

This module imports all controller implementations, ensuring they are registered with
the controller registry under their control.mode names.
"""

from .base import ImpulseController, get_controller, list_controllers, register_controller
from .delayed import DelayedController, impulse_with_delay
from .no_delay import NoDelayController, impulse_no_delay
from .none import UncontrolledController
from .trigger import (
    PeriodicEventTrigger,
    TriggerParams,
    lyapunov_W,
    should_trigger,
    w_ratio,
)

register_controller("no_delay", NoDelayController)
register_controller("delayed", DelayedController)
register_controller("none", UncontrolledController)

__all__ = [
    "ImpulseController",
    "NoDelayController",
    "DelayedController",
    "UncontrolledController",
    "register_controller",
    "get_controller",
    "list_controllers",
    "impulse_no_delay",
    "impulse_with_delay",
    "TriggerParams",
    "PeriodicEventTrigger",
    "lyapunov_W",
    "should_trigger",
    "w_ratio",
]
