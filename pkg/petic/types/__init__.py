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
Type definitions for petic.

The types defined here include:
- ControlMode: impulse law selector (no_delay, delayed, none)
- NonlinearityKind: built-in nonlinearity catalogue
- ScenarioMode: control modes accepted in scenario files
- TriggerSchedule: event-triggered or fixed-period impulse schedule
- Report dictionaries: shapes of the JSON report sections
"""

from .common import (
    AssumptionDict,
    CertificateDict,
    ControlMode,
    DecayDict,
    NonlinearityKind,
    ScenarioMode,
    TriggerSchedule,
    TriggerStatsDict,
)

__all__ = [
    "ControlMode",
    "NonlinearityKind",
    "ScenarioMode",
    "TriggerSchedule",
    "AssumptionDict",
    "CertificateDict",
    "TriggerStatsDict",
    "DecayDict",
]
