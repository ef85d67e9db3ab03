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
Utility functions for petic.

This module provides helpers used throughout the package:
- Reproducible random streams for ensemble runs and Brownian paths
- CSV, JSON and gnuplot artifact writers
"""

from .export import (
    fmt,
    write_ensemble_csv,
    write_events_csv,
    write_gnuplot_scripts,
    write_positions_csv,
    write_report,
    write_trajectory_csv,
)
from .rng import brownian_increments, derive_run_seed, perturbation_rng

__all__ = [
    "fmt",
    "derive_run_seed",
    "brownian_increments",
    "perturbation_rng",
    "write_trajectory_csv",
    "write_events_csv",
    "write_ensemble_csv",
    "write_positions_csv",
    "write_report",
    "write_gnuplot_scripts",
]
