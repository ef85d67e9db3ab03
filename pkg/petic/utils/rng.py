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
Random number streams for reproducible sample paths.

Run seeds are derived from (master seed, run index) with SeedSequence so that runs are
independent and their order of execution does not matter. Brownian increments of a run
come from a counter-based Philox generator keyed by the run seed; the k-th draw is the
increment of integrator step k regardless of how the output is decimated.
"""

import numpy as np


def derive_run_seed(master_seed: int, run_index: int) -> int:
    """
    Deterministic 64-bit seed of one ensemble run.

    Args:
        master_seed: Scenario master seed
        run_index: Position of the run in the ensemble

    Returns:
        Run seed
    """
    sequence = np.random.SeedSequence(master_seed, spawn_key=(run_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def brownian_increments(run_seed: int, n_steps: int, step: float) -> np.ndarray:
    """
    Increments dW ~ Normal(0, step) of the shared scalar Wiener process.

    Args:
        run_seed: Seed of the run
        n_steps: Number of integrator steps
        step: Integrator step h

    Returns:
        Array of n_steps increments
    """
    generator = np.random.Generator(np.random.Philox(key=int(run_seed)))
    return generator.standard_normal(n_steps) * np.sqrt(step)


def perturbation_rng(run_seed: int) -> np.random.Generator:
    """Generator for initial-state perturbations, independent of the Brownian stream."""
    return np.random.default_rng(np.random.SeedSequence(int(run_seed), spawn_key=(1,)))
