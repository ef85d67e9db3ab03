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
Euler-Maruyama simulation of the impulsive stochastic virtual system.

Between impulses the stacked state follows the Euler-Maruyama recursion

    y <- y + drift(y) h + diffusion(y) dW

with one scalar Brownian increment per step shared by every agent. At each sampling
instant of the trigger the pre-impulse state is tested; when the trigger fires, the
controller's jump is applied, the post-jump state is recorded at the impulse instant and
becomes the new trigger reference.
"""

import asyncio
import logging
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Deque, List, Optional, Union

import numpy as np

from .config import get_setting
from .control import PeriodicEventTrigger, get_controller
from .errors import ConfigurationError, EnsembleFailureError, NumericalBlowupError
from .models import EnsembleStats, EventLog, Trajectory
from .system import StackedSystem, eval_diffusion, eval_drift, leader_diffusion, leader_drift
from .topology import energy_levels
from .types import ControlMode, TriggerSchedule
from .utils.rng import brownian_increments, derive_run_seed, perturbation_rng
from .validators import (
    validate_choice,
    validate_grid_multiple,
    validate_nonnegative,
    validate_positive,
)

if TYPE_CHECKING:
    from .scenario import Scenario

logger = logging.getLogger("petic.simulator")

SCHEDULES = ("event", "periodic")


@dataclass(frozen=True)
class SimParams:
    """
    Integration and ensemble settings.

    Attributes:
        step: Integrator step h (seconds)
        horizon: Final time T (seconds)
        n_runs: Ensemble size
        master_seed: Seed all run seeds derive from
        record_stride: Record every record_stride-th step
        perturbation: Standard deviation of a Gaussian perturbation of the initial
            error state (0 keeps the scenario's fixed initial values)
    """

    step: float
    horizon: float
    n_runs: int = 100
    master_seed: int = 0
    record_stride: int = 1
    perturbation: float = 0.0

    def __post_init__(self):
        validate_positive(self.step, "sim.step")
        validate_positive(self.horizon, "sim.horizon")
        validate_nonnegative(self.perturbation, "sim.perturbation")
        if self.n_runs < 1:
            raise ConfigurationError(
                f"sim.runs must be >= 1, got {self.n_runs}", field_path="sim.runs"
            )
        if self.record_stride < 1:
            raise ConfigurationError(
                f"sim.record_stride must be >= 1, got {self.record_stride}",
                field_path="sim.record_stride",
            )
        if self.step > self.horizon:
            raise ConfigurationError(
                f"sim.step={self.step} exceeds the horizon {self.horizon}",
                field_path="sim.step",
            )

    @property
    def n_steps(self) -> int:
        """Number of integrator steps that fit in the horizon."""
        return int(np.floor(self.horizon / self.step + 1e-9))


def em_step(
    y: np.ndarray, t: float, h: float, dW: float, sys: StackedSystem
) -> np.ndarray:
    """
    One Euler-Maruyama step y + drift(y, t) h + diffusion(y, t) dW.

    Args:
        y: State at t
        t: Current time
        h: Step size
        dW: Increment of the shared Wiener process over [t, t + h]
        sys: Stacked system

    Returns:
        State at t + h

    Raises:
        NumericalBlowupError: If the input or the result is not finite
    """
    y_next = y + eval_drift(sys, y, t) * h + eval_diffusion(sys, y, t) * dW
    if not np.all(np.isfinite(y_next)):
        raise NumericalBlowupError("virtual state is not finite", t=t + h)
    return y_next


def initial_state(
    scenario: "Scenario", run_seed: Optional[int] = None, perturbation: Optional[float] = None
) -> np.ndarray:
    """
    Stacked virtual state y(0) lifted from the scenario's initial values.

    When the scenario sets a perturbation, Gaussian noise is added to every error state
    before lifting, so y(0) stays in the range of Phi.
    """
    sys = scenario.system
    sigma = scenario.sim.perturbation if perturbation is None else perturbation
    rng = perturbation_rng(run_seed) if sigma > 0 and run_seed is not None else None
    blocks = []
    for i, agent in enumerate(sys.agents):
        z = _error(scenario, i)
        if rng is not None:
            z = z + sigma * rng.standard_normal(agent.n)
        blocks.append(agent.Phi @ z)
    return np.concatenate(blocks)


def _error(scenario: "Scenario", i: int) -> np.ndarray:
    agent = scenario.system.agents[i]
    return scenario.follower_x0[i] - agent.Xi @ scenario.leader_x0 - agent.offset


def _blowup(
    message: str, t: float, events: EventLog, trigger: Optional[PeriodicEventTrigger]
) -> NumericalBlowupError:
    return NumericalBlowupError(
        message,
        t=t,
        last_event=events.last,
        last_w_ratio=trigger.last_ratio if trigger is not None else None,
    )


def run_trajectory(
    scenario: "Scenario",
    run_seed: int,
    schedule: TriggerSchedule = "event",
    mode: Optional[ControlMode] = None,
    sim: Optional[SimParams] = None,
) -> Trajectory:
    """
    Simulate one sample path.

    Args:
        scenario: Validated scenario
        run_seed: Seed of the Brownian path
        schedule: "event" to impulse when the trigger fires, "periodic" to impulse at
            every sampling instant (the fixed-period baseline)
        mode: Controller name overriding the scenario's control mode ("none" simulates
            the open-loop system)
        sim: Integration settings overriding the scenario's

    Returns:
        The recorded trajectory

    Raises:
        NumericalBlowupError: If the state diverges; carries the last event and W ratio
        ConfigurationError: If the schedule or the grid alignment is invalid
    """
    validate_choice(schedule, "schedule", SCHEDULES)
    sim = sim or scenario.sim
    sys = scenario.system
    params = scenario.trigger
    h = sim.step
    n_steps = sim.n_steps
    threshold = get_setting("numerics", "blowup_threshold")

    controller = get_controller(
        mode or scenario.mode,
        sys,
        actuation_delay=scenario.actuation_delay,
        delta=params.delta,
    )
    trigger: Optional[PeriodicEventTrigger] = None
    if controller.applies_impulses:
        trigger = PeriodicEventTrigger(params, h)

    buffer: Optional[Deque[np.ndarray]] = None
    if controller.uses_delay:
        lag = validate_grid_multiple(
            scenario.actuation_delay, h, "control.actuation_delay", assumption=8
        )
        buffer = deque(maxlen=lag + 1)

    dW = brownian_increments(run_seed, n_steps, h)
    record = np.zeros(n_steps + 1, dtype=bool)
    record[:: sim.record_stride] = True
    record[n_steps] = True
    n_rec = int(record.sum())

    times = np.empty(n_rec)
    states = np.empty((n_rec, sys.dim))
    leader_states = np.empty((n_rec, sys.leader.n0))

    y = initial_state(scenario, run_seed, sim.perturbation)
    x0 = np.array(scenario.leader_x0, dtype=float)
    events = EventLog()
    if trigger is not None:
        trigger.start(y)
    if buffer is not None:
        buffer.append(y.copy())

    times[0], states[0], leader_states[0] = 0.0, y, x0
    slot = 1
    for index in range(1, n_steps + 1):
        t_prev = (index - 1) * h
        t = index * h
        try:
            y = em_step(y, t_prev, h, dW[index - 1], sys)
        except NumericalBlowupError as e:
            raise _blowup(e.message, e.t, events, trigger) from e
        dw = dW[index - 1]
        x0 = x0 + leader_drift(sys.leader, x0) * h + leader_diffusion(sys.leader, x0) * dw
        if buffer is not None:
            buffer.append(y.copy())

        if trigger is not None and trigger.is_check_step(index):
            fired, ratio = trigger.check(index, y)
            if fired or schedule == "periodic":
                y_delayed = buffer[0] if buffer is not None else None
                y = controller.jump(y, t, y_delayed)
                event = events.append(t, ratio)
                trigger.reset(index, y)
                if buffer is not None:
                    buffer[-1] = y.copy()
                logger.debug("Impulse #%d at t=%.6g (W ratio %.6g)", event.index, t, ratio)

        norm = float(np.linalg.norm(y))
        if not np.isfinite(norm) or norm > threshold:
            raise _blowup(f"|y| = {norm:.6g} exceeds {threshold:g}", t, events, trigger)

        if record[index]:
            times[slot], states[slot], leader_states[slot] = t, y, x0
            slot += 1

    return _assemble(scenario, times, states, leader_states, events, run_seed, schedule)


def _assemble(
    scenario: "Scenario",
    times: np.ndarray,
    states: np.ndarray,
    leader_states: np.ndarray,
    events: EventLog,
    run_seed: int,
    schedule: TriggerSchedule,
) -> Trajectory:
    sys = scenario.system
    z_all = states @ sys.Theta.T
    errors = [z_all[:, sys.error_block(i)] for i in range(sys.N)]
    followers = [
        errors[i] + leader_states @ agent.Xi.T + agent.offset
        for i, agent in enumerate(sys.agents)
    ]
    energy = np.array([energy_levels(sys.energy, t) for t in times])
    return Trajectory(
        times=times,
        states=states,
        sq_norm=np.einsum("ij,ij->i", states, states),
        events=events,
        errors=errors,
        energy=energy,
        leader=leader_states,
        followers=followers,
        seed=run_seed,
        schedule=schedule,
    )


async def arun_ensemble(
    scenario: "Scenario",
    sim: Optional[SimParams] = None,
    schedule: TriggerSchedule = "event",
    mode: Optional[ControlMode] = None,
) -> EnsembleStats:
    """
    Run independent sample paths concurrently and reduce them.

    Run i uses the seed derived from (master_seed, i). Runs are executed in worker
    threads, at most config["ensemble"]["max_workers"] at a time; the reduction sums in
    run order, so the result does not depend on completion order.

    Args:
        scenario: Validated scenario
        sim: Integration settings overriding the scenario's
        schedule: "event" or "periodic"
        mode: Controller name overriding the scenario's control mode

    Returns:
        Ensemble statistics over the runs that did not diverge

    Raises:
        EnsembleFailureError: If more than the tolerated fraction of runs diverged
    """
    sim = sim or scenario.sim
    semaphore = asyncio.Semaphore(get_setting("ensemble", "max_workers"))

    async def run_one(index: int) -> Union[Trajectory, NumericalBlowupError]:
        seed = derive_run_seed(sim.master_seed, index)
        async with semaphore:
            try:
                return await asyncio.to_thread(
                    run_trajectory, scenario, seed, schedule, mode, sim
                )
            except NumericalBlowupError as e:
                logger.warning("Run %d diverged and is excluded: %s", index, e)
                return e

    results = await asyncio.gather(*(run_one(i) for i in range(sim.n_runs)))
    return reduce_runs(list(results), sim.n_runs)


def run_ensemble(
    scenario: "Scenario",
    sim: Optional[SimParams] = None,
    schedule: TriggerSchedule = "event",
    mode: Optional[ControlMode] = None,
) -> EnsembleStats:
    """
    Synchronous wrapper of arun_ensemble.

    See arun_ensemble for the arguments.
    """
    # Use asyncio.run to execute the async ensemble in a new event loop
    return asyncio.run(arun_ensemble(scenario, sim=sim, schedule=schedule, mode=mode))


def reduce_runs(
    results: List[Union[Trajectory, NumericalBlowupError]], n_runs: int
) -> EnsembleStats:
    """
    Reduce per-run results into ensemble statistics.

    Args:
        results: Trajectory or blowup error of every run, in run order
        n_runs: Number of attempted runs

    Returns:
        Ensemble statistics

    Raises:
        EnsembleFailureError: If more than the tolerated fraction of runs diverged
    """
    excluded = [i for i, r in enumerate(results) if isinstance(r, NumericalBlowupError)]
    errors = [r for r in results if isinstance(r, NumericalBlowupError)]
    paths = [r for r in results if isinstance(r, Trajectory)]

    tolerated = get_setting("ensemble", "max_exclusion_fraction") * n_runs
    if not paths or len(excluded) > tolerated:
        raise EnsembleFailureError(
            f"{len(excluded)} of {n_runs} runs diverged", n_runs, excluded, errors
        )

    total = np.zeros_like(paths[0].sq_norm)
    for path in paths:
        total = total + path.sq_norm
    gaps = np.concatenate([p.events.gaps for p in paths])
    logs = [p.events for p in paths]
    logger.info(
        "Ensemble of %d runs done (%d excluded), mean event count %.2f",
        n_runs,
        len(excluded),
        float(np.mean([len(log) for log in logs])),
    )
    return EnsembleStats(
        times=paths[0].times,
        mean_sq=total / len(paths),
        single_path=paths[0].sq_norm,
        counts=[len(log) for log in logs],
        logs=logs,
        gap_mean=float(gaps.mean()) if gaps.size else None,
        gap_min=float(gaps.min()) if gaps.size else None,
        gap_max=float(gaps.max()) if gaps.size else None,
        n_runs=n_runs,
        excluded=excluded,
    )
