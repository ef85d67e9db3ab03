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
Scenario files.

A scenario is a YAML document with the sections virtual, leader, topology, agents,
trigger, control and sim. The document shape is enforced by strict pydantic models
(unknown keys are rejected); the numerical preconditions of every module are then
checked and reported with the dotted path of the offending field, e.g. agents.2.Phi.
"""

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field

from .control import TriggerParams
from .errors import ConfigurationError, ScenarioParseError, ValidationError
from .simulator import SimParams
from .system import (
    AgentSpec,
    LeaderSpec,
    NonlinearitySpec,
    SineTerm,
    StackedSystem,
    build_stacked,
)
from .topology import EnergyProfile, TopologySpec
from .types import NonlinearityKind, ScenarioMode
from .validators import (
    format_path,
    validate_grid_multiple,
    validate_matrix,
    validate_nonnegative,
    validate_vector,
)

logger = logging.getLogger("petic.scenario")

Matrix = List[List[float]]
Vector = List[float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SineTermModel(_Strict):
    output: int
    coef: float
    freq: float
    input: int


class NonlinearityModel(_Strict):
    kind: NonlinearityKind = "zero"
    lipschitz: Optional[float] = None
    entries: List[SineTermModel] = Field(default_factory=list)


class EnergyModel(_Strict):
    tau0: float = 0.0
    beta: float = 0.0


class VirtualModel(_Strict):
    m: int


class LeaderModel(_Strict):
    n: int
    C: Matrix
    D: Matrix
    x0: Vector
    nonlinearity: NonlinearityModel = Field(default_factory=NonlinearityModel)


class AgentModel(_Strict):
    name: Optional[str] = None
    n: int
    C: Matrix
    D: Matrix
    Xi: Matrix
    Phi: Matrix
    Theta: Matrix
    gain: float
    x0: Vector
    offset: Optional[Vector] = None
    energy: EnergyModel = Field(default_factory=EnergyModel)
    nonlinearity: NonlinearityModel = Field(default_factory=NonlinearityModel)


class TopologyModel(_Strict):
    alpha: float
    h: Optional[Matrix] = None
    abar: Optional[Matrix] = None
    bbar: Optional[Vector] = None


class WeightModel(_Strict):
    scalar: Optional[float] = None
    matrix: Optional[Matrix] = None


class TriggerModel(_Strict):
    delta: float
    psi1: float
    psi2: float
    gamma: float
    P: WeightModel


class ControlModel(_Strict):
    mode: ScenarioMode = "no_delay"
    actuation_delay: float = 0.0


class SimModel(_Strict):
    step: float
    horizon: float
    runs: int = 100
    seed: int = 0
    record_stride: int = 1
    perturbation: float = 0.0


class ScenarioDocument(_Strict):
    """Raw scenario document as written in YAML."""

    name: str = "scenario"
    virtual: VirtualModel
    leader: LeaderModel
    topology: TopologyModel
    agents: List[AgentModel]
    trigger: TriggerModel
    control: ControlModel = Field(default_factory=ControlModel)
    sim: SimModel


@dataclass(eq=False)
class Scenario:
    """
    Fully validated experiment.

    Attributes:
        name: Scenario name
        leader: Leader dynamics
        agents: Followers in stacking order
        topology: Follower graph
        m: Virtual dimension
        trigger: Trigger constants
        mode: Control mode, "no_delay" or "delayed"
        actuation_delay: Delay tau_s of the delayed controller
        sim: Integration and ensemble settings
        leader_x0: Leader initial state
        follower_x0: Follower initial states
        system: Stacked virtual system, assembled when not given
    """

    name: str
    leader: LeaderSpec
    agents: Tuple[AgentSpec, ...]
    topology: TopologySpec
    m: int
    trigger: TriggerParams
    mode: ScenarioMode
    actuation_delay: float
    sim: SimParams
    leader_x0: np.ndarray
    follower_x0: Tuple[np.ndarray, ...]
    system: Optional[StackedSystem] = None

    def __post_init__(self):
        if self.system is None:
            self.system = build_stacked(self.leader, self.agents, self.topology, self.m)

    @property
    def dim(self) -> int:
        return self.m * len(self.agents)


def _relocate(error: ConfigurationError, prefix: str) -> ValidationError:
    """Re-raise a module precondition failure as a validation error under prefix."""
    root = prefix.split(".")[0]
    if error.field_path and (error.field_path == root or error.field_path.startswith(root + ".")):
        path = error.field_path
    else:
        path = format_path(prefix, error.field_path or "")
    return ValidationError(error.message, field_path=path, assumption=error.assumption)


def _nonlinearity(doc: NonlinearityModel, n: int, prefix: str) -> NonlinearitySpec:
    try:
        spec = NonlinearitySpec(
            kind=doc.kind,
            entries=tuple(SineTerm(e.output, e.coef, e.freq, e.input) for e in doc.entries),
            lipschitz_override=doc.lipschitz,
        )
        spec.check_indices(n)
    except ValidationError:
        raise
    except ConfigurationError as e:
        raise _relocate(e, prefix)
    return spec


def _leader(doc: LeaderModel) -> Tuple[LeaderSpec, np.ndarray]:
    n0 = doc.n
    C0 = validate_matrix(doc.C, "leader.C", shape=(n0, n0))
    D0 = validate_matrix(doc.D, "leader.D", shape=(n0, n0))
    x0 = validate_vector(doc.x0, "leader.x0", length=n0)
    f = _nonlinearity(doc.nonlinearity, n0, "leader.nonlinearity")
    return LeaderSpec(n0=n0, C0=C0, D0=D0, f=f), x0


def _agent(doc: AgentModel, index: int, n0: int, m: int) -> Tuple[AgentSpec, np.ndarray]:
    prefix = format_path("agents", index)
    n = doc.n
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}", field_path=format_path(prefix, "n"))
    if m < n:
        raise ValidationError(
            f"virtual dimension m={m} is smaller than the agent dimension {n}",
            field_path=format_path(prefix, "Phi"),
            assumption=4,
        )

    def matrix(label: str, shape: Tuple[int, int]) -> np.ndarray:
        return validate_matrix(getattr(doc, label), format_path(prefix, label), shape=shape)

    C = matrix("C", (n, n))
    D = matrix("D", (n, n))
    Xi = matrix("Xi", (n, n0))
    Phi = matrix("Phi", (m, n))
    Theta = matrix("Theta", (n, m))
    x0 = validate_vector(doc.x0, format_path(prefix, "x0"), length=n)
    offset = (
        None
        if doc.offset is None
        else validate_vector(doc.offset, format_path(prefix, "offset"), length=n)
    )
    validate_nonnegative(doc.energy.tau0, format_path(prefix, "energy", "tau0"), assumption=5)
    validate_nonnegative(doc.energy.beta, format_path(prefix, "energy", "beta"), assumption=7)
    f = _nonlinearity(doc.nonlinearity, n, format_path(prefix, "nonlinearity"))

    try:
        agent = AgentSpec(
            name=doc.name or f"agent{index + 1}",
            n=n,
            C=C,
            D=D,
            Xi=Xi,
            Phi=Phi,
            Theta=Theta,
            gain=doc.gain,
            f=f,
            offset=offset,
            energy=EnergyProfile(doc.energy.tau0, doc.energy.beta),
        )
    except ConfigurationError as e:
        raise _relocate(e, prefix)
    return agent, x0


def _weight(doc: WeightModel, dim: int) -> np.ndarray:
    if (doc.scalar is None) == (doc.matrix is None):
        raise ValidationError(
            "P needs exactly one of scalar or matrix", field_path="trigger.P"
        )
    if doc.scalar is not None:
        return doc.scalar * np.eye(dim)
    return validate_matrix(doc.matrix, "trigger.P", shape=(dim, dim))


def build_scenario(document: ScenarioDocument) -> Scenario:
    """
    Validate a scenario document and build the domain objects.

    Raises:
        ValidationError: With the dotted path (and assumption number) of the first
            failed precondition
    """
    m = document.virtual.m
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}", field_path="virtual.m")
    if not document.agents:
        raise ValidationError("at least one agent is required", field_path="agents")

    leader, leader_x0 = _leader(document.leader)
    built = [_agent(doc, i, leader.n0, m) for i, doc in enumerate(document.agents)]
    agents = tuple(a for a, _ in built)
    n_agents = len(agents)

    topo_doc = document.topology
    try:
        topology = TopologySpec(
            n_agents=n_agents,
            alpha=topo_doc.alpha,
            abar=topo_doc.abar,
            bbar=topo_doc.bbar,
            h_override=topo_doc.h,
        )
    except ValidationError:
        raise
    except ConfigurationError as e:
        raise _relocate(e, "topology")

    trigger_doc = document.trigger
    trigger = TriggerParams(
        delta=trigger_doc.delta,
        psi1=trigger_doc.psi1,
        psi2=trigger_doc.psi2,
        gamma=trigger_doc.gamma,
        P=_weight(trigger_doc.P, m * n_agents),
    )

    sim_doc = document.sim
    try:
        sim = SimParams(
            step=sim_doc.step,
            horizon=sim_doc.horizon,
            n_runs=sim_doc.runs,
            master_seed=sim_doc.seed,
            record_stride=sim_doc.record_stride,
            perturbation=sim_doc.perturbation,
        )
    except ValidationError:
        raise
    except ConfigurationError as e:
        raise _relocate(e, "sim")
    validate_grid_multiple(trigger.delta, sim.step, "trigger.delta")

    control = document.control
    mode = control.mode
    delay = validate_nonnegative(control.actuation_delay, "control.actuation_delay")
    if mode == "delayed":
        if not delay < trigger.delta:
            raise ValidationError(
                f"actuation_delay={delay} must be shorter than delta={trigger.delta}",
                field_path="control.actuation_delay",
                assumption=8,
            )
        validate_grid_multiple(delay, sim.step, "control.actuation_delay", assumption=8)
    else:
        if delay != 0:
            raise ValidationError(
                "actuation_delay is only used by the delayed mode",
                field_path="control.actuation_delay",
            )
        for i, agent in enumerate(agents):
            if not agent.gain < 0:
                raise ValidationError(
                    f"gain must be < 0 for the no_delay mode, got {agent.gain}",
                    field_path=format_path("agents", i, "gain"),
                    assumption=6,
                )

    try:
        scenario = Scenario(
            name=document.name,
            leader=leader,
            agents=agents,
            topology=topology,
            m=m,
            trigger=trigger,
            mode=mode,
            actuation_delay=delay,
            sim=sim,
            leader_x0=leader_x0,
            follower_x0=tuple(x for _, x in built),
        )
    except ValidationError:
        raise
    except ConfigurationError as e:
        raise _relocate(e, "agents")
    logger.info(
        "Loaded scenario '%s': %d agents, m=%d, mode=%s", scenario.name, n_agents, m, mode
    )
    return scenario


def _parse_yaml(text: str) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ScenarioParseError(
            f"invalid scenario syntax: {getattr(e, 'problem', None) or e}",
            line=mark.line + 1 if mark is not None else None,
            column=mark.column + 1 if mark is not None else None,
        )
    if data is None:
        raise ScenarioParseError("scenario is empty", line=1)
    if not isinstance(data, dict):
        raise ScenarioParseError("scenario must be a mapping of sections", line=1)
    return data


def load_scenario_text(text: str) -> Scenario:
    """
    Parse and validate scenario text.

    Raises:
        ScenarioParseError: If the text is not valid YAML or is empty
        ValidationError: If the document violates the schema or a precondition
    """
    data = _parse_yaml(text)
    try:
        document = ScenarioDocument.model_validate(data)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        path = format_path(*first["loc"]) or None
        raise ValidationError(f"{first['msg']}", field_path=path)
    return build_scenario(document)


def list_bundled_scenarios() -> List[str]:
    """Names of the scenarios shipped with the package."""
    folder = resources.files("petic") / "scenarios"
    return sorted(
        entry.name[: -len(".yaml")] for entry in folder.iterdir() if entry.name.endswith(".yaml")
    )


def load_scenario(source: Union[str, Path]) -> Scenario:
    """
    Load a scenario from a file path or by bundled name (e.g. "uav_ugv_no_delay").

    Raises:
        ScenarioParseError: If the file cannot be read or parsed
        ValidationError: If the scenario is invalid
    """
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    elif str(source) in list_bundled_scenarios():
        bundled = resources.files("petic") / "scenarios" / f"{source}.yaml"
        text = bundled.read_text(encoding="utf-8")
    else:
        raise ScenarioParseError(f"scenario '{source}' is neither a file nor a bundled name")
    return load_scenario_text(text)


def _matrix(value: np.ndarray) -> Matrix:
    return np.asarray(value, dtype=float).tolist()


def _nonlinearity_document(spec: NonlinearitySpec) -> NonlinearityModel:
    return NonlinearityModel(
        kind=spec.kind,
        lipschitz=spec.lipschitz_override,
        entries=[
            SineTermModel(output=e.output, coef=e.coef, freq=e.freq, input=e.input)
            for e in spec.entries
        ],
    )


def to_document(scenario: Scenario) -> ScenarioDocument:
    """Scenario document describing a scenario."""
    topo = scenario.topology
    P = scenario.trigger.P
    c = float(P[0, 0])
    weight = (
        WeightModel(scalar=c)
        if np.array_equal(P, c * np.eye(P.shape[0]))
        else WeightModel(matrix=_matrix(P))
    )
    return ScenarioDocument(
        name=scenario.name,
        virtual=VirtualModel(m=scenario.m),
        leader=LeaderModel(
            n=scenario.leader.n0,
            C=_matrix(scenario.leader.C0),
            D=_matrix(scenario.leader.D0),
            x0=_matrix(scenario.leader_x0),
            nonlinearity=_nonlinearity_document(scenario.leader.f),
        ),
        topology=TopologyModel(
            alpha=topo.alpha,
            h=None if topo.h_override is None else _matrix(topo.h_override),
            abar=None if topo.abar is None else _matrix(topo.abar),
            bbar=None if topo.bbar is None else _matrix(topo.bbar),
        ),
        agents=[
            AgentModel(
                name=agent.name,
                n=agent.n,
                C=_matrix(agent.C),
                D=_matrix(agent.D),
                Xi=_matrix(agent.Xi),
                Phi=_matrix(agent.Phi),
                Theta=_matrix(agent.Theta),
                gain=agent.gain,
                x0=_matrix(x0),
                offset=_matrix(agent.offset),
                energy=EnergyModel(tau0=agent.energy.tau0, beta=agent.energy.beta),
                nonlinearity=_nonlinearity_document(agent.f),
            )
            for agent, x0 in zip(scenario.agents, scenario.follower_x0)
        ],
        trigger=TriggerModel(
            delta=scenario.trigger.delta,
            psi1=scenario.trigger.psi1,
            psi2=scenario.trigger.psi2,
            gamma=scenario.trigger.gamma,
            P=weight,
        ),
        control=ControlModel(mode=scenario.mode, actuation_delay=scenario.actuation_delay),
        sim=SimModel(
            step=scenario.sim.step,
            horizon=scenario.sim.horizon,
            runs=scenario.sim.n_runs,
            seed=scenario.sim.master_seed,
            record_stride=scenario.sim.record_stride,
            perturbation=scenario.sim.perturbation,
        ),
    )


def dump_scenario(scenario: Scenario) -> str:
    """Serialize a scenario to YAML text that load_scenario_text reads back unchanged."""
    data = to_document(scenario).model_dump(exclude_none=True)
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
