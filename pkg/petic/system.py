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
Leader and follower dynamics, the error system and the virtual state space.

Each follower i has its own dimension n_i. Its error state

    z_i = x_i - Xi_i x_0 - offset_i

is lifted into the common m-dimensional virtual space as y_i = Phi_i z_i and recovered
exactly as z_i = Theta_i y_i. The stacked virtual state y = [y_1; ...; y_N] (agent-major)
then obeys

    dy = [Phi C Theta y + Phi f(Theta y)] dt + [Phi D Theta y + d_aff] dw

with a single scalar Wiener process w shared by the leader and every follower, and
d_aff the stacked affine diffusion term Phi_i D_i offset_i of the formation variant.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from .config import get_setting
from .errors import ConfigurationError, NumericalBlowupError
from .models import AssumptionCheck
from .topology import EnergyProfile, TopologySpec, information_matrix
from .types import NonlinearityKind

logger = logging.getLogger("petic.system")

NONLINEARITY_KINDS = ("zero", "sine_bank")


@dataclass(frozen=True)
class SineTerm:
    """One term output[output] += coef * sin(freq * input[input])."""

    output: int
    coef: float
    freq: float
    input: int


@dataclass(frozen=True, eq=False)
class NonlinearitySpec:
    """
    Nonlinear drift term f with f(0) = 0.

    Attributes:
        kind: "zero" or "sine_bank"
        entries: Sine terms of a sine_bank
        lipschitz_override: Lipschitz constant L_f given as data, used instead of the
            derived bound when present
    """

    kind: NonlinearityKind = "zero"
    entries: Tuple[SineTerm, ...] = ()
    lipschitz_override: Optional[float] = None

    def __post_init__(self):
        if self.kind not in NONLINEARITY_KINDS:
            raise ConfigurationError(
                f"unknown nonlinearity kind '{self.kind}'; supported: "
                f"{', '.join(NONLINEARITY_KINDS)}",
                field_path="kind",
            )
        if self.kind == "zero" and self.entries:
            raise ConfigurationError(
                "a zero nonlinearity cannot have entries", field_path="entries"
            )
        if self.lipschitz_override is not None and not self.lipschitz_override > 0:
            raise ConfigurationError(
                f"lipschitz must be > 0, got {self.lipschitz_override}",
                field_path="lipschitz",
                assumption=3,
            )
        object.__setattr__(self, "entries", tuple(self.entries))

    def check_indices(self, n: int) -> None:
        """
        Ensure every term addresses a component of an n-dimensional state.

        Raises:
            ConfigurationError: If an index is out of range
        """
        for k, term in enumerate(self.entries):
            for label, index in (("output", term.output), ("input", term.input)):
                if not 0 <= index < n:
                    raise ConfigurationError(
                        f"{label} index {index} out of range for dimension {n}",
                        field_path=f"entries.{k}.{label}",
                    )

    def __call__(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(z, dtype=float)
        if self.kind == "zero" or not self.entries:
            return out
        outputs, coefs, freqs, inputs = self._arrays()
        np.add.at(out, outputs, coefs * np.sin(freqs * z[inputs]))
        return out

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.array([e.output for e in self.entries], dtype=int),
            np.array([e.coef for e in self.entries], dtype=float),
            np.array([e.freq for e in self.entries], dtype=float),
            np.array([e.input for e in self.entries], dtype=int),
        )

    def bound_matrix(self, n: int) -> np.ndarray:
        """Nonnegative n x n matrix with |f(z)| <= bound_matrix |z| componentwise."""
        bound = np.zeros((n, n))
        for term in self.entries:
            bound[term.output, term.input] += abs(term.coef * term.freq)
        return bound

    def derived_lipschitz(self, n: int) -> float:
        """Lipschitz constant implied by the sine terms (spectral norm of bound_matrix)."""
        if not self.entries:
            return 0.0
        return float(np.linalg.norm(self.bound_matrix(n), 2))

    def lipschitz(self, n: int) -> float:
        """L_f used by the certificate: the override when given, else the derived bound."""
        if self.lipschitz_override is not None:
            return float(self.lipschitz_override)
        return self.derived_lipschitz(n)


@dataclass(frozen=True, eq=False)
class LeaderSpec:
    """
    Leader dynamics dx_0 = [C0 x_0 + f(x_0)] dt + D0 x_0 dw.

    Attributes:
        n0: Leader dimension
        C0: n0 x n0 drift matrix
        D0: n0 x n0 diffusion matrix
        f: Leader nonlinearity
    """

    n0: int
    C0: np.ndarray
    D0: np.ndarray
    f: NonlinearitySpec = field(default_factory=NonlinearitySpec)

    def __post_init__(self):
        for label in ("C0", "D0"):
            matrix = np.asarray(getattr(self, label), dtype=float)
            if matrix.shape != (self.n0, self.n0):
                raise ConfigurationError(
                    f"{label} must be {self.n0}x{self.n0}, got "
                    f"{'x'.join(str(s) for s in matrix.shape)}",
                    field_path=label,
                )
            object.__setattr__(self, label, matrix)
        self.f.check_indices(self.n0)


@dataclass(frozen=True, eq=False)
class AgentSpec:
    """
    One heterogeneous follower.

    Attributes:
        name: Label used in reports and messages
        n: Follower dimension n_i
        C: n_i x n_i drift matrix
        D: n_i x n_i diffusion matrix
        Xi: n_i x n0 matching matrix
        Phi: m x n_i lift into the virtual space
        Theta: n_i x m projection back to the error space
        gain: Impulsive gain k_i (delay-free) or k~_i (delayed)
        f: Follower nonlinearity
        offset: Desired relative position (formation offset), zero by default
        energy: Energy consumption profile
    """

    name: str
    n: int
    C: np.ndarray
    D: np.ndarray
    Xi: np.ndarray
    Phi: np.ndarray
    Theta: np.ndarray
    gain: float
    f: NonlinearitySpec = field(default_factory=NonlinearitySpec)
    offset: Optional[np.ndarray] = None
    energy: EnergyProfile = field(default_factory=EnergyProfile)

    def __post_init__(self):
        n = self.n
        for label in ("C", "D", "Xi", "Phi", "Theta"):
            object.__setattr__(self, label, np.asarray(getattr(self, label), dtype=float))
        for label in ("C", "D"):
            if getattr(self, label).shape != (n, n):
                raise ConfigurationError(
                    f"{label} of agent {self.name} must be {n}x{n}", field_path=label
                )
        if self.Xi.ndim != 2 or self.Xi.shape[0] != n:
            raise ConfigurationError(
                f"Xi of agent {self.name} must have {n} rows", field_path="Xi"
            )
        if self.Phi.ndim != 2 or self.Phi.shape[1] != n:
            raise ConfigurationError(
                f"Phi of agent {self.name} must have {n} columns", field_path="Phi"
            )
        m = self.Phi.shape[0]
        if self.Theta.shape != (n, m):
            raise ConfigurationError(
                f"Theta of agent {self.name} must be {n}x{m} to match Phi",
                field_path="Theta",
            )
        offset = np.zeros(n) if self.offset is None else np.asarray(self.offset, dtype=float)
        if offset.shape != (n,):
            raise ConfigurationError(
                f"offset of agent {self.name} must have length {n}", field_path="offset"
            )
        object.__setattr__(self, "offset", offset)
        self.f.check_indices(n)

    @property
    def m(self) -> int:
        """Virtual dimension this agent lifts into."""
        return self.Phi.shape[0]


def check_matching(agent: AgentSpec, leader: LeaderSpec) -> AssumptionCheck:
    """
    Check the matching conditions Xi C0 = C Xi and Xi D0 = D Xi.

    The residual is the largest absolute entry of either difference. The check is not
    mandatory by default; strict verification promotes it.

    Raises:
        ConfigurationError: If Xi is not n_i x n0
    """
    if agent.Xi.shape != (agent.n, leader.n0):
        raise ConfigurationError(
            f"Xi of agent {agent.name} must be {agent.n}x{leader.n0}",
            field_path="Xi",
            assumption=2,
        )
    residual = max(
        float(np.max(np.abs(agent.Xi @ leader.C0 - agent.C @ agent.Xi), initial=0.0)),
        float(np.max(np.abs(agent.Xi @ leader.D0 - agent.D @ agent.Xi), initial=0.0)),
    )
    passed = residual <= get_setting("numerics", "identity_tol")
    detail = "" if passed else f"Xi C0 != C Xi or Xi D0 != D Xi (max residual {residual:.6g})"
    return AssumptionCheck(
        name=f"matching[{agent.name}]",
        passed=passed,
        residual=residual,
        detail=detail,
        mandatory=False,
    )


def check_embedding(agent: AgentSpec) -> AssumptionCheck:
    """
    Check that Phi has full column rank and Theta Phi = I.

    Raises:
        ConfigurationError: If the virtual dimension m is smaller than n_i
    """
    if agent.m < agent.n:
        raise ConfigurationError(
            f"virtual dimension {agent.m} is smaller than the dimension {agent.n} "
            f"of agent {agent.name}",
            field_path="Phi",
            assumption=4,
        )
    singular = np.linalg.svd(agent.Phi, compute_uv=False)
    threshold = get_setting("numerics", "rank_rtol") * (singular[0] if singular.size else 0.0)
    rank = int(np.sum(singular > threshold))
    residual = float(np.max(np.abs(agent.Theta @ agent.Phi - np.eye(agent.n)), initial=0.0))

    details = []
    if rank < agent.n:
        details.append(f"rank(Phi) = {rank} < {agent.n}")
    if residual > get_setting("numerics", "identity_tol"):
        details.append(f"|Theta Phi - I| = {residual:.6g}")
    return AssumptionCheck(
        name=f"embedding[{agent.name}]",
        passed=not details,
        residual=residual,
        detail="; ".join(details),
    )


def error_state(x_i: np.ndarray, x0: np.ndarray, agent: AgentSpec) -> np.ndarray:
    """Error state z_i = x_i - Xi_i x_0 - offset_i."""
    return np.asarray(x_i, dtype=float) - agent.Xi @ np.asarray(x0, dtype=float) - agent.offset


def lift(z: np.ndarray, agent: AgentSpec) -> np.ndarray:
    """Virtual state y_i = Phi_i z_i."""
    return agent.Phi @ z


def project(y: np.ndarray, agent: AgentSpec) -> np.ndarray:
    """Error state z_i = Theta_i y_i."""
    return agent.Theta @ y


def stacking_permutation(m: int, n_agents: int) -> np.ndarray:
    """
    Permutation taking an agent-major stacked vector to component-major order.

    With Pi = stacking_permutation(m, N), Pi (H kron I_m) Pi^T = I_m kron H.

    Returns:
        Index array perm such that y_component_major = y_agent_major[perm]
    """
    return np.arange(m * n_agents).reshape(n_agents, m).T.ravel()


@dataclass(frozen=True, eq=False)
class StackedSystem:
    """
    Block-assembled virtual system under the agent-major layout.

    Attributes:
        m: Virtual dimension
        N: Number of followers
        dims: Follower dimensions n_i
        Phi: dim x sum(n_i) block-diagonal lift
        Theta: sum(n_i) x dim block-diagonal projection
        C: Block-diagonal drift matrices
        D: Block-diagonal diffusion matrices
        K: diag(gains) kron I_m
        H: Information-exchange matrix
        H_tilde: H kron I_m
        L_f: diag(L_fi I_m)
        projector: Phi Theta
        drift_matrix: Phi C Theta
        diffusion_matrix: Phi D Theta
        diffusion_affine: Stacked Phi_i D_i offset_i
        agents: Follower specs in stacking order
        leader: Leader spec
        alpha: Energy sensitivity of the topology
    """

    m: int
    N: int
    dims: Tuple[int, ...]
    Phi: np.ndarray
    Theta: np.ndarray
    C: np.ndarray
    D: np.ndarray
    K: np.ndarray
    H: np.ndarray
    H_tilde: np.ndarray
    L_f: np.ndarray
    projector: np.ndarray
    drift_matrix: np.ndarray
    diffusion_matrix: np.ndarray
    diffusion_affine: np.ndarray
    agents: Tuple[AgentSpec, ...]
    leader: LeaderSpec
    alpha: float
    f_outputs: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=int))
    f_inputs: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=int))
    f_coefs: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    f_freqs: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    @property
    def dim(self) -> int:
        return self.m * self.N

    @property
    def gains(self) -> np.ndarray:
        return np.array([a.gain for a in self.agents], dtype=float)

    @property
    def energy(self) -> Tuple[EnergyProfile, ...]:
        return tuple(a.energy for a in self.agents)

    def block(self, i: int) -> slice:
        """Slice of agent i within the stacked virtual state."""
        return slice(i * self.m, (i + 1) * self.m)

    def error_block(self, i: int) -> slice:
        """Slice of agent i within the stacked error state Theta y."""
        start = sum(self.dims[:i])
        return slice(start, start + self.dims[i])

    def nonlinearity(self, z: np.ndarray) -> np.ndarray:
        """Stacked f(z) for the stacked error state z."""
        out = np.zeros(z.shape[0])
        if self.f_outputs.size:
            terms = self.f_coefs * np.sin(self.f_freqs * z[self.f_inputs])
            np.add.at(out, self.f_outputs, terms)
        return out

    def with_gains(self, gains: Sequence[float]) -> "StackedSystem":
        """Copy of the system with other impulsive gains."""
        gains = np.asarray(gains, dtype=float)
        if gains.shape != (self.N,):
            raise ConfigurationError(f"expected {self.N} gains, got {gains.shape[0]}")
        agents = tuple(replace(a, gain=float(k)) for a, k in zip(self.agents, gains))
        return replace(self, agents=agents, K=np.kron(np.diag(gains), np.eye(self.m)))

    def with_information_matrix(self, H: np.ndarray) -> "StackedSystem":
        """Copy of the system with another information-exchange matrix."""
        H = np.asarray(H, dtype=float)
        if H.shape != (self.N, self.N):
            raise ConfigurationError(f"H must be {self.N}x{self.N}")
        return replace(self, H=H, H_tilde=np.kron(H, np.eye(self.m)))


def build_stacked(
    leader: LeaderSpec,
    agents: Sequence[AgentSpec],
    topo: TopologySpec,
    m: int,
) -> StackedSystem:
    """
    Assemble the stacked virtual system.

    Args:
        leader: Leader dynamics
        agents: Followers in stacking order
        topo: Topology over the followers
        m: Virtual dimension

    Returns:
        The immutable stacked system

    Raises:
        ConfigurationError: If an agent does not embed into R^m or the topology size
            does not match the number of agents; field_path names the agent
    """
    if not agents:
        raise ConfigurationError("at least one follower is required", field_path="agents")
    if topo.n_agents != len(agents):
        raise ConfigurationError(
            f"topology has {topo.n_agents} agents but {len(agents)} followers are defined",
            field_path="topology",
        )

    for i, agent in enumerate(agents):
        if agent.m != m:
            raise ConfigurationError(
                f"Phi of agent {agent.name} lifts into dimension {agent.m}, expected {m}",
                field_path=f"agents.{i}.Phi",
                assumption=4,
            )
        try:
            verdict = check_embedding(agent)
        except ConfigurationError as e:
            e.field_path = f"agents.{i}.{e.field_path}"
            raise
        if not verdict.passed:
            raise ConfigurationError(
                f"agent {agent.name} does not embed into the virtual space: {verdict.detail}",
                field_path=f"agents.{i}.Phi",
                assumption=4,
            )

    n_agents = len(agents)
    Phi = block_diag(*[a.Phi for a in agents])
    Theta = block_diag(*[a.Theta for a in agents])
    C = block_diag(*[a.C for a in agents])
    D = block_diag(*[a.D for a in agents])
    H = information_matrix(topo)
    eye_m = np.eye(m)
    K = np.kron(np.diag([a.gain for a in agents]), eye_m)
    L_f = np.kron(np.diag([a.f.lipschitz(a.n) for a in agents]), eye_m)
    affine = np.concatenate([a.Phi @ (a.D @ a.offset) for a in agents])

    # Nonlinearity terms re-indexed into the stacked error state
    outputs: List[int] = []
    inputs: List[int] = []
    coefs: List[float] = []
    freqs: List[float] = []
    start = 0
    for agent in agents:
        for term in agent.f.entries:
            outputs.append(start + term.output)
            inputs.append(start + term.input)
            coefs.append(term.coef)
            freqs.append(term.freq)
        start += agent.n

    system = StackedSystem(
        m=m,
        N=n_agents,
        dims=tuple(a.n for a in agents),
        Phi=Phi,
        Theta=Theta,
        C=C,
        D=D,
        K=K,
        H=H,
        H_tilde=np.kron(H, eye_m),
        L_f=L_f,
        projector=Phi @ Theta,
        drift_matrix=Phi @ C @ Theta,
        diffusion_matrix=Phi @ D @ Theta,
        diffusion_affine=affine,
        agents=tuple(agents),
        leader=leader,
        alpha=topo.alpha,
        f_outputs=np.array(outputs, dtype=int),
        f_inputs=np.array(inputs, dtype=int),
        f_coefs=np.array(coefs, dtype=float),
        f_freqs=np.array(freqs, dtype=float),
    )
    logger.debug("Built stacked system: m=%d, N=%d, dim=%d", m, n_agents, system.dim)
    return system


def _require_finite(y: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(y)):
        raise NumericalBlowupError("virtual state is not finite", t=t)


def eval_drift(sys: StackedSystem, y: np.ndarray, t: float) -> np.ndarray:
    """
    Drift Phi C Theta y + Phi f(Theta y).

    Raises:
        NumericalBlowupError: If y is not finite
    """
    _require_finite(y, t)
    drift = sys.drift_matrix @ y
    if sys.f_outputs.size:
        drift = drift + sys.Phi @ sys.nonlinearity(sys.Theta @ y)
    return drift


def eval_diffusion(sys: StackedSystem, y: np.ndarray, t: float) -> np.ndarray:
    """
    Diffusion Phi D Theta y plus the affine formation term, for the shared Wiener channel.

    Raises:
        NumericalBlowupError: If y is not finite
    """
    _require_finite(y, t)
    return sys.diffusion_matrix @ y + sys.diffusion_affine


def leader_drift(leader: LeaderSpec, x0: np.ndarray) -> np.ndarray:
    """Leader drift C0 x_0 + f(x_0)."""
    return leader.C0 @ x0 + leader.f(x0)


def leader_diffusion(leader: LeaderSpec, x0: np.ndarray) -> np.ndarray:
    """Leader diffusion D0 x_0."""
    return leader.D0 @ x0


def check_lipschitz(
    spec: NonlinearitySpec,
    n: int,
    name: str = "f",
    samples: Optional[int] = None,
    seed: int = 0,
) -> AssumptionCheck:
    """
    Sampled check of f(0) = 0 and |f(z)| <= L_f |z|.

    Args:
        spec: Nonlinearity to check
        n: Dimension of its argument
        name: Label for the verdict
        samples: Number of random z (defaults to the configured count)
        seed: Seed of the sampling generator

    Returns:
        Verdict whose residual is the largest excess |f(z)| - L_f |z| (0 if none)
    """
    samples = samples or get_setting("numerics", "lipschitz_samples")
    bound = spec.lipschitz(n)
    at_zero = float(np.linalg.norm(spec(np.zeros(n))))

    rng = np.random.default_rng(seed)
    # Samples at three scales
    z = rng.standard_normal((samples, n)) * rng.choice([0.1, 1.0, 10.0], size=(samples, 1))
    values = np.array([spec(row) for row in z])
    excess = np.linalg.norm(values, axis=1) - bound * np.linalg.norm(z, axis=1)
    worst = max(float(np.max(excess, initial=0.0)), at_zero)

    passed = at_zero == 0.0 and worst <= 1e-12 * max(1.0, bound)
    detail = "" if passed else f"|f(z)| exceeds {bound:.6g}|z| by up to {worst:.6g}"
    return AssumptionCheck(
        name=f"lipschitz[{name}]", passed=passed, residual=worst, detail=detail
    )


def diffusion_bound_ratio(
    sys: StackedSystem, samples: Optional[int] = None, seed: int = 0
) -> Dict[str, float]:
    """
    Sampled estimate of L_Di, the largest |Phi_i D_i Theta_i y_i + Phi_i D_i offset_i| / |y_i|.

    Samples y_i are standard normal in R^m, so the estimate is only meaningful as a
    diagnostic when offsets are nonzero.

    Returns:
        Agent name to estimated ratio
    """
    samples = samples or get_setting("numerics", "lipschitz_samples")
    rng = np.random.default_rng(seed)
    ratios: Dict[str, float] = {}
    for i, agent in enumerate(sys.agents):
        block = sys.block(i)
        matrix = sys.diffusion_matrix[block, block]
        affine = sys.diffusion_affine[block]
        y = rng.standard_normal((samples, sys.m))
        values = y @ matrix.T + affine
        norms = np.linalg.norm(y, axis=1)
        ratios[agent.name] = float(np.max(np.linalg.norm(values, axis=1) / norms))
    return ratios
