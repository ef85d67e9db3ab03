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
Impulsive controller interface and registry.

A controller turns the state at an impulse instant into the post-impulse state. The
simulator asks it which inputs it needs through capability flags, and controllers are
looked up by name so scenarios can select them with control.mode.
"""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Type

import numpy as np

from ..errors import ConfigurationError
from ..system import StackedSystem


class ImpulseController(ABC):
    """
    Base class for all impulse laws.

    Args:
        system: Stacked virtual system the impulses act on
        actuation_delay: Lag tau_s between trigger detection and actuation (seconds)
        delta: Sampling period of the trigger
    """

    # Controller capability flags
    requires_negative_gains = False  # Every k_i must be < 0
    uses_delay = False  # Jump reads the state tau_s seconds earlier
    applies_impulses = True  # False for the open-loop system

    def __init__(
        self,
        system: StackedSystem,
        actuation_delay: float = 0.0,
        delta: Optional[float] = None,
    ):
        self.system = system
        self.actuation_delay = actuation_delay
        self.delta = delta
        self.validate()

    @classmethod
    def get_controller_name(cls) -> str:
        """Name derived from the class name, e.g. NoDelayController -> no_delay."""
        name = cls.__name__.replace("Controller", "")
        return "".join(f"_{c.lower()}" if c.isupper() else c for c in name).lstrip("_")

    def validate(self) -> None:
        """
        Check the controller's preconditions against the system.

        Raises:
            ConfigurationError: If a precondition does not hold
        """
        if self.requires_negative_gains:
            gains = self.system.gains
            bad = [a.name for a, k in zip(self.system.agents, gains) if not k < 0]
            if bad:
                raise ConfigurationError(
                    f"the {self.get_controller_name()} controller needs negative gains; "
                    f"offending agents: {', '.join(bad)}",
                    field_path="agents.gain",
                    assumption=6,
                )

    @abstractmethod
    def jump(
        self, y_minus: np.ndarray, t_s: float, y_delayed: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """
        Post-impulse state at an impulse instant.

        Args:
            y_minus: State just before the impulse
            t_s: Impulse instant
            y_delayed: State at t_s - tau_s, for controllers that use the delay

        Returns:
            State at t_s
        """
        pass


# Registry of controller classes - maps control.mode values to implementations
_CONTROLLER_REGISTRY: Dict[str, Type[ImpulseController]] = {}


def register_controller(name: str, controller_class: Type[ImpulseController]) -> None:
    """
    Register a controller class under a control.mode name.

    Args:
        name: Mode name (lowercase)
        controller_class: Controller class to register
    """
    _CONTROLLER_REGISTRY[name] = controller_class


def get_controller(name: str, system: StackedSystem, **kwargs) -> ImpulseController:
    """
    Instantiate a registered controller.

    Args:
        name: Mode name
        system: Stacked system the controller acts on
        **kwargs: Additional constructor arguments (actuation_delay, delta)

    Returns:
        Controller instance

    Raises:
        ConfigurationError: If no controller is registered under the name
    """
    controller_class = _CONTROLLER_REGISTRY.get(name)
    if controller_class is None:
        supported = ", ".join(_CONTROLLER_REGISTRY.keys())
        raise ConfigurationError(
            f"Control mode '{name}' is not supported. Supported modes: {supported}",
            field_path="control.mode",
        )
    return controller_class(system, **kwargs)


def list_controllers() -> List[str]:
    """Names of the registered controllers."""
    return list(_CONTROLLER_REGISTRY.keys())
