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
Configuration system for petic.

This module handles process-wide numerical defaults, ensemble settings and logging
configuration. Defaults can be overridden from environment variables or at runtime.
"""

import logging
import os
from copy import deepcopy
from typing import Any, Dict, Optional

# Default configuration
DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "numerics": {
        "identity_tol": 1e-10,  # Algebraic identity checks (Assumptions 2 and 4)
        "symmetry_tol": 1e-12,  # Symmetry of the weighting matrix P
        "rank_rtol": 1e-10,  # Singular value threshold relative to sigma_max
        "blowup_threshold": 1e12,  # |y| above this declares divergence
        "gamma_bar_cap": 1e3,  # Certified rate reported when the jump annihilates the state
        "lipschitz_samples": 1000,  # Random samples for the sector bound check
    },
    "ensemble": {
        "max_workers": 4,
        "max_exclusion_fraction": 0.1,
        "decay_slack": 1.5,
    },
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    },
}

# Global configuration dictionary that will be populated with settings
config: Dict[str, Dict[str, Any]] = deepcopy(DEFAULT_CONFIG)

# Environment variables prefix
ENV_PREFIX = "PETIC_"


def _coerce(value: str, default: Any) -> Any:
    """
    Convert an environment string to the type of the default it overrides.

    Args:
        value: Raw environment value
        default: Current value whose type is used for the conversion

    Returns:
        The converted value
    """
    if isinstance(default, bool):
        return value.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value


def _load_env_vars() -> None:
    """
    Load configuration from environment variables.

    Variables use the PETIC_ prefix and a double underscore to address a section:
    PETIC_ENSEMBLE__DECAY_SLACK=2.0 sets config["ensemble"]["decay_slack"].
    Unknown sections or keys are ignored.
    """
    for key in os.environ:
        if not key.startswith(ENV_PREFIX):
            continue
        config_key = key[len(ENV_PREFIX):].lower()
        if "__" not in config_key:
            continue
        section, option = config_key.split("__", 1)
        if section in config and option in config[section]:
            config[section][option] = _coerce(os.environ[key], config[section][option])


def _update_nested_dict(d: Dict[str, Any], u: Dict[str, Any]) -> Dict[str, Any]:
    """
    Update a nested dictionary with values from another dictionary.

    Args:
        d: The target dictionary to update
        u: The source dictionary with new values

    Returns:
        The updated dictionary with merged values
    """
    for k, v in u.items():
        if isinstance(v, dict) and k in d and isinstance(d[k], dict):
            _update_nested_dict(d[k], v)
        else:
            d[k] = v
    return d


# Load configuration from environment variables on module import
_load_env_vars()


def get_setting(section: str, key: str) -> Any:
    """
    Get a single configuration value.

    Args:
        section: Configuration section (e.g. "numerics")
        key: Key within the section

    Returns:
        The configured value

    Raises:
        KeyError: If the section or key does not exist
    """
    return config[section][key]


def update_config(section: str, **kwargs: Any) -> None:
    """
    Update settings of one configuration section.

    Args:
        section: Section to update
        **kwargs: Key-value pairs to merge into the section
    """
    if section in config:
        _update_nested_dict(config[section], kwargs)


def reset_config() -> None:
    """Restore the defaults and re-apply environment overrides."""
    config.clear()
    config.update(deepcopy(DEFAULT_CONFIG))
    _load_env_vars()


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure the "petic" logger hierarchy.

    Args:
        level: Log level name; defaults to config["logging"]["level"]
    """
    logger = logging.getLogger("petic")
    logger.setLevel((level or config["logging"]["level"]).upper())
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(config["logging"]["format"]))
        logger.addHandler(handler)
