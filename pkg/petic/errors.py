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
Standardized error types for petic.

Every failure raised by the package derives from PeticError so that callers (and the
command-line front end, which maps them to exit codes) can handle them uniformly.
"""

from typing import Any, Dict, List, Optional


class PeticError(Exception):
    """
    Base exception class for petic errors.

    Attributes:
        message: Human-readable error description
        field_path: Dotted scenario path of the offending field, if known
        assumption: Number of the stability assumption that is violated, if any
        details: Additional structured diagnostics
    """

    def __init__(
        self,
        message: str,
        field_path: Optional[str] = None,
        assumption: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.field_path = field_path
        self.assumption = assumption
        self.details = details or {}

    def __str__(self) -> str:
        """
        Create a formatted string representation of the error.

        Returns:
            The error message followed by the field path and assumption, when present.
        """
        path_msg = f" (at {self.field_path})" if self.field_path else ""
        assumption_msg = f" [Assumption {self.assumption}]" if self.assumption else ""
        return f"{self.message}{path_msg}{assumption_msg}"


class ConfigurationError(PeticError):
    """
    Raised when a model, topology, controller or trigger precondition is violated.

    Typical causes are mismatched matrix dimensions, non-negative gains for the
    delay-free controller, or a weighting matrix P that is not positive definite.
    """

    pass


class ValidationError(ConfigurationError):
    """
    Raised when a scenario fails validation.

    Always carries the dotted path of the offending field.
    """

    pass


class ScenarioParseError(PeticError):
    """
    Raised when a scenario file cannot be parsed.

    Attributes:
        line: 1-based line of the parse failure, if known
        column: 1-based column of the parse failure, if known
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        **kwargs,
    ):
        super().__init__(message, **kwargs)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        base_str = super().__str__()
        if self.line is None:
            return base_str
        column_msg = f", column {self.column}" if self.column is not None else ""
        return f"{base_str} (line {self.line}{column_msg})"


class NumericalBlowupError(PeticError):
    """
    Raised when a simulated state becomes non-finite or exceeds the divergence threshold.

    Attributes:
        t: Simulation time at which the divergence was detected
        last_event: Most recent event record before the blowup, or None
        last_w_ratio: W ratio observed at the most recent trigger check, or None
    """

    def __init__(
        self,
        message: str,
        t: float,
        last_event: Optional[Any] = None,
        last_w_ratio: Optional[float] = None,
        **kwargs,
    ):
        super().__init__(message, **kwargs)
        self.t = t
        self.last_event = last_event
        self.last_w_ratio = last_w_ratio

    def __str__(self) -> str:
        base_str = super().__str__()
        event_msg = (
            f"; last event #{self.last_event.index} at t={self.last_event.time:.6g}"
            if self.last_event is not None
            else "; no event fired"
        )
        ratio_msg = (
            f"; last W ratio {self.last_w_ratio:.6g}" if self.last_w_ratio is not None else ""
        )
        return f"{base_str} at t={self.t:.6g}{event_msg}{ratio_msg}"


class InternalInvariantError(PeticError):
    """
    Raised when an internal invariant does not hold (e.g. a negative Lyapunov value).

    This always indicates a bug or corrupted input rather than a bad scenario.
    """

    pass


class UsageError(PeticError):
    """
    Raised when an API is called in a way that cannot produce a meaningful result.
    """

    pass


class EnsembleFailureError(PeticError):
    """
    Raised when too many Monte Carlo runs of an ensemble diverged.

    Attributes:
        n_runs: Number of runs that were attempted
        excluded: Indices of the runs that were excluded
        errors: The blowup errors of the excluded runs
    """

    def __init__(
        self,
        message: str,
        n_runs: int,
        excluded: List[int],
        errors: List[NumericalBlowupError],
        **kwargs,
    ):
        super().__init__(message, **kwargs)
        self.n_runs = n_runs
        self.excluded = excluded
        self.errors = errors

    def __str__(self) -> str:
        base_str = super().__str__()
        first = f"\nFirst failure: {self.errors[0]}" if self.errors else ""
        return f"{base_str}\nExcluded runs: {len(self.excluded)} of {self.n_runs}{first}"
