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
Validation utilities for petic.

Each validator takes the value and the dotted name it lives under (its scenario path)
and raises ValidationError naming that path when the value is unacceptable.
"""

from typing import Any, Optional, Sequence, Tuple

import numpy as np

from .config import get_setting
from .errors import ValidationError


def validate_matrix(
    value: Any,
    name: str,
    shape: Optional[Tuple[int, int]] = None,
    square: bool = False,
) -> np.ndarray:
    """
    Validate that a value is a finite two-dimensional real matrix.

    Args:
        value: Nested sequence or array
        name: Name of the value (for error messages)
        shape: Required (rows, cols), if any
        square: Whether the matrix must be square

    Returns:
        The matrix as a float64 array

    Raises:
        ValidationError: If the value is not a finite matrix of the expected shape
    """
    try:
        matrix = np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} must be a numeric matrix: {e}", field_path=name)

    if matrix.ndim != 2:
        raise ValidationError(
            f"{name} must be a two-dimensional matrix, got {matrix.ndim} dimension(s)",
            field_path=name,
        )
    if not np.all(np.isfinite(matrix)):
        raise ValidationError(f"{name} contains non-finite entries", field_path=name)
    if square and matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(
            f"{name} must be square, got {matrix.shape[0]}x{matrix.shape[1]}", field_path=name
        )
    if shape is not None and matrix.shape != tuple(shape):
        raise ValidationError(
            f"{name} must be {shape[0]}x{shape[1]}, got {matrix.shape[0]}x{matrix.shape[1]}",
            field_path=name,
        )
    return matrix


def validate_vector(value: Any, name: str, length: Optional[int] = None) -> np.ndarray:
    """
    Validate that a value is a finite one-dimensional real vector.

    Args:
        value: Sequence or array
        name: Name of the value (for error messages)
        length: Required length, if any

    Returns:
        The vector as a float64 array

    Raises:
        ValidationError: If the value is not a finite vector of the expected length
    """
    try:
        vector = np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} must be a numeric vector: {e}", field_path=name)

    if vector.ndim != 1:
        raise ValidationError(f"{name} must be a vector", field_path=name)
    if not np.all(np.isfinite(vector)):
        raise ValidationError(f"{name} contains non-finite entries", field_path=name)
    if length is not None and vector.shape[0] != length:
        raise ValidationError(
            f"{name} must have length {length}, got {vector.shape[0]}", field_path=name
        )
    return vector


def validate_positive(value: float, name: str, assumption: Optional[int] = None) -> float:
    """
    Validate that a scalar is finite and strictly positive.

    Raises:
        ValidationError: If value <= 0 or not finite
    """
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(
            f"{name} must be > 0, got {value}", field_path=name, assumption=assumption
        )
    return float(value)


def validate_nonnegative(value: float, name: str, assumption: Optional[int] = None) -> float:
    """
    Validate that a scalar is finite and nonnegative.

    Raises:
        ValidationError: If value < 0 or not finite
    """
    if not np.isfinite(value) or value < 0:
        raise ValidationError(
            f"{name} must be >= 0, got {value}", field_path=name, assumption=assumption
        )
    return float(value)


def validate_at_least(
    value: float, minimum: float, name: str, assumption: Optional[int] = None
) -> float:
    """
    Validate that a scalar is finite and not below a minimum.

    Raises:
        ValidationError: If value < minimum
    """
    if not np.isfinite(value) or value < minimum:
        short = name.rsplit(".", 1)[-1]
        raise ValidationError(
            f"{short} must satisfy {short} >= {minimum:g}, got {value}",
            field_path=name,
            assumption=assumption,
        )
    return float(value)


def validate_choice(value: str, name: str, allowed: Sequence[str]) -> str:
    """
    Validate that a string is one of the allowed values.

    Raises:
        ValidationError: If value is not allowed
    """
    if value not in allowed:
        allowed_str = ", ".join(allowed)
        raise ValidationError(f"{name} must be one of: {allowed_str}", field_path=name)
    return value


def validate_grid_multiple(
    value: float, unit: float, name: str, assumption: Optional[int] = None
) -> int:
    """
    Validate that a duration is an integer multiple of a grid unit.

    Args:
        value: Duration to check (seconds)
        unit: Grid unit, typically the integrator step (seconds)
        name: Name of the value (for error messages)
        assumption: Assumption number to cite, if any

    Returns:
        The number of grid units contained in value

    Raises:
        ValidationError: If value / unit is not an integer within 1e-9 relative tolerance
    """
    steps = int(round(value / unit))
    if abs(steps * unit - value) > 1e-9 * max(abs(value), unit):
        raise ValidationError(
            f"{name}={value} is not an integer multiple of the integrator step {unit}",
            field_path=name,
            assumption=assumption,
        )
    return steps


def validate_positive_definite(matrix: np.ndarray, name: str) -> np.ndarray:
    """
    Validate that a matrix is symmetric positive definite.

    Args:
        matrix: Square matrix
        name: Name of the value (for error messages)

    Returns:
        The matrix, symmetrised to remove round-off asymmetry

    Raises:
        ValidationError: If the matrix is not symmetric or has a nonpositive eigenvalue
    """
    tol = get_setting("numerics", "symmetry_tol")
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > tol * max(1.0, np.max(np.abs(matrix))):
        raise ValidationError(f"{name} must be symmetric", field_path=name)
    symmetric = 0.5 * (matrix + matrix.T)
    if np.linalg.eigvalsh(symmetric).min() <= 0:
        raise ValidationError(f"{name} must be positive definite", field_path=name)
    return symmetric


def format_path(*parts: Any) -> str:
    """
    Join path components into a dotted scenario path.

    Example:
        >>> format_path("agents", 2, "Phi")
        'agents.2.Phi'
    """
    return ".".join(str(p) for p in parts if p != "")
