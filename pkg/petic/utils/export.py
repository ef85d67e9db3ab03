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
CSV, JSON and gnuplot artifacts.

Every CSV has a header row, uses "," as separator and writes floats with 17 significant
digits so values survive a text round trip unchanged.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from ..models import EnsembleStats, EventLog, Trajectory

logger = logging.getLogger("petic.utils.export")

PathLike = Union[str, Path]


def fmt(value: float) -> str:
    """Full-precision text form of a float."""
    return format(float(value), ".17g")


def _write_csv(path: PathLike, headers: List[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(headers)
        for row in rows:
            writer.writerow(row)
    logger.info("Wrote %s", path)
    return path


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    """Columns t, y_1..y_dim, sq_norm."""
    dim = trajectory.states.shape[1]
    headers = ["t"] + [f"y_{k + 1}" for k in range(dim)] + ["sq_norm"]
    rows = (
        [fmt(t)] + [fmt(v) for v in y] + [fmt(sq)]
        for t, y, sq in zip(trajectory.times, trajectory.states, trajectory.sq_norm)
    )
    return _write_csv(path, headers, rows)


def write_events_csv(log: EventLog, path: PathLike) -> Path:
    """Columns s, t_s, gap, w_ratio."""
    rows = ([str(r.index), fmt(r.time), fmt(r.gap), fmt(r.w_ratio)] for r in log)
    return _write_csv(path, ["s", "t_s", "gap", "w_ratio"], rows)


def write_ensemble_csv(stats: EnsembleStats, M: float, gamma: float, path: PathLike) -> Path:
    """Columns t, mean_sq, envelope M exp(-gamma t) mean_sq(0), single_path."""
    initial = float(stats.mean_sq[0]) if stats.mean_sq.size else 0.0
    envelope = M * np.exp(-gamma * stats.times) * initial
    rows = (
        [fmt(t), fmt(m), fmt(e), fmt(s)]
        for t, m, e, s in zip(stats.times, stats.mean_sq, envelope, stats.single_path)
    )
    return _write_csv(path, ["t", "mean_sq", "envelope", "single_path"], rows)


def write_positions_csv(
    trajectory: Trajectory, agent_names: Sequence[str], path: PathLike
) -> Path:
    """Columns t, leader_1..leader_n0, then <agent>_1..<agent>_ni for every follower."""
    if trajectory.leader is None or trajectory.followers is None:
        raise ValueError("trajectory carries no absolute positions")
    headers = ["t"] + [f"leader_{k + 1}" for k in range(trajectory.leader.shape[1])]
    for name, states in zip(agent_names, trajectory.followers):
        headers += [f"{name}_{k + 1}" for k in range(states.shape[1])]
    blocks = np.hstack([trajectory.leader] + list(trajectory.followers))
    rows = ([fmt(t)] + [fmt(v) for v in row] for t, row in zip(trajectory.times, blocks))
    return _write_csv(path, headers, rows)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_report(report: Dict[str, Any], path: PathLike) -> Path:
    """Write report.json; non-finite floats are written as strings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(report), indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


_GNUPLOT_SCRIPTS = {
    "trajectory.gp": (
        "trajectory.csv",
        'set logscale y\nset xlabel "t"\nset ylabel "|y|^2"\n'
        "plot 'trajectory.csv' using 1:(column(\"sq_norm\")) with lines title '|y(t)|^2'\n",
    ),
    "events.gp": (
        "events.csv",
        'set xlabel "t_s"\nset ylabel "gap"\n'
        "plot 'events.csv' using 2:3 with impulses title 'inter-event gap'\n",
    ),
    "ensemble.gp": (
        "ensemble.csv",
        'set logscale y\nset xlabel "t"\n'
        "plot 'ensemble.csv' using 1:2 with lines title 'E|y|^2', \\\n"
        "     'ensemble.csv' using 1:3 with lines title 'bound', \\\n"
        "     'ensemble.csv' using 1:4 with lines title 'single path'\n",
    ),
}


def write_gnuplot_scripts(out_dir: PathLike, csv_names: Iterable[str]) -> List[Path]:
    """
    Write gnuplot scripts next to the CSVs they plot.

    Args:
        out_dir: Output directory holding the CSVs
        csv_names: File names of the CSVs that were written

    Returns:
        Paths of the scripts written
    """
    out_dir = Path(out_dir)
    present = set(csv_names)
    written = []
    for script, (source, body) in _GNUPLOT_SCRIPTS.items():
        if source not in present:
            continue
        header = "set datafile separator ','\nset key autotitle columnhead\n"
        path = out_dir / script
        path.write_text(header + body, encoding="utf-8")
        written.append(path)
    return written
