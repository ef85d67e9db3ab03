"""
Small scenarios used across the test suite.

The scalar scenario has one follower with dx = c x dt + d x dw, a leader with the same
dynamics (so the matching condition holds) and the information matrix H = [[1]].
"""

from typing import Any, Dict, Optional

from petic.scenario import Scenario, ScenarioDocument, build_scenario


def scalar_document(
    c: float = -1.0,
    d: float = 0.0,
    gain: float = -0.5,
    mode: str = "no_delay",
    delay: float = 0.0,
    x0: float = 1.0,
    leader_c: Optional[float] = None,
    tau0: float = 0.0,
    beta: float = 0.0,
    alpha: float = 1.0,
    delta: float = 0.1,
    psi1: float = 1.2,
    psi2: float = 1.2,
    gamma: float = 0.1,
    p: float = 1.0,
    step: float = 0.01,
    horizon: float = 1.0,
    runs: int = 4,
    seed: int = 7,
    stride: int = 1,
) -> Dict[str, Any]:
    """Scenario document of the scalar toy system."""
    return {
        "name": "scalar",
        "virtual": {"m": 1},
        "leader": {
            "n": 1,
            "C": [[c if leader_c is None else leader_c]],
            "D": [[d]],
            "x0": [0.0],
        },
        "topology": {"alpha": alpha, "h": [[1.0]]},
        "agents": [
            {
                "name": "a1",
                "n": 1,
                "C": [[c]],
                "D": [[d]],
                "Xi": [[1.0]],
                "Phi": [[1.0]],
                "Theta": [[1.0]],
                "gain": gain,
                "x0": [x0],
                "energy": {"tau0": tau0, "beta": beta},
            }
        ],
        "trigger": {
            "delta": delta,
            "psi1": psi1,
            "psi2": psi2,
            "gamma": gamma,
            "P": {"scalar": p},
        },
        "control": {"mode": mode, "actuation_delay": delay},
        "sim": {
            "step": step,
            "horizon": horizon,
            "runs": runs,
            "seed": seed,
            "record_stride": stride,
        },
    }


def toy_scenario(**kwargs: Any) -> Scenario:
    """Build the scalar scenario; keyword arguments as for scalar_document."""
    return build_scenario(ScenarioDocument.model_validate(scalar_document(**kwargs)))


def oscillator_document(step: float = 0.01, horizon: float = 1.0) -> Dict[str, Any]:
    """Two-dimensional damped oscillator without noise, lifted identically into R^2."""
    eye = [[1.0, 0.0], [0.0, 1.0]]
    C = [[0.0, 1.0], [-1.0, -0.5]]
    return {
        "virtual": {"m": 2},
        "leader": {"n": 2, "C": C, "D": [[0.0, 0.0], [0.0, 0.0]], "x0": [0.0, 0.0]},
        "topology": {"alpha": 1.0, "h": [[1.0]]},
        "agents": [
            {
                "n": 2,
                "C": C,
                "D": [[0.0, 0.0], [0.0, 0.0]],
                "Xi": eye,
                "Phi": eye,
                "Theta": eye,
                "gain": -0.5,
                "x0": [1.0, 0.0],
            }
        ],
        "trigger": {"delta": 0.1, "psi1": 1.2, "psi2": 1.2, "gamma": 0.1, "P": {"scalar": 1.0}},
        "sim": {"step": step, "horizon": horizon, "runs": 1},
    }
