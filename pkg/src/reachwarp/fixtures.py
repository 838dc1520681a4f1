"""Built-in example problems, emitted as ready-to-run JSON configurations."""

from __future__ import annotations

import copy

import numpy as np

from .errors import ConfigError

_ADMIRE_A = [[-0.9967, 0.0, 0.6176],
             [0.0, -0.5057, 0.0],
             [-0.0939, 0.0, -0.2127]]

_ADMIRE_B = [[0.0, -4.2423, 4.2423, 1.4871],
             [1.6532, -1.2735, -1.2735, 0.0024],
             [0.0, -0.2805, 0.2805, -0.8820]]


def _unit(v: list[float]) -> list[float]:
    arr = np.array(v, dtype=float)
    return list(arr / np.linalg.norm(arr))


def _admire(direction: list[float], sense: str) -> dict:
    return {
        "A": copy.deepcopy(_ADMIRE_A),
        "X0": [0.0, 0.0, 0.0],
        "T": 2.0,
        "control": {"type": "box", "lo": [-0.1, -0.1, -0.1, -0.1],
                    "hi": [0.1, 0.1, 0.1, 0.1]},
        "admissible": {"type": "frobenius_ball", "center": copy.deepcopy(_ADMIRE_B),
                       "radius": 0.5},
        "direction": direction,
        "sense": sense,
        "steps": 2000,
        "directions": 400,
        "seed": 42,
        "tolerances": {"tol_spec": 1e-9, "tol_ev": 1e-8, "tol_verify": 1e-6},
    }


def _fixture_admire_grow() -> dict:
    return _admire([1.0, 0.0, 0.0], "grow")


def _fixture_admire_shrink() -> dict:
    return _admire([1.0, 0.0, 0.0], "shrink")


def _fixture_admire_mixed() -> dict:
    # the printed 4-decimal values are slightly off unit; store them renormalized
    return _admire(_unit([0.3536, 0.6124, 0.7071]), "grow")


def _fixture_oscillator() -> dict:
    return {
        "A": [[0.0, 1.0], [-2.0, -0.8]],
        "X0": [0.0, 0.0],
        "T": 2.0,
        "control": {"type": "box", "lo": [-1.0, -1.0], "hi": [1.0, 1.0]},
        "admissible": {"type": "frobenius_ball",
                       "center": [[0.0, 1.0], [1.0, 0.0]], "radius": 0.5},
        "direction": [1.0, 0.0],
        "sense": "grow",
        "steps": 2000,
        "directions": 64,
        "seed": 42,
        "tolerances": {"tol_spec": 1e-9, "tol_ev": 1e-8, "tol_verify": 1e-6},
    }


def _fixture_scalar_analytic() -> dict:
    return {
        "A": [[-1.0]],
        "X0": [0.0],
        "T": 1.0,
        "control": {"type": "box", "lo": [-1.0], "hi": [1.0]},
        "admissible": {"type": "frobenius_ball", "center": [[1.0]], "radius": 0.5},
        "direction": [1.0],
        "sense": "grow",
        "steps": 2000,
        "directions": 2,
        "seed": 42,
        "tolerances": {"tol_spec": 1e-9, "tol_ev": 1e-8, "tol_verify": 1e-6},
    }


def _fixture_diag3_theorem() -> dict:
    return {
        "A": [[-1.0, 0.0, 0.0], [0.0, -0.5, 0.0], [0.0, 0.0, -0.25]],
        "X0": [0.0, 0.0, 0.0],
        "T": 2.0,
        "control": {"type": "box", "lo": [-1.0, -1.0], "hi": [1.0, 1.0]},
        "admissible": {"type": "frobenius_ball",
                       "center": [[1.0, 0.2], [0.0, 1.0], [0.3, -0.4]],
                       "radius": 0.5},
        "direction": [1.0, 0.0, 0.0],
        "sense": "grow",
        "steps": 2000,
        "directions": 400,
        "seed": 42,
        "tolerances": {"tol_spec": 1e-9, "tol_ev": 1e-8, "tol_verify": 1e-6},
    }


_FIXTURES = {
    "admire_grow_p": (_fixture_admire_grow,
                      "3-state aircraft angular-rate model, grow the roll-rate extent"),
    "admire_shrink_p": (_fixture_admire_shrink,
                        "3-state aircraft angular-rate model, shrink the roll-rate extent"),
    "admire_mixed_d": (_fixture_admire_mixed,
                       "3-state aircraft angular-rate model, grow along a mixed direction"),
    "oscillator": (_fixture_oscillator,
                   "damped 2-state oscillator with complex eigenvalues (heuristic regime)"),
    "scalar_analytic": (_fixture_scalar_analytic,
                        "1-state system with hand-computable growth metrics"),
    "diag3_theorem": (_fixture_diag3_theorem,
                      "diagonal 3-state system satisfying both optimality assumptions"),
}


def fixture_names() -> list[str]:
    return list(_FIXTURES)


def fixture_description(name: str) -> str:
    _require(name)
    return _FIXTURES[name][1]


def fixture_config(name: str) -> dict:
    """A fresh JSON-ready configuration dict for the named fixture."""
    _require(name)
    return _FIXTURES[name][0]()


def _require(name: str) -> None:
    if name not in _FIXTURES:
        known = ", ".join(sorted(_FIXTURES))
        raise ConfigError(f"unknown fixture {name!r}; available: {known}")
