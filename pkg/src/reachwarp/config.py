"""JSON problem configuration: schema validation and object construction.

The schema is flat and explicit; every validation error names the
offending field so CLI users get actionable diagnostics.  Directions are
renormalized silently when within 1e-6 of unit norm and rejected
otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ReachwarpError
from .model import (ControlPolytope, FrobeniusBall, LinearSystem, box_polytope,
                    vertex_polytope)

DIRECTION_LOAD_TOL = 1e-6

DEFAULT_SEED = 42

_TOLERANCE_DEFAULTS = {"tol_spec": 1e-9, "tol_ev": 1e-8, "tol_verify": 1e-6}

_TOP_LEVEL_KEYS = {"A", "X0", "T", "control", "admissible", "direction", "sense",
                   "steps", "directions", "seed", "tolerances"}


@dataclass(frozen=True)
class Tolerances:
    tol_spec: float = 1e-9
    tol_ev: float = 1e-8
    tol_verify: float = 1e-6


@dataclass(frozen=True)
class ProblemConfig:
    """A fully validated problem: dynamics, sets, direction, run parameters.

    echo preserves the JSON document the problem was parsed from, for
    reproducible run manifests.
    """

    system: LinearSystem
    control: ControlPolytope
    ball: FrobeniusBall
    direction: np.ndarray
    sense: str
    steps: int
    directions: int
    seed: int
    tolerances: Tolerances
    echo: dict


def _matrix_field(data: dict, key: str) -> np.ndarray:
    if key not in data:
        raise ConfigError(f"missing field '{key}'")
    try:
        arr = np.array(data[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{key}': not a numeric matrix ({exc})") from exc
    if arr.ndim != 2:
        raise ConfigError(f"field '{key}': expected a matrix (list of rows), got "
                          f"shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"field '{key}': non-finite entries")
    return arr


def _vector_field(data: dict, key: str) -> np.ndarray:
    if key not in data:
        raise ConfigError(f"missing field '{key}'")
    try:
        arr = np.array(data[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{key}': not a numeric vector ({exc})") from exc
    if arr.ndim != 1:
        raise ConfigError(f"field '{key}': expected a flat list of numbers, got "
                          f"shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"field '{key}': non-finite entries")
    return arr


def _scalar_field(data: dict, key: str, default=None):
    if key not in data:
        if default is None:
            raise ConfigError(f"missing field '{key}'")
        return default
    value = data[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"field '{key}': expected a number, got {value!r}")
    return value


def _int_field(data: dict, key: str, default: int | None, minimum: int) -> int:
    value = _scalar_field(data, key, default)
    if int(value) != value:
        raise ConfigError(f"field '{key}': expected an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ConfigError(f"field '{key}': must be at least {minimum}, got {value}")
    return value


def _control_polytope(data: dict) -> ControlPolytope:
    if "control" not in data:
        raise ConfigError("missing field 'control'")
    spec = data["control"]
    if not isinstance(spec, dict):
        raise ConfigError("field 'control': expected an object")
    kind = spec.get("type")
    try:
        if kind == "box":
            extra = set(spec) - {"type", "lo", "hi"}
            if extra:
                raise ConfigError(f"field 'control': unknown keys {sorted(extra)}")
            return box_polytope(_vector_field(spec, "lo"), _vector_field(spec, "hi"))
        if kind == "vertices":
            extra = set(spec) - {"type", "list"}
            if extra:
                raise ConfigError(f"field 'control': unknown keys {sorted(extra)}")
            return vertex_polytope(_matrix_field(spec, "list"))
    except ConfigError:
        raise
    except ReachwarpError as exc:
        raise ConfigError(f"field 'control': {exc}") from exc
    raise ConfigError(f"field 'control.type': expected 'box' or 'vertices', "
                      f"got {kind!r}")


def _frobenius_ball(data: dict) -> FrobeniusBall:
    if "admissible" not in data:
        raise ConfigError("missing field 'admissible'")
    spec = data["admissible"]
    if not isinstance(spec, dict):
        raise ConfigError("field 'admissible': expected an object")
    if spec.get("type") != "frobenius_ball":
        raise ConfigError(f"field 'admissible.type': expected 'frobenius_ball', "
                          f"got {spec.get('type')!r}")
    extra = set(spec) - {"type", "center", "radius"}
    if extra:
        raise ConfigError(f"field 'admissible': unknown keys {sorted(extra)}")
    center = _matrix_field(spec, "center")
    radius = _scalar_field(spec, "radius")
    if radius < 0:
        raise ConfigError(f"field 'admissible.radius': must be nonnegative, "
                          f"got {radius}")
    try:
        return FrobeniusBall(center=center, radius=float(radius))
    except ReachwarpError as exc:
        raise ConfigError(f"field 'admissible': {exc}") from exc


def parse_config(data: dict) -> ProblemConfig:
    """Validate a decoded JSON document and build the problem objects."""
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a JSON object")
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level fields {sorted(unknown)}")
    A = _matrix_field(data, "A")
    if A.shape[0] != A.shape[1]:
        raise ConfigError(f"field 'A': must be square, got shape {A.shape}")
    n = A.shape[0]
    X0 = _vector_field(data, "X0")
    if X0.shape[0] != n:
        raise ConfigError(f"field 'X0': length {X0.shape[0]} does not match the "
                          f"state dimension {n}")
    T = _scalar_field(data, "T")
    if T <= 0:
        raise ConfigError(f"field 'T': must be positive, got {T}")
    control = _control_polytope(data)
    ball = _frobenius_ball(data)
    if ball.center.shape != (n, control.m):
        raise ConfigError(f"field 'admissible.center': shape {ball.center.shape} "
                          f"does not match (n, m) = ({n}, {control.m})")
    direction = _vector_field(data, "direction")
    if direction.shape[0] != n:
        raise ConfigError(f"field 'direction': length {direction.shape[0]} does "
                          f"not match the state dimension {n}")
    nrm = float(np.linalg.norm(direction))
    if abs(nrm - 1.0) > DIRECTION_LOAD_TOL:
        raise ConfigError(f"field 'direction': norm {nrm} is off unit by more "
                          f"than {DIRECTION_LOAD_TOL}")
    direction = direction / nrm
    direction.setflags(write=False)
    sense = data.get("sense", "grow")
    if sense not in ("grow", "shrink"):
        raise ConfigError(f"field 'sense': expected 'grow' or 'shrink', got {sense!r}")
    steps = _int_field(data, "steps", 2000, 1)
    directions = _int_field(data, "directions", 64 if n <= 2 else 400, 1)
    seed = _int_field(data, "seed", DEFAULT_SEED, 0)
    tol_spec = data.get("tolerances", {})
    if not isinstance(tol_spec, dict):
        raise ConfigError("field 'tolerances': expected an object")
    extra = set(tol_spec) - set(_TOLERANCE_DEFAULTS)
    if extra:
        raise ConfigError(f"field 'tolerances': unknown keys {sorted(extra)}")
    tol_values = {}
    for key, default in _TOLERANCE_DEFAULTS.items():
        value = _scalar_field(tol_spec, key, default)
        if value < 0:
            raise ConfigError(f"field 'tolerances.{key}': must be nonnegative, "
                              f"got {value}")
        tol_values[key] = float(value)
    try:
        system = LinearSystem(A=A, X0=X0, T=float(T), m=control.m)
    except ReachwarpError as exc:
        raise ConfigError(str(exc)) from exc
    return ProblemConfig(system=system, control=control, ball=ball,
                         direction=direction, sense=sense, steps=steps,
                         directions=directions, seed=seed,
                         tolerances=Tolerances(**tol_values), echo=data)


def load_config(path) -> ProblemConfig:
    """Parse a JSON problem file; decoding errors report line and column."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc.msg} "
                          f"(line {exc.lineno}, column {exc.colno})") from exc
    return parse_config(data)
