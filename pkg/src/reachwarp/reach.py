"""Reachable-set boundary points of linear systems via adjoint-driven controls.

For x' = A x + B u the adjoint equation P' = -A^T P with terminal value
P(T) = d decouples from the state and has the closed form
P(t) = e^{A^T (T - t)} d.  Driving the system with the vertex control that
maximizes P(t)^T B u at each instant lands the trajectory on the boundary
of the reachable set, with d the outward normal there.  No two-point
boundary value problem has to be shot: everything reduces to matrix
exponentials.

Discretization: the horizon is split into equal steps, the maximizing
vertex is chosen once per step from the adjoint evaluated at the step
midpoint, and the state is advanced with the exact constant-input flow
x_next = e^{Ah} x + (int_0^h e^{As} ds) B u.  Both step matrices come from
one augmented matrix exponential and are cached per (A, h); adjoint
midpoint values are accumulated backward from P(T) = d with repeated
multiplication by e^{A^T h}, costing two exponentials total per sweep
direction.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, DomainError, GeometryError, NumericError
from .linalg import as_matrix, mat_exp
from .model import ControlPolytope, LinearSystem, unit_direction

DEFAULT_STEPS = 2000

DEFAULT_QUAD_NODES = 4000

THREADS_ENV_VAR = "REACHWARP_THREADS"


@dataclass(frozen=True)
class CostatePath:
    """Adjoint trajectory P(t) = e^{A^T (T - t)} d for one terminal direction."""

    A: np.ndarray
    T: float
    d: np.ndarray

    def at(self, t: float) -> np.ndarray:
        """Adjoint value P(t) for t in [0, T]."""
        t = float(t)
        if not 0.0 <= t <= self.T:
            raise DomainError(f"t must lie in [0, {self.T}], got {t}")
        return mat_exp(self.A.T * (self.T - t)) @ self.d


def costate_path(sys: LinearSystem, d) -> CostatePath:
    """Adjoint path for the system with terminal direction d (unit norm)."""
    dv = unit_direction(d)
    if dv.shape[0] != sys.n:
        raise DimensionError(f"direction has length {dv.shape[0]} but the state "
                             f"dimension is {sys.n}")
    return CostatePath(A=sys.A, T=sys.T, d=dv)


@dataclass(frozen=True)
class BoundaryPoint:
    """One boundary point of the reachable set.

    switch_times holds (time, vertex_index) entries, one per change of the
    active control vertex including the initial choice at t = 0; the vertex
    active on any integration step is the last entry at or before the step
    start.  support_value = d . X_dB is the support of the computed
    reachable point in direction d.
    """

    d: np.ndarray
    X_dB: np.ndarray
    support_value: float
    switch_times: tuple[tuple[float, int], ...]
    steps: int


@dataclass(frozen=True)
class GrowthReport:
    """Directional growth metric G_d = d . (X_dB - c0) and its ingredients."""

    G_d: float
    c0: np.ndarray
    X_dB: np.ndarray
    B: np.ndarray


def optimal_vertex(P, B, U: ControlPolytope) -> tuple[int, np.ndarray]:
    """Vertex of U maximizing P^T B u; ties go to the lowest vertex index."""
    Pv = np.asarray(P, dtype=float)
    Bm = as_matrix(B, "B")
    if Pv.ndim != 1 or Pv.shape[0] != Bm.shape[0]:
        raise DimensionError(f"adjoint vector has shape {Pv.shape} but B is "
                             f"{Bm.shape[0]}x{Bm.shape[1]}")
    if Bm.shape[1] != U.m:
        raise DimensionError(f"B has {Bm.shape[1]} columns but the control set "
                             f"has dimension {U.m}")
    values = U.vertices @ (Bm.T @ Pv)
    i = int(np.argmax(values))
    return i, U.vertices[i]


def propagate_step(A, B, u, x, h: float) -> np.ndarray:
    """Exact flow of x' = A x + B u over a step of length h (u held constant).

    Uses the augmented matrix trick: the top-right block of
    exp([[A, B u], [0, 0]] h) is int_0^h e^{As} ds . B u.
    """
    Am = as_matrix(A, "A")
    n = Am.shape[0]
    if Am.shape[1] != n:
        raise DimensionError(f"A must be square, got shape {Am.shape}")
    Bm = as_matrix(B, "B")
    uv = np.asarray(u, dtype=float)
    xv = np.asarray(x, dtype=float)
    if Bm.shape[0] != n or uv.shape != (Bm.shape[1],) or xv.shape != (n,):
        raise DimensionError(f"inconsistent shapes: A {Am.shape}, B {Bm.shape}, "
                             f"u {uv.shape}, x {xv.shape}")
    h = float(h)
    if not np.isfinite(h) or h <= 0.0:
        raise DomainError(f"step length h must be positive and finite, got {h!r}")
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = Am * h
    aug[:n, n] = (Bm @ uv) * h
    E = mat_exp(aug)
    return E[:n, :n] @ xv + E[:n, n]


@lru_cache(maxsize=64)
def _step_matrices(a_key: bytes, n: int, h: float):
    """Per-(A, h) step data: e^{Ah}, Gamma(h) = int_0^h e^{As} ds, and the
    adjoint step e^{A^T h} plus its half step."""
    A = np.frombuffer(a_key, dtype=float).reshape(n, n)
    aug = np.zeros((2 * n, 2 * n))
    aug[:n, :n] = A * h
    aug[:n, n:] = np.eye(n) * h
    EG = np.asarray(mat_exp(aug))
    E = EG[:n, :n].copy()
    Gam = EG[:n, n:].copy()
    F = E.T.copy()
    Fh = np.asarray(mat_exp(A.T * (h / 2.0))).copy()
    for M in (E, Gam, F, Fh):
        M.setflags(write=False)
    return E, Gam, F, Fh


_SCAN_BLOCK = 64


@lru_cache(maxsize=64)
def _midpoint_costates(a_key: bytes, n: int, d_key: bytes, T: float, steps: int):
    """Adjoint values at all step midpoints, accumulated backward from P(T) = d.

    The recursion P[k-1] = e^{A^T h} P[k] is advanced in blocks: the last
    block is filled one step at a time, earlier blocks apply the matrix
    power e^{A^T h}^block to a whole filled block at once.
    """
    d = np.frombuffer(d_key, dtype=float)
    _, _, F, Fh = _step_matrices(a_key, n, T / steps)
    P = np.empty((steps, n))
    block = min(_SCAN_BLOCK, steps)
    p = Fh @ d
    for j in range(block):
        P[steps - 1 - j] = p
        p = F @ p
    lowest = steps - block
    if lowest > 0:
        Fb_T = np.linalg.matrix_power(F, block).T
        while lowest > 0:
            lo = max(0, lowest - block)
            P[lo:lowest] = P[lo + block:lowest + block] @ Fb_T
            lowest = lo
    P.setflags(write=False)
    return P


@lru_cache(maxsize=8)
def _segment_tables(a_key: bytes, n: int, h: float, steps: int):
    """Cumulative step powers e^{Ah}^L and geometric sums sum_{i<L} e^{Ah}^i,
    so a run of L equal-vertex steps collapses into two matrix products."""
    E, _, _, _ = _step_matrices(a_key, n, h)
    E_pow = np.empty((steps + 1, n, n))
    S_sum = np.empty((steps + 1, n, n))
    E_pow[0] = np.eye(n)
    S_sum[0] = 0.0
    for L in range(1, steps + 1):
        E_pow[L] = E @ E_pow[L - 1]
        S_sum[L] = np.eye(n) + E @ S_sum[L - 1]
    E_pow.setflags(write=False)
    S_sum.setflags(write=False)
    return E_pow, S_sum


# beyond this table size, fall back to plain per-step propagation
_SEGMENT_TABLE_LIMIT = 2_000_000


def _check_reach_args(sys: LinearSystem, B, U: ControlPolytope, d) -> tuple[np.ndarray, np.ndarray]:
    Bm = as_matrix(B, "B")
    if Bm.shape != (sys.n, sys.m):
        raise DimensionError(f"B has shape {Bm.shape} but the system expects "
                             f"({sys.n}, {sys.m})")
    if U.m != sys.m:
        raise DimensionError(f"control set has dimension {U.m} but the system "
                             f"expects {sys.m}")
    dv = unit_direction(d)
    if dv.shape[0] != sys.n:
        raise DimensionError(f"direction has length {dv.shape[0]} but the state "
                             f"dimension is {sys.n}")
    return Bm, dv


def _check_steps(steps: int) -> int:
    steps = int(steps)
    if steps < 1:
        raise DomainError(f"steps must be at least 1, got {steps}")
    return steps


def boundary_point(sys: LinearSystem, B, U: ControlPolytope, d,
                   steps: int = DEFAULT_STEPS) -> BoundaryPoint:
    """Boundary point of the reachable set in direction d under input matrix B.

    Integrates x' = A x + B u from X0 over [0, T] in `steps` equal steps,
    holding on each step the vertex of U that maximizes P^T B u for the
    adjoint P evaluated at the step midpoint.  The step map itself is the
    exact constant-input flow, so all discretization error comes from
    switch times being resolved only to step resolution.
    """
    Bm, dv = _check_reach_args(sys, B, U, d)
    steps = _check_steps(steps)
    h = sys.T / steps
    a_key = sys.A.tobytes()
    E, Gam, _, _ = _step_matrices(a_key, sys.n, h)
    P = _midpoint_costates(a_key, sys.n, dv.tobytes(), sys.T, steps)
    # vertex choice for every step at once: column j holds P_mid . (B u_j)
    scores = (P @ Bm) @ U.vertices.T
    idx = np.argmax(scores, axis=1)
    GBV = np.ascontiguousarray((Gam @ (Bm @ U.vertices.T)).T)
    x = np.array(sys.X0, dtype=float)
    # runs of consecutive steps that hold the same vertex
    change = np.flatnonzero(np.diff(idx)) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change, [steps]))
    switches = [(float(s * h), int(idx[s])) for s in starts]
    if (steps + 1) * sys.n * sys.n <= _SEGMENT_TABLE_LIMIT:
        E_pow, S_sum = _segment_tables(a_key, sys.n, h, steps)
        for s, e in zip(starts, ends):
            run = int(e - s)
            x = E_pow[run] @ x + S_sum[run] @ GBV[int(idx[s])]
    else:
        for s, e in zip(starts, ends):
            c = GBV[int(idx[s])]
            for _ in range(int(e - s)):
                x = E @ x + c
    if not np.all(np.isfinite(x)):
        raise NumericError("propagated state is non-finite; the dynamics overflow "
                           "the horizon")
    x.setflags(write=False)
    return BoundaryPoint(d=dv, X_dB=x, support_value=float(dv @ x),
                         switch_times=tuple(switches), steps=steps)


def zero_input_endpoint(sys: LinearSystem) -> np.ndarray:
    """Endpoint e^{AT} X0 of the drift-only trajectory (u = 0)."""
    return mat_exp(sys.A * sys.T) @ sys.X0


def growth_metric(sys: LinearSystem, B, U: ControlPolytope, d,
                  steps: int = DEFAULT_STEPS) -> GrowthReport:
    """Directional growth metric G_d(B) = d . (X_dB - c0).

    Positive values mean the controls push the reachable set past the
    drift-only endpoint c0 along d; for control sets containing 0 the
    metric is nonnegative by construction.
    """
    bp = boundary_point(sys, B, U, d, steps)
    c0 = zero_input_endpoint(sys)
    if not np.all(np.isfinite(c0)):
        raise NumericError("drift endpoint is non-finite; the dynamics overflow "
                           "the horizon")
    G = float(bp.d @ (bp.X_dB - c0))
    return GrowthReport(G_d=G, c0=c0, X_dB=bp.X_dB, B=as_matrix(B, "B"))


def _thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def boundary_sweep(sys: LinearSystem, B, U: ControlPolytope, directions,
                   steps: int = DEFAULT_STEPS) -> list[BoundaryPoint]:
    """Boundary points for a list of directions, in the order given.

    Evaluation is sequential unless the REACHWARP_THREADS environment
    variable asks for more workers; results are identical either way
    because each direction is independent and the shared step matrices are
    computed before fan-out.
    """
    dirs = [unit_direction(d) for d in directions]
    if not dirs:
        raise GeometryError("boundary_sweep needs at least one direction")
    steps = _check_steps(steps)
    workers = _thread_cap()
    if workers > 1 and len(dirs) > 1:
        _step_matrices(sys.A.tobytes(), sys.n, sys.T / steps)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda dd: boundary_point(sys, B, U, dd, steps), dirs))
    return [boundary_point(sys, B, U, dd, steps) for dd in dirs]


def direction_fan(n: int, M: int, seed: int = 42) -> list[np.ndarray]:
    """M unit directions in R^n, deterministic for given (n, M, seed).

    n = 2 uses equally spaced angles starting at 0; n = 3 uses a Fibonacci
    sphere; higher dimensions draw seeded Gaussian vectors and normalize.
    n = 1 has only two unit directions, so at most M = 2 is allowed there.
    """
    n = int(n)
    M = int(M)
    if n < 1:
        raise DimensionError(f"dimension n must be at least 1, got {n}")
    if M < 1:
        raise DomainError(f"direction count M must be at least 1, got {M}")
    if n == 1:
        if M > 2:
            raise DomainError("only 2 distinct unit directions exist in 1-D")
        fan = [np.array([1.0]), np.array([-1.0])][:M]
    elif n == 2:
        angles = 2.0 * np.pi * np.arange(M) / M
        fan = [np.array([np.cos(a), np.sin(a)]) for a in angles]
    elif n == 3:
        golden = np.pi * (3.0 - np.sqrt(5.0))
        fan = []
        for k in range(M):
            z = 1.0 - 2.0 * (k + 0.5) / M
            r = np.sqrt(max(0.0, 1.0 - z * z))
            fan.append(np.array([r * np.cos(golden * k), r * np.sin(golden * k), z]))
    else:
        rng = np.random.default_rng(seed)
        fan = []
        while len(fan) < M:
            v = rng.standard_normal(n)
            nrm = np.linalg.norm(v)
            if nrm > 0.0:
                fan.append(v / nrm)
    out = []
    for v in fan:
        u = v / np.linalg.norm(v)
        u.setflags(write=False)
        out.append(u)
    return out


def support_oracle(sys: LinearSystem, B, U: ControlPolytope, d,
                   quad_nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Support of the reachable set in direction d by direct quadrature.

    Independent cross-check for boundary_point: the support equals
    d . e^{AT} X0 + int_0^T max_i  d^T e^{A(T-t)} B u_i  dt, evaluated here
    with composite Simpson quadrature over quad_nodes panels.  No switched
    trajectory is integrated, so the two routes share only the matrix
    exponential.
    """
    Bm, dv = _check_reach_args(sys, B, U, d)
    quad_nodes = int(quad_nodes)
    if quad_nodes < 2:
        raise DomainError(f"quad_nodes must be at least 2, got {quad_nodes}")
    npts = 2 * quad_nodes + 1
    delta = sys.T / (npts - 1)
    AT = sys.A.T
    step_fwd = np.asarray(mat_exp(-AT * delta))
    BV = Bm @ U.vertices.T
    # adjoint weights at all quadrature nodes: w[j+1] = step_fwd w[j],
    # advanced block-at-a-time like the midpoint costate scan
    W = np.empty((npts, sys.n))
    W[0] = np.asarray(mat_exp(AT * sys.T)) @ dv
    block = min(_SCAN_BLOCK, npts - 1)
    for j in range(block):
        W[j + 1] = step_fwd @ W[j]
    if npts - 1 > block:
        Gb_T = np.linalg.matrix_power(step_fwd, block).T
        hi = block + 1
        while hi < npts:
            L = min(block, npts - hi)
            W[hi:hi + L] = W[hi - block:hi - block + L] @ Gb_T
            hi += L
    phi = np.max(W @ BV, axis=1)
    weights = np.ones(npts)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    integral = float(delta / 3.0 * (weights @ phi))
    drift = float(dv @ zero_input_endpoint(sys))
    return drift + integral
