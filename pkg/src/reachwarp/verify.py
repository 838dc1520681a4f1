"""Sampling-based falsification of the selected input matrix.

Theory says the selected matrix is optimal over the admissible ball in the
theorem regime; this module tries to beat it with uniformly drawn samples
from the ball and reports the margin.  A failed check in the theorem
regime is a bug somewhere; outside that regime it is merely information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import ControlPolytope, FrobeniusBall, LinearSystem
from .reach import DEFAULT_STEPS, growth_metric
from .warp import WarpResult, optimize_B

DEFAULT_SAMPLES = 1000

DEFAULT_VERIFY_TOL = 1e-6


@dataclass(frozen=True)
class SampleVerdict:
    """Result of the sampled optimality check.

    margin = G_star - best_sampled_G for the grow sense and
    best_sampled_G - G_star for shrink, so a positive margin always means
    no sample beat the selected matrix.  passed is margin >= -tol_verify.
    """

    samples: int
    best_sampled_G: float
    best_sampled_B: np.ndarray
    G_star: float
    margin: float
    passed: bool
    tol_verify: float


def sample_ball(ball: FrobeniusBall, k: int, seed: int = 42) -> list[np.ndarray]:
    """k matrices drawn uniformly from the Frobenius ball, deterministically.

    Each draw is a Gaussian direction scaled to radius * U^(1/dim) with
    dim the number of matrix entries, the standard recipe for uniform
    sampling in a norm ball.
    """
    k = int(k)
    if k < 1:
        raise DomainError(f"sample count must be at least 1, got {k}")
    rng = np.random.default_rng(seed)
    dim = ball.center.size
    out = []
    for _ in range(k):
        direction = rng.standard_normal(ball.center.shape)
        nrm = float(np.linalg.norm(direction))
        while nrm == 0.0:
            direction = rng.standard_normal(ball.center.shape)
            nrm = float(np.linalg.norm(direction))
        r = ball.radius * rng.random() ** (1.0 / dim)
        M = ball.center + (r / nrm) * direction
        M.setflags(write=False)
        out.append(M)
    return out


def verify_optimality(sys: LinearSystem, U: ControlPolytope, ball: FrobeniusBall, d,
                      sense: str = "grow", k: int = DEFAULT_SAMPLES, seed: int = 42,
                      steps: int = DEFAULT_STEPS,
                      tol_verify: float = DEFAULT_VERIFY_TOL,
                      result: WarpResult | None = None) -> SampleVerdict:
    """Try to beat the selected matrix with k uniform samples from the ball.

    Accepts a precomputed WarpResult to avoid re-running the selection; the
    verdict reduction is a plain extremum over samples, so the outcome does
    not depend on evaluation order.
    """
    if tol_verify < 0.0:
        raise DomainError(f"tol_verify must be nonnegative, got {tol_verify}")
    if result is None:
        result = optimize_B(sys, U, ball, d, sense, steps)
    G_star = result.G_optimized
    best_G = None
    best_B = None
    for M in sample_ball(ball, k, seed):
        g = growth_metric(sys, M, U, d, steps).G_d
        if best_G is None or (g > best_G if sense == "grow" else g < best_G):
            best_G = g
            best_B = M
    margin = G_star - best_G if sense == "grow" else best_G - G_star
    return SampleVerdict(samples=int(k), best_sampled_G=float(best_G),
                         best_sampled_B=best_B, G_star=float(G_star),
                         margin=float(margin), passed=bool(margin >= -tol_verify),
                         tol_verify=float(tol_verify))
