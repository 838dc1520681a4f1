"""Shared helpers for the test suite."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from reachwarp.fixtures import fixture_config


def series_exp(M: np.ndarray, terms: int = 50) -> np.ndarray:
    """Truncated Taylor series for e^M, used as an oracle independent of the
    scaling-and-squaring implementation.  Adequate for the small, moderate-norm
    matrices in these tests."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    out = np.zeros((n, n))
    term = np.eye(n)
    for k in range(terms):
        out = out + term
        term = term @ M / (k + 1)
    return out


def quadratic_roots(tr: float, det: float) -> tuple[float, float]:
    """Real roots of lambda^2 - tr*lambda + det, ascending."""
    disc = math.sqrt(tr * tr - 4.0 * det)
    return (tr - disc) / 2.0, (tr + disc) / 2.0


@pytest.fixture
def fixture_file(tmp_path):
    """Factory writing a named built-in fixture to a JSON file."""

    def write(name: str, **overrides) -> Path:
        cfg = fixture_config(name)
        cfg.update(overrides)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(cfg), encoding="utf-8")
        return path

    return write


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI main() in-process; returns (exit_code, stdout, stderr)."""
    from reachwarp.cli import main

    def run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run
