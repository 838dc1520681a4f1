"""Dense matrix helpers: exponentials, spectra, eigenvector diagnostics.

Systems handled by this package are tiny (state dimension of a few), so
robustness wins over asymptotic speed: the matrix exponential uses
scaling-and-squaring with a degree-13 Pade approximant (scipy) and
eigenvalues come from the LAPACK QR iteration on Hessenberg form (numpy).
All entry points validate shapes and finiteness and return read-only
arrays so results can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError, NumericError, PreconditionError

DEFAULT_IMAG_TOL = 1e-9

UNIT_NORM_TOL = 1e-12


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate a 2-D array-like with finite entries; return a read-only copy."""
    arr = np.array(M, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a 2-D array with at least one row "
                             f"and one column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_square(M, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Validate a 1-D array-like with finite entries; return a read-only copy."""
    arr = np.array(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a 1-D array with at least one "
                             f"entry, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of a real matrix plus a realness classification.

    eigenvalues are (real, imag) pairs sorted by real part then imaginary
    part, so the report is deterministic for a given matrix.
    """

    eigenvalues: tuple[tuple[float, float], ...]
    max_abs_imag: float
    all_real: bool


def mat_exp(M) -> np.ndarray:
    """Matrix exponential e^M of a square real matrix."""
    A = as_square(M, "mat_exp argument")
    out = scipy.linalg.expm(np.asarray(A))
    out.setflags(write=False)
    return out


def spectrum(M, tol_spec: float = DEFAULT_IMAG_TOL) -> SpectrumReport:
    """Eigenvalues of M with an all-real flag at imaginary-part tolerance tol_spec."""
    A = as_square(M, "spectrum argument")
    if tol_spec < 0:
        raise DomainError(f"tol_spec must be nonnegative, got {tol_spec}")
    try:
        eig = np.linalg.eigvals(np.asarray(A))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((eig.imag, eig.real))
    eig = eig[order]
    max_abs_imag = float(np.max(np.abs(eig.imag)))
    return SpectrumReport(
        eigenvalues=tuple((float(z.real), float(z.imag)) for z in eig),
        max_abs_imag=max_abs_imag,
        all_real=bool(max_abs_imag <= tol_spec),
    )


def eigvec_residual(M, d) -> tuple[float, float]:
    """Rayleigh quotient mu = d^T M d and residual ||M d - mu d|| for unit d.

    A residual of zero certifies d as an eigenvector of M with eigenvalue mu;
    the caller decides what residual magnitude counts as "close enough".
    """
    A = as_square(M, "eigvec_residual matrix")
    v = as_vector(d, "eigvec_residual direction")
    if v.shape[0] != A.shape[0]:
        raise DimensionError(f"direction has length {v.shape[0]} but the matrix "
                             f"is {A.shape[0]}x{A.shape[0]}")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise PreconditionError(f"direction must have unit norm, got {nrm!r}")
    mu = float(v @ A @ v)
    residual = float(np.linalg.norm(A @ v - mu * v))
    return mu, residual
