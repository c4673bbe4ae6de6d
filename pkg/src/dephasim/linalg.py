"""Dense complex linear algebra on small operator matrices.

Everything here takes and returns plain numpy arrays (complex128, square).
Matrices in this package stay below dimension ~512, so direct LAPACK
factorizations are always the right tool; there are no sparse or iterative
paths. All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFiniteError,
    NotHermitianError,
    NotPSDError,
)

__all__ = [
    "HermitianEigen",
    "dagger",
    "frobenius",
    "as_operator",
    "hermiticity_residual",
    "require_hermitian",
    "hermitian_eig",
    "expm",
    "sqrtm_psd",
    "fidelity",
    "fidelity_given_sqrt",
    "trace_distance",
    "partial_transpose",
    "negativity",
]


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def as_operator(m) -> np.ndarray:
    """Coerce input to a square complex matrix with finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    return arr


def hermiticity_residual(m: np.ndarray) -> float:
    """Frobenius norm of the anti-Hermitian part residual ||M - M^dag||_F."""
    return frobenius(m - dagger(m))


def require_hermitian(m, tol: float = 1e-9, what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity relative to max(1, ||M||_F) and return the array."""
    arr = as_operator(m)
    res = hermiticity_residual(arr)
    if res > tol * max(1.0, frobenius(arr)):
        raise NotHermitianError(f"{what} is not Hermitian (residual {res:.3e})")
    return arr


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition M = U diag(w) U^dag, eigenvalues ascending, U unitary."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ dagger(self.eigenvectors)


def hermitian_eig(m, *, herm_tol: float = 1e-9) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitianError when the input fails the Hermiticity check and
    ConvergenceFailure when the underlying LAPACK iteration does not converge.
    """
    arr = require_hermitian(m, herm_tol)
    try:
        w, u = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigh did not converge: {exc}") from exc
    return HermitianEigen(w, u)


def expm(m) -> np.ndarray:
    """Matrix exponential e^M for a general square matrix."""
    arr = as_operator(m)
    return scipy.linalg.expm(arr)


def sqrtm_psd(m, *, clamp: float = 1e-10, herm_tol: float = 1e-9) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-clamp, 0) are treated as roundoff and clamped to zero;
    anything below -clamp raises NotPSDError.
    """
    eig = hermitian_eig(m, herm_tol=herm_tol)
    w = eig.eigenvalues
    if w[0] < -clamp:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} below -{clamp:.1e}")
    s = (eig.eigenvectors * np.sqrt(np.clip(w, 0.0, None))) @ dagger(eig.eigenvectors)
    return (s + dagger(s)) / 2


def fidelity_given_sqrt(sqrt_rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Fidelity where the PSD square root of the first state is already known.

    No validation is performed; callers are expected to have produced
    sqrt_rho1 with sqrtm_psd (or an exact equivalent).
    """
    m = sqrt_rho1 @ rho2 @ sqrt_rho1
    w = np.linalg.eigvalsh((m + dagger(m)) / 2)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def fidelity(rho1, rho2, *, trace_tol: float = 1e-8, psd_clamp: float = 1e-10) -> float:
    """Uhlmann fidelity F(rho1, rho2) = [Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2.

    Both inputs must be Hermitian, PSD within the clamp window, and have unit
    trace within trace_tol.
    """
    r1 = require_hermitian(rho1, what="rho1")
    r2 = require_hermitian(rho2, what="rho2")
    if r1.shape != r2.shape:
        raise DimensionMismatch(f"state dimensions differ: {r1.shape} vs {r2.shape}")
    for name, r in (("rho1", r1), ("rho2", r2)):
        tr = float(np.trace(r).real)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"{name} has trace {tr!r}, expected 1 within {trace_tol}")
    w2 = np.linalg.eigvalsh(r2)
    if w2[0] < -psd_clamp:
        raise NotPSDError(f"rho2 has eigenvalue {w2[0]:.3e} below -{psd_clamp:.1e}")
    s = sqrtm_psd(r1, clamp=psd_clamp)
    return fidelity_given_sqrt(s, r2)


def trace_distance(rho1, rho2, *, herm_tol: float = 1e-9) -> float:
    """Trace distance (1/2)||rho1 - rho2||_1 via eigenvalues of the difference."""
    r1 = require_hermitian(rho1, herm_tol, what="rho1")
    r2 = require_hermitian(rho2, herm_tol, what="rho2")
    if r1.shape != r2.shape:
        raise DimensionMismatch(f"state dimensions differ: {r1.shape} vs {r2.shape}")
    w = np.linalg.eigvalsh(r1 - r2)
    return float(0.5 * np.sum(np.abs(w)))


def partial_transpose(sigma, dim_sys: int, dim_env: int) -> np.ndarray:
    """Partial transpose over the system factor of a (dim_sys*dim_env)^2 matrix."""
    arr = as_operator(sigma)
    n = dim_sys * dim_env
    if arr.shape != (n, n):
        raise DimensionMismatch(
            f"matrix has shape {arr.shape}, expected ({n}, {n}) for dims "
            f"{dim_sys}x{dim_env}"
        )
    blocks = arr.reshape(dim_sys, dim_env, dim_sys, dim_env)
    return blocks.transpose(2, 1, 0, 3).reshape(n, n)


def negativity(sigma, dim_sys: int, dim_env: int, *, herm_tol: float = 1e-9) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over the system.

    A positive value certifies entanglement across the system/environment cut;
    zero is inconclusive (PPT misses bound entanglement).
    """
    pt = partial_transpose(sigma, dim_sys, dim_env)
    require_hermitian(sigma, herm_tol, what="sigma")
    w = np.linalg.eigvalsh(pt)
    return float(-np.sum(w[w < 0.0]))
