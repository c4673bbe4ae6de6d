"""Truncated single-mode bosonic environment.

Operators and states live in the number basis |0>, ..., |M-1> of a FockSpace
with cutoff M. Constructors renormalize on the truncated basis, so returned
density matrices have unit trace exactly; the probability mass removed by the
truncation is recorded on the state as ``truncated_mass``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffCapExceeded
from .linalg import dagger, require_hermitian

__all__ = [
    "FockSpace",
    "EnvDensity",
    "annihilation",
    "creation",
    "number_op",
    "fock_state",
    "thermal_state",
    "coherent_amplitudes",
    "coherent_state",
    "env_from_matrix",
    "displacement",
    "displacement_safe_dim",
    "suggest_cutoff",
]

CUTOFF_LADDER = (16, 32, 64, 128, 256, 512)


@dataclass(frozen=True)
class FockSpace:
    """Number basis |0>..|cutoff-1> of a single bosonic mode."""

    cutoff: int

    def __post_init__(self):
        if not isinstance(self.cutoff, int) or self.cutoff < 2:
            raise ValueError(f"cutoff must be an integer >= 2, got {self.cutoff!r}")

    @property
    def dim(self) -> int:
        return self.cutoff


@dataclass(frozen=True, eq=False)
class EnvDensity:
    """Environment density matrix on a truncated Fock space.

    ``truncated_mass`` is the probability mass that the cutoff removed from
    the untruncated state before renormalization (zero when exact).
    """

    space: FockSpace
    matrix: np.ndarray
    truncated_mass: float = field(default=0.0)

    def __post_init__(self):
        arr = require_hermitian(self.matrix, what="environment state")
        if arr.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"state has shape {arr.shape}, expected {(self.space.dim,) * 2}"
            )
        tr = float(np.trace(arr).real)
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"state has trace {tr!r}, expected 1 within 1e-8")
        if np.linalg.eigvalsh(arr)[0] < -1e-10:
            raise ValueError("state has an eigenvalue below -1e-10")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.space.dim


def annihilation(space: FockSpace) -> np.ndarray:
    """Annihilation operator: <n-1|a|n> = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), k=1).astype(complex)


def creation(space: FockSpace) -> np.ndarray:
    """Creation operator, conjugate transpose of annihilation."""
    return dagger(annihilation(space))


def number_op(space: FockSpace) -> np.ndarray:
    """Number operator diag(0, 1, ..., cutoff-1)."""
    return np.diag(np.arange(space.dim, dtype=float)).astype(complex)


def fock_state(n: int, space: FockSpace) -> EnvDensity:
    """Pure number state |n><n|."""
    if not 0 <= n < space.dim:
        raise ValueError(f"level {n} outside the truncated basis 0..{space.dim - 1}")
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    mat[n, n] = 1.0
    return EnvDensity(space, mat)


def thermal_state(theta: float, space: FockSpace) -> EnvDensity:
    """Gibbs state of the free mode at dimensionless temperature theta.

    Populations are p_n proportional to exp(-n/theta), renormalized over the
    truncated basis. theta = 0 returns the exact vacuum.
    """
    if theta < 0:
        raise ValueError(f"temperature must be >= 0, got {theta}")
    if theta == 0:
        return fock_state(0, space)
    q = math.exp(-1.0 / theta)
    weights = q ** np.arange(space.dim, dtype=float)
    probs = weights / weights.sum()
    # untruncated geometric tail sum_{n >= M} (1-q) q^n = q^M
    return EnvDensity(space, np.diag(probs).astype(complex), truncated_mass=q**space.dim)


def coherent_amplitudes(zeta: complex, space: FockSpace) -> np.ndarray:
    """Number-basis amplitudes of |zeta>, renormalized after truncation."""
    _warn_if_beyond_reach(abs(zeta), space, "coherent state amplitude")
    n = np.arange(space.dim)
    # amp[n] = e^{-|z|^2/2} z^n / sqrt(n!), built multiplicatively to avoid factorials
    steps = np.ones(space.dim, dtype=complex)
    steps[1:] = zeta / np.sqrt(n[1:].astype(float))
    amps = math.exp(-abs(zeta) ** 2 / 2) * np.cumprod(steps)
    norm = np.linalg.norm(amps)
    return amps / norm


def coherent_state(zeta: complex, space: FockSpace) -> EnvDensity:
    """Pure coherent state |zeta><zeta| on the truncated basis."""
    amps = coherent_amplitudes(zeta, space)
    raw_norm_sq = _untruncated_overlap(zeta, space)
    return EnvDensity(space, np.outer(amps, amps.conj()), truncated_mass=1.0 - raw_norm_sq)


def _untruncated_overlap(zeta: complex, space: FockSpace) -> float:
    """Probability mass of |zeta> inside the truncated basis."""
    x = abs(zeta) ** 2
    if x == 0.0:
        return 1.0
    terms = np.cumprod(np.concatenate(([1.0], x / np.arange(1, space.dim, dtype=float))))
    return float(math.exp(-x) * terms.sum())


def env_from_matrix(matrix: np.ndarray, *, truncated_mass: float = 0.0) -> EnvDensity:
    """Wrap an explicit density matrix, inferring the space from its dimension."""
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return EnvDensity(FockSpace(arr.shape[0]), arr, truncated_mass=truncated_mass)


def displacement(lam: complex, space: FockSpace) -> np.ndarray:
    """Displacement operator exp(lam a^dag - lam* a) in the number basis.

    Matrix elements come from the associated-Laguerre closed form, evaluated
    with a scaled two-term recurrence so no factorial is ever formed. The
    result is the corner of the untruncated unitary: it is unitary to
    truncation accuracy on the lower block (see displacement_safe_dim) but not
    at the corner itself.
    """
    _warn_if_beyond_reach(abs(lam), space, "displacement amplitude")
    lower = _displacement_lower(lam, space.dim)
    upper = _displacement_lower(-lam, space.dim)
    return np.tril(lower) + np.triu(dagger(upper), k=1)


def _displacement_lower(lam: complex, dim: int) -> np.ndarray:
    """Entries <n+k|D(lam)|n> for all k >= 0.

    With x = |lam|^2, the column-n entry on diagonal k is
        e^{-x/2} * (lam^k / sqrt(k!)) * G_n^{(k)}(x),
    where G_n^{(k)} = sqrt(n!/(n+k)!) L_n^{(k)} absorbs the amplitude ratio
    into the Laguerre recurrence to keep every intermediate O(e^{x/2}).
    """
    x = abs(lam) ** 2
    k = np.arange(dim, dtype=float)
    damp = math.exp(-x / 2)
    # lam^k / sqrt(k!) along the diagonal index
    pk_steps = np.ones(dim, dtype=complex)
    pk_steps[1:] = lam / np.sqrt(k[1:])
    pk = np.cumprod(pk_steps)

    out = np.zeros((dim, dim), dtype=complex)
    g_prev = np.zeros(dim)
    g_cur = np.ones(dim)
    rows = np.arange(dim)
    for n in range(dim):
        live = rows[: dim - n]
        out[live + n, n] = damp * pk[: dim - n] * g_cur[: dim - n]
        scale = np.sqrt((n + 1.0) / (n + 1.0 + k)) / (n + 1.0)
        g_next = scale * ((2 * n + k + 1.0 - x) * g_cur - np.sqrt(n * (n + k)) * g_prev)
        g_prev, g_cur = g_cur, g_next
    return out


def displacement_safe_dim(lam: complex, space: FockSpace) -> int:
    """Size of the lower block on which the truncated displacement is reliable.

    Cutting the basis at M corrupts a boundary layer below the corner: level
    n couples upward with strength |lam| sqrt(n), so the layer is roughly
    2|lam| sqrt(M) levels deep, beyond which the corruption decays
    superexponentially. The extra constant buys ~1e-9 Frobenius agreement for
    operator identities with two displacement factors (measured directly; see
    the displacement round-trip tests).
    """
    halo = math.ceil(2 * abs(lam) * math.sqrt(space.dim)) + 12
    return max(0, space.dim - halo)


def _warn_if_beyond_reach(amp: float, space: FockSpace, what: str) -> None:
    if amp**2 > space.dim / 4:
        warnings.warn(
            f"{what} |z|^2 = {amp ** 2:.3g} exceeds cutoff/4 = {space.dim / 4:.3g}; "
            "truncation errors may be significant",
            stacklevel=3,
        )


def suggest_cutoff(
    *,
    theta: float = 0.0,
    coherent_amp: float = 0.0,
    fock_level: int = 0,
    max_displacement: float = 0.0,
    tol: float = 1e-12,
) -> int:
    """Smallest cutoff in the doubling ladder 16..512 meeting the truncation policy.

    Requirements at cutoff M: the untruncated thermal tail mass exp(-M/theta)
    is below tol, the total displacement reach satisfies |z|^2 <= M/4, and any
    initial number state sits in the lower half of the basis.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    reach = (abs(coherent_amp) + abs(max_displacement)) ** 2
    for m in CUTOFF_LADDER:
        if theta > 0 and math.exp(-m / theta) >= tol:
            continue
        if reach > m / 4:
            continue
        if fock_level + 1 > m // 2:
            continue
        return m
    raise CutoffCapExceeded(
        f"no cutoff <= {CUTOFF_LADDER[-1]} satisfies tail tolerance {tol} and "
        f"displacement reach {reach:.3g}"
    )
