"""Time sweeps, CSV emission and cutoff-convergence reports.

run_sweep drives the whole pipeline for one configuration: resolve the model
and the initial environment, build the uniform time grid (always including
segment switch times so sharp features are never aliased), then evaluate the
entanglement measure, coherence and criterion residuals point by point.

Per-point evaluation avoids redundant factorizations by conjugating into the
initial-environment frame: with u_ij = w_i^dag w_j both the trace distance
and the fidelity between conditional states R_ii, R_jj equal those between
R(0) and u_ij R(0) u_ij^dag, so the PSD square root of R(0) is computed once
per sweep. These identities are exact unitary invariances and are asserted
against the direct block computation in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import (
    AUTO_CUTOFF,
    CoherentEnv,
    FockEnv,
    MatrixFileEnv,
    QubitBosonModel,
    RunConfig,
    ScheduleFileModel,
    ThermalEnv,
    load_matrix_file,
    load_schedule_file,
)
from .dephasing import (
    SegmentSchedule,
    blocks_from_propagators,
    equal_superposition,
    joint_state,
    propagators_at,
    validate_schedule,
)
from .entanglement import measure_from_fidelity
from .errors import CutoffCapExceeded, ValidationError
from .fock import (
    CUTOFF_LADDER,
    EnvDensity,
    FockSpace,
    coherent_state,
    env_from_matrix,
    fock_state,
    suggest_cutoff,
    thermal_state,
)
from .linalg import dagger, fidelity_given_sqrt, frobenius, negativity, sqrtm_psd
from .qubit_boson import QubitBosonParams, build_schedule

__all__ = [
    "SweepRow",
    "CSV_HEADER",
    "run_sweep",
    "emit_csv",
    "ConvergenceReport",
    "convergence_report",
]

CSV_HEADER = "t,entanglement,coherence_norm,type1_max,type2_max,negativity,cutoff"


@dataclass(frozen=True)
class SweepRow:
    """One time point of a sweep; None marks outputs that were not computed."""

    t: float
    entanglement: float | None
    coherence_norm: float | None
    type1_max: float | None
    type2_max: float | None
    negativity: float | None
    cutoff: int


@dataclass(frozen=True)
class _ResolvedRun:
    schedule: SegmentSchedule
    env0: EnvDensity
    amplitudes: np.ndarray
    cutoff_used: int


def _resolve_cutoff(cfg: RunConfig) -> int:
    if cfg.cutoff != AUTO_CUTOFF:
        return int(cfg.cutoff)
    env = cfg.initial_env
    model = cfg.model
    if isinstance(model, ScheduleFileModel):
        raise ValidationError(
            "cutoff", "'auto' requires the qubit_boson model; give an explicit cutoff"
        )
    max_disp = 2.0 * max(abs(s.alpha) for s in model.segments) / abs(model.beta)
    kwargs = {"max_displacement": max_disp, "tol": cfg.tolerances.cutoff_tail}
    if isinstance(env, ThermalEnv):
        kwargs["theta"] = env.theta
    elif isinstance(env, CoherentEnv):
        kwargs["coherent_amp"] = abs(env.zeta)
    elif isinstance(env, FockEnv):
        kwargs["fock_level"] = env.n
    else:
        raise ValidationError(
            "cutoff", "'auto' cannot be used with a matrix-file environment"
        )
    return suggest_cutoff(**kwargs)


def _build_environment(cfg: RunConfig, cutoff: int) -> EnvDensity:
    env = cfg.initial_env
    if isinstance(env, ThermalEnv):
        return thermal_state(env.theta, FockSpace(cutoff))
    if isinstance(env, CoherentEnv):
        return coherent_state(env.zeta, FockSpace(cutoff))
    if isinstance(env, FockEnv):
        if env.n >= cutoff:
            raise ValidationError(
                "initial_env.fock.n", f"level {env.n} needs a cutoff above {env.n}"
            )
        return fock_state(env.n, FockSpace(cutoff))
    matrix = load_matrix_file(env.path)
    if matrix.shape[0] != cutoff:
        raise ValidationError(
            "initial_env.matrix_file",
            f"matrix dimension {matrix.shape[0]} does not match cutoff {cutoff}",
        )
    try:
        return env_from_matrix(matrix)
    except Exception as exc:
        raise ValidationError("initial_env.matrix_file", str(exc)) from exc


def _resolve(cfg: RunConfig, *, cutoff_override: int | None = None) -> _ResolvedRun:
    if isinstance(cfg.model, QubitBosonModel):
        cutoff = cutoff_override if cutoff_override is not None else _resolve_cutoff(cfg)
        params = QubitBosonParams(
            beta=cfg.model.beta, segments=cfg.model.segments, cutoff=cutoff
        )
        schedule = build_schedule(params)
    else:
        if cutoff_override is not None:
            raise ValidationError("cutoff", "cannot override the cutoff of a schedule file")
        schedule = load_schedule_file(cfg.model.path)
        cutoff = schedule.env_dim
        if cfg.cutoff != AUTO_CUTOFF and int(cfg.cutoff) != cutoff:
            raise ValidationError(
                "cutoff",
                f"schedule file fixes the environment dimension to {cutoff}",
            )
    validate_schedule(schedule)
    env0 = _build_environment(cfg, cutoff)

    if cfg.amplitudes is None:
        amps = equal_superposition(schedule.system_dim)
    else:
        amps = np.asarray(cfg.amplitudes, dtype=complex)
        if amps.size != schedule.system_dim:
            raise ValidationError(
                "amplitudes",
                f"{amps.size} amplitudes for a system of dimension {schedule.system_dim}",
            )
    return _ResolvedRun(schedule=schedule, env0=env0, amplitudes=amps, cutoff_used=cutoff)


def _time_grid(cfg: RunConfig, schedule: SegmentSchedule) -> np.ndarray:
    t_max = cfg.time.t_max
    total = schedule.total_duration
    if t_max > total + 1e-9:
        raise ValidationError(
            "time.t_max", f"exceeds the total schedule duration {total!r}"
        )
    base = np.linspace(0.0, t_max, cfg.time.steps)
    interior = [b for b in schedule.boundaries[1:-1] if 0.0 < b < t_max]
    snap = 1e-12 * max(1.0, t_max)
    for b in interior:
        base[np.abs(base - b) <= snap] = b
    return np.unique(np.concatenate([base, interior])) if interior else base


class _PointEvaluator:
    """Per-time-point quantities in the initial-environment frame."""

    def __init__(self, run: _ResolvedRun, cfg: RunConfig):
        self.run = run
        self.flags = cfg.outputs
        self.rho0 = run.env0.matrix
        n = run.schedule.system_dim
        c = run.amplitudes
        self.is_qubit = n == 2
        self.want_measure = self.flags.entanglement and self.is_qubit
        self.want_coherence = self.flags.coherence and n >= 2 and c[0] * c[1] != 0
        self.sqrt_rho0 = sqrtm_psd(self.rho0) if self.want_measure else None

    def row(self, t: float, t_reported: float) -> SweepRow:
        run = self.run
        props = propagators_at(run.schedule, t)
        n = props.system_dim
        rho0 = self.rho0

        conjugated = {}  # (i, j) -> u_ij rho0 u_ij^dag
        u01 = None
        type1_max = None
        if self.flags.type1 or self.want_measure or self.want_coherence:
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            if not self.flags.type1:
                pairs = [(0, 1)]
            residuals = []
            for i, j in pairs:
                u = dagger(props.w[i]) @ props.w[j]
                if (i, j) == (0, 1):
                    u01 = u
                b = u @ rho0 @ dagger(u)
                conjugated[(i, j)] = b
                if self.flags.type1:
                    vals = np.linalg.eigvalsh(rho0 - b)
                    residuals.append(0.5 * float(np.sum(np.abs(vals))))
            if self.flags.type1:
                type1_max = max(residuals)

        measure = None
        if self.want_measure:
            f = fidelity_given_sqrt(self.sqrt_rho0, conjugated[(0, 1)])
            measure = measure_from_fidelity(run.amplitudes, f)

        coherence_norm = None
        if self.want_coherence:
            # |Tr R_01| = |Tr(rho0 u_01^dag)|
            coherence_norm = float(abs(np.vdot(u01, rho0)))

        type2_max = None
        if self.flags.type2:
            type2_max = 0.0
            if n >= 3:
                w0d = dagger(props.w[0])
                products = [props.w[i] @ w0d for i in range(1, n)]
                for a in range(len(products)):
                    for b_ in range(a + 1, len(products)):
                        comm = products[a] @ products[b_] - products[b_] @ products[a]
                        type2_max = max(type2_max, frobenius(comm))

        neg = None
        if self.flags.negativity:
            blocks = blocks_from_propagators(props, run.env0, run.amplitudes)
            neg = negativity(joint_state(blocks), n, run.env0.dim)

        return SweepRow(
            t=t_reported,
            entanglement=measure,
            coherence_norm=coherence_norm,
            type1_max=type1_max,
            type2_max=type2_max,
            negativity=neg,
            cutoff=run.cutoff_used,
        )


def run_sweep(cfg: RunConfig, *, cutoff_override: int | None = None) -> list[SweepRow]:
    """Evaluate the configured quantities on the time grid.

    Times are uniform on [0, t_max] with segment boundaries inserted as extra
    sample points when they fall off-grid. The reported time column is offset
    by time.t_start. Output is deterministic for a fixed configuration.
    """
    run = _resolve(cfg, cutoff_override=cutoff_override)
    times = _time_grid(cfg, run.schedule)
    evaluator = _PointEvaluator(run, cfg)
    t0 = cfg.time.t_start
    return [evaluator.row(float(t), float(t) + t0) for t in times]


def _format_value(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, ".12g")


def emit_csv(rows: list[SweepRow], destination) -> int:
    """Write rows as CSV and return the number of bytes written.

    The header and the 12-significant-digit float format are part of the
    interface; identical rows always produce identical bytes. destination is
    a path or a binary file object.
    """
    if not rows:
        raise ValueError("no rows to emit")
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                (
                    _format_value(row.t),
                    _format_value(row.entanglement),
                    _format_value(row.coherence_norm),
                    _format_value(row.type1_max),
                    _format_value(row.type2_max),
                    _format_value(row.negativity),
                    str(row.cutoff),
                )
            )
        )
    data = ("\n".join(lines) + "\n").encode("ascii")
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        Path(destination).write_bytes(data)
    return len(data)


@dataclass(frozen=True)
class ConvergenceReport:
    """Cutoff-doubling stability of the entanglement and coherence curves."""

    cutoff: int
    doubled_cutoff: int
    max_abs_d_entanglement: float
    max_abs_d_coherence: float
    points: int

    def render(self) -> str:
        return "\n".join(
            (
                f"cutoff        : {self.cutoff} vs {self.doubled_cutoff}",
                f"grid points   : {self.points}",
                f"max |dE|      : {self.max_abs_d_entanglement:.3e}",
                f"max |dcoh|    : {self.max_abs_d_coherence:.3e}",
            )
        )


def convergence_report(cfg: RunConfig) -> ConvergenceReport:
    """Run the sweep at the configured cutoff and at twice the cutoff.

    Reports the largest pointwise change of the entanglement measure and of
    the normalized coherence over the grid.
    """
    if not isinstance(cfg.model, QubitBosonModel):
        raise ValidationError(
            "model", "convergence reports require the qubit_boson model"
        )
    if not (cfg.outputs.entanglement and cfg.outputs.coherence):
        raise ValidationError(
            "outputs", "convergence reports need entanglement and coherence enabled"
        )
    cutoff = _resolve_cutoff(cfg)
    doubled = 2 * cutoff
    if doubled > CUTOFF_LADDER[-1]:
        raise CutoffCapExceeded(
            f"doubling cutoff {cutoff} exceeds the cap {CUTOFF_LADDER[-1]}"
        )
    rows_lo = run_sweep(cfg, cutoff_override=cutoff)
    rows_hi = run_sweep(cfg, cutoff_override=doubled)
    d_ent = 0.0
    d_coh = 0.0
    for lo, hi in zip(rows_lo, rows_hi):
        if lo.entanglement is not None and hi.entanglement is not None:
            d_ent = max(d_ent, abs(lo.entanglement - hi.entanglement))
        if lo.coherence_norm is not None and hi.coherence_norm is not None:
            d_coh = max(d_coh, abs(lo.coherence_norm - hi.coherence_norm))
    return ConvergenceReport(
        cutoff=cutoff,
        doubled_cutoff=doubled,
        max_abs_d_entanglement=d_ent,
        max_abs_d_coherence=d_coh,
        points=len(rows_lo),
    )
