"""Master-equation integration and purity trajectories.

Two integrators with disjoint failure modes:

  - evolve_expm: exact propagation by the matrix exponential of the
    superoperator (scaling-and-squaring Pade), authoritative up to
    dim 64 where the superoperator fits;
  - evolve_rk: hand-rolled adaptive Dormand-Prince 5(4) on the matrix
    ODE itself, usable at any dimension and cross-checked against expm
    where both apply.

Every reconstructed state is re-Hermitized as (x + x+)/2 with the
asymmetry recorded, and trace drift / minimum eigenvalue are logged per
sample rather than silently corrected: drift is diagnostic data here.
Time is measured in inverse rate units (hbar = 1).

For truncated ladder models (a declared guard level) the top-level
population is recorded alongside, since monotonicity claims only make
sense while the truncation boundary is unpopulated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ._backend import kernels
from .generator import _check_operand, liouvillian_matrix, unvec, vec
from .gks import LindbladModel
from .operators import DensityMatrix, hermiticity_defect, hermitize, state_matrix
from .purity import purity_rate

DEFAULT_SAMPLES = 200
DEFAULT_MONOTONE_TOL = 1e-9
TRAJECTORY_TRACE_TOL = 1e-6
TRAJECTORY_PSD_TOL = 1e-6

CSV_COLUMNS = ["t", "purity", "rate", "trace_re", "min_eig", "herm_defect",
               "top_level_pop"]


class IntegrationError(RuntimeError):
    """Integration failed; t_last is the last successfully reached time."""

    def __init__(self, message: str, t_last: float):
        super().__init__(message)
        self.t_last = t_last


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the master equation with purity diagnostics.

    purities[k] is Tr(states[k]^2); rates[k] the exact dp/dt there;
    trace_drift[k] = Re Tr(states[k]) - 1 (signed); min_eig_drift[k] the
    smallest eigenvalue; herm_defect[k] the asymmetry removed by
    re-Hermitization. top_level_pop is populated only for models with a
    guard level.
    """

    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    purities: np.ndarray
    rates: np.ndarray
    trace_drift: np.ndarray
    min_eig_drift: np.ndarray
    herm_defect: np.ndarray
    top_level_pop: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class MonotonicityVerdict:
    """MONOTONE_NONINCREASING, or the first violating sample and jump."""

    monotone: bool
    violation_index: int | None = None
    violation_jump: float | None = None

    def __str__(self) -> str:
        if self.monotone:
            return "MONOTONE_NONINCREASING"
        return (
            f"VIOLATION(index={self.violation_index}, "
            f"jump={self.violation_jump:.6e})"
        )


def _build_trajectory(m: LindbladModel, times: np.ndarray, raw: np.ndarray) -> Trajectory:
    n = len(times)
    states = []
    purities = np.empty(n)
    rates = np.empty(n)
    trace_drift = np.empty(n)
    min_eig_drift = np.empty(n)
    herm_defect = np.empty(n)
    tracked = m.metadata.guard_level is not None
    top_pop = np.empty(n) if tracked else None
    for k in range(n):
        x = raw[k]
        if not np.isfinite(x).all():
            raise IntegrationError(
                f"non-finite state at t = {times[k]}", t_last=float(times[max(k - 1, 0)])
            )
        herm_defect[k] = hermiticity_defect(x)
        h = hermitize(x)
        dm = DensityMatrix(
            h, trace_tol=TRAJECTORY_TRACE_TOL, psd_tol=TRAJECTORY_PSD_TOL
        )
        states.append(dm)
        purities[k] = np.vdot(h, h).real
        rates[k] = purity_rate(m, dm).total
        trace_drift[k] = np.trace(h).real - 1.0
        min_eig_drift[k] = np.linalg.eigvalsh(h)[0]
        if tracked:
            top_pop[k] = h[-1, -1].real
    return Trajectory(
        times=times,
        states=tuple(states),
        purities=purities,
        rates=rates,
        trace_drift=trace_drift,
        min_eig_drift=min_eig_drift,
        herm_defect=herm_defect,
        top_level_pop=top_pop,
    )


def _check_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise ValueError("need at least two sample times")
    if t[0] < 0.0:
        raise ValueError(f"times must start at >= 0, got {t[0]}")
    if not (np.diff(t) > 0).all():
        raise ValueError("times must be strictly ascending")
    return t


def evolve_expm(m: LindbladModel, rho0, times) -> Trajectory:
    """Propagate by the exponential of the superoperator.

    states[k] = unvec(exp(M t_k) vec(rho0)). On a uniform grid the
    exponential of one step is computed once and applied repeatedly;
    otherwise one exponential per interval.
    """
    t = _check_times(times)
    rho = state_matrix(rho0)
    arr = _check_operand(m, rho, "initial state")
    sup = liouvillian_matrix(m)

    v = vec(arr)
    if t[0] > 0.0:
        v = expm(sup * t[0]) @ v
    n = len(t)
    raw = np.empty((n, m.dim, m.dim), dtype=np.complex128)
    raw[0] = unvec(v, m.dim)
    diffs = np.diff(t)
    uniform = np.abs(diffs - diffs[0]).max() <= 1e-12 * max(1.0, abs(t[-1]))
    if uniform:
        step = expm(sup * diffs[0])
        for k in range(1, n):
            v = step @ v
            raw[k] = unvec(v, m.dim)
    else:
        for k in range(1, n):
            v = expm(sup * diffs[k - 1]) @ v
            raw[k] = unvec(v, m.dim)
    return _build_trajectory(m, t, raw)


def evolve_rk(
    m: LindbladModel,
    rho0,
    t_max: float,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    n_samples: int = DEFAULT_SAMPLES,
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Adaptive embedded Runge-Kutta 5(4) on the matrix ODE.

    Samples on a uniform grid of at least 200 points over [0, t_max].
    Agrees with evolve_expm to about 10*rtol in purity where both apply.
    """
    if t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if rtol <= 0.0 or atol <= 0.0:
        raise ValueError("rtol and atol must be positive")
    rho = state_matrix(rho0)
    arr = _check_operand(m, rho, "initial state")
    t = np.linspace(0.0, float(t_max), max(int(n_samples), DEFAULT_SAMPLES))
    raw, status, t_fail, _ = kernels.dopri5(
        m._ham_or_none, m._ops_stack, m._fdf_sum, arr, t, rtol, atol, max_steps
    )
    if status == 1:
        raise IntegrationError(
            f"step size underflow at t = {t_fail:.6g} (stiffness failure); "
            f"last good time {t_fail:.6g}",
            t_last=float(t_fail),
        )
    if status == 2:
        raise IntegrationError(
            f"step budget {max_steps} exhausted at t = {t_fail:.6g}",
            t_last=float(t_fail),
        )
    return _build_trajectory(m, t, raw)


def check_monotonicity(
    traj: Trajectory, tol: float = DEFAULT_MONOTONE_TOL
) -> MonotonicityVerdict:
    """Monotone iff no purity increment exceeds tol*(1+purity) and no
    sampled rate exceeds tol. Reports the first violation."""
    p = traj.purities
    r = traj.rates
    n = len(p)
    for k in range(n):
        if k + 1 < n:
            jump = p[k + 1] - p[k]
            if jump > tol * (1.0 + p[k]):
                return MonotonicityVerdict(False, k, float(jump))
        if r[k] > tol:
            return MonotonicityVerdict(False, k, float(r[k]))
    return MonotonicityVerdict(True)


def write_trajectory_csv(traj: Trajectory, fileobj) -> None:
    """Fixed-header CSV; top_level_pop cells are empty when untracked."""
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for k in range(len(traj)):
        row = [
            repr(float(traj.times[k])),
            repr(float(traj.purities[k])),
            repr(float(traj.rates[k])),
            repr(float(traj.trace_drift[k] + 1.0)),
            repr(float(traj.min_eig_drift[k])),
            repr(float(traj.herm_defect[k])),
        ]
        if traj.top_level_pop is not None:
            row.append(repr(float(traj.top_level_pop[k])))
        else:
            row.append("")
        writer.writerow(row)
