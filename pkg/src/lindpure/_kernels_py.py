"""Pure-numpy implementations of the hot kernels.

Same call signatures and semantics as the compiled ``_kernels``
extension; selected at import time by ``_backend`` when the extension is
unavailable or LINDPURE_PURE_PYTHON is set. Everything here is
allocation-light but interpreter-bound; the compiled twin exists because
the acceptance sweeps call these thousands of times on small matrices.

Conventions shared by both backends:
  - ``ops`` is a C-contiguous (k, d, d) complex128 stack of Lindblad
    operators (k may be 0).
  - ``fdf`` is sum_a F_a+ F_a, precomputed by the model.
  - ``ham`` is the Hamiltonian or None when there is no coherent part.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def dissipator_apply(ops: np.ndarray, fdf: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_a F_a x F_a+ - (fdf x + x fdf)/2."""
    out = -0.5 * (fdf @ x + x @ fdf)
    for f in ops:
        out += f @ x @ f.conj().T
    return out


def generator_apply(ham, ops: np.ndarray, fdf: np.ndarray, x: np.ndarray) -> np.ndarray:
    """-i[ham, x] + dissipator; ham may be None."""
    out = dissipator_apply(ops, fdf, x)
    if ham is not None:
        out += -1j * (ham @ x - x @ ham)
    return out


def purity_rate_terms(ops: np.ndarray, rho: np.ndarray):
    """Return (jump_gain, drain, neg_part, comm_part) for a state rho.

    jump_gain = 2 sum_a Tr[rho F_a rho F_a+]
    drain     = -2 sum_a Tr[rho^2 F_a+ F_a]
    neg_part  = -sum_a Tr[(rho F_a - F_a rho)+(rho F_a - F_a rho)]
    comm_part = sum_a Tr[rho^2 (F_a F_a+ - F_a+ F_a)]
    """
    r2 = rho @ rho
    jump = 0.0
    drain = 0.0
    neg = 0.0
    comm = 0.0
    for f in ops:
        rf = rho @ f
        fr = f @ rho
        jump += 2.0 * np.vdot(f, rho @ fr).real
        t_drain = np.vdot(f, f @ r2).real
        drain -= 2.0 * t_drain
        comm += np.vdot(f, r2 @ f).real - t_drain
        m = rf - fr
        neg -= np.vdot(m, m).real
    return jump, drain, neg, comm


def dopri5(ham, ops, fdf, y0, t_grid, rtol, atol, max_steps):
    """Adaptive Dormand-Prince 5(4) on the matrix ODE y' = generator(y).

    Integrates from t_grid[0], clipping steps so every grid time is hit
    exactly; returns (states, status, t_fail, n_steps) with states[k] the
    solution at t_grid[k]. status: 0 ok, 1 step-size underflow, 2 step
    budget exhausted; t_fail is the last good time when status != 0.
    """
    n = len(t_grid)
    d = y0.shape[0]
    states = np.empty((n, d, d), dtype=np.complex128)
    states[0] = y0
    y = y0.astype(np.complex128, copy=True)
    t = float(t_grid[0])
    n_steps = 0

    k1 = generator_apply(ham, ops, fdf, y)
    scale0 = atol + rtol * np.abs(y).max()
    f0 = np.abs(k1).max()
    h = 0.01 * scale0 / f0 if f0 > 0.0 else 1e-2
    if n > 1:
        h = min(h, float(t_grid[1]) - t)

    for i in range(1, n):
        target = float(t_grid[i])
        while True:
            gap = target - t
            if gap <= 1e-14 * max(1.0, abs(target)):
                break
            clipped = h >= gap
            h_try = gap if clipped else h
            if h_try <= 16.0 * np.finfo(float).eps * max(1.0, abs(t)):
                return states[:i], 1, t, n_steps
            if n_steps >= max_steps:
                return states[:i], 2, t, n_steps
            n_steps += 1

            k2 = generator_apply(ham, ops, fdf, y + h_try * (_A21 * k1))
            k3 = generator_apply(ham, ops, fdf, y + h_try * (_A31 * k1 + _A32 * k2))
            k4 = generator_apply(
                ham, ops, fdf, y + h_try * (_A41 * k1 + _A42 * k2 + _A43 * k3)
            )
            k5 = generator_apply(
                ham, ops, fdf,
                y + h_try * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4),
            )
            k6 = generator_apply(
                ham, ops, fdf,
                y + h_try * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5),
            )
            y_new = y + h_try * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            k7 = generator_apply(ham, ops, fdf, y_new)

            err = h_try * (
                _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
            )
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean(np.abs(err / sc) ** 2)))

            if err_norm <= 1.0:
                t = target if clipped else t + h_try
                y = y_new
                k1 = k7
                fac = 5.0 if err_norm == 0.0 else min(
                    5.0, max(0.2, 0.9 * err_norm ** -0.2)
                )
            else:
                fac = max(0.2, min(1.0, 0.9 * err_norm ** -0.2))
            h = h_try * fac
        states[i] = y
    return states, 0, t, n_steps
