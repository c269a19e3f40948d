"""Constructive search for purity-increasing states near maximal mixing.

For a non-unital model the states (I + s*eps*A)/Tr[I + s*eps*A] with
Hermitian A, ||A|| <= 1, expose the defect at first order in eps: the
exact rate expands as

    total(eps) = 2 (eps s Tr(A defect) + eps^2 Tr(A L(A))) / (d + s eps TrA)^2

so its slope at eps = 0 is s * 2 Tr(A defect) / d^2. Choosing A as the
normalized defect itself maximizes that slope over unit-norm Hermitian
directions and gives a deterministic witness; eps is then shrunk until
the exact (not first-order) rate is strictly positive, because the
quadratic remainder is model-dependent and unbounded a priori.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generator import DEFAULT_CLASSIFY_TOL, generator_on_identity
from .gks import LindbladModel
from .operators import (
    DensityMatrix,
    InvariantViolationError,
    as_operator,
    hermiticity_defect,
    hermitize,
    max_abs,
)
from .purity import purity_rate

EPSILON_START = 0.2
DEFAULT_MAX_HALVINGS = 60


class ProbeFailure(RuntimeError):
    """Witness search exhausted its budget despite a positive slope."""


@dataclass(frozen=True)
class ProbeResult:
    """A perturbed-mixed-state witness and its rates.

    first_order_rate is the slope d(total)/d(eps) at eps = 0, i.e.
    sign * 2 Tr(perturbation * defect) / d^2; exact_rate is the full
    purity rate at the returned state and is strictly positive.
    """

    perturbation: np.ndarray
    epsilon: float
    sign: int
    state: DensityMatrix
    first_order_rate: float
    exact_rate: float


def perturbed_mixed_state(a, epsilon: float, sign: int = 1) -> DensityMatrix:
    """(I + sign*epsilon*a) / Tr[I + sign*epsilon*a].

    Requires Hermitian a with operator norm <= 1 and 0 < epsilon < 1, so
    the result is strictly positive definite.
    """
    arr = as_operator(a, "perturbation")
    defect = hermiticity_defect(arr)
    if defect > 1e-12 * (1.0 + max_abs(arr)):
        raise InvariantViolationError(f"perturbation is not Hermitian: defect {defect:.3e}")
    norm = float(np.abs(np.linalg.eigvalsh(hermitize(arr))).max()) if arr.size else 0.0
    if norm > 1.0 + 1e-10:
        raise InvariantViolationError(f"perturbation operator norm {norm} exceeds 1")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    d = arr.shape[0]
    m = np.eye(d, dtype=np.complex128) + sign * epsilon * arr
    return DensityMatrix(m / np.trace(m).real)


def first_order_rate(m: LindbladModel, a) -> float:
    """Tr(a * defect), the bare pairing of a Hermitian direction with
    the unitality defect; the eps-slope of the exact rate is 2/d^2 times
    this (times the sign of the perturbation)."""
    arr = as_operator(a, "perturbation")
    defect_h = hermiticity_defect(arr)
    if defect_h > 1e-12 * (1.0 + max_abs(arr)):
        raise InvariantViolationError(
            f"perturbation is not Hermitian: defect {defect_h:.3e}"
        )
    if arr.shape[0] != m.dim:
        raise InvariantViolationError(
            f"perturbation has dimension {arr.shape[0]}, model has {m.dim}"
        )
    ud = generator_on_identity(m)
    return float(np.trace(arr @ ud.defect).real)


def find_purity_increasing_state(
    m: LindbladModel,
    tol: float = DEFAULT_CLASSIFY_TOL,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
) -> ProbeResult | None:
    """Explicit witness with exact purity rate > 0, or None if unital.

    The perturbation is the defect normalized to unit operator norm and
    sign +1, so the first-order slope Tr(defect^2)/||defect|| * 2/d^2 is
    strictly positive whenever the defect is nonzero beyond
    tol*(1+norm_scale). Epsilon starts at 0.2 and halves until the exact
    rate is positive (the canonical qubit amplitude-damping witness is
    the first rung: state diag(0.6, 0.4), rate 0.16).
    """
    ud = generator_on_identity(m)
    scale = tol * (1.0 + ud.norm_scale)
    norm = max(abs(ud.min_eig), abs(ud.max_eig))
    if norm <= scale:
        return None

    a = hermitize(ud.defect) / norm
    slope = 2.0 * float(np.trace(a @ ud.defect).real) / m.dim**2
    epsilon = EPSILON_START
    for _ in range(max_halvings):
        state = perturbed_mixed_state(a, epsilon, sign=1)
        exact = purity_rate(m, state).total
        if exact > 0.0:
            return ProbeResult(
                perturbation=a,
                epsilon=epsilon,
                sign=1,
                state=state,
                first_order_rate=slope,
                exact_rate=exact,
            )
        epsilon *= 0.5
    raise ProbeFailure(
        f"no positive exact rate after {max_halvings} halvings from "
        f"{EPSILON_START} although the first-order slope is {slope:.3e} > 0; "
        "the rate expansion and the exact rate disagree"
    )
