"""Purity, the exact purity rate, and the inequality machinery behind it.

The rate dp/dt = 2 Tr(rho L(rho)) is computed in two independent
algebraic decompositions and the function refuses to return unless they
agree:

  total = jump_gain + drain
        = 2 sum_a Tr[rho F_a rho F_a+] - 2 sum_a Tr[rho^2 F_a+ F_a]
  total = neg_part + comm_part
        = -sum_a Tr[(rho F_a - F_a rho)+(rho F_a - F_a rho)]
          + sum_a Tr[rho^2 [F_a, F_a+]]

neg_part is a negated sum of squared Hilbert-Schmidt norms, hence never
positive; comm_part pairs the squared state with the unitality defect.
That split is the whole monotonicity story in two numbers: a defect
without positive part forces total <= 0 for every state.

The Hamiltonian drops out of the rate identically (cyclic trace), which
is why coherent control alone can never purify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .generator import _check_operand, apply_dissipator
from .gks import LindbladModel
from .operators import (
    InvariantViolationError,
    as_operator,
    hermiticity_defect,
    max_abs,
    state_matrix,
)

RATE_FORM_TOL = 1e-11
SCHWARZ_POSITIVITY_FLOOR = -1e-12


def purity(rho) -> float:
    """Tr(rho^2); 1 for pure states, 1/d for the maximally mixed state.

    The reported value is checked against the attainable range
    [1/d, 1] (up to 1e-12): I/d is the unique minimizer with
    Tr[(I/d)^2] = 1/d. The order-2 Renyi entropy is -log of this value.
    """
    m = state_matrix(rho)
    p = float(np.vdot(m, m).real)
    d = m.shape[0]
    if p < 1.0 / d - 1e-12 or p > 1.0 + 1e-12:
        raise InvariantViolationError(
            f"purity {p} outside [1/{d}, 1]; state invariants must be broken"
        )
    return p


@dataclass(frozen=True)
class PurityRateBreakdown:
    """dp/dt split into both decompositions (see module docstring).

    total = jump_gain + drain = neg_part + comm_part, and neg_part <= 0
    always; both identities are enforced at construction.
    """

    total: float
    jump_gain: float
    drain: float
    neg_part: float
    comm_part: float
    scale: float = 1.0

    def __post_init__(self):
        tol = RATE_FORM_TOL * (1.0 + self.scale)
        if abs(self.total - (self.jump_gain + self.drain)) > tol:
            raise InvariantViolationError(
                "purity rate decomposition mismatch: total != jump_gain + drain"
            )
        if abs(self.total - (self.neg_part + self.comm_part)) > tol:
            raise InvariantViolationError(
                "purity rate decomposition mismatch: total != neg_part + comm_part"
            )
        if self.neg_part > 1e-12 * (1.0 + self.scale):
            raise InvariantViolationError(
                f"neg_part {self.neg_part:.3e} is positive; it is a negated norm"
            )


def purity_rate(m: LindbladModel, rho) -> PurityRateBreakdown:
    """Exact dp/dt at rho under the model, in both decompositions.

    Equals 2 Tr(rho generator(rho)) including the Hamiltonian, whose
    contribution vanishes identically.
    """
    mat = state_matrix(rho)
    arr = _check_operand(m, mat, "state")
    jump, drain, neg, comm = kernels.purity_rate_terms(m._ops_stack, arr)
    scale = (1.0 + max_abs(m._fdf_sum) + max_abs(m._ffd_sum)) * max(
        1.0, max_abs(arr) ** 2
    )
    return PurityRateBreakdown(
        total=jump + drain,
        jump_gain=jump,
        drain=drain,
        neg_part=neg,
        comm_part=comm,
        scale=scale,
    )


def hamiltonian_rate_term(hamiltonian, rho) -> float:
    """Coherent contribution to dp/dt: -2i Tr(rho [H, rho]).

    Identically zero by the cyclic trace; returned as a number so tests
    can pin the roundoff level (|result| <= 1e-12 * (1 + |H|)).
    """
    h = as_operator(hamiltonian, "hamiltonian")
    defect = hermiticity_defect(h)
    if defect > 1e-12 * (1.0 + max_abs(h)):
        raise InvariantViolationError(f"hamiltonian is not Hermitian: defect {defect:.3e}")
    mat = state_matrix(rho)
    if mat.shape[0] != h.shape[0]:
        raise InvariantViolationError(
            f"state has dimension {mat.shape[0]}, hamiltonian has {h.shape[0]}"
        )
    val = np.trace(mat @ (h @ mat - mat @ h))
    return float((-2j * val).real)


def dissipativity_residual(m: LindbladModel, a) -> np.ndarray:
    """L(a+ a) + a+ L(I) a - L(a+) a - a+ L(a), dissipator-only L.

    Positive semidefinite for every completely positive generator;
    callers check that with min_eigenvalue_hermitian. The Hamiltonian
    part of the full generator cancels in this combination identically.
    """
    arr = _check_operand(m, a, "a")
    ad = arr.conj().T
    eye = np.eye(m.dim, dtype=np.complex128)
    return (
        apply_dissipator(m, ad @ arr)
        + ad @ apply_dissipator(m, eye) @ arr
        - apply_dissipator(m, ad) @ arr
        - ad @ apply_dissipator(m, arr)
    )


def schwarz_gap(m: LindbladModel, rho) -> np.ndarray:
    """Per-operator Schwarz slack for the pair X_a = rho F_a, Y_a = rho F_a+.

    gap_a = 2 Re Tr[X_a+ Y_a] - Tr[X_a+ X_a] - Tr[Y_a+ Y_a]
          = -||X_a - Y_a||_HS^2 <= 0,

    the equality case being X_a = Y_a (e.g. Hermitian F at the maximally
    mixed state). Also checks the positivity Tr[X_a Y_a] =
    Tr[rho F_a rho F_a+] >= 0, which holds because that trace equals
    ||sqrt(rho) F_a sqrt(rho)||_HS^2.
    """
    mat = state_matrix(rho)
    arr = _check_operand(m, mat, "state")
    gaps = np.empty(m.n_ops)
    for i, f in enumerate(m.lindblad_ops):
        x = arr @ f
        y = arr @ f.conj().T
        cross = float(np.trace(x @ y).real)
        if cross < SCHWARZ_POSITIVITY_FLOOR * (1.0 + max_abs(arr) ** 2 * max_abs(f) ** 2):
            raise InvariantViolationError(
                f"Tr[rho F rho F+] = {cross:.3e} negative for operator {i}"
            )
        gaps[i] = (
            2.0 * np.vdot(x, y).real - np.vdot(x, x).real - np.vdot(y, y).real
        )
    return gaps
