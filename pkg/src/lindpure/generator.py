"""Generator action, superoperator assembly, and monotonicity classification.

The object that decides everything here is the unitality defect, the
image of the identity under the dissipator:

    defect = sum_a [F_a, F_a+]

If the defect is zero the dynamics is unital and purity can never
increase; if it is nonzero but has no positive part the same conclusion
holds; if it has a positive part, an explicit purity-increasing state
exists in finite dimension and the probe module constructs one.

Tolerances for the trichotomy scale with (1 + norm_scale), where
norm_scale is the magnitude of sum F F+ + sum F+ F: defect entries are
differences of products of the jump operators, so an absolute tolerance
alone would misclassify large-norm models.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import kernels
from .gks import LindbladModel
from .operators import (
    DimensionMismatchError,
    InvariantViolationError,
    as_operator,
    hermiticity_defect,
    hermitize,
    max_abs,
)

LIOUVILLIAN_MAX = 4096
DEFAULT_CLASSIFY_TOL = 1e-10
DEFAULT_PROBE_BUDGET = 60


def _check_operand(m: LindbladModel, x, name: str = "operand") -> np.ndarray:
    arr = as_operator(x, name)
    if arr.shape[0] != m.dim:
        raise DimensionMismatchError(
            f"{name} has dimension {arr.shape[0]}, model has {m.dim}"
        )
    return np.ascontiguousarray(arr, dtype=np.complex128)


def apply_dissipator(m: LindbladModel, x) -> np.ndarray:
    """sum_a (F_a x F_a+ - {F_a+ F_a, x}/2)."""
    arr = _check_operand(m, x)
    return kernels.dissipator_apply(m._ops_stack, m._fdf_sum, arr)


def apply_generator(m: LindbladModel, rho) -> np.ndarray:
    """-i[H, rho] + dissipator(rho)."""
    arr = _check_operand(m, rho)
    return kernels.generator_apply(m._ham_or_none, m._ops_stack, m._fdf_sum, arr)


def liouvillian_matrix(m: LindbladModel) -> np.ndarray:
    """dim^2 x dim^2 matrix M with vec(generator(X)) = M vec(X).

    Column-stacking convention throughout: vec stacks columns, so
    vec(A X B) = (B^T kron A) vec(X).
    """
    d = m.dim
    if d * d > LIOUVILLIAN_MAX:
        raise InvariantViolationError(
            f"superoperator would be {d * d} x {d * d}; the limit is "
            f"{LIOUVILLIAN_MAX} x {LIOUVILLIAN_MAX} (dim <= {int(np.sqrt(LIOUVILLIAN_MAX))})"
        )
    eye = np.eye(d, dtype=np.complex128)
    sup = np.zeros((d * d, d * d), dtype=np.complex128)
    ham = m._ham_or_none
    if ham is not None:
        sup += -1j * (np.kron(eye, ham) - np.kron(ham.T, eye))
    for f in m.lindblad_ops:
        fdf = f.conj().T @ f
        sup += np.kron(f.conj(), f)
        sup -= 0.5 * (np.kron(eye, fdf) + np.kron(fdf.T, eye))
    return sup


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x, dtype=np.complex128).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=np.complex128).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class UnitalityDefect:
    """The dissipator's image of the identity and its spectral extremes.

    norm_scale is max |entry| of sum F F+ + sum F+ F and sets the scale
    against which "zero" and "negative" are judged.
    """

    defect: np.ndarray
    min_eig: float
    max_eig: float
    norm_scale: float

    def __post_init__(self):
        d = hermiticity_defect(self.defect)
        if d > 1e-11 * (1.0 + self.norm_scale):
            raise InvariantViolationError(
                f"unitality defect is not Hermitian: defect {d:.3e}"
            )
        if self.min_eig > self.max_eig:
            raise InvariantViolationError("min_eig exceeds max_eig")


def generator_on_identity(m: LindbladModel) -> UnitalityDefect:
    """Compute sum_a [F_a, F_a+] with its eigenvalue extremes.

    The Hamiltonian never contributes (-i[H, I] = 0), so this is also
    the full generator applied to the identity.
    """
    defect = m._ffd_sum - m._fdf_sum
    scale = max_abs(m._ffd_sum + m._fdf_sum)
    if m.n_ops:
        w = np.linalg.eigvalsh(hermitize(defect))
        lo, hi = float(w[0]), float(w[-1])
    else:
        lo = hi = 0.0
    return UnitalityDefect(defect=defect, min_eig=lo, max_eig=hi, norm_scale=scale)


class Classification(Enum):
    UNITAL = "UNITAL"
    NONUNITAL_NEGATIVE = "NONUNITAL_NEGATIVE"
    INDEFINITE = "INDEFINITE"


@dataclass(frozen=True)
class MonotonicityReport:
    """Classification outcome with spectral evidence.

    classification uses the defect spectrum restricted below the model's
    guard level when one is declared (truncated ladder models); the raw
    full-space extremes then land in guard_note and guarded_spectrum
    holds the restricted pair actually used. witness is present exactly
    when the classification is INDEFINITE and the probe succeeded;
    diagnostic records a failed probe (which the test suite treats as a
    failure for finite-dimensional models).
    """

    classification: Classification
    defect: UnitalityDefect
    witness: object | None = None
    guard_note: str | None = None
    guarded_spectrum: tuple[float, float] | None = None
    diagnostic: str | None = None

    @property
    def classified_spectrum(self) -> tuple[float, float]:
        if self.guarded_spectrum is not None:
            return self.guarded_spectrum
        return (self.defect.min_eig, self.defect.max_eig)


def classify_model(
    m: LindbladModel,
    tol: float = DEFAULT_CLASSIFY_TOL,
    probe_budget: int = DEFAULT_PROBE_BUDGET,
) -> MonotonicityReport:
    """Trichotomy on the unitality defect, with a witness when indefinite.

    UNITAL:             both spectral extremes within tol*(1+norm_scale)
    NONUNITAL_NEGATIVE: nonzero defect with no positive part beyond it
    INDEFINITE:         positive part present; a purity-increasing state
                        is attached (guaranteed to exist in finite dim)
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    ud = generator_on_identity(m)
    scale = tol * (1.0 + ud.norm_scale)

    guard = m.metadata.guard_level
    guard_note = None
    guarded_spectrum = None
    lo, hi = ud.min_eig, ud.max_eig
    if guard is not None and 0 < guard < m.dim:
        block = hermitize(ud.defect)[:guard, :guard]
        w = np.linalg.eigvalsh(block)
        lo, hi = float(w[0]), float(w[-1])
        guarded_spectrum = (lo, hi)
        guard_note = (
            f"classified on levels 0..{guard - 1}; levels {guard}..{m.dim - 1} "
            f"carry the truncation boundary (raw defect spectrum "
            f"[{ud.min_eig:.6g}, {ud.max_eig:.6g}])"
        )

    if max(abs(lo), abs(hi)) <= scale:
        cls = Classification.UNITAL
    elif hi <= scale:
        cls = Classification.NONUNITAL_NEGATIVE
    else:
        cls = Classification.INDEFINITE

    witness = None
    diagnostic = None
    if cls is Classification.INDEFINITE:
        from .probe import ProbeFailure, find_purity_increasing_state

        try:
            witness = find_purity_increasing_state(m, tol=tol, max_halvings=probe_budget)
        except ProbeFailure as exc:
            diagnostic = str(exc)
        if witness is None and diagnostic is None:
            diagnostic = (
                "defect classified indefinite but the probe saw it as zero; "
                "tolerances are inconsistent"
            )
    return MonotonicityReport(
        classification=cls,
        defect=ud,
        witness=witness,
        guard_note=guard_note,
        guarded_spectrum=guarded_spectrum,
        diagnostic=diagnostic,
    )
