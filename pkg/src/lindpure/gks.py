"""Generator representations: coefficient-matrix form and diagonal form.

A GKSModel stores the generator as a Hermitian positive semidefinite
coefficient matrix over fixed coupling operators; complete positivity of
the dynamics is exactly positive semidefiniteness of that matrix. A
LindbladModel stores the diagonalized form, a flat list of jump
operators with the rates already absorbed as sqrt(rate) factors.

Diagonalization is unique only up to unitary mixing of equal-rate
operators, so correctness of ``diagonalize_gks`` is defined by generator
action, never by comparing individual jump operators.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .operators import (
    ATOL_ALGEBRA,
    ATOL_EIG,
    DimensionMismatchError,
    InvariantViolationError,
    as_operator,
    hermiticity_defect,
    hermitize,
    max_abs,
)

RATE_CUTOFF_REL = 1e-12
COEFF_CLAMP = 1e-10


@dataclass(frozen=True)
class ModelMetadata:
    """Optional model annotations used by classification and reporting.

    guard_level marks the first Fock level contaminated by a truncation
    boundary; classification restricts spectra to levels below it.
    trace_preserving=False flags families whose untruncated dynamics lose
    probability, exempting their trace drift from assertions.
    """

    name: str | None = None
    trace_preserving: bool = True
    guard_level: int | None = None


def _check_hermitian(m: np.ndarray, what: str) -> None:
    defect = hermiticity_defect(m)
    if defect > ATOL_ALGEBRA * (1.0 + max_abs(m)):
        raise InvariantViolationError(f"{what} is not Hermitian: defect {defect:.3e}")


class LindbladModel:
    """Hamiltonian plus diagonal-form jump operators (rates absorbed)."""

    __slots__ = ("hamiltonian", "lindblad_ops", "metadata", "dim",
                 "_ops_stack", "_fdf_sum", "_ffd_sum", "_ham_or_none")

    def __init__(self, hamiltonian=None, lindblad_ops=(), metadata: ModelMetadata | None = None):
        ops = [as_operator(f, f"lindblad_ops[{i}]") for i, f in enumerate(lindblad_ops)]
        if hamiltonian is None:
            if not ops:
                raise InvariantViolationError(
                    "model needs a Hamiltonian or at least one Lindblad operator"
                )
            hamiltonian = np.zeros_like(ops[0])
        ham = as_operator(hamiltonian, "hamiltonian")
        _check_hermitian(ham, "hamiltonian")
        dim = ham.shape[0]
        for i, f in enumerate(ops):
            if f.shape[0] != dim:
                raise DimensionMismatchError(
                    f"lindblad_ops[{i}] has dimension {f.shape[0]}, hamiltonian has {dim}"
                )
        ham = ham.copy()
        ham.flags.writeable = False
        self.hamiltonian = ham
        frozen = []
        for f in ops:
            f = f.copy()
            f.flags.writeable = False
            frozen.append(f)
        self.lindblad_ops = tuple(frozen)
        self.metadata = metadata if metadata is not None else ModelMetadata()
        self.dim = dim

        stack = np.ascontiguousarray(
            np.stack(ops) if ops else np.zeros((0, dim, dim)), dtype=np.complex128
        )
        self._ops_stack = stack
        fdf = np.zeros((dim, dim), dtype=np.complex128)
        ffd = np.zeros((dim, dim), dtype=np.complex128)
        for f in ops:
            fdf += f.conj().T @ f
            ffd += f @ f.conj().T
        self._fdf_sum = np.ascontiguousarray(fdf)
        self._ffd_sum = np.ascontiguousarray(ffd)
        self._ham_or_none = (
            None if max_abs(ham) == 0.0
            else np.ascontiguousarray(ham, dtype=np.complex128)
        )

    @property
    def n_ops(self) -> int:
        return len(self.lindblad_ops)

    def __repr__(self) -> str:
        name = self.metadata.name
        tag = f", name={name!r}" if name else ""
        return f"LindbladModel(dim={self.dim}, n_ops={self.n_ops}{tag})"


class GKSModel:
    """Coefficient-matrix form: Hermitian PSD matrix over coupling operators."""

    __slots__ = ("hamiltonian", "coupling_ops", "coeff_matrix", "dim")

    def __init__(self, hamiltonian, coupling_ops, coeff_matrix):
        ham = as_operator(hamiltonian, "hamiltonian")
        _check_hermitian(ham, "hamiltonian")
        dim = ham.shape[0]
        ops = [as_operator(g, f"coupling_ops[{i}]") for i, g in enumerate(coupling_ops)]
        for i, g in enumerate(ops):
            if g.shape[0] != dim:
                raise DimensionMismatchError(
                    f"coupling_ops[{i}] has dimension {g.shape[0]}, hamiltonian has {dim}"
                )
        a = np.asarray(coeff_matrix, dtype=np.complex128)
        if a.shape != (len(ops), len(ops)):
            raise InvariantViolationError(
                f"coeff_matrix shape {a.shape} does not match {len(ops)} coupling operators"
            )
        if a.size:
            defect = hermiticity_defect(a)
            if defect > ATOL_ALGEBRA * (1.0 + max_abs(a)):
                raise InvariantViolationError(
                    f"coeff_matrix is not Hermitian: defect {defect:.3e}"
                )
            min_eig = float(np.linalg.eigvalsh(hermitize(a))[0])
            if min_eig < -ATOL_EIG:
                raise InvariantViolationError(
                    "coeff_matrix is not completely positive: "
                    f"min eigenvalue {min_eig:.3e} < -{ATOL_EIG:.1e}"
                )
        self.hamiltonian = ham
        self.coupling_ops = tuple(ops)
        self.coeff_matrix = a
        self.dim = dim

    def __repr__(self) -> str:
        return f"GKSModel(dim={self.dim}, n_couplings={len(self.coupling_ops)})"


def diagonalize_gks(m: GKSModel) -> LindbladModel:
    """Convert the coefficient form to the diagonal form.

    Eigendecompose the coefficient matrix A = U diag(rates) U+ and emit
    F_k = sqrt(rate_k) * sum_b U[b, k] G_b, so that
    sum_k F_k x F_k+ = sum_ab A[a, b] G_a x G_b+ exactly. Rates within
    [-1e-10, 0) are clamped to zero with a warning; rates below the
    relative cutoff 1e-12 * max(rate) are dropped as null channels.
    """
    k = len(m.coupling_ops)
    if k == 0:
        return LindbladModel(m.hamiltonian, ())
    rates, u = np.linalg.eigh(hermitize(m.coeff_matrix))
    if rates[0] < -ATOL_EIG:
        raise InvariantViolationError(
            f"coeff_matrix is not completely positive: min eigenvalue {rates[0]:.3e}"
        )
    if rates[0] < 0.0:
        warnings.warn(
            f"clamping {int((rates < 0).sum())} slightly negative coefficient "
            f"eigenvalue(s) (min {rates[0]:.3e}) to zero",
            stacklevel=2,
        )
        rates = np.clip(rates, 0.0, None)
    cutoff = RATE_CUTOFF_REL * rates.max() if rates.max() > 0.0 else 0.0
    ops = []
    for idx in range(k):
        rate = rates[idx]
        if rate <= cutoff:
            continue
        f = np.zeros((m.dim, m.dim), dtype=np.complex128)
        for b in range(k):
            f += u[b, idx] * m.coupling_ops[b]
        ops.append(np.sqrt(rate) * f)
    return LindbladModel(m.hamiltonian, ops)


def apply_gks_dissipator(m: GKSModel, x) -> np.ndarray:
    """Dissipator in coefficient form:
    (1/2) sum_ab A[a,b] ([G_a, x G_b+] + [G_a x, G_b+]).

    Quadratic in the number of coupling operators; used as the reference
    the diagonal form is checked against.
    """
    arr = as_operator(x, "x")
    if arr.shape[0] != m.dim:
        raise DimensionMismatchError(
            f"operand has dimension {arr.shape[0]}, model has {m.dim}"
        )
    out = np.zeros_like(arr)
    a = m.coeff_matrix
    for i, gi in enumerate(m.coupling_ops):
        gix = gi @ arr
        for j, gj in enumerate(m.coupling_ops):
            if a[i, j] == 0.0:
                continue
            gjd = gj.conj().T
            out += 0.5 * a[i, j] * ((gi @ (arr @ gjd) - (arr @ gjd) @ gi)
                                    + (gix @ gjd - gjd @ gix))
    return out
