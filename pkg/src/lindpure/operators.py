"""Dense complex operator substrate.

Operators are plain complex128 numpy arrays validated at module
boundaries; density matrices get a thin wrapper that enforces the state
invariants (Hermitian, unit trace, positive semidefinite) once, at
construction. Spectral routines always work on the Hermitized input
(x + x+)/2 so numerical asymmetry cannot silently corrupt a spectrum;
the asymmetry itself is reported separately.

Default tolerances: 1e-12 for algebraic identities, 1e-10 for
eigenvalue-based positivity checks (eigensolvers are less exact than
matrix algebra at these dimensions).
"""

from __future__ import annotations

import numpy as np

from . import rng

ATOL_ALGEBRA = 1e-12
ATOL_EIG = 1e-10


class DimensionMismatchError(ValueError):
    """Two operators that must share a dimension do not."""


class InvariantViolationError(ValueError):
    """An input fails one of its declared invariants; names the invariant."""


def as_operator(x, name: str = "operator") -> np.ndarray:
    """Validate and return x as a square, finite complex128 matrix."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvariantViolationError(
            f"{name}: expected a square matrix, got shape {arr.shape}"
        )
    if arr.shape[0] < 1:
        raise InvariantViolationError(f"{name}: dimension must be >= 1")
    if not np.isfinite(arr).all():
        raise InvariantViolationError(f"{name}: entries must be finite (no NaN/Inf)")
    return arr


def check_same_dim(x: np.ndarray, y: np.ndarray, what: str = "operands") -> None:
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"{what} have mismatched dimensions {x.shape[0]} and {y.shape[0]}"
        )


def dagger(x: np.ndarray) -> np.ndarray:
    return x.conj().T


def hermiticity_defect(x: np.ndarray) -> float:
    """Max entrywise |x - x+|."""
    return float(np.abs(x - x.conj().T).max())


def hermitize(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + x.conj().T)


def max_abs(x: np.ndarray) -> float:
    return float(np.abs(x).max()) if x.size else 0.0


def commutator(x, y) -> np.ndarray:
    """x y - y x."""
    a = as_operator(x, "x")
    b = as_operator(y, "y")
    check_same_dim(a, b, "commutator operands")
    return a @ b - b @ a


def anticommutator(x, y) -> np.ndarray:
    """x y + y x."""
    a = as_operator(x, "x")
    b = as_operator(y, "y")
    check_same_dim(a, b, "anticommutator operands")
    return a @ b + b @ a


def min_eigenvalue_hermitian(x, herm_tol: float = ATOL_EIG) -> float:
    """Smallest eigenvalue of the Hermitized input (x + x+)/2.

    Rejects inputs whose Hermiticity defect exceeds herm_tol (scaled by
    the entry magnitude), reporting the defect.
    """
    a = as_operator(x, "x")
    defect = hermiticity_defect(a)
    if defect > herm_tol * (1.0 + max_abs(a)):
        raise InvariantViolationError(
            f"input is not Hermitian: defect {defect:.3e} exceeds tolerance {herm_tol:.1e}"
        )
    return float(np.linalg.eigvalsh(hermitize(a))[0])


def operator_norm_hermitian(x: np.ndarray) -> float:
    """Spectral norm of a (numerically) Hermitian matrix: max |eigenvalue|."""
    w = np.linalg.eigvalsh(hermitize(as_operator(x, "x")))
    return float(np.abs(w).max())


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Complete basis of dim^2 Hermitian matrices, each of operator norm <= 1.

    Ordering: the dim projectors |i><i|, then for i < j the real pair
    (|i><j| + |j><i|)/sqrt(2) and the imaginary pair i(|i><j| - |j><i|)/sqrt(2).
    """
    basis = []
    for i in range(dim):
        e = np.zeros((dim, dim), dtype=np.complex128)
        e[i, i] = 1.0
        basis.append(e)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(dim):
        for j in range(i + 1, dim):
            re = np.zeros((dim, dim), dtype=np.complex128)
            re[i, j] = inv_sqrt2
            re[j, i] = inv_sqrt2
            basis.append(re)
            im = np.zeros((dim, dim), dtype=np.complex128)
            im[i, j] = 1j * inv_sqrt2
            im[j, i] = -1j * inv_sqrt2
            basis.append(im)
    return basis


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator.

    Invariants are checked once at construction:
      - max |m - m+| <= herm_tol * (1 + max |entry|)
      - |Tr m - 1|   <= trace_tol
      - min eigenvalue of the Hermitized matrix >= -psd_tol

    The wrapped array is frozen. Integration code may pass relaxed
    trace/psd tolerances to admit documented integrator drift; the
    strict defaults apply everywhere else.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix, *, herm_tol: float = ATOL_ALGEBRA,
                 trace_tol: float = ATOL_ALGEBRA, psd_tol: float = ATOL_EIG):
        m = as_operator(matrix, "density matrix")
        defect = hermiticity_defect(m)
        if defect > herm_tol * (1.0 + max_abs(m)):
            raise InvariantViolationError(
                f"density matrix is not Hermitian: defect {defect:.3e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > trace_tol:
            raise InvariantViolationError(
                f"density matrix trace {tr} is not 1 within {trace_tol:.1e}"
            )
        min_eig = float(np.linalg.eigvalsh(hermitize(m))[0])
        if min_eig < -psd_tol:
            raise InvariantViolationError(
                f"density matrix is not positive semidefinite: "
                f"min eigenvalue {min_eig:.3e} < -{psd_tol:.1e}"
            )
        m = m.copy()
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def state_matrix(rho) -> np.ndarray:
    """Accept a DensityMatrix or raw matrix; validate and return the array."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return DensityMatrix(rho).matrix


def random_density_matrix(dim: int, seed: int) -> DensityMatrix:
    """Ginibre state: G G+ / Tr(G G+) with i.i.d. complex Gaussian G.

    Deterministic for a fixed seed (bitwise).
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    g = rng.complex_ginibre(dim, seed)
    m = g @ g.conj().T
    m = hermitize(m)
    m /= np.trace(m).real
    return DensityMatrix(m)


def random_perturbation(dim: int, seed: int) -> np.ndarray:
    """Random Hermitian matrix with operator norm exactly 1.

    A Ginibre draw is Hermitized and rescaled by its largest absolute
    eigenvalue; deterministic for a fixed seed.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    g = rng.complex_ginibre(dim, seed)
    a = hermitize(g)
    w = np.linalg.eigvalsh(a)
    return a / np.abs(w).max()


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre draw with the phases fixed."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    g = rng.complex_ginibre(dim, seed)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
