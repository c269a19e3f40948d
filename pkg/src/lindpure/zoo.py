"""Canonical channel constructors.

Qubit families, truncated bosonic ladder families, and seeded random
families, all returned as LindbladModel instances with metadata (name,
trace-preservation flag, guard level for truncated families).

Fock convention: basis |0>..|N> with the ground state first, so the
qubit lowering operator is |0><1| and amplitude damping decays to index
0. A cutoff-N ladder matrix has size N+1; the guard level marks where
truncation artifacts start (the top level for single-ladder families,
the top two levels for the cubic pump, whose action reaches two levels
from the boundary).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gks import GKSModel, LindbladModel, ModelMetadata, diagonalize_gks
from .operators import hermitize
from .rng import complex_ginibre

DEFAULT_CUTOFF = 16

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)


def lowering_operator(cutoff: int) -> np.ndarray:
    """Truncated annihilation matrix: a|n> = sqrt(n)|n-1>, size cutoff+1."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    d = cutoff + 1
    a = np.zeros((d, d), dtype=np.complex128)
    for n in range(1, d):
        a[n - 1, n] = np.sqrt(n)
    return a


def raising_operator(cutoff: int) -> np.ndarray:
    """Adjoint of the truncated annihilation matrix (entrywise exact)."""
    return lowering_operator(cutoff).conj().T


def _subseed(seed: int, i: int) -> int:
    # splitmix-style decorrelation of per-draw seeds
    return (seed * 0x9E3779B97F4A7C15 + i) % 2**64


@dataclass(frozen=True)
class ZooSpec:
    """Family name plus the parameters that family consumes.

    rates: one positive rate for most families, three for pauli_channel.
    cutoff applies to the bosonic families, seed to the random families,
    dim to the random families (default 2).
    """

    family: str
    rates: tuple[float, ...] = (1.0,)
    cutoff: int | None = None
    seed: int | None = None
    dim: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; valid: {', '.join(list_families())}"
            )
        if not self.rates or any(r <= 0 for r in self.rates):
            raise ValueError(f"rates must be positive, got {self.rates}")
        if self.family == "pauli_channel":
            if len(self.rates) != 3:
                raise ValueError(
                    f"pauli_channel takes exactly 3 rates, got {len(self.rates)}"
                )
        elif len(self.rates) != 1:
            raise ValueError(
                f"{self.family} takes exactly 1 rate, got {len(self.rates)}"
            )
        if self.family in _BOSONIC:
            if self.cutoff is None:
                object.__setattr__(self, "cutoff", DEFAULT_CUTOFF)
            if self.cutoff < 2:
                raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")
        elif self.cutoff is not None:
            raise ValueError(f"{self.family} does not take a cutoff")
        if self.family in _RANDOM:
            if self.seed is None:
                raise ValueError(f"{self.family} requires a seed")
            if self.dim is None:
                object.__setattr__(self, "dim", 2)
            if self.dim < 2:
                raise ValueError(f"dim must be >= 2, got {self.dim}")
        else:
            if self.seed is not None:
                raise ValueError(f"{self.family} does not take a seed")
            if self.dim is not None:
                raise ValueError(f"{self.family} does not take a dim")


def _qubit(name, ops):
    return LindbladModel(
        np.zeros((2, 2), dtype=np.complex128),
        ops,
        ModelMetadata(name=name, trace_preserving=True),
    )


def _build_depolarizing(spec: ZooSpec) -> LindbladModel:
    g = spec.rates[0]
    ops = [np.sqrt(g / 4.0) * s for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    return _qubit("depolarizing_qubit", ops)


def _build_dephasing(spec: ZooSpec) -> LindbladModel:
    return _qubit("dephasing_qubit", [np.sqrt(spec.rates[0]) * SIGMA_Z])


def _build_amplitude_damping(spec: ZooSpec) -> LindbladModel:
    return _qubit("amplitude_damping_qubit", [np.sqrt(spec.rates[0]) * SIGMA_MINUS])


def _build_pauli(spec: ZooSpec) -> LindbladModel:
    gx, gy, gz = spec.rates
    ops = [np.sqrt(gx) * SIGMA_X, np.sqrt(gy) * SIGMA_Y, np.sqrt(gz) * SIGMA_Z]
    return _qubit("pauli_channel", ops)


def _build_lowering(spec: ZooSpec) -> LindbladModel:
    a = lowering_operator(spec.cutoff)
    return LindbladModel(
        np.zeros_like(a),
        [np.sqrt(spec.rates[0]) * a],
        ModelMetadata(
            name="bosonic_lowering", trace_preserving=True, guard_level=spec.cutoff
        ),
    )


def _build_raising(spec: ZooSpec) -> LindbladModel:
    ad = raising_operator(spec.cutoff)
    return LindbladModel(
        np.zeros_like(ad),
        [np.sqrt(spec.rates[0]) * ad],
        ModelMetadata(
            name="bosonic_raising", trace_preserving=True, guard_level=spec.cutoff
        ),
    )


def _build_cubic_raising(spec: ZooSpec) -> LindbladModel:
    # F = a+ a a+ pumps n -> n+1 with amplitude (n+1)^(3/2). In the
    # untruncated limit population escapes to arbitrarily high levels in
    # finite time, so that semigroup is not trace preserving; the
    # truncated matrix conserves trace exactly but keeps the flag so
    # trajectory drift is reported instead of asserted. Its action
    # reaches two levels from the boundary, hence the deeper guard.
    a = lowering_operator(spec.cutoff)
    ad = a.conj().T
    f = np.sqrt(spec.rates[0]) * (ad @ a @ ad)
    return LindbladModel(
        np.zeros_like(a),
        [f],
        ModelMetadata(
            name="cubic_raising",
            trace_preserving=False,
            guard_level=spec.cutoff - 1,
        ),
    )


def _build_random_unital(spec: ZooSpec) -> LindbladModel:
    # Hermitian jump operators commute with their own adjoints, so the
    # unitality defect vanishes identically regardless of the draw.
    g = spec.rates[0]
    ops = []
    for i in range(3):
        h = hermitize(complex_ginibre(spec.dim, _subseed(spec.seed, i)))
        h /= np.abs(np.linalg.eigvalsh(h)).max()
        ops.append(np.sqrt(g) * h)
    return LindbladModel(
        np.zeros((spec.dim, spec.dim), dtype=np.complex128),
        ops,
        ModelMetadata(name="random_unital", trace_preserving=True),
    )


def _build_random_gks(spec: ZooSpec) -> LindbladModel:
    # Random PSD coefficient matrix over random couplings, then
    # diagonalized; generically non-unital.
    k = 3
    d = spec.dim
    ham = hermitize(complex_ginibre(d, _subseed(spec.seed, 0))) / np.sqrt(d)
    couplings = [
        complex_ginibre(d, _subseed(spec.seed, 1 + i)) / np.sqrt(d) for i in range(k)
    ]
    b = complex_ginibre(k, _subseed(spec.seed, 1 + k))
    coeff = spec.rates[0] * hermitize(b @ b.conj().T) / k
    lm = diagonalize_gks(GKSModel(ham, couplings, coeff))
    return LindbladModel(
        lm.hamiltonian,
        lm.lindblad_ops,
        ModelMetadata(name="random_gks", trace_preserving=True),
    )


FAMILIES = {
    "depolarizing_qubit": _build_depolarizing,
    "dephasing_qubit": _build_dephasing,
    "amplitude_damping_qubit": _build_amplitude_damping,
    "pauli_channel": _build_pauli,
    "bosonic_lowering": _build_lowering,
    "bosonic_raising": _build_raising,
    "cubic_raising": _build_cubic_raising,
    "random_unital": _build_random_unital,
    "random_gks": _build_random_gks,
}

_BOSONIC = {"bosonic_lowering", "bosonic_raising", "cubic_raising"}
_RANDOM = {"random_unital", "random_gks"}


def list_families() -> list[str]:
    """Stable sorted family identifiers."""
    return sorted(FAMILIES)


def build_model(spec: ZooSpec) -> LindbladModel:
    """Construct the family's model; metadata carries name, the
    trace-preservation flag, and the guard level where applicable."""
    return FAMILIES[spec.family](spec)
