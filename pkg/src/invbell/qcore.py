"""Exact dense linear algebra for up to four qubits.

State vectors, unitaries, and density matrices are dense complex128 arrays
(dimension at most 16), validated on construction and read-only afterwards.
Qubit 0 is the most significant bit of the basis index: the basis state
|b0 b1 ... b_{n-1}> has index sum(b_i << (n-1-i)), and tensor products read
left to right.  All operations are pure functions; nothing here mutates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import BadWeights, DimensionMismatch, EmptyKeep, IndexClash

MAX_QUBITS = 4
NORM_ATOL = 1e-12
HERM_ATOL = 1e-12
TRACE_ATOL = 1e-12
UNITARY_ATOL = 1e-12
# Eigenvalue slack absorbs roundoff in 16x16 Hermitian eigensolves.
EIG_FLOOR = -1e-10
DIAG_NEG_TOL = 1e-10

_I2 = np.eye(2, dtype=np.complex128)


def _as_complex(values, name: str, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _qubit_count(dim: int, name: str) -> int:
    n = dim.bit_length() - 1
    if dim != 1 << n or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"{name} dimension must be 2, 4, 8, or 16, got {dim}")
    return n


def basis_bit(index: int, qubit: int, n_qubits: int) -> int:
    """Bit of `qubit` in basis state `index` (qubit 0 is most significant)."""
    return (index >> (n_qubits - 1 - qubit)) & 1


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over 1..4 qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex(self.amplitudes, "state vector", ndim=1)
        _qubit_count(amps.shape[0], "state vector")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state vector norm {norm!r} is not 1 within {NORM_ATOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """Square matrix with U @ U.conj().T = I entrywise within 1e-12."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_complex(self.matrix, "unitary", ndim=2)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError(f"unitary must be square, got shape {mat.shape}")
        _qubit_count(mat.shape[0], "unitary")
        defect = np.abs(mat @ mat.conj().T - np.eye(mat.shape[0])).max()
        if defect > UNITARY_ATOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, trace-1 matrix over 1..4 qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_complex(self.matrix, "density matrix", ndim=2)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        _qubit_count(mat.shape[0], "density matrix")
        herm_defect = np.abs(mat - mat.conj().T).max()
        if herm_defect > HERM_ATOL:
            raise ValueError(f"density matrix is not Hermitian (defect {herm_defect:.3e})")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix trace {trace!r} is not 1 within {TRACE_ATOL}")
        min_eig = float(np.linalg.eigvalsh(mat).min())
        if min_eig < EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def n_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


KronOperand = Union[StateVector, UnitaryMatrix, DensityMatrix]


def kron(a: KronOperand, b: KronOperand) -> KronOperand:
    """Tensor product of two same-kind operands; the left factor is most significant."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, UnitaryMatrix) and isinstance(b, UnitaryMatrix):
        return UnitaryMatrix(np.kron(a.matrix, b.matrix))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    raise TypeError(f"kron operands must be the same wrapper kind, got {type(a).__name__} and {type(b).__name__}")


def identity(n_qubits: int = 1) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(1 << n_qubits, dtype=np.complex128))


def hadamard() -> UnitaryMatrix:
    """Single-qubit Hadamard with the 1/sqrt(2) prefactor.

    The 1/sqrt(2) normalization is forced by unitarity; a 1/2-prefactor
    variant of the same matrix is not unitary.
    """
    return UnitaryMatrix(np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0))


def basis_state(n_qubits: int, index: int) -> StateVector:
    """Computational basis state |index> on `n_qubits` qubits."""
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def controlled_unitary(u: UnitaryMatrix, control: int, target: int, n: int) -> UnitaryMatrix:
    """Unitary on `n` qubits applying `u` to `target` when `control` is |1>."""
    if control == target:
        raise IndexClash(f"control and target are both qubit {control}")
    if u.dim != 2:
        raise DimensionMismatch(f"controlled gate needs a 2x2 unitary, got dim {u.dim}")
    for name, q in (("control", control), ("target", target)):
        if not 0 <= q < n:
            raise ValueError(f"{name} qubit {q} out of range for {n} qubits")
    proj = (np.diag([1, 0]).astype(np.complex128), np.diag([0, 1]).astype(np.complex128))
    total = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    for cval, tmat in ((0, _I2), (1, u.matrix)):
        factors = [proj[cval] if q == control else tmat if q == target else _I2 for q in range(n)]
        total += reduce(np.kron, factors)
    return UnitaryMatrix(total)


def apply_unitary(s: StateVector, u: UnitaryMatrix, targets: Sequence[int]) -> StateVector:
    """Apply `u` to the ordered qubit indices `targets` of `s`."""
    targets = list(targets)
    k = len(targets)
    if u.dim != 1 << k:
        raise DimensionMismatch(f"unitary dim {u.dim} does not match {k} target qubits")
    n = s.n_qubits
    if len(set(targets)) != k or any(not 0 <= t < n for t in targets):
        raise ValueError(f"targets {targets} must be distinct qubit indices below {n}")
    psi = s.amplitudes.reshape((2,) * n)
    op = u.matrix.reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), targets))
    psi = np.moveaxis(psi, list(range(k)), targets)
    return StateVector(psi.reshape(-1))


def density_from_state(s: StateVector) -> DensityMatrix:
    return DensityMatrix(np.outer(s.amplitudes, s.amplitudes.conj()))


def mix(components: Iterable[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination of density matrices."""
    components = list(components)
    if not components:
        raise BadWeights("mixture needs at least one component")
    weights = np.array([w for w, _ in components], dtype=np.float64)
    if np.any(weights < 0):
        raise BadWeights(f"negative mixture weight {weights.min()!r}")
    if abs(weights.sum() - 1.0) > TRACE_ATOL:
        raise BadWeights(f"mixture weights sum to {weights.sum()!r}, not 1")
    dim = components[0][1].dim
    if any(rho.dim != dim for _, rho in components):
        raise DimensionMismatch("mixture components have unequal dimensions")
    total = np.zeros((dim, dim), dtype=np.complex128)
    for w, rho in components:
        total += w * rho.matrix
    return DensityMatrix(total)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every qubit not in `keep`; kept qubits retain their order."""
    keep = sorted(set(keep))
    if not keep:
        raise EmptyKeep("partial trace must keep at least one qubit")
    n = rho.n_qubits
    if any(not 0 <= q < n for q in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} qubits")
    dropped = set(range(n)) - set(keep)
    letters = "abcdefgh"
    row = list(letters[:n])
    # dropped qubits reuse their row letter so einsum sums them out
    col = [row[q] if q in dropped else letters[4 + q] for q in range(n)]
    out = [row[q] for q in keep] + [letters[4 + q] for q in keep]
    tensor = rho.matrix.reshape((2,) * (2 * n))
    reduced = np.einsum("".join(row + col) + "->" + "".join(out), tensor)
    d = 1 << len(keep)
    return DensityMatrix(reduced.reshape(d, d))


def dephase(rho: DensityMatrix, qubits: Iterable[int]) -> DensityMatrix:
    """Zero every coherence between differing computational values on `qubits`."""
    qubits = sorted(set(qubits))
    n = rho.n_qubits
    if any(not 0 <= q < n for q in qubits):
        raise ValueError(f"dephase indices {qubits} out of range for {n} qubits")
    dim = rho.dim
    idx = np.arange(dim)
    mask = np.ones((dim, dim), dtype=bool)
    for q in qubits:
        bits = (idx >> (n - 1 - q)) & 1
        mask &= bits[:, None] == bits[None, :]
    return DensityMatrix(np.where(mask, rho.matrix, 0.0))


def measurement_probs(rho: DensityMatrix) -> np.ndarray:
    """Computational-basis outcome probabilities (the diagonal, made real)."""
    diag = np.real(np.diagonal(rho.matrix)).copy()
    if diag.min() < -DIAG_NEG_TOL:
        raise ValueError(f"diagonal entry {diag.min():.3e} below tolerance")
    np.clip(diag, 0.0, None, out=diag)
    total = float(diag.sum())
    if abs(total - 1.0) > TRACE_ATOL:
        raise ValueError(f"diagonal sums to {total!r}, not 1")
    return diag
