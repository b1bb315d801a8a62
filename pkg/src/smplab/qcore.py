"""Exact complex linear algebra for small quantum registers.

Density matrices, measurement operators, observables with explicit spectral
decompositions, tensor powers, band projectors, and the renormalized
projection update.  Everything is dense complex double precision and
immutable; dimensions are powers of two and capped (default 2**12) so that
eigendecompositions stay fast at desk scale.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from functools import cached_property

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DimensionCapError, VanishingProjectionError

__all__ = [
    "DensityMatrix",
    "MeasurementOperator",
    "Observable",
    "PureState",
    "ProductState",
    "acceptance_probability",
    "tensor_power",
    "average_observable",
    "spectral_decompose",
    "band_projector",
    "band_edge_margin",
    "project_renormalize",
    "maximally_mixed",
    "random_density",
    "random_measurement_operator",
]


def _as_square_complex(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a.setflags(write=False)
    return a


def _num_qubits_of(dim: int) -> int:
    k = dim.bit_length() - 1
    if dim <= 0 or (1 << k) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return k


def _check_dim(dim: int, tol: Tolerances) -> None:
    if dim > tol.dim_cap:
        raise DimensionCapError(f"dimension {dim} exceeds cap {tol.dim_cap}")


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-norm of A - A^dagger."""
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, trace-one matrix on 2**k dimensions.

    Invariants are checked on construction; pass ``validate=False`` only when
    they hold by algebra (e.g. tensor products of already-validated states).
    """

    entries: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool, tol: Tolerances = DEFAULT):
        a = _as_square_complex(self.entries)
        object.__setattr__(self, "entries", a)
        _num_qubits_of(a.shape[0])
        if validate:
            defect = hermiticity_defect(a)
            if defect > tol.hermitian:
                raise ValueError(f"not Hermitian: defect {defect:.3e}")
            tr = complex(np.trace(a))
            if abs(tr - 1.0) > tol.trace_one:
                raise ValueError(f"trace {tr} is not 1")
            lo = float(np.linalg.eigvalsh(a).min())
            if lo < -tol.psd:
                raise ValueError(f"not PSD: minimum eigenvalue {lo:.3e}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return _num_qubits_of(self.dim)

    @classmethod
    def pure(cls, amplitudes) -> "DensityMatrix":
        """Density matrix of a pure state; normalizes the amplitude vector."""
        v = np.asarray(amplitudes, dtype=np.complex128).ravel()
        norm = float(np.linalg.norm(v))
        if norm <= 0.0:
            raise ValueError("zero state vector")
        v = v / norm
        return cls(np.outer(v, v.conj()), validate=False)


@dataclass(frozen=True)
class MeasurementOperator:
    """Hermitian matrix with spectrum in [0, 1] (one half of a two-outcome test)."""

    entries: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool, tol: Tolerances = DEFAULT):
        a = _as_square_complex(self.entries)
        object.__setattr__(self, "entries", a)
        _num_qubits_of(a.shape[0])
        if validate:
            defect = hermiticity_defect(a)
            if defect > tol.hermitian:
                raise ValueError(f"not Hermitian: defect {defect:.3e}")
            w = np.linalg.eigvalsh(a)
            if w.min() < -tol.operator_spectrum or w.max() > 1.0 + tol.operator_spectrum:
                raise ValueError(
                    f"eigenvalues [{w.min():.3e}, {w.max():.3e}] not within [0, 1]"
                )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return _num_qubits_of(self.dim)

    @classmethod
    def identity(cls, dim: int) -> "MeasurementOperator":
        return cls(np.eye(dim, dtype=np.complex128), validate=False)


@dataclass(frozen=True)
class PureState:
    """Unit vector of amplitudes; a light carrier for rank-one quantum messages."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=np.complex128).ravel()
        norm = float(np.linalg.norm(v))
        if norm <= 0.0:
            raise ValueError("zero state vector")
        v = v / norm
        _num_qubits_of(v.shape[0])
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def num_qubits(self) -> int:
        return _num_qubits_of(self.dim)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), validate=False)


@dataclass(frozen=True)
class ProductState:
    """Product of independent pure-state factors, kept factored.

    Semantically the tensor product of the factors' density matrices; storing
    the factors lets referees measure each register separately without ever
    materializing the full-dimensional matrix.
    """

    factors: tuple[PureState, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def num_qubits(self) -> int:
        return sum(f.num_qubits for f in self.factors)


@dataclass(frozen=True)
class Observable:
    """Hermitian matrix described by its eigenvalues and eigenprojectors.

    ``eigenvalues`` are sorted ascending and pairwise distinct beyond the
    grouping tolerance used to build the observable.  Eigenspaces are stored
    as orthonormal column blocks of ``vectors`` (``blocks[i]`` is the column
    range of eigenvalue i); the dense projectors are realized on demand.
    """

    eigenvalues: tuple[float, ...]
    vectors: np.ndarray
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        vecs = np.array(self.vectors, dtype=np.complex128)
        blocks = tuple((int(a), int(b)) for a, b in self.blocks)
        if vecs.ndim != 2 or not vals or len(vals) != len(blocks):
            raise ValueError("need one column block per eigenvalue")
        if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("eigenvalues must be sorted ascending")
        edges = [a for a, _ in blocks] + [blocks[-1][1]]
        if edges != sorted(set(edges)) or blocks[0][0] != 0 or blocks[-1][1] != vecs.shape[1]:
            raise ValueError("blocks must partition the columns in order")
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @cached_property
    def projectors(self) -> tuple[np.ndarray, ...]:
        out = []
        for a, b in self.blocks:
            cols = self.vectors[:, a:b]
            out.append(cols @ cols.conj().T)
        return tuple(out)

    @cached_property
    def matrix(self) -> np.ndarray:
        weights = np.empty(self.vectors.shape[1])
        for (a, b), val in zip(self.blocks, self.eigenvalues):
            weights[a:b] = val
        m = (self.vectors * weights) @ self.vectors.conj().T
        m.setflags(write=False)
        return m

    def expectation(self, rho: DensityMatrix) -> float:
        """Tr(F rho), real part (the matrix is Hermitian by construction)."""
        return float(np.sum(self.matrix * rho.entries.T).real)


def acceptance_probability(
    e: MeasurementOperator, rho: DensityMatrix, tol: Tolerances = DEFAULT
) -> float:
    """Probability that the two-outcome measurement (E, I-E) accepts ``rho``.

    Raises if dimensions differ or the trace has a non-negligible imaginary
    part, which signals a corrupted operator.
    """
    if e.dim != rho.dim:
        raise ValueError(f"dimension mismatch: operator {e.dim}, state {rho.dim}")
    tr = complex(np.sum(e.entries * rho.entries.T))
    if abs(tr.imag) > tol.imag_trace:
        raise ValueError(f"trace has imaginary part {tr.imag:.3e}")
    return min(1.0, max(0.0, tr.real))


def tensor_power(rho: DensityMatrix, r: int, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """``r`` independent copies of ``rho`` as one density matrix."""
    if r < 1:
        raise ValueError("need r >= 1")
    _check_dim(rho.dim**r, tol)
    out = rho.entries
    for _ in range(r - 1):
        out = np.kron(out, rho.entries)
    return DensityMatrix(out, validate=False)


def _cluster(sorted_vals: np.ndarray, group_tol: float) -> list[np.ndarray]:
    """Indices of ``sorted_vals`` grouped where adjacent gaps are <= group_tol."""
    groups: list[np.ndarray] = []
    start = 0
    for i in range(1, len(sorted_vals) + 1):
        if i == len(sorted_vals) or sorted_vals[i] - sorted_vals[i - 1] > group_tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


def spectral_decompose(
    h, group_tol: float | None = None, tol: Tolerances = DEFAULT
) -> Observable:
    """Diagonalize a Hermitian matrix into an Observable.

    Eigenvalues within ``group_tol`` of their neighbor are merged into one
    eigenspace (default ``tol.group_tol``).
    """
    if isinstance(h, (MeasurementOperator, DensityMatrix)):
        h = h.entries
    a = _as_square_complex(h)
    defect = hermiticity_defect(a)
    if defect > tol.hermitian:
        raise ValueError(f"not Hermitian: defect {defect:.3e}")
    if group_tol is None:
        group_tol = tol.group_tol
    w, v = np.linalg.eigh(a)
    vals, blocks = [], []
    for idx in _cluster(w, group_tol):
        vals.append(float(np.mean(w[idx])))
        blocks.append((int(idx[0]), int(idx[-1]) + 1))
    return Observable(tuple(vals), v, tuple(blocks))


def average_observable(
    e: MeasurementOperator, r: int, tol: Tolerances = DEFAULT
) -> Observable:
    """Observable measuring the success fraction of applying ``e`` to each of r copies.

    Equals (1/r) * sum_j E^(j) where E^(j) acts on the j-th register.  Its
    spectral decomposition is computed exactly from the decomposition of E:
    eigenvectors are tensor products of E's eigenvectors and eigenvalues are
    the means of the chosen eigenvalue tuples, so ``Tr(F rho^(x) r) = Tr(E rho)``
    holds to machine precision.
    """
    if r < 1:
        raise ValueError("need r >= 1")
    _check_dim(e.dim**r, tol)
    w, v = np.linalg.eigh(e.entries)

    vectors = np.array([[1.0 + 0.0j]])
    sums = np.zeros(1)
    for _ in range(r):
        vectors = np.kron(vectors, v)
        sums = (sums[:, None] + w[None, :]).ravel()
    means = sums / r

    order = np.argsort(means, kind="stable")
    sorted_means = means[order]
    vals, blocks = [], []
    for idx in _cluster(sorted_means, tol.group_tol):
        vals.append(float(np.mean(sorted_means[idx])))
        blocks.append((int(idx[0]), int(idx[-1]) + 1))
    return Observable(tuple(vals), vectors[:, order], tuple(blocks))


def band_projector(
    f: Observable, center: float, halfwidth: float, tol: Tolerances = DEFAULT
) -> np.ndarray:
    """Projector onto eigenspaces of ``f`` with eigenvalue in a closed interval.

    The interval is [center - halfwidth, center + halfwidth], padded by
    ``tol.band_pad`` on both sides so that eigenvalues sitting exactly on an
    endpoint are included.  May return the zero matrix.
    """
    if halfwidth < 0.0:
        raise ValueError("halfwidth must be nonnegative")
    lo = center - halfwidth - tol.band_pad
    hi = center + halfwidth + tol.band_pad
    # eigenvalues are ascending, so the selected blocks form one column run
    selected = [blk for val, blk in zip(f.eigenvalues, f.blocks) if lo <= val <= hi]
    if not selected:
        return np.zeros((f.dim, f.dim), dtype=np.complex128)
    cols = f.vectors[:, selected[0][0] : selected[-1][1]]
    return cols @ cols.conj().T


def band_edge_margin(f: Observable, center: float, halfwidth: float) -> float:
    """Smallest distance from any eigenvalue of ``f`` to either band edge.

    A tiny margin means the inclusive-endpoint convention decided which
    eigenspaces the band projector contains; callers use this to flag
    borderline instances.
    """
    edges = (center - halfwidth, center + halfwidth)
    return min(abs(val - edge) for val in f.eigenvalues for edge in edges)


def project_renormalize(
    rho: DensityMatrix, m: np.ndarray, tol: Tolerances = DEFAULT
) -> DensityMatrix:
    """M rho M / Tr(M rho M) for a projector M.

    Raises :class:`VanishingProjectionError` when the projected trace is at or
    below ``tol.zero_projection``; such instances are degenerate and cannot be
    renormalized.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != rho.entries.shape:
        raise ValueError("projector/state dimension mismatch")
    projected = m @ rho.entries @ m
    trace = float(np.trace(projected).real)
    if trace <= tol.zero_projection:
        raise VanishingProjectionError(step=-1, trace=trace)
    return DensityMatrix(projected / trace)


def maximally_mixed(num_qubits: int, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """I / 2**num_qubits."""
    dim = 1 << num_qubits
    _check_dim(dim, tol)
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, validate=False)


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Random mixed state: G G^dagger / Tr for a complex Gaussian G."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    a = g @ g.conj().T
    return DensityMatrix(a / np.trace(a).real)


def random_measurement_operator(dim: int, rng: np.random.Generator) -> MeasurementOperator:
    """Random operator with Haar-ish eigenbasis and uniform spectrum in [0, 1]."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(g)
    w = rng.uniform(0.0, 1.0, size=dim)
    return MeasurementOperator((q * w) @ q.conj().T)
