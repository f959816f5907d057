"""Dense value-level register states.

A register is an ordered collection of named segments; segment ``i`` holds a
value in ``range(dim_i)``.  Joint states live in the tensor product with the
FIRST segment as the most significant digit of the flat index, so a layout
``[("c", 4), ("a", 2)]`` stores the basis state ``(x, y)`` at flat index
``x * 2 + y``.  Entropies are reported in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

# Construction guard; exact-algebra checks in callers use tighter bounds.
NORM_ATOL = 1e-6
HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
RANK_TOL = 1e-12
UNITARY_ATOL = 1e-10


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named segments with mixed-radix flat indexing."""

    segments: tuple[tuple[str, int], ...]

    def __post_init__(self):
        segs = tuple((str(name), int(dim)) for name, dim in self.segments)
        if not segs:
            raise ValueError("layout needs at least one segment")
        names = [name for name, _ in segs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate segment names in {names}")
        for name, dim in segs:
            if dim < 1:
                raise ValueError(f"segment {name!r} has non-positive size {dim}")
        object.__setattr__(self, "segments", segs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.segments)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.segments)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def position(self, name: str) -> int:
        for i, (seg, _) in enumerate(self.segments):
            if seg == name:
                return i
        raise ValueError(f"unknown segment {name!r}; have {list(self.names)}")

    def dim(self, name: str) -> int:
        return self.segments[self.position(name)][1]

    def stride(self, name: str) -> int:
        """Product of the sizes of all segments to the right of ``name``."""
        pos = self.position(name)
        return math.prod(self.dims[pos + 1 :])

    def index(self, values: Sequence[int]) -> int:
        """Flat index of a tuple of segment values, first segment most significant."""
        if len(values) != len(self.segments):
            raise ValueError(
                f"expected {len(self.segments)} values, got {len(values)}"
            )
        idx = 0
        for (name, dim), v in zip(self.segments, values):
            v = int(v)
            if not 0 <= v < dim:
                raise ValueError(f"value {v} out of range for segment {name!r} of size {dim}")
            idx = idx * dim + v
        return idx

    def values(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`index`."""
        index = int(index)
        if not 0 <= index < self.total_dim:
            raise ValueError(f"flat index {index} out of range for dimension {self.total_dim}")
        out = []
        for dim in reversed(self.dims):
            out.append(index % dim)
            index //= dim
        return tuple(reversed(out))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over a register layout."""

    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128, copy=True, order="C")
        self._install(amps)

    def _install(self, amps):
        if amps.shape != (self.layout.total_dim,):
            raise ValueError(
                f"amplitude array of shape {amps.shape} does not match "
                f"layout dimension {self.layout.total_dim}"
            )
        norm = np.linalg.norm(amps)
        if not abs(norm - 1.0) <= NORM_ATOL:
            raise ValueError(f"state vector is not normalized (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def _wrap(cls, layout, amps):
        """Adopt a freshly allocated contiguous complex128 array without copying."""
        self = object.__new__(cls)
        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "amps", None)
        self._install(amps)
        return self

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self, segment: str | None = None) -> np.ndarray:
        """Born probabilities, marginalized onto one segment if given."""
        p = np.abs(self.amps) ** 2
        if segment is None:
            return p
        dim = self.layout.dim(segment)
        stride = self.layout.stride(segment)
        return p.reshape(-1, dim, stride).sum(axis=(0, 2))

    def overlap(self, other: "StateVector") -> complex:
        if self.layout != other.layout:
            raise ValueError("layout mismatch")
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=np.complex128, copy=True, order="C")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        herm = np.max(np.abs(mat - mat.conj().T))
        if not herm <= HERMITIAN_ATOL:
            raise ValueError(f"matrix is not Hermitian (deviation {herm!r})")
        tr = mat.trace()
        if not abs(tr - 1.0) <= TRACE_ATOL:
            raise ValueError(f"matrix trace is {tr!r}, expected 1")
        low = float(np.linalg.eigvalsh(mat).min())
        if not low >= EIGENVALUE_FLOOR:
            raise ValueError(f"matrix has negative eigenvalue {low!r}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def rank(self, tol: float = RANK_TOL) -> int:
        return int((np.linalg.eigvalsh(self.mat) > tol).sum())

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure joint state on segments ("ancilla", "reference") realizing a density operator.

    The reference segment size equals the operator's rank, and the Schmidt
    coefficients are stored in descending order.
    """

    joint: StateVector
    schmidt_coeffs: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.schmidt_coeffs)


class PhaseMatch(NamedTuple):
    equal: bool
    phase: float


def basis_state(layout: RegisterLayout, values: Sequence[int]) -> StateVector:
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[layout.index(values)] = 1.0
    return StateVector._wrap(layout, amps)


def random_state(dim: int, seed: int, label: str = "q") -> StateVector:
    """Haar-ish random pure state: normalized complex Gaussian amplitudes."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return StateVector._wrap(RegisterLayout(((label, dim),)), v)


def random_density(dim: int, rank: int, seed: int) -> DensityOperator:
    """Random density operator with the requested rank.

    Eigenvectors come from a QR factorization of a complex Gaussian matrix;
    the eigenvalue weights are bounded away from zero so the rank is clean
    at the 1e-12 cutoff.
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    q, _ = np.linalg.qr(g)
    w = 0.2 + rng.random(rank)
    w /= w.sum()
    mat = (q * w) @ q.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(mat)


def purify(rho: DensityOperator) -> Purification:
    """Eigendecomposition purification over segments ("ancilla", "reference")."""
    evals, evecs = np.linalg.eigh(rho.mat)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    keep = evals > RANK_TOL
    lam = evals[keep]
    vecs = evecs[:, keep]
    coeffs = np.sqrt(lam)
    joint_amps = np.ascontiguousarray((vecs * coeffs).reshape(-1))
    layout = RegisterLayout((("ancilla", rho.dim), ("reference", len(lam))))
    return Purification(StateVector._wrap(layout, joint_amps), coeffs)


def partial_trace(state: StateVector, keep: str) -> DensityOperator:
    """Reduced density operator of one segment of a pure state."""
    segs = state.layout.segments
    if len(segs) < 2:
        raise ValueError("partial trace needs at least two segments")
    pos = state.layout.position(keep)
    psi = state.amps.reshape(state.layout.dims)
    psi = np.moveaxis(psi, pos, 0).reshape(state.layout.dims[pos], -1)
    mat = psi @ psi.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityOperator(mat)


def reduced_density(state: StateVector, keep: Sequence[str]) -> np.ndarray:
    """Reduced density matrix over several segments, kept in layout order.

    Returns a raw matrix (no DensityOperator validation) for entropy
    bookkeeping on multi-segment states.
    """
    positions = sorted(state.layout.position(name) for name in keep)
    if len(set(positions)) != len(keep):
        raise ValueError(f"segments must be distinct, got {list(keep)}")
    psi = state.amps.reshape(state.layout.dims)
    kept_dim = math.prod(state.layout.dims[p] for p in positions)
    psi = np.moveaxis(psi, positions, range(len(positions))).reshape(kept_dim, -1)
    return psi @ psi.conj().T


def von_neumann_entropy(rho) -> float:
    """Spectral entropy in nats; zero eigenvalues contribute nothing."""
    mat = rho.mat if isinstance(rho, DensityOperator) else np.asarray(rho)
    evals = np.clip(np.linalg.eigvalsh(mat).real, 0.0, None)
    nz = evals[evals > 1e-15]
    return float(-(nz * np.log(nz)).sum())


def mutual_information(state: StateVector, split: tuple[str, str]) -> float:
    """S(A) + S(B) - S(AB) in nats for a bipartition of ``state``.

    For a two-segment pure state the joint entropy term vanishes.
    """
    a, b = split
    if a == b:
        raise ValueError(f"split names must differ, got {split}")
    sa = von_neumann_entropy(reduced_density(state, (a,)))
    sb = von_neumann_entropy(reduced_density(state, (b,)))
    if len(state.layout.segments) == 2:
        # the joint state is pure, so S(AB) = 0
        return sa + sb
    sab = von_neumann_entropy(reduced_density(state, (a, b)))
    return sa + sb - sab


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Clamped into [0, 1]: square roots of the clipped zero eigenvalues can
    overshoot 1 by a few 1e-8, which is pure floating-point noise.
    """
    if rho.dim != sigma.dim:
        raise ValueError("dimension mismatch")
    evals, evecs = np.linalg.eigh(rho.mat)
    evals = np.clip(evals, 0.0, None)
    sqrt_rho = (evecs * np.sqrt(evals)) @ evecs.conj().T
    inner = sqrt_rho @ sigma.mat @ sqrt_rho
    sing = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(1.0, np.sqrt(sing).sum() ** 2))


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-10) -> PhaseMatch:
    """True iff |<a|b>| >= 1 - tol; the reported phase is arg <a|b>."""
    ov = a.overlap(b)
    return PhaseMatch(bool(abs(ov) >= 1.0 - tol), float(np.angle(ov)))


def apply_on_segment(state: StateVector, segment: str, op: np.ndarray) -> StateVector:
    """Apply a unitary matrix to one segment, identity elsewhere."""
    d = state.layout.dim(segment)
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (d, d):
        raise ValueError(
            f"operator shape {op.shape} does not match segment {segment!r} of size {d}"
        )
    err = np.max(np.abs(op.conj().T @ op - np.eye(d)))
    if not err <= UNITARY_ATOL:
        raise ValueError(f"operator on {segment!r} is not unitary (deviation {err!r})")
    stride = state.layout.stride(segment)
    psi = state.amps.reshape(-1, d, stride)
    out = np.einsum("ij,ajb->aib", op, psi)
    return StateVector._wrap(state.layout, np.ascontiguousarray(out.reshape(-1)))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; the left operand supplies the leading segments."""
    clash = set(a.layout.names) & set(b.layout.names)
    if clash:
        raise ValueError(f"segment names collide: {sorted(clash)}")
    layout = RegisterLayout(a.layout.segments + b.layout.segments)
    return StateVector._wrap(layout, np.kron(a.amps, b.amps))


def relabel(state: StateVector, mapping: dict[str, str]) -> StateVector:
    """Rename segments without touching amplitudes."""
    segs = tuple((mapping.get(name, name), dim) for name, dim in state.layout.segments)
    return StateVector._wrap(RegisterLayout(segs), np.array(state.amps, copy=True))
