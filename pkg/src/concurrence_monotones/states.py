"""Bipartite state containers and the linear algebra around them.

A pure state of a ``dA x dB`` system is stored through its coefficient
matrix ``amps[i, j]`` (the amplitude of ``|i>_A |j>_B``). The row-major
flattening of that matrix is the usual state vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NormalizationError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-12


@dataclass(frozen=True)
class PureState:
    """Pure bipartite state given by its coefficient matrix.

    ``normalized=False`` marks results of operations (such as
    :func:`apply_local`) that deliberately skip renormalization.
    """

    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 2 or min(amps.shape) < 1:
            raise ValueError(f"amplitudes must be a non-empty matrix, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.normalized:
            norm2 = float(np.vdot(amps, amps).real)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise NormalizationError(f"state norm^2 is {norm2!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_vector(cls, vec, dims: Sequence[int], normalized: bool = True) -> "PureState":
        dim_a, dim_b = dims
        return cls(np.asarray(vec, dtype=complex).reshape(dim_a, dim_b), normalized=normalized)

    @property
    def dim_a(self) -> int:
        return self.amps.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amps.shape[1]

    @property
    def dims(self) -> tuple[int, int]:
        return self.amps.shape

    @property
    def is_square(self) -> bool:
        return self.dim_a == self.dim_b

    def vector(self) -> np.ndarray:
        return self.amps.reshape(-1)

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalize(self) -> "PureState":
        n2 = self.norm2()
        if n2 == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return PureState(self.amps / np.sqrt(n2))

    def projector(self) -> "DensityMatrix":
        v = self.vector()
        return DensityMatrix(np.outer(v, v.conj()), dims=self.dims)


@dataclass(frozen=True)
class SchmidtData:
    lambdas: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    padded_dim: int

    @property
    def rank(self) -> int:
        return self.lambdas.size


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator; ``dims`` records the bipartite split when known."""

    mat: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("density matrix must be finite")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_TOL:
            raise NormalizationError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < -PSD_TOL:
            raise ValueError("density matrix has negative eigenvalues")
        if self.dims is not None:
            dims = tuple(int(x) for x in self.dims)
            if int(np.prod(dims)) != mat.shape[0]:
                raise ValueError(f"dims {dims} do not match matrix size {mat.shape[0]}")
            object.__setattr__(self, "dims", dims)
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (descending, clipped at 0) and matching eigenvectors."""
        w, v = np.linalg.eigh(self.mat)
        return np.clip(w[::-1], 0.0, None), v[:, ::-1]

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of pure states ``{(p_i, psi_i)}``."""

    members: tuple[tuple[float, PureState], ...] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple((float(p), s) for p, s in self.members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        dims = members[0][1].dims
        for p, s in members:
            if not p > 0:
                raise ValueError(f"ensemble weights must be positive, got {p}")
            if s.dims != dims:
                raise ValueError("ensemble members must share dimensions")
            if not s.normalized:
                raise NormalizationError("ensemble members must be normalized")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > NORM_TOL:
            raise NormalizationError(f"ensemble weights sum to {total!r}, expected 1")
        object.__setattr__(self, "members", members)

    @classmethod
    def pure(cls, state: PureState) -> "Ensemble":
        return cls(((1.0, state),))

    @property
    def dims(self) -> tuple[int, int]:
        return self.members[0][1].dims

    @property
    def weights(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    @property
    def states(self) -> list[PureState]:
        return [s for _, s in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def density(self) -> DensityMatrix:
        mat = sum(p * np.outer(s.vector(), s.vector().conj()) for p, s in self.members)
        return DensityMatrix(_hermitize(mat), dims=self.dims)


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2


def schmidt(state: PureState, cutoff: float = SCHMIDT_CUTOFF) -> SchmidtData:
    """Schmidt decomposition ``psi = sum_i sqrt(l_i) |u_i>|v_i>``.

    The Schmidt numbers are the squared singular values of the coefficient
    matrix (equivalently the eigenvalues of ``A^dagger A``); values at or
    below ``cutoff`` are treated as rank deficiency and dropped.
    """
    if not state.normalized:
        raise NormalizationError("schmidt requires a normalized state")
    u, s, vh = np.linalg.svd(state.amps, full_matrices=False)
    lam = s**2
    keep = lam > cutoff
    return SchmidtData(
        lambdas=lam[keep],
        basis_a=u[:, keep],
        basis_b=vh[keep, :].T,
        padded_dim=min(state.dims),
    )


def reconstruct(data: SchmidtData) -> PureState:
    amps = (data.basis_a * np.sqrt(data.lambdas)) @ data.basis_b.T
    return PureState(amps / np.linalg.norm(amps))


def reduced_density(state: PureState, keep: str = "A") -> DensityMatrix:
    if not state.normalized:
        raise NormalizationError("reduced_density requires a normalized state")
    a = state.amps
    if keep == "A":
        mat = a @ a.conj().T
    elif keep == "B":
        mat = a.T @ a.conj()
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(_hermitize(mat))


def tensor_product(s1: PureState, s2: PureState) -> PureState:
    """Product state with party A holding both A shares (A1A2 | B1B2)."""
    if not (s1.normalized and s2.normalized):
        raise NormalizationError("tensor_product requires normalized states")
    return PureState(np.kron(s1.amps, s2.amps), normalized=False).normalize()


def apply_local(op_a, op_b, state: PureState) -> PureState:
    """``(opA (x) opB)|psi>`` without renormalization."""
    op_a = np.asarray(op_a, dtype=complex)
    op_b = np.asarray(op_b, dtype=complex)
    if op_a.shape != (state.dim_a, state.dim_a) or op_b.shape != (state.dim_b, state.dim_b):
        raise ValueError(
            f"operator shapes {op_a.shape}, {op_b.shape} do not match state dims {state.dims}"
        )
    return PureState(op_a @ state.amps @ op_b.T, normalized=False)


def embed(state: PureState, d: int | None = None) -> PureState:
    """Zero-pad the coefficient matrix to ``d x d`` (default: the larger side)."""
    d = max(state.dims) if d is None else d
    if d < max(state.dims):
        raise ValueError(f"cannot embed {state.dims} state into {d}x{d}")
    amps = np.zeros((d, d), dtype=complex)
    amps[: state.dim_a, : state.dim_b] = state.amps
    return PureState(amps, normalized=state.normalized)


def partial_trace_array(mat: np.ndarray, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Partial trace of a raw (possibly unnormalized) operator."""
    dims = [int(x) for x in dims]
    traced = sorted(set(int(t) for t in traced))
    n = len(dims)
    if int(np.prod(dims)) != mat.shape[0] or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"dims {dims} do not match operator shape {mat.shape}")
    if any(t < 0 or t >= n for t in traced):
        raise ValueError(f"traced factors {traced} out of range for {n} factors")
    t = np.asarray(mat).reshape(dims + dims)
    # trace highest index first so earlier axis numbers stay valid
    cur = n
    for idx in reversed(traced):
        t = np.trace(t, axis1=idx, axis2=idx + cur)
        cur -= 1
    kept = [dims[i] for i in range(n) if i not in traced]
    size = int(np.prod(kept)) if kept else 1
    return t.reshape(size, size)


def partial_trace(rho: DensityMatrix, dims: Sequence[int], traced: Iterable[int]) -> DensityMatrix:
    traced = sorted(set(int(t) for t in traced))
    out = partial_trace_array(rho.mat, dims, traced)
    kept = tuple(int(dims[i]) for i in range(len(dims)) if i not in traced)
    return DensityMatrix(_hermitize(out), dims=kept if kept else None)


def fidelity(s1: PureState, s2: PureState) -> float:
    """``|<s1|s2>|^2``, insensitive to global phase."""
    return float(abs(np.vdot(s1.vector(), s2.vector())) ** 2)
