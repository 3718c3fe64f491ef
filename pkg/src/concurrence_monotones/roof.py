"""Convex-roof estimates of concurrence monotones for mixed states.

Every size-n decomposition of ``rho = sum_i mu_i |e_i><e_i|`` (rank r) has
the form ``|psi_j> = sum_i conj(U_ji) sqrt(mu_i) |e_i>`` for an ``n x r``
isometry ``U``. Because ``p * C_k(psi)`` is homogeneous, the ensemble
average is a sum of ``(c_k S_k(eig(A_j A_j^dag)))**(1/k)`` over the
unnormalized members ``A_j``, which is minimized over the complex Stiefel
manifold by gradient descent with a polar retraction and Armijo
backtracking, from several seeded starts.

The returned value is an upper bound on the true roof; global optimality
is not certified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .monotones import concurrence_k, g_concurrence, normalizer
from .sampling import haar_isometry, rng_for
from .states import DensityMatrix, Ensemble, PureState

log = logging.getLogger(__name__)

RANK_CUTOFF = 1e-12
PRUNE_WEIGHT = 1e-12
DEFAULT_RESTARTS = 32


def resolve_k(monotone, d: int) -> int:
    """Map a selector (an integer k, ``"2"``, ``"G"`` or ``"C3"``) to k."""
    if isinstance(monotone, str):
        m = monotone.strip().upper()
        if m == "G":
            return d
        if m.isdigit():
            monotone = int(m)
        elif m.startswith("C") and m[1:].isdigit():
            monotone = int(m[1:])
        else:
            raise ValueError(f"unknown monotone selector {monotone!r}")
    k = int(monotone)
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    return k


def pure_value(state: PureState, monotone) -> float:
    d = state.dim_a
    k = resolve_k(monotone, d)
    if k == d:
        return g_concurrence(state)
    return concurrence_k(state, k)


def ensemble_average(ens: Ensemble, monotone) -> float:
    return float(sum(p * pure_value(s, monotone) for p, s in ens.members))


@dataclass
class RoofProblem:
    target: DensityMatrix
    monotone: object = 2
    ensemble_size: int | None = None
    restarts: int = DEFAULT_RESTARTS
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 400

    def __post_init__(self):
        dims = self.target.dims
        if dims is None:
            d = int(round(np.sqrt(self.target.dim)))
            if d * d != self.target.dim:
                raise ValueError("target needs bipartite dims")
            dims = (d, d)
        if len(dims) != 2 or dims[0] != dims[1]:
            raise ValueError(f"convex roof needs a square bipartite target, got dims {dims}")
        self.dims = tuple(dims)
        self.k = resolve_k(self.monotone, dims[0])
        w, v = self.target.eigh()
        keep = w > RANK_CUTOFF
        self.rank = int(np.count_nonzero(keep))
        self.sqrt_eig = v[:, keep] * np.sqrt(w[keep])
        big = self.target.dim
        if self.ensemble_size is None:
            self.ensemble_size = min(big, 2 * self.rank)
        if self.ensemble_size < self.rank:
            raise ValueError(
                f"ensemble_size {self.ensemble_size} is below the target rank {self.rank}"
            )
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class RoofResult:
    value: float
    ensemble: Ensemble
    iterations: int
    converged: bool
    restart_values: list[float] = field(default_factory=list)


class _Objective:
    """Ensemble average and its Euclidean gradient as functions of the isometry."""

    def __init__(self, problem: RoofProblem):
        self.w = problem.sqrt_eig
        self.d = problem.dims[0]
        self.k = problem.k
        self.c = normalizer(self.d, self.k)

    def members(self, u: np.ndarray) -> np.ndarray:
        psi = u.conj() @ self.w.T
        return psi.reshape(-1, self.d, self.d)

    def _spectra(self, a: np.ndarray):
        m = a @ np.swapaxes(a.conj(), 1, 2)
        lam, vec = np.linalg.eigh(m)
        return np.clip(lam, 0.0, None), vec

    def _esf(self, lam: np.ndarray, k: int) -> np.ndarray:
        """``S_k`` along the last axis (batched coefficient recurrence)."""
        e = np.zeros(lam.shape[:-1] + (k + 1,))
        e[..., 0] = 1.0
        for i in range(lam.shape[-1]):
            x = lam[..., i : i + 1]
            e[..., 1:] = e[..., 1:] + x * e[..., :-1]
        return e[..., k]

    def value_terms(self, u: np.ndarray) -> np.ndarray:
        lam, _ = self._spectra(self.members(u))
        return (self.c * self._esf(lam, self.k)) ** (1.0 / self.k)

    def value(self, u: np.ndarray) -> float:
        return float(np.sum(self.value_terms(u)))

    def value_and_grad(self, u: np.ndarray):
        a = self.members(u)
        lam, vec = self._spectra(a)
        k, d = self.k, self.d
        h = (self.c * self._esf(lam, k)) ** (1.0 / k)
        # dS_k/dlambda_i = S_{k-1}(lambda with entry i removed)
        drop = np.repeat(lam[:, None, :], d, axis=1)
        drop[:, np.arange(d), np.arange(d)] = 0.0
        de = self._esf(drop, k - 1)
        safe = h > 1e-150
        scale = np.zeros_like(h)
        scale[safe] = self.c / (k * h[safe] ** (k - 1))
        dh = de * scale[:, None]
        dmat = (vec * dh[:, None, :]) @ np.swapaxes(vec.conj(), 1, 2)
        g_psi = (dmat @ a).reshape(a.shape[0], -1)
        egrad = 2.0 * (g_psi @ self.w.conj()).conj()
        return float(np.sum(h)), egrad


def _project(u: np.ndarray, z: np.ndarray) -> np.ndarray:
    uz = u.conj().T @ z
    return z - u @ ((uz + uz.conj().T) / 2)


def _retract(x: np.ndarray) -> np.ndarray:
    q, _, vh = np.linalg.svd(x, full_matrices=False)
    return q @ vh


def _descend(obj: _Objective, u: np.ndarray, tol: float, max_iter: int):
    f, eg = obj.value_and_grad(u)
    g = _project(u, eg)
    step = 1.0
    prev_u = prev_g = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        gnorm2 = float(np.vdot(g, g).real)
        if not np.isfinite(f) or not np.isfinite(gnorm2):
            raise NumericalError("roof objective became non-finite")
        if gnorm2 < tol**2:
            converged = True
            break
        if prev_u is not None:
            s = u - prev_u
            y = g - _project(u, prev_g)
            sy = abs(float(np.vdot(s, y).real))
            if sy > 1e-300:
                step = float(np.vdot(s, s).real) / sy
        step = min(max(step, 1e-12), 1e3)
        while True:
            cand = _retract(u - step * g)
            fc = obj.value(cand)
            if fc <= f - 1e-4 * step * gnorm2 or step < 1e-14:
                break
            step *= 0.5
        if step < 1e-14:
            converged = True
            break
        prev_u, prev_g = u, g
        df = f - fc
        u = cand
        f, eg = obj.value_and_grad(u)
        g = _project(u, eg)
        if df <= tol * max(1.0, abs(f)):
            converged = True
            break
    return u, f, it, converged


def _to_ensemble(obj: _Objective, u: np.ndarray, dims) -> Ensemble:
    a = obj.members(u)
    weights = np.einsum("jab,jab->j", a.conj(), a).real
    keep = weights >= PRUNE_WEIGHT
    total = weights[keep].sum()
    members = []
    for wj, aj in zip(weights[keep], a[keep]):
        members.append((wj / total, PureState(aj / np.sqrt(wj))))
    return Ensemble(tuple(members))


def roof_minimize(problem: RoofProblem) -> RoofResult:
    """Multi-start minimization of the decomposition average.

    Restart 0 starts from the eigendecomposition of the target; restart
    ``i > 0`` from a Haar isometry drawn from ``rng_for(seed, i)``.
    """
    obj = _Objective(problem)
    n, r = problem.ensemble_size, problem.rank
    best = None
    values = []
    total_iter = 0
    for i in range(problem.restarts):
        if i == 0:
            u0 = np.eye(n, r, dtype=complex)
        else:
            u0 = haar_isometry(n, r, rng_for(problem.seed, i))
        u, f, it, conv = _descend(obj, u0, problem.tol, problem.max_iter)
        total_iter += it
        values.append(f)
        if best is None or f < best[1]:
            best = (u, f, conv)
    u, f, conv = best
    ens = _to_ensemble(obj, u, problem.dims)
    value = ensemble_average(ens, problem.k)
    log.debug("roof k=%d best=%.12g over %d restarts", problem.k, value, problem.restarts)
    return RoofResult(value, ens, total_iter, conv, values)
