"""Concurrence monotones of pure bipartite states.

For a ``d x d`` pure state with Schmidt numbers ``lambda``,

    C_k = (S_k(lambda) * d**k / binom(d, k)) ** (1/k),   k = 1..d,

and the G-concurrence is the last member, ``G = C_d = d * det(A^dag A)**(1/d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, PureState, SCHMIDT_CUTOFF
from .symmetric import (
    compound_trace,
    elementary_symmetric,
    esf_all,
    esf_from_power_sums,
    power_sums,
)
from .errors import NormalizationError

PATHS = ("schmidt", "compound", "powersum")
QUTRIT_SINGULAR_TOL = 1e-10
COS_TOL = 1e-9

_SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


@dataclass(frozen=True)
class MonotoneVector:
    d: int
    values: np.ndarray

    def __getitem__(self, k: int) -> float:
        """``C_k`` by its 1-based index."""
        return float(self.values[k - 1])

    @property
    def g(self) -> float:
        return float(self.values[-1])


def normalizer(d: int, k: int) -> float:
    """``1 / S_k(1/d, ..., 1/d) = d**k / binom(d, k)``."""
    return d**k / math.comb(d, k)


def from_esf(s_k: float, d: int, k: int) -> float:
    """Map an elementary symmetric value to ``C_k``; tiny negatives clamp to 0."""
    return (max(s_k, 0.0) * normalizer(d, k)) ** (1.0 / k)


def _check_square(state: PureState) -> int:
    if not state.is_square:
        raise ValueError(f"monotones need a square state, got {state.dims}; use states.embed")
    return state.dim_a


def _check_k(k: int, d: int) -> None:
    if not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")


def schmidt_spectrum(state: PureState, cutoff: float = SCHMIDT_CUTOFF) -> np.ndarray:
    """Eigenvalues of ``A^dag A`` (descending), entries at or below ``cutoff`` zeroed."""
    a = state.amps
    w = np.linalg.eigvalsh(a.conj().T @ a)[::-1]
    return np.where(w > cutoff, w, 0.0)


def concurrence_k(state: PureState, k: int, path: str = "schmidt") -> float:
    d = _check_square(state)
    _check_k(k, d)
    if not state.normalized:
        raise NormalizationError("concurrence_k requires a normalized state")
    a = state.amps
    if path == "schmidt":
        s_k = elementary_symmetric(schmidt_spectrum(state), k)
    elif path == "compound":
        s_k = compound_trace(a.conj().T @ a, k)
    elif path == "powersum":
        a_ext = a.astype(np.clongdouble)
        s_k = esf_from_power_sums(power_sums(a_ext @ a_ext.conj().T, k), k)
    else:
        raise ValueError(f"path must be one of {PATHS}, got {path!r}")
    return from_esf(s_k, d, k)


def monotone_vector(state: PureState) -> MonotoneVector:
    d = _check_square(state)
    if not state.normalized:
        raise NormalizationError("monotone_vector requires a normalized state")
    e = esf_all(schmidt_spectrum(state))
    vals = np.array([1.0] + [from_esf(e[k], d, k) for k in range(2, d + 1)])
    return MonotoneVector(d, vals)


def monotones_of_spectrum(lam) -> np.ndarray:
    """``[C_1, ..., C_d]`` straight from a spectrum of length d."""
    lam = np.asarray(lam, dtype=float)
    d = lam.size
    e = esf_all(lam)
    return np.array([1.0] + [from_esf(e[k], d, k) for k in range(2, d + 1)])


def g_concurrence(state: PureState, normalized: bool = True) -> float:
    """``d * |det(A^dag A)|**(1/d)``, homogeneous of degree 2 in the amplitudes.

    With ``normalized=False`` the state may carry any norm, which gives
    ``G(c psi) = |c|^2 G(psi)``.
    """
    d = _check_square(state)
    if normalized and not state.normalized:
        raise NormalizationError("g_concurrence(normalized=True) requires a normalized state")
    return g_of_matrix(state.amps)


def g_of_matrix(amps) -> float:
    """G-concurrence of a raw coefficient matrix of any norm.

    ``|det A|`` is taken as the product of singular values: an LU determinant
    of a rank-deficient matrix leaves roundoff of order ``eps`` in each
    vanishing pivot, which the ``2/d`` power would amplify to ``~1e-8``.
    """
    a = np.asarray(amps)
    d = a.shape[0]
    sv = np.linalg.svd(a, compute_uv=False)
    return float(d * np.prod(sv ** (2.0 / d)))


def _entropy(probs, base: float) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / np.log(base))


def entropy_entanglement(state: PureState, base: float = 2.0) -> float:
    if not state.normalized:
        raise NormalizationError("entropy requires a normalized state")
    u, s, vh = np.linalg.svd(state.amps)
    return _entropy(s**2, base)


def binary_entropy(x: float, base: float = 2.0) -> float:
    return _entropy([x, 1.0 - x], base)


def entropy_from_c2_d2(c2: float, base: float = 2.0) -> float:
    if not 0.0 <= c2 <= 1.0:
        raise ValueError(f"C_2 must lie in [0, 1], got {c2!r}")
    return binary_entropy((1.0 + math.sqrt(1.0 - c2 * c2)) / 2.0, base)


def qutrit_spectrum(c2: float, c3: float) -> np.ndarray:
    """Schmidt numbers of a 3x3 state from ``(C_2, C_3)`` via the trigonometric cubic solution."""
    if not (0.0 <= c2 <= 1.0 + 1e-12 and 0.0 <= c3 <= 1.0 + 1e-12):
        raise ValueError(f"monotones must lie in [0, 1], got ({c2!r}, {c3!r})")
    gap = 1.0 - c2 * c2
    if gap < QUTRIT_SINGULAR_TOL:
        return np.full(3, 1.0 / 3.0)
    cos_theta = (1.0 - 1.5 * c2 * c2 + 0.5 * c3**3) / gap**1.5
    if not -1.0 - COS_TOL <= cos_theta <= 1.0 + COS_TOL:
        raise ValueError(f"(C_2, C_3) = ({c2!r}, {c3!r}) is not achievable: cos(theta) = {cos_theta!r}")
    theta = math.acos(min(1.0, max(-1.0, cos_theta)))
    r = (2.0 / 3.0) * math.sqrt(gap)
    x = 1.0 / 3.0 + r * math.cos(theta / 3.0)
    y = 1.0 / 3.0 + r * math.cos((theta + 2.0 * math.pi) / 3.0)
    return np.clip(np.array([x, y, 1.0 - x - y]), 0.0, None)


def entropy_from_c23_d3(c2: float, c3: float, base: float = 2.0) -> float:
    return _entropy(qutrit_spectrum(c2, c3), base)


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    return _SIGMA_YY @ rho.mat.conj() @ _SIGMA_YY


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Exact two-qubit concurrence ``max(0, s1 - s2 - s3 - s4)``.

    ``s_i`` are the square roots of the eigenvalues of ``rho * flip(rho)``,
    obtained here from the Hermitian form ``sqrt(rho) flip(rho) sqrt(rho)``.
    """
    if rho.dim != 4:
        raise ValueError(f"wootters_concurrence needs a 4x4 density matrix, got {rho.dim}")
    w, v = np.linalg.eigh(rho.mat)
    sq = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    h = sq @ spin_flip(rho) @ sq
    ev = np.linalg.eigvalsh((h + h.conj().T) / 2)
    s = np.sort(np.sqrt(np.clip(ev, 0.0, None)))[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def f_k(sigma: DensityMatrix, k: int) -> float:
    """The concave spectral function behind ``C_k``: ``C_k`` evaluated on the spectrum of ``sigma``."""
    d = sigma.dim
    _check_k(k, d)
    return from_esf(elementary_symmetric(sigma.eigh()[0], k), d, k)
