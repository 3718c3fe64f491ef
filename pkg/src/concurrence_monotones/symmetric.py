"""Elementary symmetric functions of spectra and the ways to reach them.

Three independent routes to ``S_k`` are provided: the coefficient recurrence
on the entries themselves, the power-sum (Newton/multinomial) expansion over
integer partitions, and the trace of the k-th compound matrix (sum of the
k x k principal minors).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InconsistentMonotonesError

NEG_CLAMP = 1e-10
PARTITION_CAP = 12
MINOR_ENUM_MAX_DIM = 12
ROOT_IMAG_TOL = 1e-8


def _clamped(values) -> np.ndarray:
    v = np.asarray(values, dtype=float).reshape(-1)
    if np.any(v < -NEG_CLAMP):
        raise ValueError(f"spectrum entries must be >= {-NEG_CLAMP}, got min {v.min()!r}")
    return np.clip(v, 0.0, None)


def esf_all(values) -> np.ndarray:
    """All of ``S_0 .. S_d`` as the coefficients of ``prod_i (x + v_i)``."""
    v = _clamped(values)
    e = np.zeros(v.size + 1)
    e[0] = 1.0
    for n, x in enumerate(v, start=1):
        e[1 : n + 1] = e[1 : n + 1] + x * e[0:n]
    return e


def elementary_symmetric(values, k: int) -> float:
    v = _clamped(values)
    if not 0 <= k <= v.size:
        raise ValueError(f"k must lie in [0, {v.size}], got {k}")
    return float(esf_all(v)[k])


@dataclass(frozen=True)
class PartitionTerm:
    """One term of the power-sum expansion of ``S_k``.

    ``counts[m-1]`` is ``N_m``, the multiplicity of part ``m``.
    """

    counts: tuple[int, ...]
    sign: int
    weight: float

    @property
    def k(self) -> int:
        return sum(m * n for m, n in enumerate(self.counts, start=1))


def _partitions(k: int, largest: int):
    if k == 0:
        yield ()
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _enumerate_partitions(k: int) -> tuple[PartitionTerm, ...]:
    terms = []
    for parts in _partitions(k, k):
        counts = tuple(parts.count(m) for m in range(1, k + 1))
        sign = (-1) ** (k - sum(counts))
        weight = 1.0
        for m, n in enumerate(counts, start=1):
            weight /= math.factorial(n) * m**n
        terms.append(PartitionTerm(counts, sign, weight))
    return tuple(terms)


def enumerate_partitions(k: int) -> list[PartitionTerm]:
    """Solutions of ``N_1 + 2 N_2 + ... + k N_k = k`` with their sign and weight."""
    if not 1 <= k <= PARTITION_CAP:
        raise ValueError(f"k must lie in [1, {PARTITION_CAP}], got {k}")
    return list(_enumerate_partitions(k))


def esf_from_power_sums(power_sums, k: int) -> float:
    """``S_k`` from ``p_m = Tr rho^m`` (``power_sums[m-1]``), m = 1..k.

    The alternating sum cancels heavily for nearly rank-deficient spectra,
    so it is accumulated in extended precision.
    """
    p = np.asarray(power_sums, dtype=np.longdouble).reshape(-1)
    if k == 0:
        return 1.0
    if p.size < k:
        raise ValueError(f"need {k} power sums, got {p.size}")
    total = np.longdouble(0)
    for term in enumerate_partitions(k):
        val = np.longdouble(term.sign) / _inverse_weight(term.counts)
        for m, n in enumerate(term.counts, start=1):
            if n:
                val *= p[m - 1] ** n
        total += val
    return float(total)


def _inverse_weight(counts) -> int:
    out = 1
    for m, n in enumerate(counts, start=1):
        out *= math.factorial(n) * m**n
    return out


def power_sums(mat, k: int) -> np.ndarray:
    """``[Tr M, Tr M^2, ..., Tr M^k]`` by repeated multiplication (extended precision)."""
    m = np.asarray(mat).astype(np.clongdouble)
    out = np.empty(k, dtype=np.longdouble)
    cur = np.eye(m.shape[0], dtype=np.clongdouble)
    for i in range(k):
        cur = cur @ m
        out[i] = np.trace(cur).real
    return out


def compound_trace(mat, k: int, method: str = "auto") -> float:
    """Trace of the k-th compound of a Hermitian PSD matrix.

    ``method="minors"`` sums the k x k principal minors, ``"eigen"`` applies
    :func:`elementary_symmetric` to the eigenvalues; ``"auto"`` uses minors
    up to dimension 12.
    """
    m = np.asarray(mat, dtype=complex)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError("compound_trace needs a square matrix")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    if k == 0:
        return 1.0
    if method == "auto":
        method = "minors" if n <= MINOR_ENUM_MAX_DIM else "eigen"
    if method == "eigen":
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return elementary_symmetric(np.clip(w, 0.0, None), k)
    if method != "minors":
        raise ValueError(f"unknown method {method!r}")
    idx = np.array(list(itertools.combinations(range(n), k)))
    minors = m[idx[:, :, None], idx[:, None, :]]
    return float(np.sum(np.linalg.det(minors)).real)


def char_poly_coefficients(c, d: int) -> np.ndarray:
    """Coefficients (highest degree first) of ``prod (x - lambda_i)`` from ``C_1..C_d``."""
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.size != d:
        raise ValueError(f"expected {d} monotones, got {c.size}")
    full = np.concatenate([[1.0], c])
    return np.array(
        [(-1) ** k * math.comb(d, k) / d**k * full[k] ** k for k in range(d + 1)]
    )


def schmidt_from_monotones(c, d: int) -> np.ndarray:
    """Recover the Schmidt numbers (descending) from ``[C_1, ..., C_d]``."""
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.size != d:
        raise ValueError(f"expected {d} monotones, got {c.size}")
    if abs(c[0] - 1.0) > 1e-12:
        raise InconsistentMonotonesError(f"C_1 must be 1, got {c[0]!r}")
    if np.any(c < -1e-12) or np.any(c > 1 + 1e-12):
        raise InconsistentMonotonesError("monotones must lie in [0, 1]")
    if d == 1:
        return np.array([1.0])
    if d == 2:
        disc = 1.0 - min(c[1], 1.0) ** 2
        r = np.sqrt(max(disc, 0.0))
        return np.array([(1 + r) / 2, (1 - r) / 2])

    coeffs = char_poly_coefficients(c, d)
    roots = np.roots(coeffs)
    roots = np.concatenate([roots, np.zeros(d - roots.size)])  # np.roots drops trailing zero roots
    if np.max(np.abs(roots.imag)) > ROOT_IMAG_TOL:
        # clustered roots split into complex pairs of size ~ eps**(1/multiplicity);
        # accept the real parts if they still satisfy the polynomial
        re = roots.real
        resid = np.max(np.abs(np.polyval(coeffs, re)))
        if resid > 1e-12:
            raise InconsistentMonotonesError(
                f"characteristic polynomial has complex roots (max imag "
                f"{np.max(np.abs(roots.imag)):.3g}, residual {resid:.3g})"
            )
    lam = np.sort(roots.real)[::-1]
    if lam[-1] < -1e-8:
        raise InconsistentMonotonesError(f"negative Schmidt number {lam[-1]!r}")
    return np.clip(lam, 0.0, None)
