"""Remote preparation of a bipartite entangled state through one supplier.

The supplier shares ``|psi>_12 = sum_k sqrt(lambda_k)|kk>`` with Alice and
``|chi>_34 = sum_k sqrt(eta_k)|kk>`` with Bob, measures shares 2, 3 in a
phase-dressed Fourier basis, and broadcasts the outcome ``(j, j')``.
Diagonal phase corrections by Alice and Bob then leave the same state

    |F>_14 = sum_{m m'} exp(-i theta_{m m'}) sqrt(lambda_m eta_m') |m m'>

for every outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .monotones import concurrence_k, g_concurrence
from .states import PureState, fidelity

SPECTRUM_TOL = 1e-10


@dataclass(frozen=True)
class PhaseMatrix:
    theta: np.ndarray

    def __post_init__(self):
        th = np.array(self.theta, dtype=float)
        if th.ndim != 2 or th.shape[0] != th.shape[1]:
            raise ValueError(f"phase matrix must be d x d, got shape {th.shape}")
        if not np.all(np.isfinite(th)):
            raise ValueError("phases must be finite")
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    @property
    def d(self) -> int:
        return self.theta.shape[0]


@dataclass
class Outcome:
    j: int
    jp: int
    prob: float
    final_state: PureState


@dataclass
class ProtocolRun:
    outcomes: list[Outcome]
    classical_bits: tuple[float, float]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([o.prob for o in self.outcomes])


def canonical_phases(d: int) -> PhaseMatrix:
    """``theta_mm' = 2 pi m m' / d``: makes the phase matrix ``V`` a DFT, hence unitary."""
    m = np.arange(d)
    return PhaseMatrix(2 * np.pi * np.outer(m, m) / d)


def zero_phases(d: int) -> PhaseMatrix:
    return PhaseMatrix(np.zeros((d, d)))


def scaled_phases(d: int, alpha: float) -> PhaseMatrix:
    return PhaseMatrix(alpha * canonical_phases(d).theta)


def _as_phases(theta, d: int) -> PhaseMatrix:
    th = theta if isinstance(theta, PhaseMatrix) else PhaseMatrix(theta)
    if th.d != d:
        raise ValueError(f"phase matrix is {th.d}x{th.d}, spectra have d={d}")
    return th


def _spectrum(values, name: str) -> np.ndarray:
    lam = np.asarray(values, dtype=float).reshape(-1)
    if lam.size < 1 or np.any(lam < -SPECTRUM_TOL) or abs(lam.sum() - 1.0) > SPECTRUM_TOL:
        raise ValueError(f"{name} must be a probability vector, got {lam.tolist()}")
    return np.clip(lam, 0.0, None)


def measurement_basis(d: int, theta) -> list[np.ndarray]:
    """The ``d^2`` measurement vectors on shares (2, 3), ordered by ``d j + j'``.

    Component ``d m + m'`` of vector ``d j + j'`` is
    ``exp(i [2 pi (d j + j')(d m + m') / d^2 + theta_mm']) / d``.
    """
    th = _as_phases(theta, d)
    idx = np.arange(d * d)
    phase = 2 * np.pi * np.outer(idx, idx) / d**2 + th.theta.reshape(-1)[None, :]
    return [row for row in np.exp(1j * phase) / d]


def phase_matrix_v(theta) -> np.ndarray:
    th = theta if isinstance(theta, PhaseMatrix) else PhaseMatrix(theta)
    return np.exp(-1j * th.theta) / np.sqrt(th.d)


def final_state(lam, eta, theta) -> PureState:
    lam = _spectrum(lam, "lambda")
    eta = _spectrum(eta, "eta")
    if lam.size != eta.size:
        raise ValueError("spectra must have equal length")
    th = _as_phases(theta, lam.size)
    amps = np.exp(-1j * th.theta) * np.sqrt(np.outer(lam, eta))
    return PureState(amps, normalized=False).normalize()


def _diag_state(spec: np.ndarray) -> np.ndarray:
    return np.diag(np.sqrt(spec)).astype(complex)


def run_protocol(lam, eta, theta) -> ProtocolRun:
    """Simulate the measurement and the two local corrections for every outcome."""
    lam = _spectrum(lam, "lambda")
    eta = _spectrum(eta, "eta")
    d = lam.size
    if eta.size != d:
        raise ValueError("spectra must have equal length")
    th = _as_phases(theta, d)
    a, b = _diag_state(lam), _diag_state(eta)
    # joint amplitude [i1, i2, i3, i4]
    joint = np.einsum("ax,yb->axyb", a, b)
    m = np.arange(d)
    outcomes = []
    for idx, vec in enumerate(measurement_basis(d, th)):
        j, jp = divmod(idx, d)
        p23 = vec.reshape(d, d)
        phi = np.einsum("xy,axyb->ab", p23.conj(), joint)
        prob = float(np.vdot(phi, phi).real)
        u_alice = np.exp(1j * 2 * np.pi * jp * m / d)
        u_bob = np.exp(1j * 2 * np.pi * (d * j + jp) * m / d**2)
        corrected = u_alice[:, None] * phi * u_bob[None, :]
        outcomes.append(Outcome(j, jp, prob, PureState(corrected / np.sqrt(prob))))
    bits = (2 * math.log2(d), math.log2(d))
    return ProtocolRun(outcomes, bits)


def outcome_agreement(run: ProtocolRun, target: PureState) -> float:
    """Smallest fidelity between any corrected outcome state and ``target``."""
    return min(fidelity(o.final_state, target) for o in run.outcomes)


def g_product(lam, eta) -> float:
    lam = _spectrum(lam, "lambda")
    eta = _spectrum(eta, "eta")
    d = lam.size
    return float(d * np.prod(lam) ** (1 / d) * d * np.prod(eta) ** (1 / d))


def c2_final(lam, eta, theta) -> float:
    """Pairwise phase-interference formula for the concurrence of ``|F>``.

    The normalization is that of the two-qubit concurrence,
    ``2 sqrt(S_2)``; the ``d x d`` monotone ``C_2(F)`` equals this value
    times :func:`c2_normalization_factor`.
    """
    lam = _spectrum(lam, "lambda")
    eta = _spectrum(eta, "eta")
    d = lam.size
    th = _as_phases(theta, d).theta
    total = 0.0
    for k in range(d):
        for kp in range(k):
            for m in range(d):
                for mp in range(m):
                    diff = np.exp(1j * (th[k, m] + th[kp, mp])) - np.exp(1j * (th[k, mp] + th[kp, m]))
                    total += lam[k] * lam[kp] * eta[m] * eta[mp] * abs(diff) ** 2
    return 2.0 * math.sqrt(total)


def c2_normalization_factor(d: int) -> float:
    """``C_2(F) / c2_final = sqrt(d / (2 (d - 1)))``; equal to 1 for qubits."""
    return math.sqrt(d / (2.0 * (d - 1)))


def c2_general(lam, eta, theta) -> float:
    return concurrence_k(final_state(lam, eta, theta), 2)


def design_phases(lam, eta, target_g: float, xtol: float = 1e-14) -> tuple[PhaseMatrix, float]:
    """Phases ``alpha * canonical`` giving ``G(F) = target_g``; returns ``(theta, alpha)``.

    ``g(alpha) = G(F(alpha))`` is continuous with ``g(0) = 0`` and
    ``g(1) = G_12 G_34``, so a bracketing root finder reaches any target in
    between.
    """
    lam = _spectrum(lam, "lambda")
    eta = _spectrum(eta, "eta")
    d = lam.size
    top = float(g_product(lam, eta))
    if not 0.0 <= target_g <= top * (1 + 1e-12):
        raise ValueError(f"target G {target_g!r} outside [0, {top!r}]")
    if target_g == 0.0:
        return scaled_phases(d, 0.0), 0.0
    if target_g >= top:
        return canonical_phases(d), 1.0

    def gap(alpha: float) -> float:
        return g_concurrence(final_state(lam, eta, scaled_phases(d, alpha))) - target_g

    alpha = brentq(gap, 0.0, 1.0, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return scaled_phases(d, alpha), float(alpha)
