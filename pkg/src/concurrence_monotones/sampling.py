"""Seeded random generators for states, spectra and isometries.

All randomness derives from one integer seed. A stream for a particular
consumer is obtained with :func:`rng_for`, which feeds ``(seed, *counters)``
into :class:`numpy.random.SeedSequence`. Restart ``i`` of a roof search uses
``rng_for(seed, i)``, trial ``t`` of a randomized suite uses
``rng_for(seed, t)`` and so on, so results never depend on evaluation order.
"""

from __future__ import annotations

import numpy as np

from .states import DensityMatrix, PureState


def rng_for(seed: int, *counters: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, counters)]))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry of shape (rows, cols), rows >= cols."""
    if cols > rows:
        raise ValueError(f"isometry needs rows >= cols, got {rows}x{cols}")
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return haar_isometry(dim, dim, rng)


def random_pure_state(dim_a: int, dim_b: int, rng: np.random.Generator) -> PureState:
    z = rng.standard_normal((dim_a, dim_b)) + 1j * rng.standard_normal((dim_a, dim_b))
    return PureState(z / np.linalg.norm(z))


def random_spectrum(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the probability simplex, sorted descending."""
    return np.sort(rng.dirichlet(np.ones(d)))[::-1]


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None,
                   dims: tuple[int, int] | None = None) -> DensityMatrix:
    """Ginibre-induced random density matrix (Hilbert-Schmidt measure at full rank)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, dims=dims)


def state_with_spectrum(spectrum, rng: np.random.Generator | None = None) -> PureState:
    """Square pure state with the given Schmidt numbers, in random local bases if ``rng`` given."""
    lam = np.asarray(spectrum, dtype=float)
    d = lam.size
    amps = np.diag(np.sqrt(np.clip(lam, 0.0, None))).astype(complex)
    if rng is not None:
        amps = haar_unitary(d, rng) @ amps @ haar_unitary(d, rng).T
    return PureState(amps / np.linalg.norm(amps))
