"""Randomized property suite behind ``concmon selftest``.

Each property returns its worst observed deviation and the limit it is held
to. Limits are the per-property defaults multiplied by ``tol / 1e-9``, so
``--tol`` tightens or loosens the whole suite at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import monotones as mono
from .red import check_bound, chain_compose, random_kraus, supplier_measure
from .roof import RoofProblem, roof_minimize
from .rpbes import (
    canonical_phases,
    design_phases,
    final_state,
    g_product,
    outcome_agreement,
    run_protocol,
    zero_phases,
)
from .sampling import random_density, random_pure_state, random_spectrum, rng_for, state_with_spectrum
from .states import Ensemble, tensor_product
from .symmetric import schmidt_from_monotones

DEFAULT_TOL = 1e-9


@dataclass
class PropertyResult:
    name: str
    trials: int
    worst: float
    limit: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst) and self.worst <= self.limit)


def _path_agreement(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 1, t)
        d = 2 + t % 5
        s = random_pure_state(d, d, rng)
        for k in range(1, d + 1):
            vals = [mono.concurrence_k(s, k, p) for p in mono.PATHS]
            worst = max(worst, (max(vals) - min(vals)) / max(vals[0], 1e-300))
    return worst, 1e-9


def _inequality_chain(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 2, t)
        d = 2 + t % 5
        c = mono.monotone_vector(random_pure_state(d, d, rng)).values
        powers = c ** np.arange(1, d + 1)
        worst = max(worst, float(np.max(np.diff(powers[1:]), initial=0.0)))
        worst = max(worst, float(np.max(c[-1] - c)))
    return worst, 1e-12


def _multiplicativity(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 3, t)
        d1, d2 = 2 + t % 2, 2 + (t // 2) % 2
        s1, s2 = random_pure_state(d1, d1, rng), random_pure_state(d2, d2, rng)
        lhs = mono.g_concurrence(tensor_product(s1, s2))
        worst = max(worst, abs(lhs - mono.g_concurrence(s1) * mono.g_concurrence(s2)))
    return worst, 1e-10


def _entropy_forms(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 4, t)
        for d in (2, 3):
            s = state_with_spectrum(random_spectrum(d, rng), rng)
            c = mono.monotone_vector(s).values
            e = mono.entropy_entanglement(s)
            f = mono.entropy_from_c2_d2(min(c[1], 1.0)) if d == 2 else mono.entropy_from_c23_d3(c[1], c[2])
            worst = max(worst, abs(e - f))
    return worst, 1e-9


def _completeness(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 5, t)
        d = 2 + t % 4
        lam = random_spectrum(d, rng)
        back = schmidt_from_monotones(mono.monotones_of_spectrum(lam), d)
        worst = max(worst, float(np.max(np.abs(back - lam))))
    return worst, 1e-8


def _product_bound(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 6, t)
        d = 2 + t % 2
        a = Ensemble.pure(random_pure_state(d, d, rng))
        b = Ensemble.pure(random_pure_state(d, d, rng))
        kraus = random_kraus(d, 1 + t % (d * d), None, int(rng.integers(2**31)))
        rep = check_bound(a, b, supplier_measure(a, b, kraus))
        worst = max(worst, -rep.slack)
    return worst, 1e-9


def _rpbes(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 7, t)
        d = 2 + t % 4
        lam, eta = random_spectrum(d, rng), random_spectrum(d, rng)
        th = canonical_phases(d)
        run = run_protocol(lam, eta, th)
        target = final_state(lam, eta, th)
        worst = max(
            worst,
            abs(mono.g_concurrence(target) - g_product(lam, eta)),
            float(np.max(np.abs(run.probabilities - 1.0 / d**2))),
            1.0 - outcome_agreement(run, target),
            mono.g_concurrence(final_state(lam, eta, zero_phases(d))),
        )
    return worst, 1e-10


def _chain(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 8, t)
        d = 2 + t % 2
        links = [Ensemble.pure(random_pure_state(d, d, rng)) for _ in range(3)]
        rep = chain_compose(links, ["rpbes-canonical"] * 2)
        worst = max(worst, abs(rep.slack))
    return worst, 1e-9


def _design(n, seed):
    worst = 0.0
    for t in range(n):
        rng = rng_for(seed, 9, t)
        d = 2 + t % 3
        lam, eta = random_spectrum(d, rng), random_spectrum(d, rng)
        top = g_product(lam, eta)
        frac = 0.1 * (1 + t % 9)
        th, _ = design_phases(lam, eta, frac * top)
        worst = max(worst, abs(mono.g_concurrence(final_state(lam, eta, th)) - frac * top) / top)
    return worst, 1e-6


def _roof(n, seed):
    worst = 0.0
    for t in range(min(n, 3)):
        rho = random_density(4, rng_for(seed, 10, t), dims=(2, 2))
        est = roof_minimize(RoofProblem(rho, 2, restarts=8, seed=seed + t)).value
        exact = mono.wootters_concurrence(rho)
        if est < exact - 1e-9:
            return float("inf"), 5e-3  # below the exact roof: the estimator is broken
        worst = max(worst, est - exact)
    return worst, 5e-3


PROPERTIES: list[tuple[str, Callable]] = [
    ("path_agreement", _path_agreement),
    ("inequality_chain", _inequality_chain),
    ("g_multiplicativity", _multiplicativity),
    ("entropy_closed_forms", _entropy_forms),
    ("completeness_roundtrip", _completeness),
    ("product_bound_random_kraus", _product_bound),
    ("rpbes_saturation", _rpbes),
    ("chain_corollary", _chain),
    ("target_g_design", _design),
    ("roof_vs_wootters", _roof),
]


def run_selftest(trials: int = 20, seed: int = 0, tol: float = DEFAULT_TOL) -> list[PropertyResult]:
    if trials <= 0:
        return []
    scale = tol / DEFAULT_TOL
    results = []
    for name, fn in PROPERTIES:
        worst, limit = fn(trials, seed)
        results.append(PropertyResult(name, trials, float(worst), limit * scale))
    return results


def format_table(results: list[PropertyResult]) -> str:
    if not results:
        return "no properties run\n"
    lines = [f"{'property':<24} {'trials':>6} {'worst':>12} {'limit':>12}  status"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<24} {r.trials:>6} {r.worst:>12.3e} {r.limit:>12.3e}  {status}")
    return "\n".join(lines) + "\n"
