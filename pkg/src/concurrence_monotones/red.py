"""Remote entanglement distribution: a supplier measures shares 2 and 3.

Shares are ordered 1, 2, 3, 4 with ``rho_12 (x) rho_34`` as the initial
state. The supplier holds shares 2 and 3 and applies a Kraus set on their
joint ``d^2``-dimensional space (basis ``|m2 m3>``, row-major). For every
outcome the conditional state on shares 1 and 4 is kept as an explicit
decomposition: each pair of input members ``(l, l')`` and each basis vector
``|m m'>`` of shares 2, 3 (taken in the members' Schmidt bases) contributes
one pure state. Its G-average upper-bounds the G-concurrence of the
conditional state, so the reported bound check is exact, not heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .monotones import g_of_matrix
from .roof import ensemble_average
from .sampling import haar_isometry, rng_for
from .states import Ensemble, PureState, partial_trace_array

COMPLETENESS_TOL = 1e-10
OUTCOME_PRUNE = 1e-14
MEMBER_PRUNE = 1e-300
BOUND_TOL = 1e-9
PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class KrausSet:
    ops: tuple[np.ndarray, ...]
    labels: tuple = ()

    def __post_init__(self):
        ops = tuple(np.array(m, dtype=complex) for m in self.ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        dim = ops[0].shape[0]
        for m in ops:
            if m.shape != (dim, dim):
                raise ValueError("Kraus operators must be square and share a size")
        total = sum(m.conj().T @ m for m in ops)
        err = np.max(np.abs(total - np.eye(dim)))
        if err > COMPLETENESS_TOL:
            raise ValueError(f"Kraus set is not complete (max deviation {err:.3g})")
        d = int(round(np.sqrt(dim)))
        if d * d != dim:
            raise ValueError(f"Kraus operators must act on a d^2 space, got {dim}")
        labels = tuple(self.labels) if self.labels else tuple(range(len(ops)))
        if len(labels) != len(ops):
            raise ValueError("one label per operator")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "labels", labels)

    @property
    def d(self) -> int:
        return int(round(np.sqrt(self.ops[0].shape[0])))

    def __len__(self) -> int:
        return len(self.ops)


@dataclass
class REDOutcome:
    label: object
    prob: float
    conditional: Ensemble
    g_average: float


@dataclass
class BoundReport:
    g14: float
    g12: float
    g34: float
    bound: float
    satisfied: bool
    slack: float
    link_g: list[float] = field(default_factory=list)

    @classmethod
    def build(cls, g_out: float, g_links: Sequence[float], tol: float = BOUND_TOL) -> "BoundReport":
        bound = float(np.prod(g_links))
        return cls(
            g14=float(g_out),
            g12=float(g_links[0]),
            g34=float(g_links[-1]),
            bound=bound,
            satisfied=bool(g_out <= bound + tol),
            slack=bound - float(g_out),
            link_g=[float(g) for g in g_links],
        )


def random_kraus(dim: int, count: int, rank_profile: Sequence[int] | None, seed: int) -> KrausSet:
    """Seeded complete Kraus set on the ``dim^2``-dimensional supplier space.

    A Haar isometry ``V`` of shape ``(sum(ranks), dim^2)`` is cut into row
    blocks ``K_j``; ``M_j = W_j K_j`` with Haar isometries ``W_j`` keeps
    ``sum_j M_j^dag M_j = V^dag V = I``.
    """
    big = dim * dim
    if count < 1:
        raise ValueError("count must be >= 1")
    ranks = [big] * count if rank_profile is None else [int(r) for r in rank_profile]
    if len(ranks) != count:
        raise ValueError(f"rank profile has {len(ranks)} entries for {count} operators")
    if any(r < 1 or r > big for r in ranks) or sum(ranks) < big:
        raise ValueError(f"infeasible rank profile {ranks} for a {big}-dimensional space")
    rng = rng_for(seed, dim, count)
    v = haar_isometry(sum(ranks), big, rng)
    ops = []
    start = 0
    for r in ranks:
        block = v[start : start + r]
        start += r
        ops.append(haar_isometry(big, r, rng) @ block)
    return KrausSet(tuple(ops))


def projective_kraus(vectors) -> KrausSet:
    """Kraus set of rank-1 projectors onto an orthonormal basis of the supplier space."""
    return KrausSet(tuple(np.outer(v, np.conj(v)) for v in vectors))


def computational_kraus(d: int) -> KrausSet:
    return projective_kraus(np.eye(d * d))


def schmidt_frame(state: PureState) -> tuple[np.ndarray, np.ndarray]:
    """Complete local Schmidt bases (``d`` columns each, even when rank-deficient)."""
    u, _, vh = np.linalg.svd(state.amps)
    return u, vh.T


def _member_factors(ens: Ensemble):
    out = []
    for p, s in ens.members:
        u, v = schmidt_frame(s)
        out.append((p, s.amps, u, v))
    return out


def _check_inputs(rho12: Ensemble, rho34: Ensemble, kraus: KrausSet) -> int:
    d = rho12.dims[0]
    for ens in (rho12, rho34):
        if ens.dims != (d, d):
            raise ValueError(f"inputs must both be {d}x{d}, got {rho12.dims} and {rho34.dims}")
    if kraus.d != d:
        raise ValueError(f"Kraus set acts on d={kraus.d}, inputs have d={d}")
    return d


def supplier_measure(rho12: Ensemble, rho34: Ensemble, kraus: KrausSet) -> list[REDOutcome]:
    """Apply the supplier's measurement and build every outcome's decomposition."""
    d = _check_inputs(rho12, rho34, kraus)
    left = _member_factors(rho12)
    right = _member_factors(rho34)
    raw = []
    for label, m in zip(kraus.labels, kraus.ops):
        m4 = m.reshape(d, d, d, d)  # [m2, m3, i2, i3]
        weights, pair_w, mats = [], [], []
        for p, a, _, v2 in left:
            for q, b, u3, _ in right:
                # phi[i1, m2, m3, i4] = sum M[m2 m3, i2 i3] a[i1, i2] b[i3, i4]
                phi = np.einsum("xyij,ai,jb->axyb", m4, a, b)
                # rotate shares 2 and 3 into the members' Schmidt bases
                phi = np.einsum("axyb,xm,yn->amnb", phi, v2.conj(), u3.conj())
                blocks = np.transpose(phi, (1, 2, 0, 3)).reshape(d * d, d, d)
                r = np.einsum("sab,sab->s", blocks.conj(), blocks).real
                for rs, blk in zip(r, blocks):
                    if rs > MEMBER_PRUNE:
                        weights.append(p * q * rs)
                        pair_w.append(p * q)
                        mats.append(blk)
        prob = math.fsum(weights)
        # G is homogeneous: p q r G(phi/|phi|) = p q G(phi)
        g_sum = math.fsum(w * g_of_matrix(blk) for w, blk in zip(pair_w, mats))
        raw.append((label, prob, weights, mats, g_sum))

    total = math.fsum(r[1] for r in raw)
    outcomes = []
    for label, prob, weights, mats, g_sum in raw:
        if prob < OUTCOME_PRUNE:
            continue
        cond = _ensemble_renormalized(_merge_parallel(weights, mats, prob))
        g_avg = g_sum / prob
        outcomes.append(REDOutcome(label, prob / total, cond, g_avg))
    return outcomes


def _merge_parallel(weights, mats, prob: float):
    """Normalized members, with states equal up to a global phase merged into one."""
    reps: list[tuple[float, np.ndarray]] = []
    for w, blk in zip(weights, mats):
        u = blk / np.linalg.norm(blk)
        for i, (wr, r) in enumerate(reps):
            if abs(np.vdot(r, u)) > 1.0 - PARALLEL_TOL:
                reps[i] = (wr + w, r)
                break
        else:
            reps.append((w, u))
    return tuple((w / prob, PureState(u)) for w, u in reps)


def _ensemble_renormalized(members) -> Ensemble:
    s = sum(p for p, _ in members)
    return Ensemble(tuple((p / s, st) for p, st in members))


def unconditional_density14(outcomes: Sequence[REDOutcome]) -> np.ndarray:
    return sum(o.prob * o.conditional.density().mat for o in outcomes)


def channel_density14(rho12: Ensemble, rho34: Ensemble, kraus: KrausSet) -> np.ndarray:
    """Dense route: ``Tr_23 sum_j M_j rho M_j^dag`` with shares reordered to (1,4)."""
    d = _check_inputs(rho12, rho34, kraus)
    rho = np.kron(rho12.density().mat, rho34.density().mat)
    out = np.zeros_like(rho)
    for m in kraus.ops:
        full = np.kron(np.kron(np.eye(d), m), np.eye(d))
        out += full @ rho @ full.conj().T
    return partial_trace_array(out, [d, d, d, d], [1, 2])


def check_bound(rho12: Ensemble, rho34: Ensemble, outcomes: Sequence[REDOutcome],
                tol: float = BOUND_TOL) -> BoundReport:
    g12 = ensemble_average(rho12, "G")
    g34 = ensemble_average(rho34, "G")
    g14 = sum(o.prob * o.g_average for o in outcomes)
    return BoundReport.build(g14, [g12, g34], tol)


# a supplier strategy is either an explicit Kraus set or the string "rpbes-canonical"
Strategy = Union[KrausSet, str]


def canonical_strategy(left: Ensemble, right: Ensemble) -> KrausSet:
    """The RPBES projective measurement aligned with the Schmidt bases of two pure inputs."""
    from .rpbes import canonical_phases, measurement_basis

    if len(left) != 1 or len(right) != 1:
        raise ValueError("the canonical RPBES strategy needs pure (single-member) inputs")
    d = left.dims[0]
    v2 = schmidt_frame(left.states[0])[1]
    u3 = schmidt_frame(right.states[0])[0]
    rot = np.kron(v2, u3)
    vectors = [rot @ p for p in measurement_basis(d, canonical_phases(d))]
    return projective_kraus(vectors)


def resolve_strategy(strategy: Strategy, left: Ensemble, right: Ensemble) -> KrausSet:
    if isinstance(strategy, KrausSet):
        return strategy
    if strategy == "rpbes-canonical":
        return canonical_strategy(left, right)
    if strategy == "computational":
        return computational_kraus(left.dims[0])
    raise ValueError(f"unknown supplier strategy {strategy!r}")


def chain_distribution(links: Sequence[Ensemble], strategies: Sequence[Strategy]):
    """Sequential swapping along a chain; returns ``[(P_j, ensemble on (0, N))]``."""
    if len(links) < 2:
        raise ValueError("a chain needs at least two links")
    if len(strategies) != len(links) - 1:
        raise ValueError(f"{len(links)} links need {len(links) - 1} strategies")
    d = links[0].dims[0]
    for link in links:
        if link.dims != (d, d):
            raise ValueError("all links must share the same d x d dimensions")
    dist = [(1.0, links[0])]
    for link, strategy in zip(links[1:], strategies):
        nxt = []
        for prob, ens in dist:
            kraus = resolve_strategy(strategy, ens, link)
            for o in supplier_measure(ens, link, kraus):
                nxt.append((prob * o.prob, o.conditional))
        dist = nxt
    return dist


def chain_compose(links: Sequence[Ensemble], strategies: Sequence[Strategy],
                  tol: float = BOUND_TOL) -> BoundReport:
    """End-to-end decomposition-average G against the product of link Gs."""
    dist = chain_distribution(links, strategies)
    g_end = sum(p * ensemble_average(ens, "G") for p, ens in dist)
    g_links = [ensemble_average(link, "G") for link in links]
    return BoundReport.build(g_end, g_links, tol)
