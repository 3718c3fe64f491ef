"""Shared fixtures-as-functions for the test suite."""

from itertools import combinations

import numpy as np

from concurrence_monotones.states import PureState

SQ2 = 1 / np.sqrt(2)


def bell(d: int = 2) -> PureState:
    return PureState(np.eye(d) / np.sqrt(d))


def product(d: int = 2, i: int = 0, j: int = 0) -> PureState:
    a = np.zeros((d, d), dtype=complex)
    a[i, j] = 1.0
    return PureState(a)


def brute_esf(values, k: int) -> float:
    """S_k by summing over every k-subset."""
    return float(sum(np.prod(c) for c in combinations(values, k))) if k else 1.0


def nested_partial_trace(mat, dims, traced):
    """Index-by-index partial trace, independent of any reshaping tricks."""
    n = len(dims)
    kept = [i for i in range(n) if i not in traced]
    kdims = [dims[i] for i in kept]
    tdims = [dims[i] for i in traced]
    out = np.zeros((int(np.prod(kdims)),) * 2, dtype=complex)

    def flat(idx):
        f = 0
        for i, x in enumerate(idx):
            f = f * dims[i] + x
        return f

    for ko in np.ndindex(*kdims):
        for ki in np.ndindex(*kdims):
            acc = 0j
            for t in np.ndindex(*tdims):
                row = [0] * n
                col = [0] * n
                for pos, i in enumerate(kept):
                    row[i], col[i] = ko[pos], ki[pos]
                for pos, i in enumerate(traced):
                    row[i] = col[i] = t[pos]
                acc += mat[flat(row), flat(col)]
            out[np.ravel_multi_index(ko, kdims), np.ravel_multi_index(ki, kdims)] = acc
    return out
