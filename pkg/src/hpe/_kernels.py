"""JIT-compiled inner loops: annealing chains, random spins, pairwise merge.

All kernels consume the CSR adjacency built by ``CompiledProblem`` and draw
randomness from per-chain splitmix64 streams, so results are bit-identical
regardless of thread count or scheduling.
"""

from __future__ import annotations

import numpy as np
from numba import config, njit, prange

# OpenMP scheduling; also skips numba's TBB version probe and its warning.
config.THREADING_LAYER = "omp"

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_S63 = np.uint64(63)
_INV53 = 2.0 ** -53


@njit(cache=True, inline="always")
def _sm64(state):
    state = state + _GAMMA
    z = state
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return state, z ^ (z >> _S31)


@njit(cache=True, parallel=True)
def random_spins(seeds, out):
    """Fill each row with uniform +-1 spins from its own splitmix64 stream."""
    num_rows, n = out.shape
    for r in prange(num_rows):
        state = seeds[r]
        for i in range(n):
            state, z = _sm64(state)
            out[r, i] = 1 if (z >> _S63) else -1


@njit(cache=True, parallel=True, fastmath=True)
def anneal_spins(lin, indptr, indices, weights, sweeps, t_init, t_final, seeds, out):
    """Independent single-spin-flip Metropolis anneals, one chain per row.

    Each chain starts from a random configuration, performs ``sweeps``
    full passes in fixed qubit order, and cools geometrically from
    ``t_init`` to ``t_final``.
    """
    num_rows, n = out.shape
    decay = (t_final / t_init) ** (1.0 / (sweeps - 1)) if sweeps > 1 else 1.0
    for r in prange(num_rows):
        state = seeds[r]
        spins = np.empty(n, np.float64)
        for i in range(n):
            state, z = _sm64(state)
            spins[i] = 1.0 if (z >> _S63) else -1.0
        temp = t_init
        for _ in range(sweeps):
            inv_t = 1.0 / temp
            for i in range(n):
                field = lin[i]
                for p in range(indptr[i], indptr[i + 1]):
                    field += weights[p] * spins[indices[p]]
                delta = -2.0 * spins[i] * field
                if delta <= 0.0:
                    spins[i] = -spins[i]
                else:
                    state, z = _sm64(state)
                    if (z >> _S11) * _INV53 < np.exp(-delta * inv_t):
                        spins[i] = -spins[i]
            temp *= decay
        for i in range(n):
            out[r, i] = np.int8(spins[i])


@njit(cache=True, parallel=True)
def energy_rows(rows, lin, edge_i, edge_j, edge_w, out):
    """Objective value of every spin row, in one fixed summation order.

    Linear terms accumulate in index order, then couplers in sorted (i, j)
    order.  The order never depends on the batch shape, so the same row
    always produces the same float, which keeps exact (zero-tolerance)
    energy comparisons meaningful.  No fastmath here: reassociation would
    break that guarantee.
    """
    num_rows, n = rows.shape
    num_edges = edge_w.shape[0]
    for r in prange(num_rows):
        acc = 0.0
        for i in range(n):
            acc += lin[i] * rows[r, i]
        for e in range(num_edges):
            acc += edge_w[e] * rows[r, edge_i[e]] * rows[r, edge_j[e]]
        out[r] = acc


@njit(cache=True, inline="always")
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def merge_spins(s, t, lin, indptr, indices, weights):
    """Merge two spin rows along connected components of their disagreement.

    For every connected component of the coupling graph restricted to the
    indices where ``s`` and ``t`` differ, adopt ``t``'s spins exactly when
    that strictly lowers the objective (ties keep ``s``).  Components do
    not interact: no edge crosses between two components, so per-component
    gains add exactly.
    """
    n = s.shape[0]
    parent = np.full(n, -1, np.int64)
    for i in range(n):
        if s[i] != t[i]:
            parent[i] = i
    for i in range(n):
        if parent[i] < 0:
            continue
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j > i and parent[j] >= 0:
                ri = _find(parent, i)
                rj = _find(parent, j)
                if ri != rj:
                    parent[rj] = ri
    # gain[root] accumulates sum_i s_i * (a_i + sum_{j outside} b_ij s_j);
    # flipping the component changes the energy by -2 * gain.
    gain = np.zeros(n, np.float64)
    for i in range(n):
        if parent[i] < 0:
            continue
        acc = lin[i] * s[i]
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if parent[j] < 0:
                acc += weights[p] * s[i] * s[j]
        gain[_find(parent, i)] += acc
    out = s.copy()
    for i in range(n):
        if parent[i] >= 0 and gain[_find(parent, i)] > 0.0:
            out[i] = t[i]
    return out


def warm_up() -> None:
    """Trigger JIT compilation of every kernel on a tiny instance."""
    lin = np.zeros(2, np.float64)
    indptr = np.array([0, 1, 2], np.int64)
    indices = np.array([1, 0], np.int32)
    weights = np.array([1.0, 1.0], np.float64)
    seeds = np.array([1, 2], np.uint64)
    out = np.zeros((2, 2), np.int8)
    random_spins(seeds, out)
    anneal_spins(lin, indptr, indices, weights, 2, 1.0, 0.5, seeds, out)
    s = np.array([1, -1], np.int8)
    t = np.array([-1, 1], np.int8)
    merge_spins(s, t, lin, indptr, indices, weights)
    edge_i = np.array([0], np.int32)
    edge_j = np.array([1], np.int32)
    edge_w = np.array([1.0], np.float64)
    energy_rows(out, lin, edge_i, edge_j, edge_w, np.zeros(2, np.float64))
