"""Coupling-graph builders for generated problems.

Two topologies: uniform random graphs with a target edge density, and the
chimera cell grid used by flux-qubit annealers (an R x C grid of complete
bipartite K_{t,t} cells; one shore couples to the vertical neighbor cell,
the other to the horizontal one).
"""

from __future__ import annotations

import numpy as np

__all__ = ["random_edges", "chimera_edges", "chimera_num_qubits"]


def random_edges(num_qubits: int, density: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Each unordered pair is included independently with probability ``density``."""
    if not 0.0 < density <= 1.0:
        raise ValueError(f"edge density must be in (0, 1], got {density}")
    pairs = [(i, j) for i in range(num_qubits) for j in range(i + 1, num_qubits)]
    if not pairs:
        return []
    keep = rng.random(len(pairs)) < density
    return [p for p, k in zip(pairs, keep) if k]


def chimera_num_qubits(rows: int, cols: int, shore: int) -> int:
    return rows * cols * 2 * shore


def _chimera_index(cols: int, shore: int, row: int, col: int, side: int, k: int) -> int:
    return ((row * cols + col) * 2 + side) * shore + k


def chimera_edges(rows: int, cols: int, shore: int) -> list[tuple[int, int]]:
    """Edge list of the (rows, cols, shore) chimera grid, sorted by (i, j).

    Side 0 of each cell couples to the same shore position in the cell
    below; side 1 couples to the cell to the right; the two sides of one
    cell are completely connected.
    """
    if rows < 1 or cols < 1 or shore < 1:
        raise ValueError(f"chimera dimensions must be positive, got ({rows}, {cols}, {shore})")
    edges: list[tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            for k0 in range(shore):
                left = _chimera_index(cols, shore, r, c, 0, k0)
                for k1 in range(shore):
                    edges.append((left, _chimera_index(cols, shore, r, c, 1, k1)))
            if r + 1 < rows:
                for k in range(shore):
                    edges.append(
                        (
                            _chimera_index(cols, shore, r, c, 0, k),
                            _chimera_index(cols, shore, r + 1, c, 0, k),
                        )
                    )
            if c + 1 < cols:
                for k in range(shore):
                    edges.append(
                        (
                            _chimera_index(cols, shore, r, c, 1, k),
                            _chimera_index(cols, shore, r, c + 1, 1, k),
                        )
                    )
    edges = [(min(i, j), max(i, j)) for i, j in edges]
    edges.sort()
    return edges
