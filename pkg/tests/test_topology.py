"""Tests for the coupling-graph builders."""

import numpy as np
import pytest

from hpe.topology import chimera_edges, chimera_num_qubits, random_edges


class TestRandomEdges:
    def test_full_density_is_complete(self):
        rng = np.random.default_rng(0)
        edges = random_edges(5, 1.0, rng)
        assert edges == [(i, j) for i in range(5) for j in range(i + 1, 5)]

    def test_density_bounds(self):
        rng = np.random.default_rng(0)
        for density in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError, match="density"):
                random_edges(4, density, rng)

    def test_deterministic_given_generator_state(self):
        a = random_edges(12, 0.3, np.random.default_rng(42))
        b = random_edges(12, 0.3, np.random.default_rng(42))
        assert a == b

    def test_edges_are_ordered_pairs(self):
        edges = random_edges(10, 0.5, np.random.default_rng(1))
        assert all(i < j for i, j in edges)
        assert len(set(edges)) == len(edges)

    def test_single_qubit_has_no_edges(self):
        assert random_edges(1, 0.5, np.random.default_rng(0)) == []


class TestChimeraEdges:
    def test_single_cell_single_shore(self):
        assert chimera_num_qubits(1, 1, 1) == 2
        assert chimera_edges(1, 1, 1) == [(0, 1)]

    def test_single_cell_is_complete_bipartite(self):
        edges = chimera_edges(1, 1, 4)
        assert chimera_num_qubits(1, 1, 4) == 8
        assert len(edges) == 16
        # side 0 holds qubits 0..3, side 1 holds 4..7; no edge stays on one side
        for i, j in edges:
            assert (i < 4) != (j < 4)

    def test_grid_edge_count(self):
        rows, cols, shore = 2, 2, 4
        edges = chimera_edges(rows, cols, shore)
        intra = rows * cols * shore * shore
        vertical = (rows - 1) * cols * shore
        horizontal = rows * (cols - 1) * shore
        assert len(edges) == intra + vertical + horizontal == 80
        assert len(set(edges)) == len(edges)
        assert edges == sorted(edges)
        n = chimera_num_qubits(rows, cols, shore)
        assert all(0 <= i < j < n for i, j in edges)

    def test_intercell_links_join_matching_positions(self):
        # 2x1 grid, shore 2: vertical couplers join side-0 qubits of the two cells
        edges = set(chimera_edges(2, 1, 2))
        assert (0, 4) in edges  # cell (0,0) side 0 pos 0 -> cell (1,0) side 0 pos 0
        assert (1, 5) in edges
        assert (0, 5) not in edges

    def test_rejects_bad_dimensions(self):
        with pytest.raises(ValueError, match="positive"):
            chimera_edges(0, 1, 1)
