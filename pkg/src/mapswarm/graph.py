"""Proximity graph of the alive MAPs."""

from dataclasses import dataclass

import numpy as np

from .kernels import bump, sigma_norm_dist


@dataclass
class ProximityGraph:
    ids: np.ndarray               # (n,) MAP id of each graph node
    positions: np.ndarray         # (n, 2)
    dist: np.ndarray              # (n, n) Euclidean distances
    adjacency: np.ndarray         # (n, n) link strengths in [0, 1], zero diagonal
    neighbors: np.ndarray         # (n, n) bool, distance <= range and i != j

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def count_degree(self) -> np.ndarray:
        return np.count_nonzero(self.adjacency > 0, axis=1)

    @property
    def weighted_degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def index_of(self, map_id: int) -> int:
        hits = np.flatnonzero(self.ids == map_id)
        if len(hits) == 0:
            raise KeyError(f"MAP {map_id} is not in the graph")
        return int(hits[0])


def build_graph(positions, comm_range: float, epsilon: float, gamma: float, ids=None) -> ProximityGraph:
    """Smooth adjacency ``bump(|q_i - q_j|_sigma / |r|_sigma; gamma, 1)`` over all pairs."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(positions)
    ids = np.arange(n) if ids is None else np.asarray(ids, dtype=np.int64)
    diff = positions[None, :, :] - positions[:, None, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    range_sigma = sigma_norm_dist(comm_range, epsilon)
    adjacency = np.asarray(bump(sigma_norm_dist(dist, epsilon) / range_sigma, gamma, 1.0), dtype=float)
    off_diag = ~np.eye(n, dtype=bool)
    adjacency = np.where(off_diag, adjacency, 0.0)
    neighbors = (dist <= comm_range) & off_diag
    return ProximityGraph(ids, positions, dist, adjacency, neighbors)


def laplacian(graph: ProximityGraph) -> np.ndarray:
    """Weighted Laplacian ``diag(sum_j a_ij) - A``."""
    return np.diag(graph.weighted_degree) - graph.adjacency
