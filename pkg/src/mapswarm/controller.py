"""Distributed control law ``u_i = f_i + g_i + h_i`` for the MAP overlay.

``f_i`` keeps neighbours near the preferred separation and pulls MAPs toward
overloaded neighbours, ``g_i`` aligns velocities, ``h_i`` steers each MAP to
its nearest cluster center and damps it to rest.

All arrays are indexed by graph node (alive MAPs only). The per-agent
functions are the readable reference; :func:`control_input` is the
vectorized path used by the simulator.
"""

import numpy as np

from .clustering import nearest_center, nearest_centers
from .graph import ProximityGraph
from .kernels import bump, psi, sigma_gradient, sigma_norm_dist
from .model import ScenarioConfig


def overload_gain(loads, capacity: float, a: float, epsilon: float):
    """``a * (1 - bump(|(N - Nmax)^+|_sigma / |Nmax|_sigma; 0, 1))``, zero at or under capacity."""
    excess = np.maximum(np.asarray(loads, dtype=float) - capacity, 0.0)
    ratio = sigma_norm_dist(excess, epsilon) / sigma_norm_dist(capacity, epsilon)
    return a * (1.0 - bump(np.minimum(ratio, 1.0), 0.0, 1.0))


def _pair_multiplier(dist, loads_j, cfg: ScenarioConfig):
    range_sigma = sigma_norm_dist(cfg.comm_range, cfg.epsilon)
    d_sigma = sigma_norm_dist(cfg.min_sep, cfg.epsilon)
    z = sigma_norm_dist(dist, cfg.epsilon)
    return (psi(z, range_sigma, d_sigma, cfg.gamma, cfg.a, cfg.b)
            + overload_gain(loads_j, cfg.capacity, cfg.a, cfg.epsilon))


def gradient_term(i: int, positions, graph: ProximityGraph, loads, cfg: ScenarioConfig) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    out = np.zeros(2)
    for j in np.flatnonzero(graph.neighbors[i]):
        rel = positions[j] - positions[i]
        mult = _pair_multiplier(np.hypot(*rel), loads[j], cfg)
        out += mult * sigma_gradient(rel, cfg.epsilon)
    return out


def consensus_term(i: int, velocities, graph: ProximityGraph) -> np.ndarray:
    velocities = np.asarray(velocities, dtype=float)
    out = np.zeros(2)
    for j in np.flatnonzero(graph.neighbors[i]):
        out += graph.adjacency[i, j] * (velocities[j] - velocities[i])
    return out


def goal_term(i: int, positions, velocities, centers, cfg: ScenarioConfig) -> np.ndarray:
    goal = nearest_center(positions[i], centers)
    return cfg.c1 * (goal - np.asarray(positions[i])) + cfg.c2 * (0.0 - np.asarray(velocities[i]))


def control_input(positions, velocities, loads, centers, graph: ProximityGraph, cfg: ScenarioConfig) -> np.ndarray:
    """Acceleration command for every graph node, shape (n, 2)."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    n = len(positions)
    if n == 0:
        return np.zeros((0, 2))
    loads = np.asarray(loads, dtype=float)

    rel = positions[None, :, :] - positions[:, None, :]          # q_j - q_i
    mult = _pair_multiplier(graph.dist, loads[None, :], cfg)
    mult = np.where(graph.neighbors, mult, 0.0)
    f = np.einsum("ij,ijk->ik", mult, sigma_gradient(rel, cfg.epsilon))

    w = np.where(graph.neighbors, graph.adjacency, 0.0)
    g = w @ velocities - w.sum(axis=1)[:, None] * velocities

    h = cfg.c1 * (nearest_centers(positions, centers) - positions) - cfg.c2 * velocities

    u = f + g + h
    if cfg.u_max is not None:
        norm = np.linalg.norm(u, axis=1, keepdims=True)
        u = np.where(norm > cfg.u_max, u * (cfg.u_max / np.maximum(norm, 1e-300)), u)
    return u
