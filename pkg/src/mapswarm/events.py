"""MSD random-walk mobility and random MAP failures."""

import math

import numpy as np

from .model import ConfigError


def step_mobility(positions, s: float, rng: np.random.Generator) -> np.ndarray:
    """Displace every MSD by ``s * xi`` with ``xi ~ U([-1, 1]^2)``."""
    if s < 0:
        raise ValueError("mobility scale must be non-negative")
    positions = np.asarray(positions, dtype=float)
    if s == 0:
        return positions.copy()
    return positions + s * rng.uniform(-1.0, 1.0, positions.shape)


def failure_count(fraction: float, n_alive: int) -> int:
    # guard against 0.1 * 80 landing a hair under 8
    return int(math.floor(fraction * n_alive + 1e-9))


def apply_failure(alive, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Disable ``floor(fraction * n_alive)`` alive MAPs chosen uniformly without replacement."""
    if not 0.0 <= fraction < 1.0:
        raise ConfigError(f"failure fraction must lie in [0, 1), got {fraction}")
    alive = np.array(alive, dtype=bool)
    ids = np.flatnonzero(alive)
    k = failure_count(fraction, len(ids))
    if k:
        alive[rng.choice(ids, size=k, replace=False)] = False
    return alive
