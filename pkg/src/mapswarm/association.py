"""MSD to MAP association with capacity-truncated coverage."""

from dataclasses import dataclass

import numpy as np
from numba import njit

DIST_FLOOR = 1e-6


def utility(msd_pos, map_pos, kappa: float = 1.0, eta: float = 4.0):
    """Link utility ``kappa * dist**-eta``, with the distance floored at 1e-6 m."""
    diff = np.asarray(msd_pos, dtype=float) - np.asarray(map_pos, dtype=float)
    dist = np.maximum(np.sqrt(np.sum(diff * diff, axis=-1)), DIST_FLOOR)
    return kappa * dist ** (-eta)


@njit(cache=True)
def _nearest(msd, maps, floor2):
    m, n = msd.shape[0], maps.shape[0]
    best = np.empty(m, dtype=np.int64)
    best_d2 = np.empty(m)
    for i in range(m):
        bi = 0
        bd = np.inf
        for j in range(n):
            dx = msd[i, 0] - maps[j, 0]
            dy = msd[i, 1] - maps[j, 1]
            d2 = max(dx * dx + dy * dy, floor2)
            if d2 < bd:
                bd = d2
                bi = j
        best[i] = bi
        best_d2[i] = bd
    return best, best_d2


@dataclass
class Assignment:
    pairs: np.ndarray      # (M,) MAP id per MSD, -1 if unmatched
    loads: np.ndarray      # (L,) matched count per MAP, may exceed capacity
    covered: np.ndarray    # (M,) bool

    @property
    def n_matched(self) -> int:
        return int(np.count_nonzero(self.pairs >= 0))

    @property
    def n_covered(self) -> int:
        return int(np.count_nonzero(self.covered))


def match(msd_positions, map_positions, comm_range: float, capacity: int, alive=None) -> Assignment:
    """Attach every MSD to the in-range alive MAP of highest utility.

    Utility decreases strictly with distance, so the argmax is taken over
    floored distances directly; ties go to the lower MAP id. Loads count
    every match. Each MAP covers its ``capacity`` best-utility matches,
    ties by lower MSD id.
    """
    msd_positions = np.asarray(msd_positions, dtype=float).reshape(-1, 2)
    map_positions = np.asarray(map_positions, dtype=float).reshape(-1, 2)
    m, n_maps = len(msd_positions), len(map_positions)
    if alive is None:
        alive = np.ones(n_maps, dtype=bool)
    ids = np.flatnonzero(alive)

    pairs = np.full(m, -1, dtype=np.int64)
    loads = np.zeros(n_maps, dtype=np.int64)
    covered = np.zeros(m, dtype=bool)
    if m == 0 or len(ids) == 0:
        return Assignment(pairs, loads, covered)

    best, best_d2 = _nearest(msd_positions, np.ascontiguousarray(map_positions[ids]),
                             DIST_FLOOR * DIST_FLOOR)
    best_dist = np.sqrt(best_d2)
    ok = best_dist < comm_range
    pairs[ok] = ids[best[ok]]
    loads[:] = np.bincount(pairs[ok], minlength=n_maps)

    matched = np.flatnonzero(ok)
    order = np.lexsort((matched, best_dist[matched], pairs[matched]))
    sorted_maps = pairs[matched][order]
    group_start = np.searchsorted(sorted_maps, sorted_maps, side="left")
    rank = np.arange(len(order)) - group_start
    covered[matched[order[rank < capacity]]] = True
    return Assignment(pairs, loads, covered)
