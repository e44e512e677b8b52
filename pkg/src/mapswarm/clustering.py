"""Lloyd's k-means over MSD positions and nearest-center goal lookup."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ClusterSet:
    centers: np.ndarray            # (K, 2)
    membership: np.ndarray         # (N,) cluster index per point
    objective: list[float] = field(default_factory=list)  # within-cluster SS per iteration
    n_iter: int = 0


def _sq_dists(points, centers):
    out = np.empty((len(points), len(centers)))
    for j, c in enumerate(centers):
        dx = points[:, 0] - c[0]
        dy = points[:, 1] - c[1]
        out[:, j] = dx * dx + dy * dy
    return out


def kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Distance-squared weighted seeding."""
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        closest = np.minimum(closest, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def lloyd(points, k: int, init=None, rng=None, max_iters: int = 100, tol: float = 1e-3) -> ClusterSet:
    """Alternate nearest-center assignment and centroid updates.

    Stops once no center moves by ``tol`` or more, or after ``max_iters``
    iterations. A cluster that loses all its members is re-seeded at the
    point currently farthest from its own center.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(points) == 0:
        raise ValueError("cannot cluster an empty point set")
    if init is None:
        rng = rng if rng is not None else np.random.default_rng()
        centers = kmeanspp_init(points, k, rng)
    else:
        centers = np.array(init, dtype=float).reshape(k, 2)

    objective = []
    it = 0
    for it in range(1, max_iters + 1):
        d2 = _sq_dists(points, centers)
        labels = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(len(points)), labels]
        objective.append(float(point_d2.sum()))

        counts = np.bincount(labels, minlength=k)
        new = centers.copy()
        nz = counts > 0
        for dim in range(2):
            sums = np.bincount(labels, weights=points[:, dim], minlength=k)
            new[nz, dim] = sums[nz] / counts[nz]
        for j in np.flatnonzero(~nz):
            far = int(np.argmax(point_d2))
            new[j] = points[far]
            point_d2[far] = 0.0

        shift = np.sqrt(np.max(np.sum((new - centers) ** 2, axis=1)))
        centers = new
        if shift < tol:
            break

    labels = np.argmin(_sq_dists(points, centers), axis=1)
    return ClusterSet(centers, labels, objective, it)


def nearest_center(pos, centers) -> np.ndarray:
    """Closest center to ``pos``; ties resolve to the lowest index."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    if len(centers) == 0:
        raise ValueError("no cluster centers")
    d2 = np.sum((centers - np.asarray(pos, dtype=float)) ** 2, axis=1)
    return centers[int(np.argmin(d2))]


def nearest_centers(positions, centers) -> np.ndarray:
    """Row-wise :func:`nearest_center` for an (n, 2) array."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    if len(centers) == 0:
        raise ValueError("no cluster centers")
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    return centers[np.argmin(_sq_dists(positions, centers), axis=1)]
