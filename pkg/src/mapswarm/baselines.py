"""Static MAP placements used as comparison baselines.

* p-median: Lloyd-type alternation of nearest-facility assignment and a
  Weiszfeld step toward each cluster's geometric median, restarted from
  several seeds. No connectivity constraint.
* circle packing: hexagonal lattice of pitch ``d`` inside the minimum
  enclosing circle of the MSDs.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .association import match
from .clustering import kmeanspp_init
from .graph import build_graph, laplacian
from .metrics import MetricsRecord, coverage_fraction, fiedler_value, info_penetration
from .model import ScenarioConfig


@dataclass
class Placement:
    positions: np.ndarray
    method: str
    objective: float | None = None
    history: list[float] = field(default_factory=list)


def _dists(points, centers):
    diff = points[:, None, :] - centers[None, :, :]
    return np.sqrt(np.einsum("nkd,nkd->nk", diff, diff))


def _cluster_cost(points, centers, labels, k):
    d = np.sqrt(np.sum((points - centers[labels]) ** 2, axis=1))
    return np.bincount(labels, weights=d, minlength=k)


def weiszfeld_step(points, centers, labels):
    """One Weiszfeld update per cluster; a cluster keeps its center if the step would not help."""
    k = len(centers)
    d = np.sqrt(np.sum((points - centers[labels]) ** 2, axis=1))
    w = 1.0 / np.maximum(d, 1e-12)
    wsum = np.bincount(labels, weights=w, minlength=k)
    new = centers.copy()
    nz = wsum > 0
    for dim in range(2):
        num = np.bincount(labels, weights=w * points[:, dim], minlength=k)
        new[nz, dim] = num[nz] / wsum[nz]
    worse = _cluster_cost(points, new, labels, k) > _cluster_cost(points, centers, labels, k)
    new[worse] = centers[worse]
    return new


def p_median(msd_positions, n_facilities: int, rng: np.random.Generator, restarts: int = 10,
             max_iters: int = 300, tol: float = 1e-7) -> Placement:
    """Heuristic minimiser of the summed MSD-to-nearest-facility distance."""
    points = np.asarray(msd_positions, dtype=float).reshape(-1, 2)
    if n_facilities < 1:
        raise ValueError("need at least one facility")
    if len(points) == 0:
        return Placement(np.zeros((n_facilities, 2)), "p-median", 0.0)
    best = None
    for _ in range(max(1, restarts)):
        centers = kmeanspp_init(points, n_facilities, rng)
        history = []
        for _ in range(max_iters):
            d = _dists(points, centers)
            labels = np.argmin(d, axis=1)
            history.append(float(d[np.arange(len(points)), labels].sum()))
            if len(history) > 1 and history[-2] - history[-1] <= tol * max(history[-2], 1.0):
                break
            centers = weiszfeld_step(points, centers, labels)
        if best is None or history[-1] < best.objective:
            best = Placement(centers, "p-median", history[-1], history)
    return best


def _circle_two(a, b):
    c = 0.5 * (a + b)
    return c, float(np.hypot(*(a - c)))


def _circle_three(a, b, c):
    bx, by = b - a
    cx, cy = c - a
    det = 2.0 * (bx * cy - by * cx)
    if abs(det) < 1e-12 * max(1.0, bx * bx + by * by, cx * cx + cy * cy):
        # collinear: the widest pair spans the rest
        pairs = [(a, b), (a, c), (b, c)]
        return max((_circle_two(p, q) for p, q in pairs), key=lambda pr: pr[1])
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / det
    uy = (bx * c2 - cx * b2) / det
    center = a + np.array([ux, uy])
    return center, float(math.hypot(ux, uy))


def _inside(circle, p, rel=1e-9):
    c, r = circle
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= r * (1.0 + rel) + rel


def min_enclosing_circle(points, rng: np.random.Generator | None = None):
    """Smallest circle containing ``points`` (randomized incremental, Welzl style).

    Returns ``(center, radius)``.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("no points")
    rng = rng if rng is not None else np.random.default_rng(0)
    pts = pts[rng.permutation(len(pts))]
    circle = (pts[0].copy(), 0.0)
    for i in range(1, len(pts)):
        p = pts[i]
        if _inside(circle, p):
            continue
        circle = (p.copy(), 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(circle, q):
                continue
            circle = _circle_two(p, q)
            for k in range(j):
                if not _inside(circle, pts[k]):
                    circle = _circle_three(p, q, pts[k])
    return np.asarray(circle[0], dtype=float), float(circle[1])


def hex_lattice(center, radius: float, pitch: float) -> np.ndarray:
    """Triangular-lattice sites of spacing ``pitch`` within ``radius`` of ``center``,
    ordered by distance from the center and then by angle."""
    center = np.asarray(center, dtype=float)
    if pitch <= 0 or radius <= 0:
        return center[None, :].copy()
    span = int(math.ceil(radius / pitch)) + 2
    i, j = np.meshgrid(np.arange(-span, span + 1), np.arange(-span, span + 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    offs = np.column_stack([pitch * (i + 0.5 * j), pitch * (math.sqrt(3.0) / 2.0) * j])
    r = np.hypot(offs[:, 0], offs[:, 1])
    keep = r <= radius * (1.0 + 1e-12)
    offs, r = offs[keep], r[keep]
    ang = np.mod(np.arctan2(offs[:, 1], offs[:, 0]), 2 * np.pi)
    order = np.lexsort((np.round(ang, 9), np.round(r, 9)))
    return center + offs[order]


def circle_packing(msd_positions, n_maps: int, pitch: float, rng: np.random.Generator | None = None) -> Placement:
    """Hexagonal packing of ``n_maps`` sites inside the MSDs' minimum enclosing circle.

    With more lattice sites than MAPs, the sites nearest the center are
    kept; with fewer, the rest are spread evenly on the circle boundary.
    """
    if n_maps < 1:
        raise ValueError("need at least one MAP")
    center, radius = min_enclosing_circle(msd_positions, rng)
    sites = hex_lattice(center, radius, pitch)
    if len(sites) >= n_maps:
        return Placement(sites[:n_maps], "circle-packing")
    extra = n_maps - len(sites)
    theta = 2 * np.pi * np.arange(extra) / extra
    ring = center + radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return Placement(np.vstack([sites, ring]), "circle-packing")


def score_placement(positions, msd_positions, cfg: ScenarioConfig, t: float = 0.0) -> MetricsRecord:
    """Coverage, Fiedler value and information penetration of a frozen configuration."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    msd_positions = np.asarray(msd_positions, dtype=float).reshape(-1, 2)
    assignment = match(msd_positions, positions, cfg.comm_range, cfg.capacity)
    graph = build_graph(positions, cfg.comm_range, cfg.epsilon, cfg.gamma)
    return MetricsRecord(
        t=t,
        coverage=coverage_fraction(assignment.covered, len(msd_positions)),
        fiedler=fiedler_value(laplacian(graph)),
        info_penetration=info_penetration(graph.count_degree, cfg.tau),
        alive_maps=len(positions),
    )
