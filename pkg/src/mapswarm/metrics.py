"""Coverage, information penetration and algebraic connectivity."""

from dataclasses import dataclass, asdict

import numpy as np

from .linalg import jacobi_eigenvalues

FIELDS = ("t", "coverage", "fiedler", "info_penetration", "alive_maps")


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    t: float
    coverage: float
    fiedler: float
    info_penetration: float
    alive_maps: int

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RecoveryReport:
    metric: str
    pre: float
    post: float
    ratio: float | None      # None when the pre-event mean is zero


def coverage_fraction(covered, n_msds: int) -> float:
    if n_msds <= 0:
        raise UndefinedMetricError("coverage is undefined without MSDs")
    return float(np.count_nonzero(covered)) / n_msds


def info_penetration(count_degree, tau: float) -> float:
    """Mean over nodes of the steady-state bound ``1 - 1 / (1 + tau * degree)``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    deg = np.asarray(count_degree, dtype=float)
    if deg.size == 0:
        return 0.0
    return float(np.mean(1.0 - 1.0 / (1.0 + tau * deg)))


def fiedler_value(lap, clamp: float = 1e-9) -> float:
    """Second-smallest Laplacian eigenvalue; 0 for fewer than two nodes."""
    lap = np.asarray(lap, dtype=float)
    if lap.shape[0] <= 1:
        return 0.0
    lam2 = float(jacobi_eigenvalues(lap)[1])
    if -clamp < lam2 < 0.0:
        lam2 = 0.0
    return lam2


def window_mean(times, values, start: float, stop: float, closed: bool = False) -> float:
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    eps = 1e-9
    sel = (times >= start - eps) & ((times <= stop + eps) if closed else (times < stop - eps))
    if not np.any(sel):
        raise UndefinedMetricError(f"no samples in window [{start}, {stop}{']' if closed else ')'}")
    return float(values[sel].mean())


def recovery_report(records, event_time: float, window: float = 2.0) -> list[RecoveryReport]:
    """Compare each metric's mean just before ``event_time`` with its mean over the last ``window`` seconds."""
    if not records:
        raise UndefinedMetricError("empty series")
    times = np.array([r.t for r in records])
    t_final = times[-1]
    out = []
    for name in FIELDS[1:]:
        vals = np.array([getattr(r, name) for r in records], dtype=float)
        pre = window_mean(times, vals, event_time - window, event_time)
        post = window_mean(times, vals, t_final - window, t_final, closed=True)
        ratio = post / pre if pre > 0 else None
        out.append(RecoveryReport(name, pre, post, ratio))
    return out
