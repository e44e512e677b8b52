"""Sampled double-integrator dynamics for the MAPs."""

import numpy as np

SCHEMES = ("exact-hold", "forward-difference")


class IntegrationError(RuntimeError):
    pass


def discrete_matrices(ts: float, scheme: str = "exact-hold"):
    """Per-axis ``(A_d, B_d)`` for the state ``[q, p]``."""
    if ts <= 0:
        raise ValueError("ts must be positive")
    a_d = np.array([[1.0, ts], [0.0, 1.0]])
    if scheme == "exact-hold":
        b_d = np.array([0.5 * ts * ts, ts])
    elif scheme == "forward-difference":
        b_d = np.array([0.0, ts])
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return a_d, b_d


def step_dynamics(positions, velocities, u, ts: float, scheme: str = "exact-hold", alive=None, ids=None):
    """Advance positions and velocities by one sample under input ``u``.

    Rows with ``alive`` False are returned unchanged. ``ids`` labels rows in
    error messages.
    """
    q = np.array(positions, dtype=float)
    p = np.array(velocities, dtype=float)
    u = np.asarray(u, dtype=float)
    mask = np.ones(len(q), dtype=bool) if alive is None else np.asarray(alive, dtype=bool)
    bad = mask & ~np.all(np.isfinite(u), axis=-1)
    if np.any(bad):
        row = int(np.flatnonzero(bad)[0])
        label = row if ids is None else int(ids[row])
        raise IntegrationError(f"non-finite control input for MAP {label}")
    a_d, b_d = discrete_matrices(ts, scheme)
    qm, pm, um = q[mask], p[mask], u[mask]
    q[mask] = a_d[0, 0] * qm + a_d[0, 1] * pm + b_d[0] * um
    p[mask] = a_d[1, 0] * qm + a_d[1, 1] * pm + b_d[1] * um
    return q, p
