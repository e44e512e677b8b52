"""Cyclic Jacobi eigenvalue solver for real symmetric matrices."""

import math

import numpy as np
from numba import njit


class NotSymmetricError(ValueError):
    pass


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j] * a[i, j]
    return math.sqrt(2.0 * s)


@njit(cache=True)
def _cyclic_jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    # rotations on entries below tol / n are skipped: if every entry is that
    # small the off-diagonal norm is already under tol
    skip = tol / max(n, 1)
    for sweep in range(max_sweeps):
        if _off_norm(a) < tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                app = a[p, p] - t * apq
                aqq = a[q, q] + t * apq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    a[k, p] = a[p, k]
                    a[k, q] = a[q, k]
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = 0.0
                a[q, p] = 0.0
    if _off_norm(a) < tol:
        return max_sweeps
    return -1


def jacobi_eigenvalues(matrix, tol: float = 1e-10, max_sweeps: int = 100, sym_tol: float = 1e-9) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix.

    Rotations sweep the upper triangle row by row until the off-diagonal
    Frobenius norm drops below ``tol``.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.T)) > sym_tol:
        raise NotSymmetricError("matrix is not symmetric")
    if a.shape[0] == 0:
        return np.zeros(0)
    a = 0.5 * (a + a.T)
    if _cyclic_jacobi(a, tol, max_sweeps) < 0:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))
