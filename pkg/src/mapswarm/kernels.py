"""Scalar kernels behind the flocking controller.

All functions accept scalars or numpy arrays and broadcast elementwise.
"""

from dataclasses import dataclass
import math

import numpy as np


class ParameterError(ValueError):
    """A kernel was called with arguments outside its domain."""


@dataclass(frozen=True)
class CutoffParams:
    z1: float
    z0: float

    def __post_init__(self):
        if not (0.0 <= self.z1 < self.z0):
            raise ParameterError(f"need 0 <= z1 < z0, got z1={self.z1}, z0={self.z0}")


@dataclass(frozen=True)
class SigmoidParams:
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ParameterError(f"sigmoid amplitudes must be positive, got a={self.a}, b={self.b}")

    @property
    def c(self) -> float:
        return abs(self.a - self.b) / math.sqrt(4.0 * self.a * self.b)


def bump(z, z1: float = 0.2, z0: float = 1.0):
    """Smooth cutoff: 1 below ``z1``, cosine roll-off to 0 at ``z0``, 0 beyond.

    >>> float(bump(0.6, 0.2, 1.0))
    0.5
    """
    CutoffParams(z1, z0)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ParameterError("bump argument must be non-negative")
    ramp = 0.5 * (1.0 + np.cos(np.pi * (z - z1) / (z0 - z1)))
    out = np.where(z < z1, 1.0, np.where(z < z0, ramp, 0.0))
    return out[()] if out.ndim == 0 else out


def sigma_norm_dist(dist, epsilon: float):
    """sigma-norm of a vector given its Euclidean length."""
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    dist = np.asarray(dist, dtype=float)
    out = (np.sqrt(1.0 + epsilon * dist * dist) - 1.0) / epsilon
    return out[()] if out.ndim == 0 else out


def sigma_norm(x, epsilon: float):
    """sigma-norm ``(sqrt(1 + eps*|x|^2) - 1) / eps``.

    A 0-d input is a scalar; otherwise the last axis holds vector components.
    """
    x = np.asarray(x, dtype=float)
    sq = x * x if x.ndim == 0 else np.sum(x * x, axis=-1)
    return sigma_norm_dist(np.sqrt(sq), epsilon)


def sigma_gradient(x, epsilon: float):
    """Gradient of :func:`sigma_norm` with respect to ``x`` (last axis = components)."""
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    x = np.asarray(x, dtype=float)
    sq = np.sum(x * x, axis=-1, keepdims=True)
    return x / np.sqrt(1.0 + epsilon * sq)


def uneven_sigmoid(z, a: float = 5.0, b: float = 5.0):
    """Asymmetric sigmoid with limits ``-b`` at -inf and ``a`` at +inf."""
    c = SigmoidParams(a, b).c
    z = np.asarray(z, dtype=float) + c
    out = 0.5 * ((a + b) * z / np.sqrt(1.0 + z * z) + (a - b))
    return out[()] if out.ndim == 0 else out


def psi(z, range_sigma: float, d_sigma: float, gamma: float, a: float = 5.0, b: float = 5.0):
    """Pairwise action on a sigma-normed distance ``z``.

    Negative (repulsive) below ``d_sigma``, positive (cohesive) between
    ``d_sigma`` and ``range_sigma``, zero from ``range_sigma`` on.
    """
    if range_sigma <= 0:
        raise ParameterError("range_sigma must be positive")
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"gamma must lie in [0, 1], got {gamma}")
    z = np.asarray(z, dtype=float)
    return bump(z / range_sigma, gamma, 1.0) * uneven_sigmoid(z - d_sigma, a, b)
