"""Scenario configuration, simulation state and initial sampling.

Entity ids are 0-based array indices. MSD and MAP records are stored as
struct-of-arrays so the per-step computations stay vectorized.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class GmmComponent:
    weight: float
    mean: tuple[float, float]
    cov: tuple[tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class FailureEvent:
    time: float
    fraction: float


def _default_gmm() -> list[GmmComponent]:
    w = 1.0 / 3.0
    return [
        GmmComponent(w, (50.0, 20.0), ((200.0, 0.0), (0.0, 100.0))),
        GmmComponent(w, (0.0, -50.0), ((500.0, 0.0), (0.0, 200.0))),
        GmmComponent(w, (-40.0, 40.0), ((150.0, 0.0), (0.0, 300.0))),
    ]


STREAMS = ("placement", "mobility", "failure", "clustering", "baseline")


@dataclass
class ScenarioConfig:
    n_msds: int = 2000
    n_maps: int = 80
    comm_range: float = 24.0
    min_sep: float = 20.0
    epsilon: float = 0.1
    capacity: int = 80
    elevation: float = 20.0
    n_clusters: int = 3
    gamma: float = 0.2
    a: float = 5.0
    b: float = 5.0
    c1: float = 0.2
    c2: float = 0.1
    mobility_scale: float = 0.2
    tau: float = 1.0
    ts: float = 0.01
    t_end: float = 25.0
    kappa: float = 1.0
    eta: float = 4.0
    gmm: list[GmmComponent] = field(default_factory=_default_gmm)
    # (xmin, xmax, ymin, ymax); None derives the box from the GMM
    map_region: tuple[float, float, float, float] | None = None
    map_velocity_box: tuple[float, float] = (-2.0, -1.0)
    failure_events: list[FailureEvent] = field(default_factory=list)
    seed: int = 0
    scheme: str = "exact-hold"
    u_max: float | None = None
    lloyd_tol: float = 1e-3
    lloyd_max_iters: int = 100
    snapshot_every: int = 100
    recovery_window: float = 2.0

    def __post_init__(self):
        self.gmm = [c if isinstance(c, GmmComponent) else _gmm_from_dict(c) for c in self.gmm]
        self.failure_events = [
            e if isinstance(e, FailureEvent) else FailureEvent(float(e["time"]), float(e["fraction"]))
            for e in self.failure_events
        ]
        if self.map_region is not None:
            self.map_region = tuple(float(v) for v in self.map_region)
        self.map_velocity_box = tuple(float(v) for v in self.map_velocity_box)
        self.validate()

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.ts))

    def validate(self) -> None:
        if self.n_msds < 0 or self.n_maps < 0:
            raise ConfigError("entity counts must be non-negative")
        if not 0 <= self.min_sep < self.comm_range:
            raise ConfigError(f"need 0 <= min_sep < comm_range, got {self.min_sep}, {self.comm_range}")
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in [0, 1), got {self.gamma}")
        if self.epsilon <= 0 or self.a <= 0 or self.b <= 0:
            raise ConfigError("epsilon, a and b must be positive")
        if self.capacity <= 0:
            raise ConfigError("capacity must be positive")
        if self.ts <= 0 or self.t_end < 0:
            raise ConfigError("need ts > 0 and t_end >= 0")
        if self.n_clusters < 1:
            raise ConfigError("n_clusters must be >= 1")
        if self.mobility_scale < 0 or self.tau < 0:
            raise ConfigError("mobility_scale and tau must be non-negative")
        if self.scheme not in ("exact-hold", "forward-difference"):
            raise ConfigError(f"unknown integration scheme {self.scheme!r}")
        if not self.gmm:
            raise ConfigError("gmm needs at least one component")
        for comp in self.gmm:
            if comp.weight < 0:
                raise ConfigError("gmm weights must be non-negative")
            covariance_factor(comp.cov)
        if sum(c.weight for c in self.gmm) <= 0:
            raise ConfigError("gmm weights sum to zero")
        for ev in self.failure_events:
            if not 0.0 <= ev.fraction < 1.0:
                raise ConfigError(f"failure fraction must lie in [0, 1), got {ev.fraction}")
        lo, hi = self.map_velocity_box
        if lo > hi:
            raise ConfigError("map_velocity_box must be (low, high)")

    def replace(self, **changes) -> ScenarioConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["gmm"] = [
            {"weight": c.weight, "mean": list(c.mean), "cov": [list(row) for row in c.cov]}
            for c in self.gmm
        ]
        out["failure_events"] = [{"time": e.time, "fraction": e.fraction} for e in self.failure_events]
        out["map_region"] = None if self.map_region is None else list(self.map_region)
        out["map_velocity_box"] = list(self.map_velocity_box)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ScenarioConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except (TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc


def _gmm_from_dict(d: dict) -> GmmComponent:
    try:
        mean = tuple(float(v) for v in d["mean"])
        cov = tuple(tuple(float(v) for v in row) for row in d["cov"])
        weight = float(d["weight"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad gmm component {d!r}") from exc
    if len(mean) != 2 or len(cov) != 2 or any(len(row) != 2 for row in cov):
        raise ConfigError("gmm mean must be a 2-vector and cov a 2x2 matrix")
    return GmmComponent(weight, mean, cov)


def covariance_factor(cov) -> np.ndarray:
    """Lower factor ``F`` with ``F @ F.T == cov``.

    Cholesky for positive-definite input; singular PSD matrices (e.g. all
    zeros) fall back to a symmetric eigen square root.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
        raise ConfigError("covariance must be a finite 2x2 matrix")
    if not np.allclose(cov, cov.T, rtol=0, atol=1e-12 * max(1.0, np.abs(cov).max())):
        raise ConfigError("covariance must be symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    w, v = np.linalg.eigh(cov)
    if w.min() < -1e-12 * max(1.0, np.abs(w).max()):
        raise ConfigError("covariance must be positive semi-definite")
    return v * np.sqrt(np.clip(w, 0.0, None))


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return ScenarioConfig.from_dict(data)


def dump_config(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False)


def save_config(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dump_config(config))


def rng_streams(seed: int) -> dict[str, np.random.Generator]:
    """Independent named generators derived from one seed."""
    return {
        name: np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        for i, name in enumerate(STREAMS)
    }


@dataclass
class MsdState:
    positions: np.ndarray              # (M, 2)
    assigned: np.ndarray               # (M,) MAP id or -1
    covered: np.ndarray                # (M,) bool

    @classmethod
    def at(cls, positions) -> MsdState:
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        m = len(positions)
        return cls(positions, np.full(m, -1, dtype=np.int64), np.zeros(m, dtype=bool))

    def __len__(self):
        return len(self.positions)


@dataclass
class MapState:
    positions: np.ndarray              # (L, 2)
    velocities: np.ndarray             # (L, 2)
    alive: np.ndarray                  # (L,) bool
    load: np.ndarray                   # (L,) int

    @classmethod
    def at(cls, positions, velocities=None) -> MapState:
        positions = np.asarray(positions, dtype=float).reshape(-1, 2)
        n = len(positions)
        if velocities is None:
            velocities = np.zeros((n, 2))
        return cls(positions, np.asarray(velocities, dtype=float).reshape(-1, 2),
                   np.ones(n, dtype=bool), np.zeros(n, dtype=np.int64))

    def __len__(self):
        return len(self.positions)

    @property
    def alive_ids(self) -> np.ndarray:
        return np.flatnonzero(self.alive)


@dataclass
class SimulationState:
    t: float
    step_index: int
    msds: MsdState
    maps: MapState
    cluster_centers: np.ndarray        # (K, 2)


def default_map_region(gmm: list[GmmComponent]) -> tuple[float, float, float, float]:
    """Bounding box of the mixture means inflated by two standard deviations per axis."""
    lo = np.array([np.inf, np.inf])
    hi = -lo
    for comp in gmm:
        mean = np.asarray(comp.mean)
        sd = np.sqrt(np.diag(np.asarray(comp.cov)))
        lo = np.minimum(lo, mean - 2 * sd)
        hi = np.maximum(hi, mean + 2 * sd)
    return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])


def sample_gmm(gmm: list[GmmComponent], n: int, rng: np.random.Generator) -> np.ndarray:
    weights = np.array([c.weight for c in gmm], dtype=float)
    weights /= weights.sum()
    labels = rng.choice(len(gmm), size=n, p=weights)
    z = rng.standard_normal((n, 2))
    means = np.array([c.mean for c in gmm], dtype=float)
    factors = np.array([covariance_factor(c.cov) for c in gmm])
    return means[labels] + np.einsum("nij,nj->ni", factors[labels], z)


def sample_initial_state(config: ScenarioConfig, rng: np.random.Generator | None = None) -> SimulationState:
    """Draw MSDs from the mixture and scatter MAPs uniformly over the start region."""
    if rng is None:
        rng = rng_streams(config.seed)["placement"]
    msd_pos = sample_gmm(config.gmm, config.n_msds, rng)
    xmin, xmax, ymin, ymax = config.map_region or default_map_region(config.gmm)
    n = config.n_maps
    map_pos = np.column_stack([rng.uniform(xmin, xmax, n), rng.uniform(ymin, ymax, n)])
    lo, hi = config.map_velocity_box
    map_vel = rng.uniform(lo, hi, (n, 2))
    return SimulationState(
        t=0.0,
        step_index=0,
        msds=MsdState.at(msd_pos),
        maps=MapState.at(map_pos, map_vel),
        cluster_centers=np.zeros((0, 2)),
    )
