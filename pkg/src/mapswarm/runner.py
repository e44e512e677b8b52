"""End-to-end simulation loop, parameter sweeps and the baseline comparison.

One step runs, in order: cluster the MSDs, match MSDs to MAPs, compute the
control inputs, integrate the MAP dynamics, apply due failure events, move
the MSDs, and record the metrics of the resulting state. The matching and
graph built for a record are reused by the next step's match stage, since
neither depends on the clustering.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .association import Assignment, match
from .baselines import circle_packing, p_median, score_placement
from .clustering import lloyd
from .controller import control_input
from .dynamics import step_dynamics
from .events import apply_failure, step_mobility
from .graph import ProximityGraph, build_graph, laplacian
from .metrics import (FIELDS, MetricsRecord, RecoveryReport, coverage_fraction, fiedler_value,
                      info_penetration, recovery_report)
from .model import (ConfigError, FailureEvent, MapState, MsdState, ScenarioConfig, SimulationState,
                    rng_streams, sample_initial_state)

log = logging.getLogger(__name__)

STAGES = ("cluster", "match", "control", "integrate", "failure", "mobility", "record")


class SimulationError(RuntimeError):
    def __init__(self, step: int, cause: Exception):
        super().__init__(f"step {step}: {type(cause).__name__}: {cause}")
        self.step = step
        self.cause = cause


@dataclass
class RunOutput:
    config: ScenarioConfig
    seed: int
    records: list[MetricsRecord]
    snapshots: list[dict] = field(default_factory=list)
    recovery: list[list[RecoveryReport]] = field(default_factory=list)
    trace: list[tuple[int, str]] | None = None
    final_state: SimulationState | None = None

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def window_mean(self, window: float | None = None) -> MetricsRecord:
        return final_window_mean(self.records, self.config.recovery_window if window is None else window)


def final_window_mean(records: list[MetricsRecord], window: float) -> MetricsRecord:
    t_end = records[-1].t
    sel = [r for r in records if r.t >= t_end - window - 1e-9]
    return MetricsRecord(
        t=t_end,
        coverage=float(np.mean([r.coverage for r in sel])),
        fiedler=float(np.mean([r.fiedler for r in sel])),
        info_penetration=float(np.mean([r.info_penetration for r in sel])),
        alive_maps=records[-1].alive_maps,
    )


class Simulation:
    """Mutable simulation driven one step at a time."""

    def __init__(self, config: ScenarioConfig, trace: bool = False):
        if config.n_msds < 1:
            raise ConfigError("a simulation needs at least one MSD")
        self.cfg = config
        self.rngs = rng_streams(config.seed)
        self.state = sample_initial_state(config, self.rngs["placement"])
        self.events = sorted(config.failure_events, key=lambda e: e.time)
        self._applied = [False] * len(self.events)
        self.trace: list[tuple[int, str]] | None = [] if trace else None
        self._obs: tuple[Assignment, ProximityGraph] | None = None
        self._apply_due_events()

    def _log(self, stage: str):
        if self.trace is not None:
            self.trace.append((self.state.step_index, stage))

    def _apply_due_events(self):
        maps = self.state.maps
        for k, ev in enumerate(self.events):
            if not self._applied[k] and self.state.t >= ev.time - 1e-9:
                alive = apply_failure(maps.alive, ev.fraction, self.rngs["failure"])
                died = maps.alive & ~alive
                maps.alive = alive
                maps.load[died] = 0
                self._applied[k] = True
                self._obs = None
                log.debug("t=%.2f: %d MAPs failed", self.state.t, int(died.sum()))

    def observe(self) -> tuple[Assignment, ProximityGraph]:
        """Matching and proximity graph of the current state (cached until the state changes)."""
        if self._obs is None:
            cfg, st = self.cfg, self.state
            ids = st.maps.alive_ids
            assignment = match(st.msds.positions, st.maps.positions, cfg.comm_range, cfg.capacity,
                               st.maps.alive)
            graph = build_graph(st.maps.positions[ids], cfg.comm_range, cfg.epsilon, cfg.gamma, ids)
            st.msds.assigned = assignment.pairs
            st.msds.covered = assignment.covered
            st.maps.load = assignment.loads
            self._obs = (assignment, graph)
        return self._obs

    def metrics(self) -> MetricsRecord:
        assignment, graph = self.observe()
        return MetricsRecord(
            t=self.state.t,
            coverage=coverage_fraction(assignment.covered, self.cfg.n_msds),
            fiedler=fiedler_value(laplacian(graph)),
            info_penetration=info_penetration(graph.count_degree, self.cfg.tau),
            alive_maps=graph.n,
        )

    def cluster(self):
        cfg, st = self.cfg, self.state
        init = st.cluster_centers if len(st.cluster_centers) == cfg.n_clusters else None
        clusters = lloyd(st.msds.positions, cfg.n_clusters, init=init, rng=self.rngs["clustering"],
                         max_iters=cfg.lloyd_max_iters, tol=cfg.lloyd_tol)
        st.cluster_centers = clusters.centers
        return clusters

    def step(self) -> MetricsRecord:
        cfg, st = self.cfg, self.state
        self._log("cluster")
        self.cluster()
        self._log("match")
        assignment, graph = self.observe()
        self._log("control")
        ids = graph.ids
        maps = st.maps
        u = control_input(maps.positions[ids], maps.velocities[ids], assignment.loads[ids],
                          st.cluster_centers, graph, cfg)
        self._log("integrate")
        q, p = step_dynamics(maps.positions[ids], maps.velocities[ids], u, cfg.ts, cfg.scheme, ids=ids)
        maps.positions[ids] = q
        maps.velocities[ids] = p
        st.step_index += 1
        st.t = st.step_index * cfg.ts
        self._obs = None
        self._log("failure")
        self._apply_due_events()
        self._log("mobility")
        st.msds.positions = step_mobility(st.msds.positions, cfg.mobility_scale, self.rngs["mobility"])
        self._log("record")
        return self.metrics()

    def snapshot(self) -> dict:
        st = self.state
        return {
            "t": st.t,
            "step": st.step_index,
            "msd_positions": st.msds.positions.tolist(),
            "msd_assigned": st.msds.assigned.tolist(),
            "msd_covered": st.msds.covered.tolist(),
            "map_positions": st.maps.positions.tolist(),
            "map_velocities": st.maps.velocities.tolist(),
            "map_alive": st.maps.alive.tolist(),
            "map_load": st.maps.load.tolist(),
            "cluster_centers": np.asarray(st.cluster_centers).tolist(),
        }


def run(config: ScenarioConfig, trace: bool = False, snapshots: bool = True) -> RunOutput:
    """Simulate ``config`` from t = 0 to ``t_end``; one record per step plus the initial one."""
    sim = Simulation(config, trace=trace)
    records = [sim.metrics()]
    snaps = []
    every = max(1, config.snapshot_every)
    if snapshots:
        snaps.append(sim.snapshot())
    n_steps = config.n_steps
    for k in range(n_steps):
        try:
            records.append(sim.step())
        except Exception as exc:
            raise SimulationError(k, exc) from exc
        if snapshots and (sim.state.step_index % every == 0 or k == n_steps - 1):
            snaps.append(sim.snapshot())
    reports = []
    for ev in sim.events:
        if ev.time <= records[-1].t:
            try:
                reports.append(recovery_report(records, ev.time, config.recovery_window))
            except ValueError as exc:
                log.warning("no recovery report for event at t=%s: %s", ev.time, exc)
    return RunOutput(config, config.seed, records, snaps, reports, sim.trace, sim.state)


def state_from_snapshot(snap: dict) -> SimulationState:
    msds = MsdState.at(snap["msd_positions"])
    msds.assigned = np.asarray(snap["msd_assigned"], dtype=np.int64)
    msds.covered = np.asarray(snap["msd_covered"], dtype=bool)
    maps = MapState.at(snap["map_positions"], snap["map_velocities"])
    maps.alive = np.asarray(snap["map_alive"], dtype=bool)
    maps.load = np.asarray(snap["map_load"], dtype=np.int64)
    centers = np.asarray(snap["cluster_centers"], dtype=float).reshape(-1, 2)
    return SimulationState(snap["t"], snap["step"], msds, maps, centers)


def metrics_csv(records: list[MetricsRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow([repr(float(r.t)), repr(r.coverage), repr(r.fiedler), repr(r.info_penetration),
                         r.alive_maps])
    return buf.getvalue()


def output_document(out: RunOutput) -> dict:
    return {
        "seed": out.seed,
        "config": out.config.to_dict(),
        "snapshots": out.snapshots,
        "recovery": [[vars(r) for r in reps] for reps in out.recovery],
        "final": out.records[-1].as_dict(),
    }


def output_json(out: RunOutput) -> str:
    return json.dumps(output_document(out), indent=1)


# sweeps ---------------------------------------------------------------------

SWEEPABLE = {
    "L": "n_maps", "n_maps": "n_maps",
    "s": "mobility_scale", "mobility_scale": "mobility_scale",
    "K": "n_clusters", "n_clusters": "n_clusters",
    "failure_fraction": "failure_fraction", "fraction": "failure_fraction",
}
DEFAULT_FAILURE_TIME = 10.0


def vary_config(config: ScenarioConfig, vary: str, value) -> ScenarioConfig:
    if vary not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {vary!r}; choose from {sorted(SWEEPABLE)}")
    attr = SWEEPABLE[vary]
    if attr == "failure_fraction":
        t = config.failure_events[0].time if config.failure_events else DEFAULT_FAILURE_TIME
        return config.replace(failure_events=[FailureEvent(t, float(value))])
    if attr in ("n_maps", "n_clusters"):
        value = int(value)
    return config.replace(**{attr: value})


def sweep(config: ScenarioConfig, vary: str, values) -> list[tuple[object, MetricsRecord]]:
    """Run one seeded simulation per value and average each over its final window."""
    out = []
    for v in values:
        cfg = vary_config(config, vary, v)
        out.append((v, run(cfg, snapshots=False).window_mean()))
    return out


METHODS = ("dynamic", "p-median", "circle-packing")


def compare(config: ScenarioConfig, map_counts, methods=METHODS, restarts: int = 10) -> dict[str, list]:
    """Dynamic placement against the static baselines with MSD mobility switched off.

    Every method sees the same MSD sample (the one drawn for ``config.seed``).
    """
    static_cfg = config.replace(mobility_scale=0.0, failure_events=[])
    msds = sample_initial_state(static_cfg, rng_streams(config.seed)["placement"]).msds.positions
    results: dict[str, list] = {m: [] for m in methods}
    for n in map_counts:
        cfg = static_cfg.replace(n_maps=int(n))
        for m in methods:
            if m == "dynamic":
                rec = run(cfg, snapshots=False).window_mean()
            elif m == "p-median":
                rng = rng_streams(config.seed)["baseline"]
                rec = score_placement(p_median(msds, int(n), rng, restarts).positions, msds, cfg)
            elif m == "circle-packing":
                rng = rng_streams(config.seed)["baseline"]
                rec = score_placement(circle_packing(msds, int(n), cfg.min_sep, rng).positions, msds, cfg)
            else:
                raise ConfigError(f"unknown method {m!r}")
            results[m].append((int(n), rec))
    return results
