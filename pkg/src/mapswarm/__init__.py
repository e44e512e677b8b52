"""Connectivity-aware placement of mobile access points over moving ground devices."""

from .model import ConfigError, FailureEvent, GmmComponent, ScenarioConfig, load_config, save_config
from .metrics import MetricsRecord, RecoveryReport
from .runner import RunOutput, Simulation, SimulationError, compare, run, sweep

__all__ = [
    "ConfigError", "FailureEvent", "GmmComponent", "ScenarioConfig", "load_config", "save_config",
    "MetricsRecord", "RecoveryReport", "RunOutput", "Simulation", "SimulationError", "compare", "run", "sweep",
]
__version__ = "0.1.0"
