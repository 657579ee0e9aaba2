"""Pulse-radar receiver simulator with a DIAGC card model."""
from .config import load_config, parse_config
from .diagc import DiagcCard, DiagcConfig, process_dwell
from .estimators import DiagcController, MtiCanceller
from .exceptions import ConfigurationError, ContractViolation, ScenarioError
from .pipeline import VARIANTS, SimulationConfig, simulate_dwell

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "ContractViolation", "DiagcCard", "DiagcConfig", "DiagcController",
    "MtiCanceller", "ScenarioError", "SimulationConfig", "VARIANTS", "load_config",
    "parse_config", "process_dwell", "simulate_dwell",
]
