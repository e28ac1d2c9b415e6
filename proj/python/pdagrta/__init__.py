"""Probabilistic response-time analysis for p-DAG tasks."""

from ._core import (
    CapExceededError,
    ConfigError,
    Error,
    InfeasibleError,
    ModelError,
    ParseError,
    ZeroAreaError,
    analyze,
    compare,
    enumerate_distribution,
    generate,
    min_cores,
    noar,
    run_cli,
    validate,
)

__all__ = [
    "CapExceededError",
    "ConfigError",
    "Error",
    "InfeasibleError",
    "ModelError",
    "ParseError",
    "ZeroAreaError",
    "analyze",
    "compare",
    "enumerate_distribution",
    "generate",
    "min_cores",
    "noar",
    "run_cli",
    "validate",
]
