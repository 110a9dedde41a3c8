"""Python access to the scenario runner and the closed-form error bound."""

import json
import os

from ._core import (
    DegenerateGeometryError,
    Error,
    InfeasibleError,
    OracleCapError,
    Scenario,
    ScenarioResult,
    UndefinedMetricError,
    ValidationError,
    epsilon_delta,
    evaluate_bounds,
    load_scenario,
    parse_scenario,
    run_scenario,
)

__all__ = [
    "DegenerateGeometryError",
    "Error",
    "InfeasibleError",
    "OracleCapError",
    "Scenario",
    "ScenarioResult",
    "UndefinedMetricError",
    "ValidationError",
    "epsilon_delta",
    "evaluate_bounds",
    "load_scenario",
    "metrics",
    "parse_scenario",
    "run",
    "run_scenario",
]


def run(scenario, seeds=None):
    """Run a scenario given as a dict, a JSON string or a path."""
    if isinstance(scenario, dict):
        sc = parse_scenario(json.dumps(scenario))
    elif isinstance(scenario, (str, os.PathLike)) and os.path.exists(scenario):
        sc = load_scenario(os.fspath(scenario))
    else:
        sc = parse_scenario(scenario)
    if seeds is not None:
        sc.seeds = list(seeds)
        sc.validate()
    return run_scenario(sc)


def metrics(result):
    """Per-seed metric records of a result as dicts."""
    return [json.loads(line) for line in result.metrics_json]
