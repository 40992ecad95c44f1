"""Discrete-time network routing on wave traffic.

Packets move hop by hop over router graphs whose per-step cost depends on a
windowed load average. Routing is either myopic shortest-path or learned from
a collective payoff that is shaped to stay aligned with the network total.
The package also carries the static companion analyses: one-shot path games
and threshold load balancing between two links.
"""

from .agents import (POLICY_NAMES, TrainingExample, TrainingSet, bootstrap,
                     make_policy, run)
from .engine import (RunResult, Simulation, SimulationError, WaveSchedule,
                     WaveSnapshot, world_reward, world_utility)
from .equilibrium import (EquilibriumError, PlayResult,
                          best_response_equilibrium, coordinated_optimum,
                          evaluate_assignment, greedy_choices, travelers_of)
from .harness import (BraessReport, HarnessError, ResultTable, Scenario,
                      SweepResult, TableRow, braess_report, bundled_scenarios,
                      emit, load_scenario, parse_scenario_file, run_scenario,
                      steering_sweep)
from .loadbalance import (BoundsError, BoundsReport, ThresholdModel,
                          argmin_upper, lower_bound, simulate_threshold,
                          solve_klb, upper_bound, verdict)
from .netmodel import (AgentKey, CostSpec, Topology, TopologyError, all_paths,
                       build_topology, parse_cost_spec, parse_scenario,
                       serialize_topology)
from .wlu import (CoordinateError, PathChoiceGame, clamp, effect_set,
                  factoredness_probe, wlr, wlr_residual, wlr_window, wlu)

__version__ = "0.1.0"

__all__ = [
    "AgentKey", "BoundsError", "BoundsReport", "BraessReport", "CoordinateError",
    "CostSpec", "EquilibriumError", "HarnessError", "POLICY_NAMES",
    "PathChoiceGame", "PlayResult", "ResultTable", "RunResult", "Scenario",
    "Simulation", "SimulationError", "SweepResult", "TableRow",
    "ThresholdModel", "Topology", "TopologyError", "TrainingExample",
    "TrainingSet", "WaveSchedule", "WaveSnapshot", "all_paths", "argmin_upper",
    "best_response_equilibrium", "bootstrap", "braess_report",
    "build_topology", "bundled_scenarios", "clamp", "coordinated_optimum",
    "effect_set", "emit", "evaluate_assignment", "factoredness_probe",
    "greedy_choices", "load_scenario", "lower_bound", "make_policy",
    "parse_cost_spec", "parse_scenario", "parse_scenario_file",
    "run", "run_scenario", "serialize_topology", "simulate_threshold",
    "solve_klb", "steering_sweep", "travelers_of", "upper_bound", "verdict",
    "wlr", "wlr_residual", "wlr_window", "wlu", "world_reward",
    "world_utility",
]
