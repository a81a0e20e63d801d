"""Bi-objective inventory routing: instances, evaluation, Pareto archive,
reference-point guided local search, and the interactive session service."""

from .archive import Archive, InsertResult, archive_csv, dominates, weak_dominance_filter_check
from .evaluation import (
    DeliveryPlan,
    EvaluationError,
    Evaluator,
    Outcome,
    PeriodVector,
    Solution,
    evaluate,
    neighbors,
)
from .instance import (
    Customer,
    GeneratorConfig,
    Instance,
    InstanceError,
    Point,
    generate,
    parse_instance,
    serialize_instance,
)
from .routing import Route, RoutingError, RoutingSolution, savings_value, solve_savings
from .runlog import ParsedRunLog, RunLogError, format_run_log, parse_run_log
from .scalarize import ReferencePoint, WeightVector, achievement, compute_weights, in_cone, progress_metric
from .search import (
    BUDGET_EXHAUSTED,
    CONE_EXITED,
    FRONTIER_EXHAUSTED,
    MODE_GUIDED,
    MODE_OFFLINE,
    USER_STOP,
    ConfigError,
    RunResult,
    RunTrace,
    SearchConfig,
    TracePoint,
    construct_initial_front,
    most_preferred,
    run_guided,
    run_offline,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
