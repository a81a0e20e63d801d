"""Identical-coverage front construction and the +-1 local searches (guided / offline)."""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .archive import Archive, InsertResult
from .evaluation import Evaluator, PeriodVector, Solution, neighbors
from .instance import Instance
from .scalarize import ReferencePoint, WeightVector, achievement, compute_weights, in_cone

BUDGET_EXHAUSTED = "budget_exhausted"
CONE_EXITED = "cone_exited"
FRONTIER_EXHAUSTED = "frontier_exhausted"
USER_STOP = "user_stop"

MODE_GUIDED = "guided"
MODE_OFFLINE = "offline"


class ConfigError(ValueError):
    """Invalid search configuration."""


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of one search run.

    `cone_warmup_evals` left unset derives as 1% of the budget (minimum 100,
    capped below the budget); it only matters in guided mode. `seed` is recorded
    for forward compatibility but drives nothing: every step is deterministic.
    """

    mode: str
    evaluation_budget: int
    reference_point: ReferencePoint | None = None
    cone_warmup_evals: int | None = None
    seed: int = 0
    trace_stride: int = 100

    def __post_init__(self):
        if self.mode not in (MODE_GUIDED, MODE_OFFLINE):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.evaluation_budget < 0:
            raise ConfigError("evaluation_budget must be >= 0")
        if self.trace_stride < 1:
            raise ConfigError("trace_stride must be >= 1")
        if self.mode == MODE_GUIDED and self.reference_point is None:
            raise ConfigError("guided mode requires a reference point")
        if self.cone_warmup_evals is not None:
            if self.cone_warmup_evals < 0:
                raise ConfigError("cone_warmup_evals must be >= 0")
            if self.cone_warmup_evals >= self.evaluation_budget:
                raise ConfigError("cone_warmup_evals must be smaller than the budget")

    @property
    def effective_warmup(self) -> int:
        if self.cone_warmup_evals is not None:
            return self.cone_warmup_evals
        derived = max(100, self.evaluation_budget // 100)
        return max(0, min(derived, self.evaluation_budget - 1))


@dataclass
class TracePoint:
    """One sampled state of a run. wall_ms is informational and never serialized:
    run logs must be byte-identical across repeated runs."""

    eval_index: int
    archive_size: int
    best_achievement: float | None = None
    in_cone_count: int | None = None
    wall_ms: int = 0


@dataclass
class RunTrace:
    points: list[TracePoint] = field(default_factory=list)
    termination_reason: str | None = None


@dataclass
class RunResult:
    archive: Archive
    trace: RunTrace
    evaluations: int
    weights: WeightVector | None
    most_preferred: Solution | None


def _as_evaluator(instance_or_evaluator) -> Evaluator:
    if isinstance(instance_or_evaluator, Evaluator):
        return instance_or_evaluator
    return Evaluator(instance_or_evaluator)


def construct_initial_front(instance_or_evaluator: Instance | Evaluator) -> Archive:
    """Rough first front from identical coverage values.

    Evaluates the all-m vector for m = 1, 2, 3, ... and stops at the first m whose
    insertion is rejected. Because coverage truncates at the horizon, m = T+1
    always duplicates m = T, so at most T+1 probes happen; the archive's
    insert_counter records where the loop stopped.
    """
    ev = _as_evaluator(instance_or_evaluator)
    n = ev.instance.n_customers
    archive = Archive()
    m = 1
    while True:
        sol = ev.evaluate((m,) * n)
        if archive.try_insert(sol, eval_index=m) is not InsertResult.ACCEPTED:
            return archive
        m += 1


def most_preferred(archive: Archive, r: ReferencePoint, w: WeightVector) -> Solution:
    """Archive member minimizing the achievement value (ties: lower g1, then g2)."""
    if not archive.entries:
        raise ValueError("archive is empty")
    return min(
        archive.members,
        key=lambda s: (achievement(s.outcome, r, w), s.outcome.inventory_g1, s.outcome.routing_g2),
    )


def run_guided(
    instance_or_evaluator,
    start: Archive,
    config: SearchConfig,
    weights: WeightVector | None = None,
    stop=None,
    observer: Callable[[TracePoint], None] | None = None,
) -> RunResult:
    """Expand the front toward the reference point, best-achievement first.

    Terminates on budget exhaustion, an empty frontier, or (after the warmup)
    an expansion round that starts outside the cone and accepts nothing inside it.
    """
    if config.mode != MODE_GUIDED:
        raise ConfigError("run_guided requires a guided-mode config")
    return _run(instance_or_evaluator, start, config, weights, stop, observer)


def run_offline(
    instance_or_evaluator,
    start: Archive,
    config: SearchConfig,
    weights: WeightVector | None = None,
    stop=None,
    observer: Callable[[TracePoint], None] | None = None,
) -> RunResult:
    """Expand the whole front without direction preference (FIFO frontier, no cone).

    A reference point, when present in the config, is used for trace reporting
    only.
    """
    if config.mode != MODE_OFFLINE:
        raise ConfigError("run_offline requires an offline-mode config")
    return _run(instance_or_evaluator, start, config, weights, stop, observer)


def _run(instance_or_evaluator, start, config, weights, stop, observer) -> RunResult:
    ev = _as_evaluator(instance_or_evaluator)
    horizon = ev.horizon
    guided = config.mode == MODE_GUIDED
    rp = config.reference_point
    budget = config.evaluation_budget
    stride = config.trace_stride
    warmup = config.effective_warmup

    if rp is not None and weights is None:
        weights = compute_weights([e.outcome for e in start.entries])

    archive = start.copy()
    # Frontier membership is decided once per vector, on first evaluation.
    # Offline mode enqueues every first-seen vector: truncation collapses
    # distinct vectors onto equal outcomes and dominated ridges can be the only
    # +-1 path into hidden front regions, so an exhaustive sweep must be able
    # to walk through both. Guided mode hillclimbs instead: only accepted
    # solutions and outcome-equal duplicates (plateau steps) are worth
    # expanding when the search is homing in on one reference point.
    if guided:
        frontier: list[Solution] = [e.solution for e in archive.entries]
        pending = None
    else:
        pending = deque(e.solution for e in archive.entries)
        frontier = None
    queued: set[PeriodVector] = {e.solution.pi for e in archive.entries}

    best: float | None = None
    if rp is not None and archive.entries:
        best = min(achievement(e.outcome, rp, weights) for e in archive.entries)

    trace = RunTrace()
    started = time.monotonic()
    evals = 0
    last_recorded = -1

    def record(idx: int):
        nonlocal last_recorded
        if idx <= last_recorded:
            return
        last_recorded = idx
        cone_count = None
        if rp is not None:
            cone_count = sum(1 for e in archive.entries if in_cone(e.outcome, rp))
        point = TracePoint(
            eval_index=idx,
            archive_size=len(archive),
            best_achievement=best if rp is not None else None,
            in_cone_count=cone_count,
            wall_ms=int((time.monotonic() - started) * 1000),
        )
        trace.points.append(point)
        if observer is not None:
            observer(point)

    record(0)
    reason = None
    while True:
        if stop is not None and stop.is_set():
            reason = USER_STOP
            break
        if evals >= budget:
            reason = BUDGET_EXHAUSTED
            break
        if guided:
            if not frontier:
                reason = FRONTIER_EXHAUSTED
                break
            pick = min(
                range(len(frontier)),
                key=lambda i: (
                    achievement(frontier[i].outcome, rp, weights),
                    frontier[i].outcome.inventory_g1,
                    frontier[i].outcome.routing_g2,
                ),
            )
            member = frontier.pop(pick)
        else:
            if not pending:
                reason = FRONTIER_EXHAUSTED
                break
            member = pending.popleft()

        member_in_cone = rp is not None and in_cone(member.outcome, rp)
        accepted_in_cone = False
        truncated = False
        for nb in neighbors(member.pi, horizon):
            if stop is not None and stop.is_set():
                reason = USER_STOP
                truncated = True
                break
            if evals >= budget:
                reason = BUDGET_EXHAUSTED
                truncated = True
                break
            evals += 1
            sol = ev.evaluate(nb, parent=member.pi)
            result = archive.try_insert(sol, eval_index=evals)
            accepted = result is InsertResult.ACCEPTED
            expandable = accepted or (
                not guided or result is InsertResult.REJECTED_DUPLICATE
            )
            if expandable and sol.pi not in queued:
                queued.add(sol.pi)
                if guided:
                    frontier.append(sol)
                else:
                    pending.append(sol)
            if accepted and rp is not None and in_cone(sol.outcome, rp):
                accepted_in_cone = True
            improved = False
            if rp is not None:
                a = achievement(sol.outcome, rp, weights)
                if best is None or a < best:
                    best = a
                    improved = True
            if improved or evals % stride == 0:
                record(evals)
        if truncated:
            break
        if guided and evals > warmup and not member_in_cone and not accepted_in_cone:
            reason = CONE_EXITED
            break

    record(evals)
    trace.termination_reason = reason
    preferred = None
    if rp is not None and archive.entries:
        preferred = most_preferred(archive, rp, weights)
    return RunResult(
        archive=archive,
        trace=trace,
        evaluations=evals,
        weights=weights,
        most_preferred=preferred,
    )
