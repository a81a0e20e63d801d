"""Interactive session host: builds the rough front at session creation, runs
searches on background threads, serves trace polls, and persists run logs."""
from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .archive import Archive, archive_csv
from .evaluation import Evaluator
from .instance import Instance, InstanceError, parse_instance, serialize_instance
from .runlog import format_final, format_header, format_point, parse_run_log
from .scalarize import ReferencePoint, WeightVector, compute_weights
from .search import (
    MODE_GUIDED,
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

STATUS_RUNNING = "running"
STATUS_FINISHED = "finished"
STATUS_STOPPED = "stopped"

EXPORT_FORMATS = ("front_csv", "run_log", "plan_json")


class ServiceError(Exception):
    """Structured error carried to API clients as {code, message, field?}."""

    def __init__(self, code: str, message: str, field: str | None = None, status: int = 400):
        super().__init__(message)
        self.code = code
        self.message = message
        self.field = field
        self.status = status

    def to_json(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.field is not None:
            doc["field"] = self.field
        return doc


@dataclass
class RunHandle:
    run_id: str
    config: SearchConfig
    weights: WeightVector | None
    status: str = STATUS_RUNNING
    trace: RunTrace = field(default_factory=RunTrace)
    result: RunResult | None = None
    evaluations: int | None = None
    most_preferred_summary: dict | None = None
    front_csv: str | None = None
    stop_event: threading.Event = field(default_factory=threading.Event)
    thread: threading.Thread | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    log_path: Path | None = None
    _log_file = None

    def point_records(self, since: int) -> list[dict]:
        with self.lock:
            points = [p for p in self.trace.points if p.eval_index > since]
        return [json.loads(format_point(p)) for p in points]


@dataclass
class Session:
    session_id: str
    instance: Instance
    evaluator: Evaluator
    approximation: Archive
    construction_ms: int
    weights: WeightVector | None = None
    runs: dict[str, RunHandle] = field(default_factory=dict)


def _front_entries(archive: Archive) -> list[dict]:
    rows = sorted(
        archive.entries, key=lambda e: (e.outcome.inventory_g1, e.outcome.routing_g2)
    )
    return [
        {"g1": e.outcome.inventory_g1, "g2": e.outcome.routing_g2, "pi": list(e.solution.pi)}
        for e in rows
    ]


class SessionService:
    """In-process API behind both the HTTP host and direct library use.

    Run logs (and per-session instance documents) are persisted under
    `log_dir/{session}/` when a log directory is configured; finished runs are
    reconstructable from those files alone.
    """

    def __init__(self, log_dir: str | Path | None = None, run_limit: int = 4):
        self.log_dir = Path(log_dir) if log_dir is not None else None
        self.run_limit = run_limit
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- sessions ----------------------------------------------------------

    def create_session(self, instance_source: str | Path | dict | Instance) -> dict:
        instance = self._load_instance(instance_source)
        evaluator = Evaluator(instance)
        started = time.monotonic()
        approximation = construct_initial_front(evaluator)
        construction_ms = int((time.monotonic() - started) * 1000)
        session = Session(
            session_id=uuid.uuid4().hex[:12],
            instance=instance,
            evaluator=evaluator,
            approximation=approximation,
            construction_ms=construction_ms,
        )
        with self._lock:
            self.sessions[session.session_id] = session
        if self.log_dir is not None:
            sdir = self.log_dir / session.session_id
            sdir.mkdir(parents=True, exist_ok=True)
            (sdir / "instance.json").write_text(serialize_instance(instance), encoding="utf-8")
        return self.session_summary(session.session_id)

    def session_summary(self, session_id: str) -> dict:
        session = self._session(session_id)
        return {
            "session_id": session.session_id,
            "name": session.instance.name,
            "n_customers": session.instance.n_customers,
            "horizon": session.instance.horizon,
            "construction_ms": session.construction_ms,
            "front": _front_entries(session.approximation),
            "weights": list(session.weights) if session.weights is not None else None,
        }

    def _load_instance(self, source) -> Instance:
        try:
            if isinstance(source, Instance):
                return source
            if isinstance(source, dict):
                return parse_instance(json.dumps(source))
            if isinstance(source, Path):
                return parse_instance(source.read_text(encoding="utf-8"))
            if isinstance(source, str):
                if "\n" not in source and os.path.exists(source):
                    return parse_instance(Path(source).read_text(encoding="utf-8"))
                return parse_instance(source)
        except InstanceError as exc:
            raise ServiceError("parse_error", str(exc), field="instance", status=422) from exc
        except OSError as exc:
            raise ServiceError("parse_error", f"cannot read instance: {exc}", field="instance", status=422) from exc
        raise ServiceError("bad_request", f"unsupported instance source {type(source).__name__}", status=400)

    def _session(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError("unknown_session", f"no session {session_id!r}", status=404)
        return session

    def _run_handle(self, session_id: str, run_id: str) -> tuple[Session, RunHandle]:
        session = self._session(session_id)
        handle = session.runs.get(run_id)
        if handle is None:
            raise ServiceError("unknown_run", f"no run {run_id!r} in session {session_id!r}", status=404)
        return session, handle

    # -- runs ----------------------------------------------------------------

    def start_run(
        self,
        session_id: str,
        mode: str,
        reference_point=None,
        evaluation_budget: int = 10_000,
        cone_warmup_evals: int | None = None,
        trace_stride: int = 100,
        seed: int = 0,
        wait: bool = False,
    ) -> dict:
        session = self._session(session_id)
        rp = None
        if reference_point is not None:
            try:
                r1, r2 = reference_point
                rp = ReferencePoint(float(r1), float(r2))
            except (TypeError, ValueError) as exc:
                raise ServiceError(
                    "bad_request", "reference_point must be a (g1, g2) pair",
                    field="reference_point", status=422,
                ) from exc
        if mode == MODE_GUIDED and rp is None:
            raise ServiceError(
                "missing_reference_point", "guided mode requires a reference point",
                field="reference_point", status=422,
            )
        try:
            config = SearchConfig(
                mode=mode,
                evaluation_budget=evaluation_budget,
                reference_point=rp,
                cone_warmup_evals=cone_warmup_evals,
                seed=seed,
                trace_stride=trace_stride,
            )
        except ConfigError as exc:
            raise ServiceError("bad_request", str(exc), status=422) from exc

        with self._lock:
            running = sum(1 for h in session.runs.values() if h.status == STATUS_RUNNING)
            if running >= self.run_limit:
                raise ServiceError(
                    "run_limit", f"session already has {running} active runs (limit {self.run_limit})",
                    status=409,
                )
            if rp is not None and session.weights is None:
                session.weights = compute_weights([e.outcome for e in session.approximation.entries])
            handle = RunHandle(
                run_id=uuid.uuid4().hex[:12],
                config=config,
                weights=session.weights if rp is not None else None,
            )
            session.runs[handle.run_id] = handle

        if self.log_dir is not None:
            sdir = self.log_dir / session.session_id
            sdir.mkdir(parents=True, exist_ok=True)
            handle.log_path = sdir / f"{handle.run_id}.log"
            handle._log_file = handle.log_path.open("w", encoding="utf-8", newline="\n")
            handle._log_file.write(format_header(session.instance.name, config, handle.weights) + "\n")
            handle._log_file.flush()

        handle.thread = threading.Thread(
            target=self._execute_run, args=(session, handle), daemon=True
        )
        handle.thread.start()
        if wait:
            handle.thread.join()
        return {"run_id": handle.run_id, "status": handle.status}

    def _execute_run(self, session: Session, handle: RunHandle):
        def observe(point: TracePoint):
            with handle.lock:
                handle.trace.points.append(point)
            if handle._log_file is not None:
                handle._log_file.write(format_point(point) + "\n")
                handle._log_file.flush()

        runner = run_guided if handle.config.mode == MODE_GUIDED else run_offline
        result = runner(
            session.evaluator,
            session.approximation,
            handle.config,
            weights=handle.weights,
            stop=handle.stop_event,
            observer=observe,
        )
        summary = None
        if result.most_preferred is not None:
            summary = {
                "pi": list(result.most_preferred.pi),
                "g1": result.most_preferred.outcome.inventory_g1,
                "g2": result.most_preferred.outcome.routing_g2,
            }
        front = archive_csv(result.archive)
        with handle.lock:
            handle.result = result
            handle.evaluations = result.evaluations
            handle.trace.termination_reason = result.trace.termination_reason
            handle.most_preferred_summary = summary
            handle.front_csv = front
            handle.status = (
                STATUS_STOPPED if result.trace.termination_reason == USER_STOP else STATUS_FINISHED
            )
        if handle._log_file is not None:
            handle._log_file.write(
                format_final(result.trace.termination_reason, result.evaluations, result.most_preferred)
                + "\n"
            )
            handle._log_file.close()
            handle._log_file = None
            handle.log_path.with_suffix(".front.csv").write_text(front, encoding="utf-8")

    def poll_trace(self, session_id: str, run_id: str, since: int = -1) -> dict:
        _, handle = self._run_handle(session_id, run_id)
        doc = {
            "points": handle.point_records(since),
            "status": handle.status,
            "termination_reason": handle.trace.termination_reason,
        }
        if handle.status != STATUS_RUNNING:
            doc["most_preferred"] = handle.most_preferred_summary
        return doc

    def stop_run(self, session_id: str, run_id: str, join_timeout: float = 30.0) -> dict:
        _, handle = self._run_handle(session_id, run_id)
        if handle.status == STATUS_RUNNING:
            handle.stop_event.set()
            if handle.thread is not None:
                handle.thread.join(timeout=join_timeout)
        return {"run_id": run_id, "status": handle.status}

    def export(self, session_id: str, run_id: str, format: str) -> tuple[bytes, str]:
        session, handle = self._run_handle(session_id, run_id)
        if format not in EXPORT_FORMATS:
            raise ServiceError(
                "unknown_format", f"format must be one of {', '.join(EXPORT_FORMATS)}",
                field="format", status=400,
            )
        if handle.status == STATUS_RUNNING:
            raise ServiceError("run_active", "run is still running; stop it or wait", status=409)

        if format == "run_log":
            lines = [format_header(session.instance.name, handle.config, handle.weights)]
            lines.extend(format_point(p) for p in handle.trace.points)
            evaluations = handle.evaluations
            if evaluations is None:
                evaluations = handle.trace.points[-1].eval_index if handle.trace.points else 0
            rec = {
                "record": "final",
                "termination_reason": handle.trace.termination_reason,
                "evaluations": evaluations,
            }
            if handle.most_preferred_summary is not None:
                rec["most_preferred"] = handle.most_preferred_summary
            lines.append(json.dumps(rec, separators=(",", ":")))
            return ("\n".join(lines) + "\n").encode(), "application/x-ndjson"

        if format == "front_csv":
            if handle.front_csv is None:
                raise ServiceError("no_result", "run has no archive snapshot", status=409)
            return handle.front_csv.encode(), "text/csv"

        # plan_json
        summary = handle.most_preferred_summary
        if summary is None:
            raise ServiceError(
                "no_reference_point",
                "plan_json needs a run with a reference point (no most-preferred solution)",
                status=422,
            )
        solution = session.evaluator.evaluate_full(tuple(summary["pi"]))
        doc = {
            "pi": list(solution.pi),
            "outcome": {
                "inventory_g1": solution.outcome.inventory_g1,
                "routing_g2": solution.outcome.routing_g2,
            },
            "quantities": [list(row) for row in solution.plan.quantities],
            "end_inventory": [list(row) for row in solution.plan.end_inventory],
            "per_period_routes": [
                {
                    "routes": [
                        {
                            "customer_sequence": list(r.customer_sequence),
                            "load": r.load,
                            "length": r.length,
                        }
                        for r in rs.routes
                    ],
                    "total_distance": rs.total_distance,
                }
                for rs in solution.plan.per_period_routes
            ],
        }
        return (json.dumps(doc, separators=(",", ":")) + "\n").encode(), "application/json"

    # -- persistence ---------------------------------------------------------

    def load_persisted(self) -> int:
        """Rebuild sessions from the log directory; returns how many were loaded.

        Finished runs come back with their full trace, termination reason, and
        most-preferred summary, so poll_trace serves identical responses after a
        restart. In-flight runs cannot be resumed and their partial logs are
        surfaced as stopped runs.
        """
        if self.log_dir is None or not self.log_dir.exists():
            return 0
        loaded = 0
        for sdir in sorted(self.log_dir.iterdir()):
            instance_file = sdir / "instance.json"
            if not sdir.is_dir() or not instance_file.exists():
                continue
            instance = parse_instance(instance_file.read_text(encoding="utf-8"))
            evaluator = Evaluator(instance)
            started = time.monotonic()
            approximation = construct_initial_front(evaluator)
            session = Session(
                session_id=sdir.name,
                instance=instance,
                evaluator=evaluator,
                approximation=approximation,
                construction_ms=int((time.monotonic() - started) * 1000),
            )
            for log_file in sorted(sdir.glob("*.log")):
                parsed = parse_run_log(log_file.read_text(encoding="utf-8"))
                handle = RunHandle(
                    run_id=log_file.stem,
                    config=parsed.config,
                    weights=parsed.weights,
                    trace=parsed.trace,
                    log_path=log_file,
                )
                handle.evaluations = parsed.evaluations
                reason = parsed.trace.termination_reason
                handle.status = (
                    STATUS_STOPPED if reason in (USER_STOP, None) else STATUS_FINISHED
                )
                handle.most_preferred_summary = parsed.most_preferred
                front_file = log_file.with_suffix(".front.csv")
                if front_file.exists():
                    handle.front_csv = front_file.read_text(encoding="utf-8")
                session.runs[handle.run_id] = handle
                if session.weights is None and parsed.weights is not None:
                    session.weights = parsed.weights
            with self._lock:
                self.sessions[session.session_id] = session
            loaded += 1
        return loaded
