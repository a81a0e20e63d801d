"""Line-delimited run log: a header record, one record per trace point, a final record.

The format is deterministic byte-for-byte for identical configurations: floats are
emitted with their shortest round-trip representation, keys in a fixed order, LF
line endings, and no wall-clock data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .evaluation import Solution
from .scalarize import ReferencePoint, WeightVector
from .search import RunResult, RunTrace, SearchConfig, TracePoint


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def format_header(instance_name: str, config: SearchConfig, weights: WeightVector | None) -> str:
    rp = config.reference_point
    return _dumps(
        {
            "record": "header",
            "instance": instance_name,
            "mode": config.mode,
            "reference_point": [rp.r1, rp.r2] if rp is not None else None,
            "evaluation_budget": config.evaluation_budget,
            "cone_warmup_evals": config.effective_warmup if config.mode == "guided" else None,
            "seed": config.seed,
            "trace_stride": config.trace_stride,
            "weights": list(weights) if weights is not None else None,
        }
    )


def format_point(point: TracePoint) -> str:
    rec: dict = {"record": "point", "eval_index": point.eval_index}
    if point.best_achievement is not None:
        rec["best_achievement"] = point.best_achievement
    rec["archive_size"] = point.archive_size
    if point.in_cone_count is not None:
        rec["in_cone_count"] = point.in_cone_count
    return _dumps(rec)


def format_final(termination_reason: str, evaluations: int, preferred: Solution | None) -> str:
    rec: dict = {
        "record": "final",
        "termination_reason": termination_reason,
        "evaluations": evaluations,
    }
    if preferred is not None:
        rec["most_preferred"] = {
            "pi": list(preferred.pi),
            "g1": preferred.outcome.inventory_g1,
            "g2": preferred.outcome.routing_g2,
        }
    return _dumps(rec)


def format_run_log(instance_name: str, config: SearchConfig, result: RunResult) -> str:
    lines = [format_header(instance_name, config, result.weights)]
    lines.extend(format_point(p) for p in result.trace.points)
    lines.append(format_final(result.trace.termination_reason, result.evaluations, result.most_preferred))
    return "\n".join(lines) + "\n"


@dataclass
class ParsedRunLog:
    header: dict
    trace: RunTrace
    evaluations: int | None
    most_preferred: dict | None

    @property
    def config(self) -> SearchConfig:
        h = self.header
        rp = h.get("reference_point")
        return SearchConfig(
            mode=h["mode"],
            evaluation_budget=h["evaluation_budget"],
            reference_point=ReferencePoint(rp[0], rp[1]) if rp is not None else None,
            cone_warmup_evals=h.get("cone_warmup_evals"),
            seed=h.get("seed", 0),
            trace_stride=h.get("trace_stride", 100),
        )

    @property
    def weights(self) -> WeightVector | None:
        w = self.header.get("weights")
        return WeightVector(w[0], w[1]) if w is not None else None


class RunLogError(ValueError):
    """Malformed run log."""


def parse_run_log(text: str) -> ParsedRunLog:
    """Parse a run log back into its header, trace, and final summary.

    Re-serializing the parsed structure reproduces the input bytes exactly.
    """
    header = None
    trace = RunTrace()
    evaluations = None
    preferred = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RunLogError(f"line {lineno}: invalid JSON: {exc}") from exc
        kind = rec.get("record")
        if kind == "header":
            header = rec
        elif kind == "point":
            trace.points.append(
                TracePoint(
                    eval_index=rec["eval_index"],
                    archive_size=rec["archive_size"],
                    best_achievement=rec.get("best_achievement"),
                    in_cone_count=rec.get("in_cone_count"),
                )
            )
        elif kind == "final":
            trace.termination_reason = rec["termination_reason"]
            evaluations = rec.get("evaluations")
            preferred = rec.get("most_preferred")
        else:
            raise RunLogError(f"line {lineno}: unknown record kind {kind!r}")
    if header is None:
        raise RunLogError("run log has no header record")
    return ParsedRunLog(header=header, trace=trace, evaluations=evaluations, most_preferred=preferred)


def format_parsed(parsed: ParsedRunLog) -> str:
    """Re-serialize a parsed log (format_parsed(parse_run_log(x)) == x)."""
    lines = [_dumps(parsed.header)]
    lines.extend(format_point(p) for p in parsed.trace.points)
    if parsed.trace.termination_reason is not None:
        rec: dict = {
            "record": "final",
            "termination_reason": parsed.trace.termination_reason,
            "evaluations": parsed.evaluations,
        }
        if parsed.most_preferred is not None:
            rec["most_preferred"] = parsed.most_preferred
        lines.append(_dumps(rec))
    return "\n".join(lines) + "\n"
