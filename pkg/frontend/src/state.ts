// Console state lives here as a pure reducer: replaying the same event log
// always reproduces the same ViewState, and nothing in this module touches the
// DOM or the network.

import {
  FrontPoint,
  MostPreferred,
  RunStatus,
  SessionSummary,
  TracePoint,
} from "./types.js";

export interface ViewState {
  session_id: string | null;
  instance_name: string | null;
  front: FrontPoint[];
  selected_rp: { g1: number; g2: number } | null;
  active_run: string | null;
  run_status: RunStatus | null;
  termination_reason: string | null;
  most_preferred: MostPreferred | null;
  trace_cache: TracePoint[];
  run_front: FrontPoint[] | null;
  offline_overlay: TracePoint[] | null;
  poll_interval_ms: number;
  stop_requested: boolean;
  error: string | null;
}

export function initialState(pollIntervalMs = 500): ViewState {
  return {
    session_id: null,
    instance_name: null,
    front: [],
    selected_rp: null,
    active_run: null,
    run_status: null,
    termination_reason: null,
    most_preferred: null,
    trace_cache: [],
    run_front: null,
    offline_overlay: null,
    poll_interval_ms: pollIntervalMs,
    stop_requested: false,
    error: null,
  };
}

export type ConsoleEvent =
  | { kind: "session_loaded"; summary: SessionSummary }
  | { kind: "front_point_selected"; index: number }
  | { kind: "manual_rp_entered"; text: string }
  | { kind: "run_started"; run_id: string }
  | {
      kind: "trace_received";
      points: TracePoint[];
      status: RunStatus;
      termination_reason: string | null;
      most_preferred?: MostPreferred | null;
    }
  | { kind: "stop_requested" }
  | { kind: "run_front_loaded"; points: FrontPoint[] }
  | { kind: "offline_overlay_loaded"; points: TracePoint[] }
  | { kind: "error"; message: string }
  | { kind: "error_dismissed" };

/** Parse a manual "g1, g2" entry; null when it is not two finite numbers. */
export function parseManualRp(text: string): { g1: number; g2: number } | null {
  const parts = text.split(",");
  if (parts.length !== 2) {
    return null;
  }
  const g1 = Number(parts[0].trim());
  const g2 = Number(parts[1].trim());
  if (!Number.isFinite(g1) || !Number.isFinite(g2) || parts.some((p) => p.trim() === "")) {
    return null;
  }
  return { g1, g2 };
}

export function update(state: ViewState, event: ConsoleEvent): ViewState {
  switch (event.kind) {
    case "session_loaded":
      return {
        ...initialState(state.poll_interval_ms),
        session_id: event.summary.session_id,
        instance_name: event.summary.name,
        front: event.summary.front,
      };
    case "front_point_selected": {
      const point = state.front[event.index];
      if (!point) {
        return { ...state, error: `no front point #${event.index}` };
      }
      return { ...state, selected_rp: { g1: point.g1, g2: point.g2 }, error: null };
    }
    case "manual_rp_entered": {
      const rp = parseManualRp(event.text);
      if (rp === null) {
        return { ...state, error: `not a "g1, g2" vector: ${event.text}` };
      }
      return { ...state, selected_rp: rp, error: null };
    }
    case "run_started":
      return {
        ...state,
        active_run: event.run_id,
        run_status: "running",
        termination_reason: null,
        most_preferred: null,
        trace_cache: [],
        run_front: null,
        stop_requested: false,
        error: null,
      };
    case "trace_received": {
      // the cache keeps eval indices strictly increasing even if a poll overlaps
      const last = state.trace_cache.length
        ? state.trace_cache[state.trace_cache.length - 1].eval_index
        : -1;
      const fresh = event.points.filter((p) => p.eval_index > last);
      return {
        ...state,
        trace_cache: fresh.length ? [...state.trace_cache, ...fresh] : state.trace_cache,
        run_status: event.status,
        termination_reason: event.termination_reason,
        most_preferred: event.most_preferred ?? state.most_preferred,
      };
    }
    case "stop_requested":
      return { ...state, stop_requested: true };
    case "run_front_loaded":
      return { ...state, run_front: event.points };
    case "offline_overlay_loaded":
      return { ...state, offline_overlay: event.points };
    case "error":
      return { ...state, error: event.message };
    case "error_dismissed":
      return { ...state, error: null };
  }
}

// ---------------------------------------------------------------------------
// pure view geometry

export interface Scale {
  min: number;
  max: number;
  toPx(value: number): number;
}

function makeScale(values: number[], pixels: number, flip: boolean): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    // a single point: center it by padding both sides
    lo -= Math.abs(lo) * 0.05 + 1;
    hi += Math.abs(hi) * 0.05 + 1;
  } else {
    const margin = (hi - lo) * 0.05;
    lo -= margin;
    hi += margin;
  }
  const span = hi - lo;
  return {
    min: lo,
    max: hi,
    toPx: (v: number) => {
      const frac = (v - lo) / span;
      return flip ? pixels * (1 - frac) : pixels * frac;
    },
  };
}

export interface Marker {
  x: number;
  y: number;
  g1: number;
  g2: number;
  pi: number[];
  index: number;
  selected: boolean;
  inCone: boolean;
  fromRun: boolean;
}

export interface ConeRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface ScatterView {
  markers: Marker[];
  cone: ConeRect | null;
  xScale: Scale;
  yScale: Scale;
}

/** Scatter of the front (g1 on x, g2 on y) plus the cone below the reference
 * point: the axis-aligned rectangle {g1 <= r1, g2 <= r2}. */
export function scatterView(state: ViewState, width: number, height: number): ScatterView | null {
  const points: { g1: number; g2: number }[] = [...state.front, ...(state.run_front ?? [])];
  if (state.selected_rp) {
    points.push(state.selected_rp);
  }
  if (points.length === 0) {
    return null;
  }
  const xScale = makeScale(points.map((p) => p.g1), width, false);
  const yScale = makeScale(points.map((p) => p.g2), height, true);
  const rp = state.selected_rp;
  const inCone = (g1: number, g2: number) => rp !== null && g1 <= rp.g1 && g2 <= rp.g2;

  const markers: Marker[] = [];
  state.front.forEach((p, index) => {
    markers.push({
      x: xScale.toPx(p.g1),
      y: yScale.toPx(p.g2),
      g1: p.g1,
      g2: p.g2,
      pi: p.pi,
      index,
      selected: rp !== null && rp.g1 === p.g1 && rp.g2 === p.g2,
      inCone: inCone(p.g1, p.g2),
      fromRun: false,
    });
  });
  (state.run_front ?? []).forEach((p, k) => {
    markers.push({
      x: xScale.toPx(p.g1),
      y: yScale.toPx(p.g2),
      g1: p.g1,
      g2: p.g2,
      pi: p.pi,
      index: state.front.length + k,
      selected: false,
      inCone: inCone(p.g1, p.g2),
      fromRun: true,
    });
  });

  let cone: ConeRect | null = null;
  if (rp !== null) {
    // the cone's corner sits exactly on the reference point and extends toward
    // the origin (lower g1, lower g2)
    const cornerX = xScale.toPx(rp.g1);
    const cornerY = yScale.toPx(rp.g2);
    cone = { x: 0, y: cornerY, width: cornerX, height: height - cornerY };
  }
  return { markers, cone, xScale, yScale };
}

export interface ChartSeries {
  points: { x: number; y: number; eval_index: number; value: number }[];
  path: string;
}

export interface ChartView {
  main: ChartSeries;
  overlay: ChartSeries | null;
  xScale: Scale;
  yScale: Scale;
}

function seriesFrom(points: TracePoint[]): { eval_index: number; value: number }[] {
  return points
    .filter((p) => p.best_achievement !== undefined && p.best_achievement !== null)
    .map((p) => ({ eval_index: p.eval_index, value: p.best_achievement as number }));
}

/** Best-achievement line chart over evaluations, with an optional second
 * series loaded from a finished offline run's log. */
export function chartView(state: ViewState, width: number, height: number): ChartView | null {
  const main = seriesFrom(state.trace_cache);
  const overlay = state.offline_overlay ? seriesFrom(state.offline_overlay) : [];
  if (main.length === 0 && overlay.length === 0) {
    return null;
  }
  const all = [...main, ...overlay];
  const xScale = makeScale(all.map((p) => p.eval_index), width, false);
  const yScale = makeScale(all.map((p) => p.value), height, true);

  const build = (pts: { eval_index: number; value: number }[]): ChartSeries => {
    const mapped = pts.map((p) => ({
      x: xScale.toPx(p.eval_index),
      y: yScale.toPx(p.value),
      eval_index: p.eval_index,
      value: p.value,
    }));
    const path = mapped.map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(2)},${p.y.toFixed(2)}`).join(" ");
    return { points: mapped, path };
  };
  return {
    main: build(main),
    overlay: overlay.length ? build(overlay) : null,
    xScale,
    yScale,
  };
}

/** Parse a front_csv export (eval_index,g1,g2,pi with ;-joined pi). */
export function parseFrontCsv(text: string): FrontPoint[] {
  const lines = text.trim().split("\n");
  const out: FrontPoint[] = [];
  for (const line of lines.slice(1)) {
    const [, g1, g2, pi] = line.split(",");
    out.push({ g1: Number(g1), g2: Number(g2), pi: pi ? pi.split(";").map(Number) : [] });
  }
  return out;
}

/** Parse a run_log export into its trace points (for the offline overlay). */
export function parseRunLog(text: string): TracePoint[] {
  const points: TracePoint[] = [];
  for (const line of text.trim().split("\n")) {
    if (!line) continue;
    const rec = JSON.parse(line);
    if (rec.record === "point") {
      points.push(rec as TracePoint);
    }
  }
  return points;
}
