// Wire types of the session API; field names mirror the server's payloads.

export interface FrontPoint {
  g1: number;
  g2: number;
  pi: number[];
}

export interface SessionSummary {
  session_id: string;
  name: string;
  n_customers: number;
  horizon: number;
  construction_ms: number;
  front: FrontPoint[];
  weights: [number, number] | null;
}

export interface TracePoint {
  eval_index: number;
  best_achievement?: number;
  archive_size: number;
  in_cone_count?: number;
}

export type RunStatus = "running" | "finished" | "stopped";

export interface MostPreferred {
  pi: number[];
  g1: number;
  g2: number;
}

export interface TraceResponse {
  points: TracePoint[];
  status: RunStatus;
  termination_reason: string | null;
  most_preferred?: MostPreferred | null;
}

export interface StartRunRequest {
  mode: "guided" | "offline";
  reference_point?: [number, number];
  evaluation_budget: number;
  cone_warmup_evals?: number;
  trace_stride?: number;
}

export interface ApiError {
  code: string;
  message: string;
  field?: string;
}
