// Side-effect orchestration: API calls and the polling loop. Every mutation of
// the ViewState goes through dispatch(event) so the state stays replayable; no
// API mutation happens without an explicit user action.

import { ApiClient, ApiRequestError } from "./api.js";
import { ConsoleEvent, ViewState, initialState, parseRunLog, parseFrontCsv, update } from "./state.js";

export class Console {
  state: ViewState;
  private pollTimer: ReturnType<typeof setTimeout> | null = null;
  private pollBusy = false;
  private pollFailures = 0;
  private stopIssued = false;

  constructor(
    readonly api: ApiClient,
    readonly onChange: (state: ViewState) => void = () => {},
    pollIntervalMs = 500,
  ) {
    this.state = initialState(pollIntervalMs);
  }

  dispatch(event: ConsoleEvent) {
    this.state = update(this.state, event);
    this.onChange(this.state);
  }

  private fail(err: unknown) {
    const message = err instanceof Error ? err.message : String(err);
    this.dispatch({ kind: "error", message });
  }

  async createSession(instanceDoc: unknown) {
    try {
      const summary = await this.api.createSession(instanceDoc);
      this.stopPolling();
      this.dispatch({ kind: "session_loaded", summary });
    } catch (err) {
      this.fail(err);
    }
  }

  selectFrontPoint(index: number) {
    this.dispatch({ kind: "front_point_selected", index });
  }

  enterManualRp(text: string) {
    this.dispatch({ kind: "manual_rp_entered", text });
  }

  async launchGuidedRun(budget: number, warmup?: number) {
    const { session_id, selected_rp } = this.state;
    if (session_id === null || selected_rp === null) {
      this.dispatch({ kind: "error", message: "select a reference point first" });
      return;
    }
    try {
      const resp = await this.api.startRun(session_id, {
        mode: "guided",
        reference_point: [selected_rp.g1, selected_rp.g2],
        evaluation_budget: budget,
        cone_warmup_evals: warmup,
      });
      this.stopIssued = false;
      this.dispatch({ kind: "run_started", run_id: resp.run_id });
      this.schedulePoll(0);
    } catch (err) {
      this.fail(err);
    }
  }

  /** Stop the active run; repeated clicks issue exactly one stop call. */
  async stopActiveRun() {
    const { session_id, active_run, run_status } = this.state;
    if (session_id === null || active_run === null || run_status !== "running" || this.stopIssued) {
      return;
    }
    this.stopIssued = true;
    this.dispatch({ kind: "stop_requested" });
    try {
      await this.api.stopRun(session_id, active_run);
    } catch (err) {
      this.fail(err);
    }
  }

  async loadOfflineOverlay(runId: string) {
    const { session_id } = this.state;
    if (session_id === null) {
      return;
    }
    try {
      const log = await this.api.exportRun(session_id, runId, "run_log");
      this.dispatch({ kind: "offline_overlay_loaded", points: parseRunLog(log) });
    } catch (err) {
      this.fail(err);
    }
  }

  /** One poll step; public so tests (and the scheduler) can drive it. */
  async pollOnce(): Promise<boolean> {
    const { session_id, active_run } = this.state;
    if (session_id === null || active_run === null || this.pollBusy) {
      return false;
    }
    this.pollBusy = true;
    try {
      const since = this.state.trace_cache.length
        ? this.state.trace_cache[this.state.trace_cache.length - 1].eval_index
        : -1;
      const resp = await this.api.pollTrace(session_id, active_run, since);
      this.pollFailures = 0;
      this.dispatch({
        kind: "trace_received",
        points: resp.points,
        status: resp.status,
        termination_reason: resp.termination_reason,
        most_preferred: resp.most_preferred,
      });
      if (resp.status !== "running") {
        this.stopPolling();
        await this.loadRunFront();
        return false;
      }
      return true;
    } catch (err) {
      this.pollFailures += 1;
      if (err instanceof ApiRequestError && err.code !== "http_error") {
        this.fail(err);
      }
      return true;
    } finally {
      this.pollBusy = false;
    }
  }

  private async loadRunFront() {
    const { session_id, active_run } = this.state;
    if (session_id === null || active_run === null) {
      return;
    }
    try {
      const csv = await this.api.exportRun(session_id, active_run, "front_csv");
      this.dispatch({ kind: "run_front_loaded", points: parseFrontCsv(csv) });
    } catch {
      // front snapshot is cosmetic; polling already reported the result
    }
  }

  private schedulePoll(delay: number) {
    this.stopPolling();
    this.pollTimer = setTimeout(async () => {
      const keepGoing = await this.pollOnce();
      if (keepGoing) {
        // back off while the API is failing, reset once it answers again
        const factor = Math.min(2 ** this.pollFailures, 8);
        this.schedulePoll(this.state.poll_interval_ms * factor);
      }
    }, delay);
  }

  stopPolling() {
    if (this.pollTimer !== null) {
      clearTimeout(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
