import { ApiClient } from "./api.js";
import { Console } from "./controller.js";
import { ViewState, chartView, scatterView } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const SCATTER_W = 520;
const SCATTER_H = 380;
const CHART_W = 520;
const CHART_H = 240;

function el<K extends keyof HTMLElementTagNameMap>(id: string): HTMLElementTagNameMap[K] {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as HTMLElementTagNameMap[K];
}

function svgNode(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, String(v));
  }
  return node;
}

function svgRoot(id: string): SVGSVGElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as unknown as SVGSVGElement;
}

function renderScatter(state: ViewState, console_: Console) {
  const svg = svgRoot("scatter");
  svg.replaceChildren();
  const view = scatterView(state, SCATTER_W, SCATTER_H);
  const empty = el<"p">("scatter-empty");
  empty.hidden = view !== null;
  if (!view) return;

  if (view.cone) {
    svg.appendChild(
      svgNode("rect", {
        x: view.cone.x, y: view.cone.y, width: view.cone.width, height: view.cone.height,
        class: "cone",
      }),
    );
  }
  for (const m of view.markers) {
    const dot = svgNode("circle", {
      cx: m.x, cy: m.y, r: m.fromRun ? 3 : 6,
      class: [
        m.fromRun ? "run-point" : "front-point",
        m.inCone ? "in-cone" : "out-cone",
        m.selected ? "selected" : "",
      ].join(" "),
    });
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `g1=${m.g1} g2=${m.g2.toFixed(1)} pi=(${m.pi.join(",")})`;
    dot.appendChild(title);
    if (!m.fromRun) {
      dot.addEventListener("click", () => console_.selectFrontPoint(m.index));
    }
    svg.appendChild(dot);
  }
}

function renderChart(state: ViewState) {
  const svg = svgRoot("chart");
  svg.replaceChildren();
  const view = chartView(state, CHART_W, CHART_H);
  if (!view) return;
  if (view.overlay) {
    svg.appendChild(svgNode("path", { d: view.overlay.path, class: "series overlay" }));
  }
  svg.appendChild(svgNode("path", { d: view.main.path, class: "series main" }));
  for (const p of view.main.points) {
    svg.appendChild(svgNode("circle", { cx: p.x, cy: p.y, r: 2, class: "series-dot" }));
  }
}

function renderStatus(state: ViewState) {
  const banner = el<"div">("error-banner");
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? "";

  el<"div">("session-line").textContent = state.session_id
    ? `session ${state.session_id} (${state.instance_name}) — front of ${state.front.length} points`
    : "no session";

  const rp = state.selected_rp;
  el<"div">("rp-line").textContent = rp
    ? `reference point: g1 = ${rp.g1}, g2 = ${rp.g2}`
    : "reference point: none (click a front point or enter one)";

  const status = el<"div">("run-line");
  if (!state.active_run) {
    status.textContent = "no run";
  } else {
    const head = `run ${state.active_run}: ${state.run_status}`;
    const reason = state.termination_reason ? `, ${state.termination_reason}` : "";
    const badge = state.termination_reason === "cone_exited" ? " — natural termination" : "";
    const mp = state.most_preferred
      ? ` | most preferred g1=${state.most_preferred.g1} g2=${state.most_preferred.g2.toFixed(1)}`
      : "";
    status.textContent = head + reason + badge + mp;
  }

  (el<"button">("launch") as HTMLButtonElement).disabled =
    state.selected_rp === null || state.run_status === "running";
  (el<"button">("stop") as HTMLButtonElement).disabled = state.run_status !== "running";
}

function render(state: ViewState, console_: Console) {
  renderScatter(state, console_);
  renderChart(state);
  renderStatus(state);
}

function bootstrap() {
  const api = new ApiClient(
    (document.getElementById("api-base") as HTMLInputElement)?.value ?? "http://127.0.0.1:8734",
  );
  const console_ = new Console(api, (state) => render(state, console_));

  el<"button">("create-session").addEventListener("click", () => {
    const text = (el<"textarea">("instance-doc") as HTMLTextAreaElement).value;
    try {
      console_.createSession(JSON.parse(text));
    } catch (err) {
      console_.dispatch({ kind: "error", message: `instance is not valid JSON: ${err}` });
    }
  });

  el<"input">("instance-file").addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) {
      (el<"textarea">("instance-doc") as HTMLTextAreaElement).value = await file.text();
    }
  });

  el<"button">("set-rp").addEventListener("click", () => {
    console_.enterManualRp((el<"input">("manual-rp") as HTMLInputElement).value);
  });

  el<"button">("launch").addEventListener("click", () => {
    const budget = Number((el<"input">("budget") as HTMLInputElement).value);
    const warmupText = (el<"input">("warmup") as HTMLInputElement).value.trim();
    const warmup = warmupText === "" ? undefined : Number(warmupText);
    console_.launchGuidedRun(budget, warmup);
  });

  el<"button">("stop").addEventListener("click", () => console_.stopActiveRun());

  el<"button">("load-overlay").addEventListener("click", () => {
    const rid = (el<"input">("overlay-run") as HTMLInputElement).value.trim();
    if (rid) console_.loadOfflineOverlay(rid);
  });

  el<"div">("error-banner").addEventListener("click", () =>
    console_.dispatch({ kind: "error_dismissed" }),
  );

  render(console_.state, console_);
}

bootstrap();
