import { ServiceClient } from "./api.js";
import { decisionGraphViewModel, hitTest } from "./decisionGraph.js";
import { MAX_DIRECT_LEAVES, clampCut, layoutCondensed, layoutDendrogram } from "./dendrogram.js";
import { LinearScale } from "./scale.js";
import { scatterViewModel } from "./scatter.js";
import {
  RequestGate,
  ViewState,
  applyLabels,
  assignEnabled,
  initialState,
  setDecisionGraph,
  setFeaturePair,
  setHierarchy,
  setSession,
  togglePeak,
} from "./state.js";
import { CondensedTreeData, DecisionGraphData, HierarchyData } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const GRAPH_W = 420;
const GRAPH_H = 360;

const api = new ServiceClient(
  (window as { CLUSTERLAB_API?: string }).CLUSTERLAB_API ?? "http://127.0.0.1:8710",
);

let state: ViewState = initialState();
const peaksGate = new RequestGate();
const cutGate = new RequestGate();

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function toast(message: string): void {
  const box = document.getElementById("toasts")!;
  const item = el("div", { class: "toast" }, message);
  box.appendChild(item);
  setTimeout(() => item.remove(), 6000);
}

function setState(next: ViewState): void {
  state = next;
  render();
}

// ---- service actions ---------------------------------------------------------

async function loadCsv(file: File, labelColumn: string): Promise<void> {
  try {
    const text = await file.text();
    const summary = await api.createSessionFromCsv(text, labelColumn || undefined);
    setState(setSession(state, summary));
  } catch (err) {
    toast(String(err));
  }
}

async function loadMoons(): Promise<void> {
  try {
    const summary = await api.createSessionFromGenerator(
      { kind: "moons", n: 2000, noise_sd: 0.07 },
      0,
    );
    setState(setSession(state, summary));
  } catch (err) {
    toast(String(err));
  }
}

async function computeDecisionGraph(r: number): Promise<void> {
  if (!state.session) return;
  try {
    const response = await api.compute(state.session, "density_peaks", {
      r,
      peaks: "auto:3",
    });
    let next = setDecisionGraph(
      state,
      response.artifacts.decision_graph as DecisionGraphData,
      response.artifact_keys.decision_graph,
    );
    next = applyLabels(next, "compute:density_peaks", response);
    setState(next);
  } catch (err) {
    toast(String(err));
  }
}

async function assignPeaks(): Promise<void> {
  if (!state.session || !state.decisionGraphKey || !assignEnabled(state)) return;
  const token = peaksGate.next();
  try {
    const response = await api.selectPeaks(
      state.session,
      state.decisionGraphKey,
      state.selectedPeaks,
    );
    if (!peaksGate.isCurrent(token)) return; // stale
    setState(applyLabels(state, "peaks", response));
  } catch (err) {
    toast(String(err));
  }
}

async function computeHierarchy(): Promise<void> {
  if (!state.session) return;
  try {
    if ((state.summary?.n ?? 0) > MAX_DIRECT_LEAVES) {
      // too many leaves for a readable dendrogram: show the condensed tree
      const response = await api.compute(state.session, "hdbscan", {
        n_c: 2,
        min_cluster_size: 10,
      });
      setState(
        setHierarchy(
          state,
          response.artifacts.hierarchy as HierarchyData,
          response.artifact_keys.hierarchy,
          response.artifacts.condensed_tree as CondensedTreeData,
        ),
      );
      return;
    }
    const response = await api.compute(state.session, "single", {});
    setState(
      setHierarchy(
        state,
        response.artifacts.hierarchy as HierarchyData,
        response.artifact_keys.hierarchy,
      ),
    );
  } catch (err) {
    toast(String(err));
  }
}

async function requestCut(threshold: number): Promise<void> {
  if (!state.session || !state.hierarchyKey) return;
  const token = cutGate.next();
  try {
    // singleton legs render as noise, matching the colored-leg counting
    const response = await api.cut(state.session, state.hierarchyKey, threshold, 2);
    if (!cutGate.isCurrent(token)) return; // stale
    setState({ ...applyLabels(state, "cut", response), cutValue: threshold });
  } catch (err) {
    toast(String(err));
  }
}

// ---- rendering ----------------------------------------------------------------

function renderHeader(): void {
  const header = document.getElementById("status")!;
  const parts: string[] = [];
  if (state.summary) {
    parts.push(`${state.summary.n} points x ${state.summary.m} features`);
  }
  if (state.clusterCount !== null) {
    parts.push(`${state.clusterCount} clusters`);
    parts.push(`${state.noiseCount} noise`);
  }
  const match = state.scores?.match;
  if (match !== null && match !== undefined) {
    parts.push(`match ${(100 * match).toFixed(0)}%`);
  }
  header.textContent = parts.join(" | ") || "load a dataset to begin";
  const warn = document.getElementById("warning")!;
  warn.textContent = state.warning ?? "";
}

function renderDecisionGraph(): void {
  const host = document.getElementById("decision-graph")!;
  host.innerHTML = "";
  if (!state.decisionGraph) {
    host.appendChild(el("p", { class: "hint" }, "compute a decision graph first"));
    return;
  }
  const model = decisionGraphViewModel(
    state.decisionGraph,
    state.selectedPeaks,
    GRAPH_W,
    GRAPH_H,
  );
  const svg = svgEl("svg", {
    width: String(GRAPH_W),
    height: String(GRAPH_H),
    viewBox: `0 0 ${GRAPH_W} ${GRAPH_H}`,
  });
  for (const point of model.points) {
    svg.appendChild(
      svgEl("circle", {
        cx: point.px.toFixed(1),
        cy: point.py.toFixed(1),
        r: point.selected ? "7" : "3.5",
        fill: point.selected ? "#d62728" : "#4c78a8",
        stroke: point.selected ? "#000" : "none",
        "data-index": String(point.index),
      }),
    );
  }
  svg.addEventListener("click", (event) => {
    const rect = (svg as unknown as Element).getBoundingClientRect();
    const hit = hitTest(model, event.clientX - rect.left, event.clientY - rect.top);
    if (hit !== null) setState(togglePeak(state, hit));
  });
  host.appendChild(svg);
  const button = el("button", {}, `assign ${state.selectedPeaks.length} peaks`);
  if (!assignEnabled(state)) button.setAttribute("disabled", "disabled");
  button.addEventListener("click", () => void assignPeaks());
  host.appendChild(button);
}

function renderCondensed(host: HTMLElement): void {
  const bars = layoutCondensed(state.condensedTree!);
  const maxLambda = Math.max(...bars.map((b) => b.death), 1e-9);
  const maxSize = Math.max(...bars.map((b) => b.size), 1);
  const yScale = new LinearScale(0, maxLambda * 1.05, GRAPH_H - 18, 12);
  const svg = svgEl("svg", {
    width: String(GRAPH_W),
    height: String(GRAPH_H),
    viewBox: `0 0 ${GRAPH_W} ${GRAPH_H}`,
  });
  const slot = GRAPH_W / (bars.length + 1);
  bars.forEach((bar, index) => {
    const width = 6 + 40 * (bar.size / maxSize);
    const x = slot * (index + 1) - width / 2;
    svg.appendChild(
      svgEl("rect", {
        x: x.toFixed(1),
        y: yScale.apply(bar.death).toFixed(1),
        width: width.toFixed(1),
        height: Math.max(
          yScale.apply(bar.birth) - yScale.apply(bar.death),
          1,
        ).toFixed(1),
        fill: "#4c78a8",
        opacity: "0.75",
      }),
    );
  });
  // releasing the line cuts the underlying hierarchy at distance 1/lambda
  const line = svgEl("line", {
    x1: "0",
    x2: String(GRAPH_W),
    y1: String(GRAPH_H / 2),
    y2: String(GRAPH_H / 2),
    stroke: "#d62728",
    "stroke-width": "2",
    "stroke-dasharray": "6 3",
    cursor: "ns-resize",
  });
  let dragging = false;
  line.addEventListener("pointerdown", () => {
    dragging = true;
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const rect = (svg as unknown as Element).getBoundingClientRect();
    line.setAttribute("y1", String(event.clientY - rect.top));
    line.setAttribute("y2", String(event.clientY - rect.top));
  });
  svg.addEventListener("pointerup", (event) => {
    if (!dragging) return;
    dragging = false;
    const rect = (svg as unknown as Element).getBoundingClientRect();
    const lambda = Math.max(yScale.invert(event.clientY - rect.top), 1e-9);
    void requestCut(1.0 / lambda);
  });
  svg.appendChild(line);
  host.appendChild(svg);
  host.appendChild(
    el("p", { class: "hint" }, "condensed tree (density up); drag to cut"),
  );
}

function renderDendrogram(): void {
  const host = document.getElementById("dendrogram")!;
  host.innerHTML = "";
  if (!state.hierarchy) {
    host.appendChild(el("p", { class: "hint" }, "compute a hierarchy first"));
    return;
  }
  if (state.hierarchy.n > MAX_DIRECT_LEAVES) {
    if (state.condensedTree) renderCondensed(host);
    else host.appendChild(el("p", { class: "hint" }, "condensed view unavailable"));
    return;
  }
  const layout = layoutDendrogram(state.hierarchy);
  const xScale = new LinearScale(0, Math.max(layout.leafOrder.length - 1, 1), 16, GRAPH_W - 16);
  const yScale = new LinearScale(0, layout.maxHeight * 1.05, GRAPH_H - 18, 12);
  const svg = svgEl("svg", {
    width: String(GRAPH_W),
    height: String(GRAPH_H),
    viewBox: `0 0 ${GRAPH_W} ${GRAPH_H}`,
  });
  for (const bracket of layout.brackets) {
    const path = [
      `M ${xScale.apply(bracket.xa).toFixed(1)} ${yScale.apply(bracket.ya).toFixed(1)}`,
      `L ${xScale.apply(bracket.xa).toFixed(1)} ${yScale.apply(bracket.y).toFixed(1)}`,
      `L ${xScale.apply(bracket.xb).toFixed(1)} ${yScale.apply(bracket.y).toFixed(1)}`,
      `L ${xScale.apply(bracket.xb).toFixed(1)} ${yScale.apply(bracket.yb).toFixed(1)}`,
    ].join(" ");
    svg.appendChild(svgEl("path", { d: path, stroke: "#555", fill: "none" }));
  }
  const cutY = yScale.apply(state.cutValue ?? layout.maxHeight / 2);
  const line = svgEl("line", {
    x1: "0",
    x2: String(GRAPH_W),
    y1: cutY.toFixed(1),
    y2: cutY.toFixed(1),
    stroke: "#d62728",
    "stroke-width": "2",
    "stroke-dasharray": "6 3",
    cursor: "ns-resize",
    id: "cut-line",
  });
  let dragging = false;
  line.addEventListener("pointerdown", () => {
    dragging = true;
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const rect = (svg as unknown as Element).getBoundingClientRect();
    line.setAttribute("y1", String(event.clientY - rect.top));
    line.setAttribute("y2", String(event.clientY - rect.top));
  });
  svg.addEventListener("pointerup", (event) => {
    if (!dragging) return;
    dragging = false;
    const rect = (svg as unknown as Element).getBoundingClientRect();
    const threshold = clampCut(layout, yScale.invert(event.clientY - rect.top));
    void requestCut(threshold);
  });
  svg.appendChild(line);
  host.appendChild(svg);
  const label = el(
    "p",
    { class: "hint" },
    state.cutValue === null
      ? "drag the line and release to cut"
      : `cut at ${state.cutValue.toFixed(3)}`,
  );
  host.appendChild(label);
}

function renderScatter(): void {
  const host = document.getElementById("scatter")!;
  host.innerHTML = "";
  if (!state.summary) return;
  const [fx, fy] = state.featurePair;
  const picker = el("div", { class: "pair-picker" });
  (["x", "y"] as const).forEach((axis, which) => {
    const select = el("select", { "data-axis": axis });
    state.summary!.feature_names.forEach((name, index) => {
      const option = el("option", { value: String(index) }, name);
      if ((which === 0 ? fx : fy) === index) option.setAttribute("selected", "");
      select.appendChild(option);
    });
    select.addEventListener("change", () => {
      const value = Number((select as HTMLSelectElement).value);
      setState(
        which === 0
          ? setFeaturePair(state, value, state.featurePair[1])
          : setFeaturePair(state, state.featurePair[0], value),
      );
    });
    picker.appendChild(select);
  });
  host.appendChild(picker);
  const model = scatterViewModel(
    state.summary.points,
    state.labels,
    state.featurePair,
    GRAPH_W,
    GRAPH_H,
  );
  const svg = svgEl("svg", {
    width: String(GRAPH_W),
    height: String(GRAPH_H),
    viewBox: `0 0 ${GRAPH_W} ${GRAPH_H}`,
  });
  for (const point of model) {
    svg.appendChild(
      svgEl("circle", {
        cx: point.px.toFixed(1),
        cy: point.py.toFixed(1),
        r: "3",
        fill: point.color,
      }),
    );
  }
  host.appendChild(svg);
}

function render(): void {
  renderHeader();
  renderDecisionGraph();
  renderDendrogram();
  renderScatter();
}

// ---- bootstrap ------------------------------------------------------------------

export function start(): void {
  document.getElementById("load-moons")!.addEventListener("click", () => void loadMoons());
  document.getElementById("csv-input")!.addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const label = (document.getElementById("label-column") as HTMLInputElement).value;
    if (input.files?.length) void loadCsv(input.files[0], label);
  });
  document.getElementById("compute-graph")!.addEventListener("click", () => {
    const r = Number((document.getElementById("radius") as HTMLInputElement).value);
    void computeDecisionGraph(r);
  });
  document
    .getElementById("compute-hierarchy")!
    .addEventListener("click", () => void computeHierarchy());
  render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start();
}
