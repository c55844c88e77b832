/** Explorer round trips against recorded service responses.
 *
 * The mock transport replays byte-exact bodies captured from the live
 * service, so these tests pin the full wire contract: the scatter must
 * show exactly the label array the service returned, and the dendrogram
 * count must be the service's count, not a local recomputation.
 */
import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api";
import { decisionGraphViewModel } from "../src/decisionGraph";
import { layoutDendrogram, clampCut } from "../src/dendrogram";
import { colorFor } from "../src/palette";
import { scatterViewModel } from "../src/scatter";
import {
  applyLabels,
  initialState,
  setDecisionGraph,
  setHierarchy,
  setSession,
  togglePeak,
} from "../src/state";
import type {
  ComputeResponse,
  DecisionGraphData,
  HierarchyData,
  SessionSummary,
} from "../src/types";

const fixture = (name: string): string =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");

/** Serves recorded bodies and records every (url, body) the UI sends. */
function mockTransport(routes: Record<string, string>) {
  const calls: { url: string; body: unknown }[] = [];
  const fetchImpl = async (url: string, init?: RequestInit) => {
    calls.push({ url, body: JSON.parse((init?.body as string) ?? "null") });
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    for (const [suffix, body] of Object.entries(routes)) {
      if (path.endsWith(suffix)) {
        return new Response(body, {
          status: 200,
          headers: { "content-type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: "no route" }), { status: 404 });
  };
  return { calls, fetchImpl };
}

describe("decision-graph round trip", () => {
  it("scatter labels are byte-identical to the peaks response", async () => {
    const sessionBody = fixture("session_iris.json");
    const computeBody = fixture("compute_density_peaks.json");
    const peaksBody = fixture("peaks_response.json");
    const { calls, fetchImpl } = mockTransport({
      "/sessions": sessionBody,
      "/compute": computeBody,
      "/peaks": peaksBody,
    });
    const api = new ServiceClient("http://service", fetchImpl);

    let state = setSession(
      initialState(),
      await api.createSessionFromCsv("ignored by mock", "class"),
    );
    const compute = await api.compute(state.session!, "density_peaks", {
      r: 0.5,
      peaks: "auto:3",
    });
    state = setDecisionGraph(
      state,
      compute.artifacts.decision_graph as DecisionGraphData,
      compute.artifact_keys.decision_graph,
    );

    // the three standout peaks from the recorded decision graph
    const standouts = (compute as ComputeResponse & {
      artifacts: { peaks: number[] };
    }).artifacts.peaks;
    expect(standouts).toHaveLength(3);
    for (const peak of standouts) state = togglePeak(state, peak);
    const model = decisionGraphViewModel(state.decisionGraph!, state.selectedPeaks, 400, 300);
    expect(model.points.filter((p) => p.selected)).toHaveLength(3);

    const response = await api.selectPeaks(
      state.session!,
      state.decisionGraphKey!,
      state.selectedPeaks,
    );
    state = applyLabels(state, "peaks", response);

    // byte-identical: the stored array serializes exactly as the wire bytes
    const wireLabels = JSON.stringify(JSON.parse(peaksBody).labels);
    expect(JSON.stringify(state.labels)).toBe(wireLabels);
    expect(state.labels).toBe(response.labels); // same object, no copy

    // and the linked scatter colors from exactly that array
    const summary = JSON.parse(sessionBody) as SessionSummary;
    const scatter = scatterViewModel(summary.points, state.labels, [0, 1], 400, 300);
    state.labels!.forEach((label, index) => {
      expect(scatter[index].color).toBe(colorFor(label));
    });

    // header reports the service match score (91% on these peaks)
    expect(state.scores?.match).toBeCloseTo(0.9067, 3);
    expect(state.clusterCount).toBe(3);

    // the UI asked the service for exactly the toggled peaks
    const peaksCall = calls.find((c) => c.url.endsWith("/peaks"));
    expect(peaksCall?.body).toMatchObject({ selected: standouts });
  });
});

describe("dendrogram round trip", () => {
  it("cutting at 0.41 shows the service's 7 clusters", async () => {
    const { calls, fetchImpl } = mockTransport({
      "/sessions": fixture("session_iris.json"),
      "/compute": fixture("compute_single.json"),
      "/cut": fixture("cut_041.json"),
    });
    const api = new ServiceClient("http://service", fetchImpl);

    let state = setSession(
      initialState(),
      await api.createSessionFromCsv("ignored by mock", "class"),
    );
    const compute = await api.compute(state.session!, "single", {});
    state = setHierarchy(
      state,
      compute.artifacts.hierarchy as HierarchyData,
      compute.artifact_keys.hierarchy,
    );
    const layout = layoutDendrogram(state.hierarchy!);
    expect(layout.maxHeight).toBeGreaterThan(0.41); // the drag can reach it

    const threshold = clampCut(layout, 0.41);
    const response = await api.cut(state.session!, state.hierarchyKey!, threshold, 2);
    state = { ...applyLabels(state, "cut", response), cutValue: threshold };

    expect(state.clusterCount).toBe(7); // displayed count == service count
    expect(state.labels).toBe(response.labels);
    expect(new Set(state.labels!.filter((l) => l > 0)).size).toBe(7);

    const cutCall = calls.find((c) => c.url.endsWith("/cut"));
    expect(cutCall?.body).toMatchObject({ threshold: 0.41, min_size: 2 });
  });

  it("cutting below the first merge warns about the all-noise view", async () => {
    const allNoise = JSON.stringify({
      labels: new Array(150).fill(0),
      n_clusters: 0,
      n_noise: 150,
      scores: null,
    });
    const { fetchImpl } = mockTransport({ "/cut": allNoise });
    const api = new ServiceClient("http://service", fetchImpl);
    const response = await api.cut("sid", "hkey", 0.0, 2);
    const state = applyLabels(initialState(), "cut", response);
    expect(state.warning).toMatch(/noise/);
    expect(state.clusterCount).toBe(0);
  });
});
