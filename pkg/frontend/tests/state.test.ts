import { describe, expect, it } from "vitest";

import {
  RequestGate,
  applyLabels,
  assignEnabled,
  initialState,
  setFeaturePair,
  setSession,
  togglePeak,
} from "../src/state";
import session from "./fixtures/session_iris.json";

describe("peak selection", () => {
  it("toggles on and off (idempotent pair)", () => {
    let state = initialState();
    state = togglePeak(state, 7);
    expect(state.selectedPeaks).toEqual([7]);
    state = togglePeak(state, 96);
    expect(state.selectedPeaks).toEqual([7, 96]);
    state = togglePeak(state, 7); // select twice = deselect
    expect(state.selectedPeaks).toEqual([96]);
  });

  it("assign is disabled with zero selections", () => {
    let state = initialState();
    expect(assignEnabled(state)).toBe(false);
    state = togglePeak(state, 3);
    expect(assignEnabled(state)).toBe(true);
    state = togglePeak(state, 3);
    expect(assignEnabled(state)).toBe(false);
  });
});

describe("label handling", () => {
  it("stores the exact response array, by reference", () => {
    const labels = [1, 2, 0, 1];
    const state = applyLabels(initialState(), "peaks", {
      labels,
      n_clusters: 2,
      n_noise: 1,
    });
    expect(state.labels).toBe(labels); // never copied, never recomputed
    expect(state.clusterCount).toBe(2);
    expect(state.noiseCount).toBe(1);
  });

  it("warns when everything is noise", () => {
    const state = applyLabels(initialState(), "cut", {
      labels: [0, 0, 0],
      n_clusters: 0,
      n_noise: 3,
    });
    expect(state.warning).toMatch(/noise/);
  });

  it("switching the feature pair preserves labels", () => {
    let state = setSession(initialState(), session as never);
    const labels = [1, 1, 2];
    state = applyLabels(state, "peaks", { labels, n_clusters: 2, n_noise: 0 });
    state = setFeaturePair(state, 2, 3);
    expect(state.featurePair).toEqual([2, 3]);
    expect(state.labels).toBe(labels);
  });
});

describe("request gate", () => {
  it("drops stale responses", () => {
    const gate = new RequestGate();
    const first = gate.next();
    const second = gate.next();
    expect(gate.isCurrent(first)).toBe(false);
    expect(gate.isCurrent(second)).toBe(true);
  });
});
