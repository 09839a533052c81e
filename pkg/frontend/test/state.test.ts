import { describe, expect, it } from "vitest";

import { DEFAULT_SLIDERS, RequestSequencer, UiState, edgeKey } from "../src/state.js";
import { FACTOR_ORDER } from "../src/types.js";
import { factorDetail, makeResponse, makeResult } from "./fixtures.js";

describe("RequestSequencer", () => {
  it("issues strictly increasing sequence numbers", () => {
    const seq = new RequestSequencer();
    expect([seq.begin(), seq.begin(), seq.begin()]).toEqual([1, 2, 3]);
  });

  it("accepts only the answer to the latest request", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    const b = seq.begin();
    expect(seq.accept(a)).toBe(false);
    expect(seq.accept(b)).toBe(true);
    expect(seq.lastAccepted).toBe(b);
  });

  it("rejects a stale response even when it arrives after an accepted one", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    const b = seq.begin();
    expect(seq.accept(b)).toBe(true);
    expect(seq.accept(a)).toBe(false);
    expect(seq.lastAccepted).toBe(b);
  });

  it("rejects in-order arrivals for requests that were already superseded", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    seq.begin();
    // a's response arrives first, but a newer request is already in flight
    expect(seq.accept(a)).toBe(false);
    expect(seq.lastAccepted).toBe(0);
  });
});

describe("UiState", () => {
  it("starts with the documented default sliders", () => {
    const state = new UiState();
    expect(state.sliders).toEqual(DEFAULT_SLIDERS);
    expect(state.weightVector()).toEqual(DEFAULT_SLIDERS);
  });

  it("clamps slider values at zero", () => {
    const state = new UiState();
    state.setSlider("salary", -0.4);
    expect(state.sliders.salary).toBe(0);
    state.setSlider("salary", 0.9);
    expect(state.sliders.salary).toBe(0.9);
  });

  it("sends the raw vector without normalizing", () => {
    const state = new UiState();
    for (const f of FACTOR_ORDER) state.setSlider(f, 1);
    expect(Object.values(state.weightVector())).toEqual([1, 1, 1, 1, 1, 1]);
  });

  it("toggles explanation expansion per job", () => {
    const state = new UiState();
    state.toggleExplanation("j1");
    expect(state.expandedExplanations.has("j1")).toBe(true);
    state.toggleExplanation("j1");
    expect(state.expandedExplanations.has("j1")).toBe(false);
  });

  it("collects RELATED_TO edge keys from skill-path evidence", () => {
    const state = new UiState();
    const entry = makeResult("j1", 1);
    entry.factors!.skill = factorDetail({
      evidence: {
        matched: [],
        paths: [{ nodes: ["go", "docker", "kubernetes"], hop_count: 2 }],
        jaccard: 0,
        bonus: 0.25,
      },
    });
    state.latestResponse = makeResponse([]);
    state.latestResponse.results = [entry];
    expect(state.contributedEdgeKeys()).toEqual(
      new Set([edgeKey("go", "docker"), edgeKey("docker", "kubernetes")]),
    );
  });

  it("yields no edge keys without a response or without paths", () => {
    const state = new UiState();
    expect(state.contributedEdgeKeys().size).toBe(0);
    state.latestResponse = makeResponse(["j1"]);
    expect(state.contributedEdgeKeys().size).toBe(0);
  });

  it("keys edges symmetrically", () => {
    expect(edgeKey("b", "a")).toBe(edgeKey("a", "b"));
  });
});
