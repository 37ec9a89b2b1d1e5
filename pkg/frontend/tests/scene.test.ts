import { describe, expect, it } from "vitest";

import {
  buildMarkers,
  eventBucketColor,
  glyphsVisible,
  hoverSummary,
} from "../src/scene";
import { COLORS, GLYPH_EVENT_BUCKETS, GLYPH_ZOOM_THRESHOLD, ZOOM_STEP } from "../src/theme";
import type { GlyphSummary, ScatterPoint } from "../src/types";

function glyph(userId: number, over: Partial<GlyphSummary> = {}): GlyphSummary {
  return {
    user_id: userId,
    total_events: 120,
    work_fraction: 0.5,
    home_fraction: 0.3,
    unlabeled_fraction: 0.2,
    hourly_counts: new Array(24).fill(1),
    ...over,
  };
}

const POINTS: ScatterPoint[] = [
  [1, 0.5, -1.25],
  [2, -3, 4],
  [3, 0, 0],
];

function glyphMap(ids: number[]): Map<number, GlyphSummary> {
  return new Map(ids.map((id) => [id, glyph(id)]));
}

describe("zoom threshold", () => {
  it("is five scroll steps", () => {
    expect(GLYPH_ZOOM_THRESHOLD).toBe(ZOOM_STEP ** 5);
  });

  it("keeps dots below the threshold", () => {
    const zoom = GLYPH_ZOOM_THRESHOLD * (1 - 1e-12);
    expect(glyphsVisible(zoom)).toBe(false);
    const markers = buildMarkers(POINTS, glyphMap([1, 2, 3]), zoom);
    expect(markers.every((m) => m.kind === "dot")).toBe(true);
  });

  it("switches to glyphs exactly at the threshold", () => {
    const markers = buildMarkers(POINTS, glyphMap([1, 2, 3]), GLYPH_ZOOM_THRESHOLD);
    expect(markers.every((m) => m.kind === "glyph")).toBe(true);
  });

  it("stays glyphs above the threshold", () => {
    const markers = buildMarkers(POINTS, glyphMap([1, 2, 3]), GLYPH_ZOOM_THRESHOLD * 8);
    expect(markers.every((m) => m.kind === "glyph")).toBe(true);
  });

  it("zooming in five times from baseline crosses exactly at the fifth", () => {
    let zoom = 1;
    for (let scroll = 1; scroll <= 5; scroll++) {
      zoom *= ZOOM_STEP;
      expect(glyphsVisible(zoom)).toBe(scroll === 5);
    }
  });
});

describe("glyph geometry", () => {
  it("keeps coordinates and ids verbatim", () => {
    const markers = buildMarkers(POINTS, glyphMap([1, 2, 3]), GLYPH_ZOOM_THRESHOLD);
    markers.forEach((m, i) => {
      expect(m.userId).toBe(POINTS[i]![0]);
      expect(m.x).toBe(POINTS[i]![1]);
      expect(m.y).toBe(POINTS[i]![2]);
    });
  });

  it("makes the concentrated hour the widest fan segment", () => {
    const counts = new Array(24).fill(2);
    counts[9] = 40;
    const glyphs = new Map([[1, glyph(1, { hourly_counts: counts })]]);
    const [marker] = buildMarkers([[1, 0, 0]], glyphs, GLYPH_ZOOM_THRESHOLD);
    if (marker?.kind !== "glyph") throw new Error("expected a glyph");
    const widest = [...marker.fan].sort((a, b) => b.widthFraction - a.widthFraction)[0]!;
    expect(widest.hour).toBe(9);
    expect(widest.widthFraction).toBe(1);
    expect(marker.fan[0]!.widthFraction).toBe(2 / 40);
  });

  it("fan width is monotone in the hourly count", () => {
    const counts = Array.from({ length: 24 }, (_, h) => h);
    const glyphs = new Map([[7, glyph(7, { hourly_counts: counts })]]);
    const [marker] = buildMarkers([[7, 1, 1]], glyphs, GLYPH_ZOOM_THRESHOLD);
    if (marker?.kind !== "glyph") throw new Error("expected a glyph");
    for (let h = 1; h < 24; h++) {
      expect(marker.fan[h]!.widthFraction).toBeGreaterThan(
        marker.fan[h - 1]!.widthFraction,
      );
    }
  });

  it("ring fractions come straight from the payload", () => {
    const g = glyph(1, {
      work_fraction: 0.625,
      home_fraction: 0.25,
      unlabeled_fraction: 0.125,
    });
    const [marker] = buildMarkers([[1, 0, 0]], new Map([[1, g]]), GLYPH_ZOOM_THRESHOLD);
    if (marker?.kind !== "glyph") throw new Error("expected a glyph");
    expect(marker.ring.map((r) => r.fraction)).toEqual([0.625, 0.25, 0.125]);
    expect(marker.ring.map((r) => r.mode)).toEqual(["work", "home", "unlabeled"]);
  });

  it("buckets the inner color by total events", () => {
    expect(eventBucketColor(0)).toBe(GLYPH_EVENT_BUCKETS[0]!.color);
    expect(eventBucketColor(100)).toBe(GLYPH_EVENT_BUCKETS[0]!.color);
    expect(eventBucketColor(101)).toBe(GLYPH_EVENT_BUCKETS[1]!.color);
    expect(eventBucketColor(10_000)).toBe(
      GLYPH_EVENT_BUCKETS[GLYPH_EVENT_BUCKETS.length - 1]!.color,
    );
  });

  it("falls back to a flagged dot when glyph data is missing", () => {
    const markers = buildMarkers(POINTS, glyphMap([1, 3]), GLYPH_ZOOM_THRESHOLD);
    expect(markers[0]!.kind).toBe("glyph");
    expect(markers[2]!.kind).toBe("glyph");
    const fallback = markers[1]!;
    expect(fallback.kind).toBe("dot");
    if (fallback.kind === "dot") {
      expect(fallback.warning).toBe(true);
      expect(fallback.color).toBe(COLORS.warning);
    }
  });

  it("all-zero hourly counts produce a zero-width fan, not NaN", () => {
    const g = glyph(1, { hourly_counts: new Array(24).fill(0) });
    const [marker] = buildMarkers([[1, 0, 0]], new Map([[1, g]]), GLYPH_ZOOM_THRESHOLD);
    if (marker?.kind !== "glyph") throw new Error("expected a glyph");
    expect(marker.fan.every((s) => s.widthFraction === 0)).toBe(true);
  });
});

describe("hover summary", () => {
  it("is phrased from the user payload fields", () => {
    const text = hoverSummary({
      user_id: 42,
      event_count: 977,
      active_months: 18,
      first_event: "2024-01-03T08:00:00+00:00",
      last_event: "2025-06-20T17:30:00+00:00",
    });
    expect(text).toContain("user 42");
    expect(text).toContain("977 events");
    expect(text).toContain("18 active months");
    expect(text).toContain("2024-01-03");
    expect(text).toContain("2025-06-20");
  });
});
