/**
 * Weight-panel view builders: per-feature population histograms with
 * the selected user's value as a black marker, and the named presets.
 */

import { COLORS, HISTOGRAM_BINS, WEIGHT_PRESETS } from "./theme";
import type { ScatterPayload } from "./types";

export interface HistogramView {
  feature: string;
  /** Bin occupancy over the population, from the scatter payload. */
  bins: number[];
  binEdges: number[]; // length bins + 1
  /** The selected user's raw value, straight from the features payload. */
  marker: number | null;
  markerColor: string;
}

/**
 * Bin the population's values for one feature. Values come verbatim
 * from a scatter payload with that feature on the x axis; this
 * function only counts them into equal-width display bins.
 */
export function buildHistogram(
  scatter: ScatterPayload,
  markerValue: number | null,
): HistogramView {
  const values = scatter.points.map(([, x]) => x);
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (values.length === 0 || !Number.isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) hi = lo + 1; // all-equal column still gets one bin span
  const edges: number[] = [];
  for (let i = 0; i <= HISTOGRAM_BINS; i++) {
    edges.push(lo + ((hi - lo) * i) / HISTOGRAM_BINS);
  }
  const bins = new Array(HISTOGRAM_BINS).fill(0);
  for (const v of values) {
    let idx = Math.floor(((v - lo) / (hi - lo)) * HISTOGRAM_BINS);
    if (idx === HISTOGRAM_BINS) idx = HISTOGRAM_BINS - 1; // hi lands in last bin
    bins[idx] += 1;
  }
  return {
    feature: scatter.x,
    bins,
    binEdges: edges,
    marker: markerValue,
    markerColor: COLORS.marker,
  };
}

export function presetNames(): string[] {
  return Object.keys(WEIGHT_PRESETS);
}

/** Table lookup; unknown names fall back to the default preset. */
export function presetWeights(name: string): number[] {
  const preset = WEIGHT_PRESETS[name] ?? WEIGHT_PRESETS["default"]!;
  return [...preset];
}
