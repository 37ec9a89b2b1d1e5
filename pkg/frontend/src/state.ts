/**
 * Shareable view state and its URL-fragment round trip.
 *
 * The fragment is the single source of truth for "what am I looking
 * at": pasting a URL reproduces the analysis view. Encoding is a
 * plain key=value fragment; decode clamps everything back into range
 * so a hand-edited URL can never produce an invalid state.
 */

export interface ViewState {
  zoom: number; // >= minimum zoom, multiplicative scroll steps
  panX: number;
  panY: number;
  weights: number[]; // 11 slider values, each in [0, 1]
  selectedUsers: number[]; // sorted, deduplicated
  heatmapMode: "all" | "work" | "home";
  heatmapDiff: boolean; // independent of wordcloudDiff
  wordcloudDiff: boolean;
  searchedKeyword: string; // typed into the distribution line graph
  scatterX: number; // feature indices, 0..10, distinct handled by caller
  scatterY: number;
}

export const N_WEIGHTS = 11;
export const MIN_ZOOM = 0.25;
export const MAX_ZOOM = 64;

export function defaultState(): ViewState {
  return {
    zoom: 1,
    panX: 0,
    panY: 0,
    weights: new Array(N_WEIGHTS).fill(1),
    selectedUsers: [],
    heatmapMode: "all",
    heatmapDiff: false,
    wordcloudDiff: false,
    searchedKeyword: "",
    scatterX: 0,
    scatterY: 1,
  };
}

export function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

/** Slider values live in [0, 1]; NaN falls back to 0. */
export function clampWeight(v: number): number {
  if (!Number.isFinite(v)) return 0;
  return clamp(v, 0, 1);
}

export function normalizeWeights(ws: readonly number[]): number[] {
  const out = new Array(N_WEIGHTS).fill(1);
  for (let i = 0; i < N_WEIGHTS; i++) {
    const v = ws[i];
    out[i] = v === undefined ? 1 : clampWeight(v);
  }
  return out;
}

function normalizeUsers(ids: readonly number[]): number[] {
  const seen = new Set<number>();
  for (const id of ids) {
    if (Number.isInteger(id) && id > 0) seen.add(id);
  }
  return [...seen].sort((a, b) => a - b);
}

/** Force every field into its documented range. */
export function normalizeState(s: ViewState): ViewState {
  return {
    zoom: Number.isFinite(s.zoom) ? clamp(s.zoom, MIN_ZOOM, MAX_ZOOM) : 1,
    panX: Number.isFinite(s.panX) ? s.panX : 0,
    panY: Number.isFinite(s.panY) ? s.panY : 0,
    weights: normalizeWeights(s.weights),
    selectedUsers: normalizeUsers(s.selectedUsers),
    heatmapMode: ["all", "work", "home"].includes(s.heatmapMode)
      ? s.heatmapMode
      : "all",
    heatmapDiff: Boolean(s.heatmapDiff),
    wordcloudDiff: Boolean(s.wordcloudDiff),
    searchedKeyword: s.searchedKeyword ?? "",
    scatterX: Number.isInteger(s.scatterX) ? clamp(s.scatterX, 0, 10) : 0,
    scatterY: Number.isInteger(s.scatterY) ? clamp(s.scatterY, 0, 10) : 1,
  };
}

// Fragment keys, kept one or two characters for short URLs.
const KEYS = {
  zoom: "z",
  panX: "px",
  panY: "py",
  weights: "w",
  selectedUsers: "sel",
  heatmapMode: "hm",
  heatmapDiff: "hd",
  wordcloudDiff: "wd",
  searchedKeyword: "kw",
  scatterX: "sx",
  scatterY: "sy",
} as const;

function fmt(v: number): string {
  // Shortest round-trippable decimal; keeps fragments readable.
  return String(v);
}

export function encodeFragment(state: ViewState): string {
  const s = normalizeState(state);
  const parts = [
    `${KEYS.zoom}=${fmt(s.zoom)}`,
    `${KEYS.panX}=${fmt(s.panX)}`,
    `${KEYS.panY}=${fmt(s.panY)}`,
    `${KEYS.weights}=${s.weights.map(fmt).join(",")}`,
    `${KEYS.selectedUsers}=${s.selectedUsers.join(",")}`,
    `${KEYS.heatmapMode}=${s.heatmapMode}`,
    `${KEYS.heatmapDiff}=${s.heatmapDiff ? 1 : 0}`,
    `${KEYS.wordcloudDiff}=${s.wordcloudDiff ? 1 : 0}`,
    `${KEYS.searchedKeyword}=${encodeURIComponent(s.searchedKeyword)}`,
    `${KEYS.scatterX}=${s.scatterX}`,
    `${KEYS.scatterY}=${s.scatterY}`,
  ];
  return "#" + parts.join("&");
}

function parseNumberList(raw: string): number[] {
  if (raw === "") return [];
  return raw.split(",").map((t) => Number(t));
}

/** Inverse of encodeFragment; tolerant of missing or junk fields. */
export function decodeFragment(fragment: string): ViewState {
  const base = defaultState();
  const text = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  if (text === "") return base;
  const fields = new Map<string, string>();
  for (const part of text.split("&")) {
    const eq = part.indexOf("=");
    if (eq < 0) continue;
    fields.set(part.slice(0, eq), part.slice(eq + 1));
  }
  const get = (k: string): string | undefined => fields.get(k);

  const raw: ViewState = {
    zoom: get(KEYS.zoom) !== undefined ? Number(get(KEYS.zoom)) : base.zoom,
    panX: get(KEYS.panX) !== undefined ? Number(get(KEYS.panX)) : base.panX,
    panY: get(KEYS.panY) !== undefined ? Number(get(KEYS.panY)) : base.panY,
    weights:
      get(KEYS.weights) !== undefined
        ? parseNumberList(get(KEYS.weights)!)
        : base.weights,
    selectedUsers:
      get(KEYS.selectedUsers) !== undefined
        ? parseNumberList(get(KEYS.selectedUsers)!)
        : base.selectedUsers,
    heatmapMode: (get(KEYS.heatmapMode) ?? base.heatmapMode) as ViewState["heatmapMode"],
    heatmapDiff: get(KEYS.heatmapDiff) === "1",
    wordcloudDiff: get(KEYS.wordcloudDiff) === "1",
    searchedKeyword: decodeURIComponent(get(KEYS.searchedKeyword) ?? ""),
    scatterX:
      get(KEYS.scatterX) !== undefined ? Number(get(KEYS.scatterX)) : base.scatterX,
    scatterY:
      get(KEYS.scatterY) !== undefined ? Number(get(KEYS.scatterY)) : base.scatterY,
  };
  return normalizeState(raw);
}
