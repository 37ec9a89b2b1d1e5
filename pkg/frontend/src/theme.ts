/**
 * Every visual constant lives here: colors, zoom behavior, glyph
 * geometry, slider presets. Encodings follow the house convention of
 * blue for work, green for home, red for diff controls.
 */

/** One mouse-scroll multiplies the zoom level by this factor. */
export const ZOOM_STEP = 1.25;

/**
 * Dots become glyphs at five scrolls in from the 1.0 baseline. The
 * threshold is equality-inclusive: a zoom of exactly ZOOM_STEP ** 5
 * renders glyphs.
 */
export const GLYPH_ZOOM_THRESHOLD = ZOOM_STEP ** 5;

export const COLORS = {
  work: "#2c7bb6",
  home: "#45a544",
  unlabeled: "#9e9e9e",
  diffPositive: "#d7191c", // more of the focal mode
  diffNegative: "#2c7bb6", // more of the compared mode
  diffNeutral: "#f5f5f5",
  dot: "#5b5b8a",
  marker: "#111111", // the "your value here" histogram marker
  warning: "#e6a817",
} as const;

/** Inner-circle fill by total-events bucket, smallest bucket first. */
export const GLYPH_EVENT_BUCKETS: ReadonlyArray<{
  upTo: number;
  color: string;
}> = [
  { upTo: 100, color: "#c6dbef" },
  { upTo: 300, color: "#6baed6" },
  { upTo: 1000, color: "#2171b5" },
  { upTo: Infinity, color: "#08306b" },
];

export const GLYPH_RADII = {
  dot: 3,
  inner: 6,
  ringOuter: 10,
  fanMax: 18, // a fan bar at peak frequency reaches this radius
} as const;

export const WORDCLOUD = {
  minFontPx: 11,
  maxFontPx: 34,
} as const;

/** Slider presets, by feature order:
 * modification_rate, monthly_volume, weekend_ratio, weekday_ratio,
 * morning, lunch, afternoon, evening, night, work_rate, home_rate.
 */
export const WEIGHT_PRESETS: Readonly<Record<string, readonly number[]>> = {
  default: [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
  temporal: [0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0],
  content: [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
  volume: [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
};

export const DEBOUNCE_MS = 300;

export const TOOLTIP_KEYWORDS = 10;

export const HISTOGRAM_BINS = 20;
