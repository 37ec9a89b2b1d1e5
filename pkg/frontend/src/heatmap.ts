/**
 * Weekly-heatmap and day-grid view builders. Counts map to opacity,
 * signed diff values map to a diverging color ramp, and keyword
 * visibility follows the engine's inline_limit field so the UI never
 * invents its own scaling rule.
 */

import { COLORS, TOOLTIP_KEYWORDS } from "./theme";
import type { DayGridCell, HeatmapPayload, KeywordCount } from "./types";

export interface HeatmapCellView {
  weekday: number; // 0 = Sunday
  segment: number; // 0..11, two-hour slots
  value: number; // the payload number this cell encodes
  opacity: number; // 0..1
  color: string;
  inlineKeywords: string[]; // shown inside the cell
  tooltipKeywords: KeywordCount[]; // at most TOOLTIP_KEYWORDS
}

export interface HeatmapView {
  mode: string;
  diff: boolean;
  cells: HeatmapCellView[][];
  rowMarginals: number[];
  colMarginals: number[];
}

function maxAbs(grid: readonly (readonly number[])[]): number {
  let m = 0;
  for (const row of grid) {
    for (const v of row) m = Math.max(m, Math.abs(v));
  }
  return m;
}

/**
 * Count view: opacity is the cell count over the grid maximum.
 * Inline keywords honor the per-cell inline_limit from the payload;
 * tooltips list at most TOOLTIP_KEYWORDS entries.
 */
export function renderCounts(payload: HeatmapPayload): HeatmapView {
  const peak = maxAbs(payload.counts);
  const cells = payload.cells.map((row, w) =>
    row.map((cell, s): HeatmapCellView => {
      const count = cell.count;
      return {
        weekday: w,
        segment: s,
        value: count,
        opacity: peak > 0 ? count / peak : 0,
        color: COLORS.work,
        inlineKeywords: cell.keywords
          .slice(0, cell.inline_limit)
          .map(([kw]) => kw),
        tooltipKeywords: cell.keywords.slice(0, TOOLTIP_KEYWORDS),
      };
    }),
  );
  return {
    mode: payload.mode,
    diff: false,
    cells,
    rowMarginals: [...payload.row_marginals],
    colMarginals: [...payload.col_marginals],
  };
}

/**
 * Diff view: rendered from the signed grid the server computed.
 * Positive cells lean toward the focal mode, negative toward the
 * compared one; a zero difference is neutral. Identical grids
 * therefore render uniformly neutral.
 */
export function renderDiff(payload: HeatmapPayload): HeatmapView {
  if (!payload.diff) {
    throw new Error("payload has no diff grid; request with a diff mode");
  }
  const grid = payload.diff.grid;
  const peak = maxAbs(grid);
  const cells = grid.map((row, w) =>
    row.map((value, s): HeatmapCellView => {
      const cell = payload.cells[w]?.[s];
      return {
        weekday: w,
        segment: s,
        value,
        opacity: peak > 0 ? Math.abs(value) / peak : 0,
        color:
          value > 0
            ? COLORS.diffPositive
            : value < 0
              ? COLORS.diffNegative
              : COLORS.diffNeutral,
        inlineKeywords: cell
          ? cell.keywords.slice(0, cell.inline_limit).map(([kw]) => kw)
          : [],
        tooltipKeywords: cell ? cell.keywords.slice(0, TOOLTIP_KEYWORDS) : [],
      };
    }),
  );
  return {
    mode: `${payload.mode}-${payload.diff.against}`,
    diff: true,
    cells,
    rowMarginals: [...payload.row_marginals],
    colMarginals: [...payload.col_marginals],
  };
}

export function renderWeekly(payload: HeatmapPayload, diffOn: boolean): HeatmapView {
  return diffOn ? renderDiff(payload) : renderCounts(payload);
}

export interface DayGridCellView {
  day: string;
  startHour: number;
  endHour: number;
  eventId: string;
  color: string;
}

/**
 * Day-grid cells are gray until a highlight mode is chosen; then
 * cells carrying that label turn blue (work) or green (home).
 */
export function renderDayGrid(
  cells: readonly DayGridCell[],
  highlight: "work" | "home" | null,
): DayGridCellView[] {
  return cells.map((cell) => {
    let color: string = COLORS.unlabeled;
    if (highlight === "work" && cell.labels.includes("Work")) color = COLORS.work;
    if (highlight === "home" && cell.labels.includes("Home")) color = COLORS.home;
    return {
      day: cell.day,
      startHour: cell.start_hour,
      endHour: cell.end_hour,
      eventId: cell.event_id,
      color,
    };
  });
}
