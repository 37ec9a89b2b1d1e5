/**
 * Pure scene-graph builders for the projection view. Output is plain
 * data the canvas layer paints verbatim, which is what lets tests pin
 * every rendered number to an API field.
 */

import { COLORS, GLYPH_EVENT_BUCKETS, GLYPH_RADII, GLYPH_ZOOM_THRESHOLD } from "./theme";
import type { GlyphSummary, ScatterPoint } from "./types";

export interface DotMarker {
  kind: "dot";
  userId: number;
  x: number;
  y: number;
  radius: number;
  color: string;
  /** Set when glyph data was missing at glyph zoom. */
  warning: boolean;
}

export interface RingSegment {
  mode: "work" | "home" | "unlabeled";
  fraction: number; // straight from the glyph payload
  color: string;
}

export interface FanSegment {
  hour: number; // 0..23
  /** Radial extent as a share of the peak hour, 0..1. */
  widthFraction: number;
  count: number; // the payload count this bar encodes
}

export interface GlyphMarker {
  kind: "glyph";
  userId: number;
  x: number;
  y: number;
  innerRadius: number;
  innerColor: string; // total-events bucket
  totalEvents: number;
  ring: RingSegment[];
  fan: FanSegment[]; // 24 one-hour segments
}

export type Marker = DotMarker | GlyphMarker;

/** Equality-inclusive: at the threshold, glyphs render. */
export function glyphsVisible(zoom: number): boolean {
  return zoom >= GLYPH_ZOOM_THRESHOLD;
}

export function eventBucketColor(totalEvents: number): string {
  for (const bucket of GLYPH_EVENT_BUCKETS) {
    if (totalEvents <= bucket.upTo) return bucket.color;
  }
  // GLYPH_EVENT_BUCKETS ends with an Infinity bucket
  return GLYPH_EVENT_BUCKETS[GLYPH_EVENT_BUCKETS.length - 1]!.color;
}

function buildGlyph(point: ScatterPoint, glyph: GlyphSummary): GlyphMarker {
  const [userId, x, y] = point;
  const peak = Math.max(0, ...glyph.hourly_counts);
  const fan: FanSegment[] = glyph.hourly_counts.map((count, hour) => ({
    hour,
    widthFraction: peak > 0 ? count / peak : 0,
    count,
  }));
  return {
    kind: "glyph",
    userId,
    x,
    y,
    innerRadius: GLYPH_RADII.inner,
    innerColor: eventBucketColor(glyph.total_events),
    totalEvents: glyph.total_events,
    ring: [
      { mode: "work", fraction: glyph.work_fraction, color: COLORS.work },
      { mode: "home", fraction: glyph.home_fraction, color: COLORS.home },
      {
        mode: "unlabeled",
        fraction: glyph.unlabeled_fraction,
        color: COLORS.unlabeled,
      },
    ],
    fan,
  };
}

function buildDot(point: ScatterPoint, warning: boolean): DotMarker {
  const [userId, x, y] = point;
  return {
    kind: "dot",
    userId,
    x,
    y,
    radius: GLYPH_RADII.dot,
    color: warning ? COLORS.warning : COLORS.dot,
    warning,
  };
}

/**
 * Level-of-detail switch for the scatterplot. Below the zoom
 * threshold every user is a dot; at or above it, users render as
 * glyphs. A user with no glyph summary falls back to a flagged dot.
 */
export function buildMarkers(
  points: readonly ScatterPoint[],
  glyphs: ReadonlyMap<number, GlyphSummary>,
  zoom: number,
): Marker[] {
  const wantGlyphs = glyphsVisible(zoom);
  return points.map((point) => {
    if (!wantGlyphs) return buildDot(point, false);
    const glyph = glyphs.get(point[0]);
    return glyph ? buildGlyph(point, glyph) : buildDot(point, true);
  });
}

/** Hover text for one user, phrased from the user payload fields. */
export function hoverSummary(user: {
  user_id: number;
  event_count: number;
  active_months: number;
  first_event: string;
  last_event: string;
}): string {
  return (
    `user ${user.user_id}: ${user.event_count} events over ` +
    `${user.active_months} active months ` +
    `(${user.first_event.slice(0, 10)} to ${user.last_event.slice(0, 10)})`
  );
}
