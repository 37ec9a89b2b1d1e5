/**
 * Deterministic word-cloud layout. Font size is linear in entry
 * weight; collisions resolve along a fixed Archimedean spiral, so the
 * same entries always produce the same picture.
 */

import { WORDCLOUD } from "./theme";
import type { CloudEntry } from "./types";

export interface PlacedWord {
  keyword: string;
  weight: number; // straight from the payload entry
  fontPx: number;
  x: number; // rect center
  y: number;
  width: number;
  height: number;
}

// Glyph box approximation: average advance per character at 1px font.
const CHAR_WIDTH = 0.6;
const LINE_HEIGHT = 1.2;

// Spiral step; small enough for tight packing, fixed for determinism.
const SPIRAL_STEP = 0.42;
const RADIAL_GAIN = 1.7;

export function fontSize(weight: number, maxWeight: number): number {
  if (maxWeight <= 0) return WORDCLOUD.minFontPx;
  const t = Math.max(0, weight) / maxWeight;
  return WORDCLOUD.minFontPx + (WORDCLOUD.maxFontPx - WORDCLOUD.minFontPx) * t;
}

function measure(keyword: string, fontPx: number): { w: number; h: number } {
  return {
    w: Math.max(1, keyword.length) * CHAR_WIDTH * fontPx,
    h: LINE_HEIGHT * fontPx,
  };
}

function overlaps(a: PlacedWord, b: PlacedWord): boolean {
  return (
    Math.abs(a.x - b.x) * 2 < a.width + b.width &&
    Math.abs(a.y - b.y) * 2 < a.height + b.height
  );
}

/**
 * Place entries in payload order (the engine already ranked them).
 * Each word starts at the center and walks the spiral until it clears
 * every placed word. No randomness anywhere.
 */
export function layoutCloud(entries: readonly CloudEntry[]): PlacedWord[] {
  const maxWeight = entries.reduce((m, [, w]) => Math.max(m, w), 0);
  const placed: PlacedWord[] = [];
  for (const [keyword, weight] of entries) {
    const fontPx = fontSize(weight, maxWeight);
    const { w, h } = measure(keyword, fontPx);
    const word: PlacedWord = {
      keyword,
      weight,
      fontPx,
      x: 0,
      y: 0,
      width: w,
      height: h,
    };
    let theta = 0;
    // Spiral out until free; bounded to keep worst cases finite.
    for (let i = 0; i < 20000; i++) {
      const r = RADIAL_GAIN * theta;
      word.x = r * Math.cos(theta);
      word.y = r * Math.sin(theta);
      if (!placed.some((p) => overlaps(word, p))) break;
      theta += SPIRAL_STEP / (1 + 0.05 * theta);
    }
    placed.push({ ...word });
  }
  return placed;
}
