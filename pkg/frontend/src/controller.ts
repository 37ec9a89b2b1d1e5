/**
 * The application controller: owns the view state, talks to the
 * server, and keeps a plain-data Scene that the canvas layer paints
 * as-is. All the concurrency policy lives here: one in-flight
 * projection job per session, debounced slider edits, and raced read
 * requests with stale-response discard.
 */

import { ApiClient, RaceGate } from "./api";
import { debounce } from "./debounce";
import { renderDayGrid, renderWeekly, type DayGridCellView, type HeatmapView } from "./heatmap";
import { buildMarkers, type Marker } from "./scene";
import {
  clampWeight,
  decodeFragment,
  defaultState,
  encodeFragment,
  normalizeState,
  type ViewState,
} from "./state";
import { DEBOUNCE_MS } from "./theme";
import { buildHistogram, presetWeights, type HistogramView } from "./weights";
import { layoutCloud, type PlacedWord } from "./wordcloud";
import type {
  GlyphSummary,
  HeatmapPayload,
  KeywordDistributionPayload,
  PushMessage,
  ScatterPoint,
  TopicsPayload,
} from "./types";

export interface ProgressIndicator {
  jobId: string;
  iteration: number;
  kl: number;
}

export interface KeywordLineView {
  keyword: string;
  total: number;
  weekdayCounts: number[];
  segmentCounts: number[];
}

export interface Toast {
  text: string;
}

/** Everything on screen, as data. The DOM layer renders this verbatim. */
export interface Scene {
  markers: Marker[];
  heatmap: HeatmapView | null;
  dayGrid: DayGridCellView[];
  workCloud: PlacedWord[];
  homeCloud: PlacedWord[];
  keywordLine: KeywordLineView | null;
  histogram: HistogramView | null;
  scatterPoints: ScatterPoint[];
  progress: ProgressIndicator | null;
  toast: Toast | null;
}

function emptyScene(): Scene {
  return {
    markers: [],
    heatmap: null,
    dayGrid: [],
    workCloud: [],
    homeCloud: [],
    keywordLine: null,
    histogram: null,
    scatterPoints: [],
    progress: null,
    toast: null,
  };
}

export interface ControllerOptions {
  session?: string;
  debounceMs?: number;
  onRender?: (scene: Scene) => void;
}

export class Controller {
  readonly scene: Scene = emptyScene();
  state: ViewState = defaultState();

  private glyphs = new Map<number, GlyphSummary>();
  private coordinates: ScatterPoint[] = [];
  private lastHeatmapPayload: HeatmapPayload | null = null;
  private readonly session: string;
  private readonly onRender: (scene: Scene) => void;
  private readonly scheduleProjection: { (): void; cancel(): void };

  private readonly heatmapGate = new RaceGate();
  private readonly topicsGate = new RaceGate();
  private readonly keywordGate = new RaceGate();
  private readonly scatterGate = new RaceGate();
  private readonly dayGridGate = new RaceGate();

  constructor(
    private readonly api: ApiClient,
    options: ControllerOptions = {},
  ) {
    this.session = options.session ?? "default";
    this.onRender = options.onRender ?? (() => {});
    this.scheduleProjection = debounce(
      () => void this.submitProjection(),
      options.debounceMs ?? DEBOUNCE_MS,
    );
  }

  private render(): void {
    this.onRender(this.scene);
  }

  fragment(): string {
    return encodeFragment(this.state);
  }

  /** Load glyph summaries and start the first projection job. */
  async init(fromFragment?: string): Promise<void> {
    if (fromFragment !== undefined) {
      this.state = decodeFragment(fromFragment);
    }
    const users = await this.api.getUsers();
    this.glyphs = new Map(users.users.map((g) => [g.user_id, g]));
    await this.submitProjection();
  }

  // --- projection ---------------------------------------------------------

  /** Slider edit: clamp, store, and debounce one job submission. */
  setWeight(index: number, value: number): void {
    const weights = [...this.state.weights];
    weights[index] = clampWeight(value);
    this.state = { ...this.state, weights };
    this.scheduleProjection();
  }

  applyPreset(name: string): void {
    this.state = { ...this.state, weights: presetWeights(name) };
    this.scheduleProjection();
  }

  async submitProjection(): Promise<void> {
    try {
      await this.api.postProjection(this.session, this.state.weights);
      // progress/result arrive on the push channel
    } catch (err) {
      this.scene.toast = { text: (err as Error).message };
      this.render();
    }
  }

  /** Push-channel dispatch. Layout stays put except on "result". */
  handleMessage(msg: PushMessage): void {
    switch (msg.kind) {
      case "progress":
        this.scene.progress = {
          jobId: msg.job_id,
          iteration: msg.iteration,
          kl: msg.kl,
        };
        break;
      case "result":
        this.coordinates = msg.coordinates;
        this.scene.progress = null;
        this.rebuildMarkers();
        break;
      case "superseded":
        // a newer job owns the session; just stop animating this one
        this.scene.progress = null;
        break;
      case "failure":
        this.scene.progress = null;
        this.scene.toast = { text: msg.error };
        break;
    }
    this.render();
  }

  private rebuildMarkers(): void {
    this.scene.markers = buildMarkers(this.coordinates, this.glyphs, this.state.zoom);
  }

  // --- zoom / pan ---------------------------------------------------------

  setZoom(zoom: number): void {
    this.state = normalizeState({ ...this.state, zoom });
    this.rebuildMarkers();
    this.render();
  }

  // --- selection-driven panels ---------------------------------------------

  /** Click or lasso: refresh every panel keyed by the selection. */
  async setSelection(users: number[]): Promise<void> {
    this.state = normalizeState({ ...this.state, selectedUsers: users });
    await Promise.all([this.refreshHeatmap(), this.refreshTopics()]);
    if (this.state.searchedKeyword) await this.refreshKeywordLine();
  }

  async refreshHeatmap(): Promise<void> {
    const id = this.heatmapGate.issue();
    const { selectedUsers, heatmapDiff, heatmapMode } = this.state;
    // Diff view always compares work against home; the mode buttons
    // drive the count view.
    const payload = heatmapDiff
      ? await this.api.getHeatmap(selectedUsers, "work", "home")
      : await this.api.getHeatmap(selectedUsers, heatmapMode);
    if (!this.heatmapGate.isCurrent(id)) return; // stale, a newer request won
    this.lastHeatmapPayload = payload;
    this.scene.heatmap = renderWeekly(payload, heatmapDiff);
    this.render();
  }

  async toggleHeatmapDiff(): Promise<void> {
    this.state = { ...this.state, heatmapDiff: !this.state.heatmapDiff };
    await this.refreshHeatmap();
  }

  setHeatmapMode(mode: ViewState["heatmapMode"]): Promise<void> {
    this.state = { ...this.state, heatmapMode: mode };
    return this.refreshHeatmap();
  }

  async refreshTopics(): Promise<void> {
    const id = this.topicsGate.issue();
    const payload: TopicsPayload = await this.api.getTopics(
      this.state.selectedUsers,
      this.state.wordcloudDiff,
    );
    if (!this.topicsGate.isCurrent(id)) return;
    this.scene.workCloud = layoutCloud(payload.work.entries);
    this.scene.homeCloud = layoutCloud(payload.home.entries);
    this.render();
  }

  async toggleWordcloudDiff(): Promise<void> {
    this.state = { ...this.state, wordcloudDiff: !this.state.wordcloudDiff };
    await this.refreshTopics();
  }

  async searchKeyword(keyword: string): Promise<void> {
    this.state = { ...this.state, searchedKeyword: keyword };
    await this.refreshKeywordLine();
  }

  private async refreshKeywordLine(): Promise<void> {
    const id = this.keywordGate.issue();
    const payload: KeywordDistributionPayload = await this.api.getKeywordDistribution(
      this.state.selectedUsers,
      this.state.searchedKeyword,
    );
    if (!this.keywordGate.isCurrent(id)) return;
    this.scene.keywordLine = {
      keyword: payload.keyword,
      total: payload.total,
      weekdayCounts: [...payload.weekday_counts],
      segmentCounts: [...payload.segment_counts],
    };
    this.render();
  }

  // --- feature panels -------------------------------------------------------

  /** Histogram for one feature; black marker = the chosen user's value. */
  async showHistogram(featureIndex: number, userId: number | null): Promise<void> {
    const id = this.scatterGate.issue();
    const scatter = await this.api.getScatter(featureIndex, (featureIndex + 1) % 11);
    let marker: number | null = null;
    if (userId !== null) {
      const features = await this.api.getFeatures(userId);
      marker = features.features[featureIndex]?.value ?? null;
    }
    if (!this.scatterGate.isCurrent(id)) return;
    this.scene.histogram = buildHistogram(scatter, marker);
    this.render();
  }

  async showScatter(x: number, y: number): Promise<void> {
    if (x === y) throw new Error("scatter axes must be distinct");
    this.state = normalizeState({ ...this.state, scatterX: x, scatterY: y });
    const id = this.scatterGate.issue();
    const payload = await this.api.getScatter(x, y);
    if (!this.scatterGate.isCurrent(id)) return;
    this.scene.scatterPoints = payload.points;
    this.render();
  }

  async showDayGrid(
    userId: number,
    from: string,
    to: string,
    highlight: "work" | "home" | null,
  ): Promise<void> {
    const id = this.dayGridGate.issue();
    const payload = await this.api.getDayGrid(userId, from, to, highlight ?? undefined);
    if (!this.dayGridGate.isCurrent(id)) return;
    this.scene.dayGrid = renderDayGrid(payload.cells, highlight);
    this.render();
  }
}
