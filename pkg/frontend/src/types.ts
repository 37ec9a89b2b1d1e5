/**
 * Server payload types, field for field.
 *
 * The UI performs no analytics of its own: every number it renders is
 * read from one of these payloads. Shapes mirror the server's
 * canonical JSON exactly; nothing is added or renamed on this side.
 */

/** Compound-marker summary: event total, mode mix, 24-hour profile. */
export interface GlyphSummary {
  user_id: number;
  total_events: number;
  work_fraction: number;
  home_fraction: number;
  unlabeled_fraction: number;
  hourly_counts: number[]; // 24 entries, local-hour start counts
}

export interface UsersPayload {
  users: GlyphSummary[];
}

export interface UserPayload {
  user_id: number;
  event_count: number;
  active_months: number;
  first_event: string; // UTC ISO timestamp
  last_event: string;
  glyph: GlyphSummary;
}

export interface FeatureEntry {
  name: string;
  value: number; // raw feature value
  z: number; // standardized value
}

export interface FeaturesPayload {
  user_id: number;
  features: FeatureEntry[]; // 11 entries, fixed order
}

export interface DayGridCell {
  day: string; // ISO date
  start_hour: number;
  end_hour: number;
  event_id: string;
  labels: string[]; // sorted subset of ["Home", "Work"]
}

export interface DayGridPayload {
  user_id: number;
  from: string;
  to: string;
  highlight: string | null;
  cells: DayGridCell[];
}

/** [keyword, count] pairs, ranked by the engine. */
export type KeywordCount = [string, number];

export interface HeatmapCell {
  count: number;
  keywords: KeywordCount[];
  /** How many keywords the engine says to show inline for this count. */
  inline_limit: number;
}

export interface HeatmapDiff {
  against: string;
  grid: number[][]; // signed counts, 7 weekdays x 12 segments
}

export interface HeatmapPayload {
  users: number[];
  mode: string; // "all" | "work" | "home"
  counts: number[][];
  row_marginals: number[]; // per weekday
  col_marginals: number[]; // per two-hour segment
  cells: HeatmapCell[][];
  diff: HeatmapDiff | null;
}

/** [keyword, weight] pairs; weight semantics depend on diff mode. */
export type CloudEntry = [string, number];

export interface WordcloudPayload {
  mode: string;
  diff: boolean;
  entries: CloudEntry[];
}

export interface TopicsPayload {
  users: number[];
  diff: boolean;
  work: WordcloudPayload;
  home: WordcloudPayload;
}

export interface KeywordDistributionPayload {
  users: number[];
  keyword: string;
  total: number;
  weekday_counts: number[]; // 7 entries
  segment_counts: number[]; // 12 entries
}

/** [user_id, x, y] triples. */
export type ScatterPoint = [number, number, number];

export interface ScatterPayload {
  x: string;
  y: string;
  x_index: number;
  y_index: number;
  points: ScatterPoint[];
}

export interface ProjectionStartedPayload {
  job_id: string;
  session: string;
  status: "started";
}

export interface TsneParamsPayload {
  perplexity: number;
  learning_rate: number;
  iterations: number;
  early_exaggeration: number;
  exaggeration_iters: number;
  seed: number;
}

export interface ProgressMessage {
  kind: "progress";
  job_id: string;
  iteration: number;
  kl: number;
}

export interface ResultMessage {
  kind: "result";
  job_id: string;
  coordinates: ScatterPoint[];
  kl_trace: Array<[number, number]>;
  weights: number[] | null;
  params: TsneParamsPayload;
  warnings: string[];
  initial_diameter: number;
  final_kl: number;
}

export interface SupersededMessage {
  kind: "superseded";
  job_id: string;
  by: string;
}

export interface FailureMessage {
  kind: "failure";
  job_id: string;
  error: string;
}

export type PushMessage =
  | ProgressMessage
  | ResultMessage
  | SupersededMessage
  | FailureMessage;

export interface ErrorPayload {
  error: string;
}
