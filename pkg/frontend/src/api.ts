/**
 * Thin typed client over the analytics server. Endpoints are consumed
 * verbatim; no response field is reshaped. The fetch function is
 * injectable so tests can stub the server.
 */

import type {
  DayGridPayload,
  ErrorPayload,
  FeaturesPayload,
  GlyphSummary,
  HeatmapPayload,
  KeywordDistributionPayload,
  ProjectionStartedPayload,
  ScatterPayload,
  TopicsPayload,
  UserPayload,
  UsersPayload,
} from "./types";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; text(): Promise<string> }>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/**
 * Stale-response discard for racing reads. Each panel owns one gate;
 * a response is applied only if no newer request was issued since.
 */
export class RaceGate {
  private counter = 0;

  issue(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(id: number): boolean {
    return id === this.counter;
  }
}

function joinUsers(users: readonly number[]): string {
  return users.join(",");
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (url, init) =>
      fetch(url, init) as unknown as ReturnType<FetchLike>,
  ) {}

  private async request<T>(path: string, init?: Parameters<FetchLike>[1]): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    const text = await resp.text();
    if (resp.status < 200 || resp.status >= 300) {
      let message = `HTTP ${resp.status}`;
      try {
        const body = JSON.parse(text) as ErrorPayload;
        if (typeof body.error === "string") message = body.error;
      } catch {
        // non-JSON error body, keep the status message
      }
      throw new ApiError(resp.status, message);
    }
    return JSON.parse(text) as T;
  }

  getUsers(): Promise<UsersPayload> {
    return this.request("/api/users");
  }

  getUser(userId: number): Promise<UserPayload> {
    return this.request(`/api/users/${userId}`);
  }

  getFeatures(userId: number): Promise<FeaturesPayload> {
    return this.request(`/api/users/${userId}/features`);
  }

  getGlyph(userId: number): Promise<GlyphSummary> {
    return this.request(`/api/users/${userId}/glyph`);
  }

  getDayGrid(
    userId: number,
    from: string,
    to: string,
    highlight?: "work" | "home",
  ): Promise<DayGridPayload> {
    let q = `from=${from}&to=${to}`;
    if (highlight) q += `&highlight=${highlight}`;
    return this.request(`/api/users/${userId}/daygrid?${q}`);
  }

  getHeatmap(
    users: readonly number[],
    mode: "all" | "work" | "home",
    diff?: "work" | "home",
  ): Promise<HeatmapPayload> {
    let q = `mode=${mode}`;
    if (users.length > 0) q = `users=${joinUsers(users)}&` + q;
    if (diff) q += `&diff=${diff}`;
    return this.request(`/api/heatmap/weekly?${q}`);
  }

  getTopics(users: readonly number[], diff: boolean): Promise<TopicsPayload> {
    let q = `users=${joinUsers(users)}`;
    if (diff) q += `&diff=1`;
    return this.request(`/api/topics?${q}`);
  }

  getKeywordDistribution(
    users: readonly number[],
    keyword: string,
  ): Promise<KeywordDistributionPayload> {
    const q = `users=${joinUsers(users)}&keyword=${encodeURIComponent(keyword)}`;
    return this.request(`/api/keyword-distribution?${q}`);
  }

  getScatter(x: string | number, y: string | number): Promise<ScatterPayload> {
    return this.request(`/api/scatter?x=${x}&y=${y}`);
  }

  postProjection(
    session: string,
    weights: readonly number[],
    params?: Record<string, number>,
  ): Promise<ProjectionStartedPayload> {
    const body: Record<string, unknown> = { weights: [...weights] };
    if (params) body.params = params;
    return this.request(`/api/projection?session=${encodeURIComponent(session)}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
