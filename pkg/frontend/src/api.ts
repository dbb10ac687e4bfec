/**
 * Typed client for the labeling service. One method per endpoint, no
 * caching, no retries; errors carry the HTTP status and the service's
 * `detail` message so callers can branch on 409 vs 400.
 */

import type {
  ClassList,
  LabelChoice,
  PointDetail,
  QueryView,
  SessionView,
  SubmitResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let detail = response.statusText || `HTTP ${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  session(): Promise<SessionView> {
    return this.request<SessionView>("/api/session");
  }

  query(): Promise<QueryView> {
    return this.request<QueryView>("/api/query");
  }

  classes(): Promise<ClassList> {
    return this.request<ClassList>("/api/classes");
  }

  point(id: number): Promise<PointDetail> {
    return this.request<PointDetail>(`/api/points/${id}`);
  }

  submitLabels(iteration: number, labels: LabelChoice[]): Promise<SubmitResponse> {
    return this.request<SubmitResponse>("/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ iteration, labels }),
    });
  }
}
