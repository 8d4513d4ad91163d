/**
 * Thin fetch client for the analytics service. Every method returns the
 * parsed JSON payload or throws ApiError with the server's detail string.
 */

import type {
  EntityRow,
  InsightsDoc,
  PathwaysDoc,
  PostsDoc,
  RunSummary,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

export interface PathwayQuery {
  run?: string;
  from?: string;
  to?: string;
}

export interface PostsQuery {
  run?: string;
  cluster?: string;
}

function query(params: Record<string, string | undefined>): string {
  const q = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined && value !== "") q.set(key, value);
  }
  const s = q.toString();
  return s ? `?${s}` : "";
}

export class ApiClient {
  private readonly base: string;

  constructor(baseUrl = "") {
    this.base = baseUrl.replace(/\/$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof body === "object" && body !== null && "detail" in body
          ? String((body as { detail: unknown }).detail)
          : `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  entities(): Promise<EntityRow[]> {
    return this.request("/entities");
  }

  pathways(entity: string, opts: PathwayQuery = {}): Promise<PathwaysDoc> {
    return this.request(
      `/entities/${encodeURIComponent(entity)}/pathways` +
        query({ run: opts.run, from: opts.from, to: opts.to }),
    );
  }

  aspects(entity: string, run?: string): Promise<InsightsDoc> {
    return this.request(
      `/entities/${encodeURIComponent(entity)}/aspects` + query({ run }),
    );
  }

  posts(entity: string, opts: PostsQuery = {}): Promise<PostsDoc> {
    return this.request(
      `/entities/${encodeURIComponent(entity)}/posts` +
        query({ run: opts.run, cluster: opts.cluster }),
    );
  }

  startRun(entity: string, config: Record<string, unknown> = {}): Promise<RunSummary> {
    return this.request("/runs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ entity, config }),
    });
  }
}
