import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function stubFetch(status: number, body: unknown): ReturnType<typeof vi.fn> {
  const mock = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  }));
  vi.stubGlobal("fetch", mock);
  return mock;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("builds pathway queries with run and time bounds", async () => {
    const mock = stubFetch(200, { entity: "e", run: "r", layers: [], edges: [] });
    const api = new ApiClient("http://h");
    await api.pathways("blue lagoon", {
      run: "run-0002",
      from: "2024-03-01T00:00:00Z",
      to: "2024-03-05T00:00:00Z",
    });
    const url = mock.mock.calls[0]![0] as string;
    expect(url).toBe(
      "http://h/entities/blue%20lagoon/pathways?run=run-0002" +
        "&from=2024-03-01T00%3A00%3A00Z&to=2024-03-05T00%3A00%3A00Z",
    );
  });

  it("omits empty query parameters", async () => {
    const mock = stubFetch(200, { entity: "e", run: "r", layers: [], edges: [] });
    const api = new ApiClient("http://h");
    await api.pathways("e", {});
    expect(mock.mock.calls[0]![0]).toBe("http://h/entities/e/pathways");
  });

  it("passes the cluster filter to the posts route", async () => {
    const mock = stubFetch(200, { entity: "e", run: "r", cluster: "c", posts: [] });
    const api = new ApiClient("http://h");
    await api.posts("e", { cluster: "L1C1" });
    expect(mock.mock.calls[0]![0]).toBe("http://h/entities/e/posts?cluster=L1C1");
  });

  it("posts run submissions as JSON", async () => {
    const mock = stubFetch(202, { run_id: "run-0002", entity: "e", status: "running" });
    const api = new ApiClient("http://h");
    await api.startRun("e", { window: "12h" });
    const [url, init] = mock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://h/runs");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({
      entity: "e",
      config: { window: "12h" },
    });
  });

  it("throws ApiError with the server's detail", async () => {
    stubFetch(404, { detail: "unknown entity 'x'" });
    const api = new ApiClient("http://h");
    const err = await api.entities().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).message).toBe("unknown entity 'x'");
  });

  it("copes with non-JSON error bodies", async () => {
    const mock = vi.fn(async () => ({
      ok: false,
      status: 502,
      json: async () => {
        throw new Error("not json");
      },
    }));
    vi.stubGlobal("fetch", mock);
    const api = new ApiClient("http://h");
    const err = await api.entities().catch((e: unknown) => e);
    expect((err as ApiError).message).toBe("HTTP 502");
  });
});
