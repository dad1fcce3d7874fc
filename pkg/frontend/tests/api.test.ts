import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function fakeFetch(status: number, body: unknown): typeof fetch {
  return async () =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
}

describe("ApiClient", () => {
  it("returns parsed JSON on success", async () => {
    const client = new ApiClient("http://x", fakeFetch(200, { trees: 1 }));
    await expect(client.stats()).resolves.toEqual({ trees: 1 });
  });

  it("maps service errors to ApiError with status and message", async () => {
    const client = new ApiClient("http://x", fakeFetch(409, { error: "already approved" }));
    const failure = client.approve(5, 0);
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(client.approve(5, 0)).rejects.toMatchObject({
      status: 409,
      message: "already approved",
    });
  });

  it("records every call in the access log", async () => {
    const client = new ApiClient("http://x", fakeFetch(200, {}));
    await client.ingest("text");
    await client.runQuery("[a:b]");
    await client.trees();
    await client.reject(3);
    expect(client.accessLog).toEqual([
      { method: "POST", path: "/ingest" },
      { method: "POST", path: "/query" },
      { method: "GET", path: "/trees" },
      { method: "POST", path: "/results/3/reject" },
    ]);
  });

  it("sends JSON bodies with the right header", async () => {
    let seen: RequestInit | undefined;
    const spy: typeof fetch = async (_url, init) => {
      seen = init;
      return new Response("{}", { status: 200 });
    };
    const client = new ApiClient("http://x", spy);
    await client.runQuery("[shirt:white]");
    expect(seen?.method).toBe("POST");
    expect(seen?.body).toBe(JSON.stringify({ query: "[shirt:white]" }));
    expect((seen?.headers as Record<string, string>)["Content-Type"])
      .toBe("application/json");
  });
});
