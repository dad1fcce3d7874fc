/** Console loop against the real service.
 *
 * Spawns `conceptbase serve` on a scratch base, then drives the console's
 * own controller/api/grammar/render modules end to end: ingest the
 * wardrobe sentence, run the forward query, approve it, and check the
 * tree browser now shows the white<->blue descriptor link at level 1,
 * strength 1.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildQuery, emptyClause } from "../src/grammar.js";
import { renderTreeBrowser } from "../src/render.js";
import { Controller } from "../src/state.js";

const PORT = 8625;
const BASE_URL = `http://127.0.0.1:${PORT}`;
const JACK = "Jack wore a white shirt and blue trousers.";

let service: ChildProcess;

async function waitForService(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE_URL}/stats`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up in time");
}

beforeAll(async () => {
  const scratch = mkdtempSync(join(tmpdir(), "conceptbase-e2e-"));
  service = spawn(
    "python3",
    ["-m", "conceptbase.cli",
     "--base", join(scratch, "e2e.cbase.json"),
     "serve", "--port", String(PORT), "--host", "127.0.0.1"],
    { stdio: "ignore" },
  );
  await waitForService();
}, 40_000);

afterAll(() => {
  service?.kill();
});

describe("console loop against a running service", () => {
  it("ingest -> forward query -> approve -> browser shows the link at L1 s1", async () => {
    const api = new ApiClient(BASE_URL);
    const controller = new Controller(api);

    await controller.ingest(JACK);
    expect(controller.state.banner).toBeNull();
    expect(controller.state.trees).toHaveLength(1);

    const query = buildQuery([
      { ...emptyClause(), concept: "shirt", descriptor: "white" },
      { ...emptyClause(), concept: "trousers", descriptorMode: "wildcard" },
    ]);
    expect(query).toBe("[shirt:white] AND [trousers:?]");

    await controller.runQuery(query);
    const result = controller.state.activeResult;
    expect(result).not.toBeNull();
    expect(result!.status).toBe("pending");
    const top = result!.solutions[0]!;
    expect(top.filled[1]).toMatchObject({
      concept: "trousers",
      descriptor: "blue",
      from_wildcard: true,
    });

    await controller.approve(0);
    expect(controller.state.inlineError).toBeNull();
    expect(controller.state.activeResult?.status).toBe("approved");
    expect(controller.state.globals).toHaveLength(1);

    const html = renderTreeBrowser(controller.state.trees, controller.state.details);
    expect(html).toContain("descriptor links");
    expect(html).toMatch(/white.*&harr;.*blue|blue.*&harr;.*white/s);
    expect(html).toContain("L1, s1");

    // the console mutates the base only through these endpoints
    const mutations = api.accessLog.filter((entry) => entry.method !== "GET");
    for (const entry of mutations) {
      expect(entry.path).toMatch(/^\/(ingest|query|results\/\d+\/(approve|reject))$/);
    }
  }, 30_000);

  it("reverse query rides the approved link to the trousers", async () => {
    const api = new ApiClient(BASE_URL);
    const controller = new Controller(api);
    const query = buildQuery([
      { ...emptyClause(), concept: "shirt", descriptor: "white" },
      { ...emptyClause(), conceptWildcard: true, descriptor: "blue" },
    ]);
    expect(query).toBe("[shirt:white] AND [?:blue]");

    await controller.runQuery(query);
    const result = controller.state.activeResult!;
    expect(result.via_descriptor_links).toEqual([false, true]);
    expect(result.solutions[0]!.filled[1]!.concept).toBe("trousers");
  }, 30_000);

  it("every builder shape parses on the server", async () => {
    const api = new ApiClient(BASE_URL);
    const shapes = [
      [{ ...emptyClause(), concept: "shirt", descriptor: "white" }],
      [{ ...emptyClause(), concept: "shirt", descriptorMode: "wildcard" as const }],
      [{ ...emptyClause(), concept: "shirt", descriptorMode: "any" as const }],
      [{ ...emptyClause(), conceptWildcard: true, descriptor: "blue" }],
      [
        { ...emptyClause(), concept: "Shirt!", descriptor: "WHITE" },
        { ...emptyClause(), concept: "trousers", descriptorMode: "wildcard" as const },
        { ...emptyClause(), concept: "jack", descriptorMode: "any" as const },
      ],
    ];
    for (const drafts of shapes) {
      const result = await api.runQuery(buildQuery(drafts));
      expect(result.status).toBe("pending");
    }
  }, 30_000);

  it("settled results surface a 409 inline, not a crash", async () => {
    const api = new ApiClient(BASE_URL);
    const controller = new Controller(api);
    await controller.runQuery("[shirt:white]");
    await controller.approve(0);
    // second approval of the same result: the service refuses politely
    const settled = controller.state.activeResult!;
    await api
      .approve(settled.result_id, 0)
      .then(() => {
        throw new Error("expected a 409");
      })
      .catch((error) => {
        expect(error).toMatchObject({ status: 409 });
      });
  }, 30_000);
});
