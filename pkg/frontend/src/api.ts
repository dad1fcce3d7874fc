/** Typed client over the service API.
 *
 * Every call is recorded in `accessLog` so tests can prove the console
 * never mutates the base outside the ingest/query/approve/reject
 * endpoints.
 */

import type {
  ApproveResponseJson,
  GlobalNodeJson,
  IngestReportJson,
  ResultJson,
  StatsJson,
  TreeDetailJson,
  TreeSummaryJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export interface AccessLogEntry {
  method: string;
  path: string;
}

export class ApiClient {
  readonly accessLog: AccessLogEntry[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.accessLog.push({ method, path });
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let parsed: unknown = null;
    if (text) {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = null;
      }
    }
    if (!response.ok) {
      const detail =
        parsed && typeof parsed === "object" && "error" in parsed
          ? String((parsed as { error: unknown }).error)
          : `${response.status} ${response.statusText}`;
      throw new ApiError(response.status, detail);
    }
    return parsed as T;
  }

  ingest(text: string): Promise<IngestReportJson> {
    return this.request("POST", "/ingest", { text });
  }

  runQuery(query: string): Promise<ResultJson> {
    return this.request("POST", "/query", { query });
  }

  approve(resultId: number, solutionIndex: number): Promise<ApproveResponseJson> {
    return this.request("POST", `/results/${resultId}/approve`, {
      solution_index: solutionIndex,
    });
  }

  reject(resultId: number): Promise<{ result_id: number; status: string }> {
    return this.request("POST", `/results/${resultId}/reject`);
  }

  trees(): Promise<TreeSummaryJson[]> {
    return this.request("GET", "/trees");
  }

  treeDetail(key: string): Promise<TreeDetailJson> {
    return this.request("GET", `/trees/${encodeURIComponent(key)}`);
  }

  globals(): Promise<GlobalNodeJson[]> {
    return this.request("GET", "/globals");
  }

  trigger(globalId: number): Promise<{ tree_keys: string[] }> {
    return this.request("GET", `/globals/${globalId}/trigger`);
  }

  stats(): Promise<StatsJson> {
    return this.request("GET", "/stats");
  }
}
