/** View state and the actions that drive it.
 *
 * State holds nothing but the last API responses; after every mutation the
 * affected views are re-fetched rather than patched, so the screen always
 * shows what the server last said. One mutation may be in flight at a
 * time.
 */

import { ApiError } from "./api.js";
import type {
  ApproveResponseJson,
  GlobalNodeJson,
  IngestReportJson,
  ResultJson,
  TreeDetailJson,
  TreeSummaryJson,
} from "./types.js";

/** The slice of the API the console drives (satisfied by ApiClient). */
export interface ConsoleApi {
  ingest(text: string): Promise<IngestReportJson>;
  runQuery(query: string): Promise<ResultJson>;
  approve(resultId: number, solutionIndex: number): Promise<ApproveResponseJson>;
  reject(resultId: number): Promise<{ result_id: number; status: string }>;
  trees(): Promise<TreeSummaryJson[]>;
  treeDetail(key: string): Promise<TreeDetailJson>;
  globals(): Promise<GlobalNodeJson[]>;
  trigger(globalId: number): Promise<{ tree_keys: string[] }>;
}

export interface ViewState {
  trees: TreeSummaryJson[];
  details: Map<string, TreeDetailJson>;
  activeResult: ResultJson | null;
  globals: GlobalNodeJson[];
  triggered: { id: number; treeKeys: string[] } | null;
  banner: string | null;
  inlineError: string | null;
  notice: string | null;
  busy: boolean;
}

export function initialState(): ViewState {
  return {
    trees: [],
    details: new Map(),
    activeResult: null,
    globals: [],
    triggered: null,
    banner: null,
    inlineError: null,
    notice: null,
    busy: false,
  };
}

export class Controller {
  readonly state: ViewState = initialState();

  constructor(
    private readonly api: ConsoleApi,
    private readonly onChange: (state: ViewState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  /** Wrap a mutation: single-flight, inline 4xx surfacing, connect banner. */
  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.state.busy) {
      return;
    }
    this.state.busy = true;
    this.state.inlineError = null;
    this.state.notice = null;
    this.emit();
    try {
      await action();
      this.state.banner = null;
    } catch (error) {
      if (error instanceof ApiError) {
        this.state.inlineError = `${error.status}: ${error.message}`;
      } else {
        this.state.banner = `service unreachable: ${String(error)}`;
      }
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  async refreshTrees(): Promise<void> {
    try {
      this.state.trees = await this.api.trees();
      const fresh = new Map<string, TreeDetailJson>();
      for (const summary of this.state.trees) {
        fresh.set(summary.key, await this.api.treeDetail(summary.key));
      }
      this.state.details = fresh;
      this.state.banner = null;
    } catch (error) {
      this.state.banner = `service unreachable: ${String(error)}`;
    }
    this.emit();
  }

  async refreshGlobals(): Promise<void> {
    try {
      this.state.globals = await this.api.globals();
      this.state.banner = null;
    } catch (error) {
      this.state.banner = `service unreachable: ${String(error)}`;
    }
    this.emit();
  }

  async ingest(text: string): Promise<void> {
    await this.mutate(async () => {
      const report = await this.api.ingest(text);
      this.state.notice =
        `ingested ${report.sentences} sentence(s): ${report.concepts} concepts, ` +
        `${report.descriptors} descriptors across ${report.trees_touched.length} tree(s)`;
      await this.refreshTrees();
    });
  }

  async runQuery(query: string): Promise<void> {
    await this.mutate(async () => {
      this.state.activeResult = await this.api.runQuery(query);
      await this.refreshTrees();
    });
  }

  async approve(solutionIndex: number): Promise<void> {
    const result = this.state.activeResult;
    if (!result) {
      return;
    }
    await this.mutate(async () => {
      const response = await this.api.approve(result.result_id, solutionIndex);
      this.state.activeResult = { ...result, status: response.status };
      this.state.notice =
        `approved: global node ${response.global_node.id} covers ` +
        response.global_node.tree_refs.join(", ");
      await this.refreshTrees();
      await this.refreshGlobals();
    });
  }

  async reject(): Promise<void> {
    const result = this.state.activeResult;
    if (!result) {
      return;
    }
    await this.mutate(async () => {
      const response = await this.api.reject(result.result_id);
      this.state.activeResult = { ...result, status: response.status };
    });
  }

  async trigger(globalId: number): Promise<void> {
    try {
      const response = await this.api.trigger(globalId);
      this.state.triggered = { id: globalId, treeKeys: response.tree_keys };
    } catch (error) {
      if (error instanceof ApiError) {
        this.state.inlineError = `${error.status}: ${error.message}`;
      } else {
        this.state.banner = `service unreachable: ${String(error)}`;
      }
    }
    this.emit();
  }
}
