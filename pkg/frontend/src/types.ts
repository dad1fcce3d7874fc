/** JSON payloads exchanged with the conceptbase service. */

export interface DescriptorJson {
  id: number;
  word: string;
  count: number;
}

export interface TreeLinkJson {
  target_key: string;
  level: number;
  strength: number;
}

export interface NodeJson {
  lemma: string;
  pos: string;
  count: number;
  descriptors: DescriptorJson[];
  tree_links: TreeLinkJson[];
  children: NodeJson[];
}

export interface DescriptorLinkJson {
  from_id: number;
  to_id: number;
  level: number;
  strength: number;
}

export interface TreeSummaryJson {
  key: string;
  lemma: string;
  pos: string;
  count: number;
  nodes: number;
  last_access_cycle: number;
  access_count_since_cycle: number;
}

export interface TreeDetailJson {
  key: string;
  last_access_cycle: number;
  access_count_since_cycle: number;
  base: NodeJson;
  descriptor_links: DescriptorLinkJson[];
}

export interface BindingJson {
  tree_key: string;
  path: string[];
  lemma: string;
  descriptor_word: string | null;
  descriptor_id: number | null;
  descriptor_count: number;
  suggested: boolean;
  unfilled: boolean;
}

export interface FilledClauseJson {
  concept: string;
  descriptor: string | null;
  from_wildcard: boolean;
  unfilled: boolean;
}

export interface SolutionJson {
  score: number;
  cycles: number;
  bindings: BindingJson[];
  filled: FilledClauseJson[];
}

export interface ResultJson {
  result_id: number;
  query: string;
  status: string;
  via_descriptor_links: boolean[];
  solutions: SolutionJson[];
}

export interface IngestReportJson {
  sentences: number;
  concepts: number;
  descriptors: number;
  new_trees: number;
  trees_touched: string[];
  splits: { source_key: string; new_key: string; lemma: string }[];
}

export interface GlobalNodeJson {
  id: number;
  label: string;
  tree_refs: string[];
  count: number;
}

export interface ApproveResponseJson {
  result_id: number;
  status: string;
  global_node: GlobalNodeJson;
}

export interface StatsJson {
  trees: number;
  nodes: number;
  descriptors: number;
  tree_links: number;
  descriptor_links: number;
  global_nodes: number;
  results: number;
  maintenance_cycle: number;
  next_id: number;
  violations: string[];
}
