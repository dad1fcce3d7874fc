/** Pure HTML renderers.
 *
 * Everything shown comes verbatim from the last API response held in the
 * view state; these functions only format, they never compute counts or
 * link strengths themselves.
 */

import type {
  DescriptorLinkJson,
  GlobalNodeJson,
  NodeJson,
  ResultJson,
  TreeDetailJson,
  TreeSummaryJson,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export interface DescriptorRef {
  word: string;
  treeKey: string;
  nodeLemma: string;
}

export type DescriptorIndex = Map<number, DescriptorRef>;

/** id -> descriptor lookup across every loaded tree detail. */
export function indexDescriptors(details: Iterable<TreeDetailJson>): DescriptorIndex {
  const index: DescriptorIndex = new Map();
  for (const detail of details) {
    const stack: NodeJson[] = [detail.base];
    while (stack.length > 0) {
      const node = stack.pop()!;
      for (const descriptor of node.descriptors) {
        index.set(descriptor.id, {
          word: descriptor.word,
          treeKey: detail.key,
          nodeLemma: node.lemma,
        });
      }
      stack.push(...node.children);
    }
  }
  return index;
}

function renderNode(node: NodeJson): string {
  const chips = node.descriptors
    .map(
      (d) =>
        `<span class="chip descriptor" title="descriptor id ${d.id}">` +
        `${escapeHtml(d.word)} &times;${d.count}</span>`,
    )
    .join("");
  const badges = node.tree_links
    .map(
      (l) =>
        `<span class="chip tree-link">&rarr; ${escapeHtml(l.target_key)} ` +
        `(L${l.level}, s${l.strength})</span>`,
    )
    .join("");
  const children = node.children.map(renderNode).join("");
  return (
    `<li><details open><summary><span class="lemma">${escapeHtml(node.lemma)}</span>` +
    `<span class="count">${node.count}</span>` +
    `<span class="pos">${escapeHtml(node.pos)}</span>${chips}${badges}</summary>` +
    (children ? `<ul class="branch">${children}</ul>` : "") +
    `</details></li>`
  );
}

export function renderDescriptorLink(
  link: DescriptorLinkJson,
  index: DescriptorIndex,
): string {
  const from = index.get(link.from_id);
  const to = index.get(link.to_id);
  const name = (ref: DescriptorRef | undefined, id: number) =>
    ref
      ? `${escapeHtml(ref.word)}<span class="where">@${escapeHtml(ref.nodeLemma)}` +
        ` in ${escapeHtml(ref.treeKey)}</span>`
      : `#${id}`;
  return (
    `<li class="descriptor-link">${name(from, link.from_id)} &harr; ` +
    `${name(to, link.to_id)} <span class="chip link-state">L${link.level}, ` +
    `s${link.strength}</span></li>`
  );
}

export function renderTreeDetail(detail: TreeDetailJson, index: DescriptorIndex): string {
  const links = detail.descriptor_links.map((l) => renderDescriptorLink(l, index)).join("");
  return (
    `<article class="tree" data-key="${escapeHtml(detail.key)}">` +
    `<header><h3>${escapeHtml(detail.key)}</h3>` +
    `<span class="stamp">cycle ${detail.last_access_cycle}, ` +
    `${detail.access_count_since_cycle} recent uses</span></header>` +
    `<ul class="branch root">${renderNode(detail.base)}</ul>` +
    (links
      ? `<h4>descriptor links</h4><ul class="descriptor-links">${links}</ul>`
      : "") +
    `</article>`
  );
}

export function renderTreeBrowser(
  summaries: TreeSummaryJson[],
  details: Map<string, TreeDetailJson>,
): string {
  if (summaries.length === 0) {
    return `<p class="empty">The base is empty. Ingest some text to grow trees.</p>`;
  }
  const index = indexDescriptors(details.values());
  return summaries
    .map((summary) => {
      const detail = details.get(summary.key);
      if (detail) {
        return renderTreeDetail(detail, index);
      }
      return (
        `<article class="tree stub" data-key="${escapeHtml(summary.key)}">` +
        `<header><h3>${escapeHtml(summary.key)}</h3>` +
        `<span>${escapeHtml(summary.lemma)} (${summary.count}), ` +
        `${summary.nodes} nodes</span>` +
        `<button data-action="open-tree" data-key="${escapeHtml(summary.key)}">` +
        `expand</button></header></article>`
      );
    })
    .join("");
}

export function renderSolutions(result: ResultJson, busy: boolean): string {
  const header =
    `<header><h3>result ${result.result_id}</h3>` +
    `<code>${escapeHtml(result.query)}</code>` +
    `<span class="status ${escapeHtml(result.status)}">${escapeHtml(result.status)}</span>` +
    `</header>`;
  if (result.solutions.length === 0) {
    return `${header}<p class="empty">No solutions matched.</p>`;
  }
  const disabled = busy || result.status !== "pending" ? "disabled" : "";
  const rows = result.solutions
    .map((solution, position) => {
      const clauses = solution.filled
        .map((filled, clauseIndex) => {
          const binding = solution.bindings[clauseIndex];
          // a clause holds at most one wildcard: the descriptor slot when
          // the binding suggested a word, otherwise the concept slot
          const descriptorSuggested = binding?.suggested ?? false;
          const conceptSuggested = filled.from_wildcard && !descriptorSuggested;
          const descriptor =
            filled.descriptor === null
              ? filled.unfilled
                ? `:<em class="unfilled">?</em>`
                : ""
              : `:${
                  descriptorSuggested
                    ? `<mark class="suggested">${escapeHtml(filled.descriptor)}</mark>`
                    : escapeHtml(filled.descriptor)
                }`;
          const concept = conceptSuggested
            ? `<mark class="suggested">${escapeHtml(filled.concept)}</mark>`
            : escapeHtml(filled.concept);
          return `<span class="clause">[${concept}${descriptor}]</span>`;
        })
        .join(" AND ");
      const where = solution.bindings
        .map((b) => escapeHtml(b.tree_key))
        .join(", ");
      return (
        `<li class="solution" data-index="${position}">` +
        `<span class="score">score ${solution.score}</span>` +
        `<span class="cycles">${solution.cycles} cycles</span> ${clauses}` +
        `<span class="where">trees: ${where}</span>` +
        `<button data-action="approve" data-index="${position}" ${disabled}>Approve</button>` +
        `</li>`
      );
    })
    .join("");
  const reject = `<button data-action="reject" ${disabled}>Reject result</button>`;
  return `${header}<ol class="solutions">${rows}</ol>${reject}`;
}

export function renderGlobals(globals: GlobalNodeJson[]): string {
  if (globals.length === 0) {
    return `<p class="empty">No global concept nodes yet; approve a result.</p>`;
  }
  return (
    `<ul class="globals">` +
    globals
      .map(
        (node) =>
          `<li data-id="${node.id}"><code>${escapeHtml(node.label)}</code> ` +
          `covers ${node.tree_refs.map(escapeHtml).join(", ")} ` +
          `<span class="count">&times;${node.count}</span>` +
          `<button data-action="trigger" data-id="${node.id}">trigger</button></li>`,
      )
      .join("") +
    `</ul>`
  );
}

export function renderBanner(message: string, retryable: boolean): string {
  return (
    `<div class="banner error">${escapeHtml(message)}` +
    (retryable ? ` <button data-action="retry">retry</button>` : "") +
    `</div>`
  );
}
