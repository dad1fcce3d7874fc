import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  indexDescriptors,
  renderGlobals,
  renderSolutions,
  renderTreeBrowser,
} from "../src/render.js";
import type { ResultJson, TreeDetailJson, TreeSummaryJson } from "../src/types.js";

const jackDetail: TreeDetailJson = {
  key: "T1",
  last_access_cycle: 0,
  access_count_since_cycle: 2,
  base: {
    lemma: "jack",
    pos: "noun",
    count: 1,
    descriptors: [],
    tree_links: [{ target_key: "T9", level: 1, strength: 1 }],
    children: [
      {
        lemma: "wore",
        pos: "verb",
        count: 1,
        descriptors: [],
        tree_links: [],
        children: [
          {
            lemma: "shirt",
            pos: "noun",
            count: 1,
            descriptors: [
              { id: 2, word: "white", count: 1 },
              { id: 3, word: "blue", count: 1 },
            ],
            tree_links: [],
            children: [
              {
                lemma: "trousers",
                pos: "noun",
                count: 1,
                descriptors: [{ id: 4, word: "blue", count: 1 }],
                tree_links: [],
                children: [],
              },
            ],
          },
        ],
      },
    ],
  },
  descriptor_links: [{ from_id: 2, to_id: 4, level: 1, strength: 1 }],
};

const jackSummary: TreeSummaryJson = {
  key: "T1",
  lemma: "jack",
  pos: "noun",
  count: 1,
  nodes: 4,
  last_access_cycle: 0,
  access_count_since_cycle: 2,
};

describe("renderTreeBrowser", () => {
  it("shows an empty state for an empty base", () => {
    expect(renderTreeBrowser([], new Map())).toContain("empty");
  });

  it("renders lemmas, counts, descriptor chips and link badges", () => {
    const html = renderTreeBrowser([jackSummary], new Map([["T1", jackDetail]]));
    expect(html).toContain("jack");
    expect(html).toContain(`<span class="count">1</span>`);
    expect(html).toContain("white &times;1");
    expect(html).toContain("&rarr; T9 (L1, s1)");
  });

  it("renders descriptor links with resolved words and state", () => {
    const html = renderTreeBrowser([jackSummary], new Map([["T1", jackDetail]]));
    expect(html).toContain("descriptor links");
    expect(html).toMatch(/white.*&harr;.*blue/s);
    expect(html).toContain("L1, s1");
  });

  it("falls back to a summary stub before the detail loads", () => {
    const html = renderTreeBrowser([jackSummary], new Map());
    expect(html).toContain("expand");
    expect(html).toContain("4 nodes");
  });

  it("escapes markup in words", () => {
    const detail: TreeDetailJson = {
      ...jackDetail,
      base: { ...jackDetail.base, lemma: "<script>", children: [] },
      descriptor_links: [],
    };
    const html = renderTreeBrowser([jackSummary], new Map([["T1", detail]]));
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("indexDescriptors", () => {
  it("maps ids to words, owners and trees", () => {
    const index = indexDescriptors([jackDetail]);
    expect(index.get(4)).toEqual({ word: "blue", treeKey: "T1", nodeLemma: "trousers" });
    expect(index.size).toBe(3);
  });
});

const pendingResult: ResultJson = {
  result_id: 5,
  query: "[shirt:white] AND [trousers:?]",
  status: "pending",
  via_descriptor_links: [false, false],
  solutions: [
    {
      score: 6,
      cycles: 0,
      bindings: [
        {
          tree_key: "T1", path: ["wore", "shirt"], lemma: "shirt",
          descriptor_word: "white", descriptor_id: 2, descriptor_count: 1,
          suggested: false, unfilled: false,
        },
        {
          tree_key: "T1", path: ["wore", "shirt", "trousers"], lemma: "trousers",
          descriptor_word: "blue", descriptor_id: 4, descriptor_count: 1,
          suggested: true, unfilled: false,
        },
      ],
      filled: [
        { concept: "shirt", descriptor: "white", from_wildcard: false, unfilled: false },
        { concept: "trousers", descriptor: "blue", from_wildcard: true, unfilled: false },
      ],
    },
  ],
};

describe("renderSolutions", () => {
  it("highlights the suggested slot and shows the score", () => {
    const html = renderSolutions(pendingResult, false);
    expect(html).toContain("score 6");
    expect(html).toContain(`<mark class="suggested">blue</mark>`);
    expect(html).not.toContain(`<mark class="suggested">white</mark>`);
    expect(html).toContain("Approve");
    expect(html).toContain("Reject");
  });

  it("disables actions while busy or settled", () => {
    expect(renderSolutions(pendingResult, true)).toContain("disabled");
    const settled = { ...pendingResult, status: "approved" };
    expect(renderSolutions(settled, false)).toContain("disabled");
  });

  it("highlights a filled concept wildcard", () => {
    const result: ResultJson = {
      ...pendingResult,
      query: "[?:blue]",
      solutions: [
        {
          score: 2,
          cycles: 0,
          bindings: [
            {
              tree_key: "T1", path: [], lemma: "trousers",
              descriptor_word: "blue", descriptor_id: 4, descriptor_count: 1,
              suggested: false, unfilled: false,
            },
          ],
          filled: [
            { concept: "trousers", descriptor: "blue", from_wildcard: true, unfilled: false },
          ],
        },
      ],
    };
    const html = renderSolutions(result, false);
    expect(html).toContain(`<mark class="suggested">trousers</mark>`);
  });

  it("shows the empty state", () => {
    const html = renderSolutions({ ...pendingResult, solutions: [] }, false);
    expect(html).toContain("No solutions matched");
  });
});

describe("renderGlobals", () => {
  it("lists nodes with labels, refs and counts", () => {
    const html = renderGlobals([
      { id: 6, label: "[shirt:white]", tree_refs: ["T1", "T2"], count: 3 },
    ]);
    expect(html).toContain("[shirt:white]");
    expect(html).toContain("T1, T2");
    expect(html).toContain("&times;3");
    expect(html).toContain("trigger");
  });

  it("shows the empty state", () => {
    expect(renderGlobals([])).toContain("approve a result");
  });
});
