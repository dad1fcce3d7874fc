/** Clause builder that emits the server's query grammar.
 *
 * Grammar: `clause ("AND" clause)*` with `clause := "[" part ":" part "]"`,
 * a part being a word or the wildcard `?`; `[word]` leaves the descriptor
 * unconstrained. A clause may hold at most one wildcard and a concept
 * wildcard needs a concrete descriptor, so every string this module
 * builds parses on the server.
 */

export type DescriptorMode = "term" | "wildcard" | "any";

export interface ClauseDraft {
  concept: string;
  conceptWildcard: boolean;
  descriptor: string;
  descriptorMode: DescriptorMode;
}

export function emptyClause(): ClauseDraft {
  return { concept: "", conceptWildcard: false, descriptor: "", descriptorMode: "term" };
}

/** Server-side word normalization: lowercase, punctuation deleted. */
export function normalizeWord(word: string): string {
  return word.toLowerCase().replace(/[^a-z0-9]+/g, "");
}

export function validateClause(draft: ClauseDraft): string | null {
  if (draft.conceptWildcard && draft.descriptorMode === "wildcard") {
    return "a clause cannot hold two wildcards";
  }
  if (draft.conceptWildcard && draft.descriptorMode === "any") {
    return "a concept wildcard needs a concrete descriptor";
  }
  if (!draft.conceptWildcard && !normalizeWord(draft.concept)) {
    return "concept word is empty";
  }
  if (draft.descriptorMode === "term" && !normalizeWord(draft.descriptor)) {
    return "descriptor word is empty";
  }
  return null;
}

export function clauseText(draft: ClauseDraft): string {
  const concept = draft.conceptWildcard ? "?" : normalizeWord(draft.concept);
  if (draft.descriptorMode === "any") {
    return `[${concept}]`;
  }
  const descriptor =
    draft.descriptorMode === "wildcard" ? "?" : normalizeWord(draft.descriptor);
  return `[${concept}:${descriptor}]`;
}

export function buildQuery(drafts: ClauseDraft[]): string {
  if (drafts.length === 0) {
    throw new Error("a query needs at least one clause");
  }
  for (const draft of drafts) {
    const problem = validateClause(draft);
    if (problem) {
      throw new Error(problem);
    }
  }
  return drafts.map(clauseText).join(" AND ");
}
