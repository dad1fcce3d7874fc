"""Conjunctive clause queries over the base.

A query is a conjunction of `[concept:descriptor]` clauses where one side
of a clause may be the wildcard `?`. Evaluation matches every clause
against the trees independently, combines the candidate bindings, scores
each combination — favouring solutions that stay inside one tree, ride
existing links, or close concept/descriptor cycles — and suggests values
for the wildcard slots from whatever the bound nodes carry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional

from .errors import QueryParseError
from .ingest import normalize_word
from .model import (
    ConceptBase,
    ConceptNode,
    ConceptTree,
    Descriptor,
    DescriptorLink,
    tree_key_ordinal,
)

WILDCARD = "?"


@dataclass(frozen=True)
class Clause:
    """One conjunct. `None` in a slot means the wildcard; a clause written
    as `[word]` leaves the descriptor unconstrained."""

    concept: Optional[str]
    descriptor: Optional[str]
    descriptor_given: bool = True

    def text(self) -> str:
        concept = self.concept if self.concept is not None else WILDCARD
        if not self.descriptor_given:
            return f"[{concept}]"
        descriptor = self.descriptor if self.descriptor is not None else WILDCARD
        return f"[{concept}:{descriptor}]"


@dataclass(frozen=True)
class Query:
    clauses: tuple[Clause, ...]

    def text(self) -> str:
        return " AND ".join(clause.text() for clause in self.clauses)


@dataclass
class Binding:
    """One clause resolved to a node (and possibly a descriptor)."""

    clause: Clause
    tree_key: str
    path: tuple[str, ...]
    lemma: str
    descriptor_word: Optional[str] = None
    descriptor_id: Optional[int] = None
    descriptor_count: int = 0
    suggested: bool = False
    unfilled: bool = False

    def canonical(self) -> tuple[int, tuple[str, ...], str]:
        return (tree_key_ordinal(self.tree_key), self.path, self.descriptor_word or "")


@dataclass
class Solution:
    bindings: list[Binding]
    score: float = 0.0
    cycles: int = 0

    def canonical(self) -> tuple[tuple[int, tuple[str, ...], str], ...]:
        return tuple(binding.canonical() for binding in self.bindings)

    def tree_keys(self) -> list[str]:
        return [binding.tree_key for binding in self.bindings]


@dataclass
class FilledClause:
    concept: str
    descriptor: Optional[str]
    from_wildcard: bool = False
    unfilled: bool = False


@dataclass
class ResultSet:
    """A query's ranked solutions plus its place in the approval loop."""

    id: int
    query: Query
    solutions: list[Solution]
    status: str = "pending"  # pending | approved | rejected
    # per clause: did the concept-wildcard candidate set come via descriptor links
    via_descriptor_links: list[bool] = field(default_factory=list)


def parse_query(text: str) -> Query:
    """Parse `[a:b] AND [c:?] AND [d]` style query text.

    Words are normalized exactly as ingestion normalizes them. Raises
    QueryParseError, carrying the character position, for empty queries,
    malformed clauses and double-wildcard clauses.
    """
    clauses: list[Clause] = []
    pos = 0
    length = len(text)

    def skip_space(p: int) -> int:
        while p < length and text[p].isspace():
            p += 1
        return p

    pos = skip_space(pos)
    if pos >= length:
        raise QueryParseError("empty query", pos)

    while pos < length:
        if text[pos] != "[":
            raise QueryParseError("expected '['", pos)
        close = text.find("]", pos)
        if close < 0:
            raise QueryParseError("unterminated clause", pos)
        body = text[pos + 1:close]
        clauses.append(_parse_clause(body, pos + 1))
        pos = skip_space(close + 1)
        if pos >= length:
            break
        if text[pos:pos + 3].upper() != "AND" or (
                pos + 3 < length and not text[pos + 3].isspace() and text[pos + 3] != "["):
            raise QueryParseError("expected 'AND' between clauses", pos)
        pos = skip_space(pos + 3)
        if pos >= length:
            raise QueryParseError("dangling 'AND'", pos)
    return Query(clauses=tuple(clauses))


def _parse_clause(body: str, offset: int) -> Clause:
    concept_text, sep, descriptor_text = body.partition(":")
    concept = _parse_part(concept_text, offset, "concept")
    if not sep:
        if concept is None:
            raise QueryParseError("a bare clause cannot be a wildcard", offset)
        return Clause(concept=concept, descriptor=None, descriptor_given=False)
    descriptor = _parse_part(descriptor_text, offset + len(concept_text) + 1, "descriptor")
    if concept is None and descriptor is None:
        raise QueryParseError("clause cannot have two wildcards", offset)
    return Clause(concept=concept, descriptor=descriptor)


def _parse_part(part: str, offset: int, role: str) -> Optional[str]:
    stripped = part.strip()
    if stripped == WILDCARD:
        return None
    word = normalize_word(stripped)
    if not word:
        raise QueryParseError(f"missing {role} term", offset)
    return word


def _node_entries(base: ConceptBase) -> list[tuple[ConceptTree, tuple[str, ...], ConceptNode]]:
    """(tree, path, node) triples: trees in key order, nodes pre-order."""
    entries = []
    for tree in sorted(base.trees.values(), key=lambda t: tree_key_ordinal(t.key)):
        stack: list[tuple[ConceptNode, tuple[str, ...]]] = [(tree.base, ())]
        while stack:
            node, path = stack.pop()
            entries.append((tree, path, node))
            for child in reversed(node.children):
                stack.append((child, path + (child.lemma,)))
    return entries


@dataclass
class ClauseMatch:
    candidates: list[tuple[ConceptTree, tuple[str, ...], ConceptNode]]
    via_descriptor_links: bool = False


def match_clause(base: ConceptBase, clause: Clause,
                 others: tuple[Clause, ...] = ()) -> ClauseMatch:
    """Candidate nodes for one clause.

    Concrete concepts match by lemma and are filtered by a concrete
    descriptor term. A concept wildcard looks for owners of the descriptor
    word, preferring nodes reached over descriptor links from descriptors
    the other clauses bind, falling back to a full scan only when the
    linked set is empty.
    """
    entries = _node_entries(base)
    if clause.concept is not None:
        candidates = [e for e in entries if e[2].lemma == clause.concept]
        if clause.descriptor_given and clause.descriptor is not None:
            candidates = [e for e in candidates
                          if e[2].find_descriptor(clause.descriptor) is not None]
        return ClauseMatch(candidates)

    word = clause.descriptor
    bound_ids: set[int] = set()
    for other in others:
        if other.concept is None or not other.descriptor_given or other.descriptor is None:
            continue
        for _, _, node in entries:
            if node.lemma == other.concept:
                descriptor = node.find_descriptor(other.descriptor)
                if descriptor is not None:
                    bound_ids.add(descriptor.id)
    preferred: list[tuple[ConceptTree, tuple[str, ...], ConceptNode]] = []
    seen: set[int] = set()
    for tree, path, node in entries:
        for descriptor in node.descriptors:
            if descriptor.word != word:
                continue
            linked = any(
                DescriptorLink.normalize(descriptor.id, bound) in base.descriptor_links
                for bound in bound_ids if bound != descriptor.id)
            if linked and id(node) not in seen:
                preferred.append((tree, path, node))
                seen.add(id(node))
    if preferred:
        return ClauseMatch(preferred, via_descriptor_links=True)
    return ClauseMatch([e for e in entries if e[2].find_descriptor(word) is not None])


def _suggest(node: ConceptNode) -> Optional[Descriptor]:
    """Highest-count descriptor; ties go to the lexicographically smaller word."""
    if not node.descriptors:
        return None
    return min(node.descriptors, key=lambda d: (-d.count, d.word))


def _bind(clause: Clause, tree: ConceptTree, path: tuple[str, ...],
          node: ConceptNode) -> Binding:
    binding = Binding(clause=clause, tree_key=tree.key, path=path, lemma=node.lemma)
    if clause.descriptor_given:
        if clause.descriptor is not None:
            descriptor = node.find_descriptor(clause.descriptor)
            if descriptor is not None:
                binding.descriptor_word = descriptor.word
                binding.descriptor_id = descriptor.id
                binding.descriptor_count = descriptor.count
        else:
            descriptor = _suggest(node)
            if descriptor is None:
                binding.unfilled = True
            else:
                binding.descriptor_word = descriptor.word
                binding.descriptor_id = descriptor.id
                binding.descriptor_count = descriptor.count
                binding.suggested = True
    return binding


def solution_sort_key(solution: Solution):
    ordinals = sorted({tree_key_ordinal(k) for k in solution.tree_keys()})
    return (-solution.score, len(ordinals), tuple(ordinals), solution.canonical())


def enumerate_solutions(base: ConceptBase, query: Query) -> tuple[list[Solution], list[bool]]:
    """Score-ranked solutions plus the per-clause link-preference flags."""
    matches = [match_clause(base, clause,
                            tuple(c for j, c in enumerate(query.clauses) if j != i))
               for i, clause in enumerate(query.clauses)]
    via_flags = [match.via_descriptor_links for match in matches]

    solutions: list[Solution] = []
    seen: set[tuple] = set()
    for combo in product(*(match.candidates for match in matches)):
        bindings = [_bind(clause, tree, path, node)
                    for clause, (tree, path, node) in zip(query.clauses, combo)]
        solution = Solution(bindings=bindings)
        canonical = solution.canonical()
        if canonical in seen:
            continue
        seen.add(canonical)
        solution.cycles = detect_cycles(base, solution)
        solution.score = score_solution(base, solution)
        solutions.append(solution)

    solutions.sort(key=solution_sort_key)
    return solutions[:base.config.max_solutions], via_flags


def _resolve_node(base: ConceptBase, binding: Binding) -> ConceptNode:
    tree = base.trees[binding.tree_key]
    node = tree.base
    for lemma in binding.path:
        node = node.find_child(lemma)
    return node


def score_solution(base: ConceptBase, solution: Solution) -> float:
    """Node counts + descriptor counts + same-tree, link and cycle bonuses."""
    config = base.config
    nodes = [_resolve_node(base, binding) for binding in solution.bindings]

    score = float(sum(node.count for node in nodes))
    score += sum(binding.descriptor_count for binding in solution.bindings
                 if binding.descriptor_word is not None)

    keys = solution.tree_keys()
    score += config.w_same_tree * sum(
        1 for a, b in combinations(range(len(keys)), 2) if keys[a] == keys[b])

    link_sum = 0
    for key_a, key_b in combinations(sorted(set(keys), key=tree_key_ordinal), 2):
        link_sum += _tree_link_levels(base, key_a, key_b)
    ids = sorted({binding.descriptor_id for binding in solution.bindings
                  if binding.descriptor_id is not None})
    for d1, d2 in combinations(ids, 2):
        link = base.descriptor_links.get(DescriptorLink.normalize(d1, d2))
        if link is not None:
            link_sum += link.state.level
    score += config.w_link * link_sum

    score += config.w_cycle * solution.cycles
    return score


def _tree_link_levels(base: ConceptBase, key_a: str, key_b: str) -> int:
    total = 0
    for key_from, key_to in ((key_a, key_b), (key_b, key_a)):
        for node in base.trees[key_from].base.walk():
            for link in node.tree_links:
                if link.target_key == key_to:
                    total += link.state.level
    return total


def detect_cycles(base: ConceptBase, solution: Solution) -> int:
    """Clause pairs whose nodes connect structurally while a descriptor link
    closes the loop between their descriptor layers."""
    nodes = [_resolve_node(base, binding) for binding in solution.bindings]
    keys = solution.tree_keys()
    cycles = 0
    for a, b in combinations(range(len(nodes)), 2):
        if keys[a] != keys[b] and _tree_link_levels(base, keys[a], keys[b]) == 0:
            continue
        closed = any(
            DescriptorLink.normalize(da.id, db.id) in base.descriptor_links
            for da in nodes[a].descriptors for db in nodes[b].descriptors
            if da.id != db.id)
        if closed:
            cycles += 1
    return cycles


def fill_slots(solution: Solution) -> list[FilledClause]:
    """The solution's clauses with wildcards replaced by bound values."""
    filled = []
    for binding in solution.bindings:
        clause = binding.clause
        concept = clause.concept if clause.concept is not None else binding.lemma
        descriptor = binding.descriptor_word if clause.descriptor_given else None
        filled.append(FilledClause(
            concept=concept,
            descriptor=descriptor,
            from_wildcard=clause.concept is None or binding.suggested,
            unfilled=binding.unfilled,
        ))
    return filled


def execute_query(base: ConceptBase, text: str) -> ResultSet:
    """Parse, evaluate, rank and store a query as a pending result set.

    Trees bound by the returned solutions are stamped as accessed so the
    knowledge a query touches stays out of decay's reach for a cycle.
    """
    query = parse_query(text)
    solutions, via_flags = enumerate_solutions(base, query)
    result = ResultSet(id=base.allocate_id(), query=query, solutions=solutions,
                       via_descriptor_links=via_flags)
    base.results[result.id] = result
    touched = {key for solution in solutions for key in solution.tree_keys()}
    for key in touched:
        base.touch_tree(base.trees[key])
    return result
