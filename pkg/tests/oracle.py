"""Brute-force query evaluator, written straight from the scoring rules.

This is the reference the engine is checked against. It shares nothing
with conceptbase.query except the data model: candidates come from plain
scans, scores from literal sums, and the ranking from an explicit sort
key. Keep it dumb; its value is that it is obviously correct.

A solution is canonicalized as a tuple of per-clause bindings
(tree ordinal, path tuple, descriptor word or "") plus the score, which
is what the comparison tests use on both sides.
"""

from __future__ import annotations

from itertools import combinations, product

from conceptbase.model import ConceptBase, ConceptNode, tree_key_ordinal
from conceptbase.query import Clause


def node_entries(base: ConceptBase):
    """Every (tree, path, node) in canonical order: trees by key ordinal,
    nodes pre-order."""
    entries = []
    for tree in sorted(base.trees.values(), key=lambda t: tree_key_ordinal(t.key)):
        stack = [(tree.base, ())]
        collected = []
        while stack:
            node, path = stack.pop()
            collected.append((tree, path, node))
            for child in reversed(node.children):
                stack.append((child, path + (child.lemma,)))
        entries.extend(collected)
    return entries


def best_descriptor(node: ConceptNode):
    """Highest-count descriptor, ties by lexicographically smallest word."""
    if not node.descriptors:
        return None
    return min(node.descriptors, key=lambda d: (-d.count, d.word))


def clause_candidates(base: ConceptBase, clause: Clause, others: list[Clause]):
    """Candidate (tree, path, node) list for one clause.

    Concept-wildcard clauses prefer owners reached over descriptor links
    from the descriptors the other clauses match; only when that set is
    empty do they fall back to a full scan.
    """
    entries = node_entries(base)
    if clause.concept is not None:
        matches = [e for e in entries if e[2].lemma == clause.concept]
        if clause.descriptor_given and clause.descriptor is not None:
            matches = [e for e in matches
                       if e[2].find_descriptor(clause.descriptor) is not None]
        return matches, False

    # concept wildcard: want nodes carrying clause.descriptor
    word = clause.descriptor
    bound_ids = set()
    for other in others:
        if other.concept is None or not other.descriptor_given or other.descriptor is None:
            continue
        for _, _, node in entries:
            if node.lemma == other.concept:
                descriptor = node.find_descriptor(other.descriptor)
                if descriptor is not None:
                    bound_ids.add(descriptor.id)
    preferred = []
    seen = set()
    for tree, path, node in entries:
        for descriptor in node.descriptors:
            if descriptor.word != word:
                continue
            linked = any(
                (min(descriptor.id, bound), max(descriptor.id, bound)) in base.descriptor_links
                for bound in bound_ids if bound != descriptor.id
            )
            if linked and id(node) not in seen:
                preferred.append((tree, path, node))
                seen.add(id(node))
    if preferred:
        return preferred, True
    return [e for e in entries if e[2].find_descriptor(word) is not None], False


def trees_linked(base: ConceptBase, key_a: str, key_b: str) -> int:
    """Sum of levels of tree links joining two distinct trees, both directions."""
    total = 0
    for key_from, key_to in ((key_a, key_b), (key_b, key_a)):
        for node in base.trees[key_from].base.walk():
            for link in node.tree_links:
                if link.target_key == key_to:
                    total += link.state.level
    return total


def descriptor_link_level(base: ConceptBase, d1: int, d2: int) -> int:
    link = base.descriptor_links.get((min(d1, d2), max(d1, d2)))
    return link.state.level if link else 0


def structurally_connected(base: ConceptBase, key_a: str, key_b: str) -> bool:
    if key_a == key_b:
        return True
    for key_from, key_to in ((key_a, key_b), (key_b, key_a)):
        for node in base.trees[key_from].base.walk():
            for link in node.tree_links:
                if link.target_key == key_to:
                    return True
    return False


def evaluate(base: ConceptBase, clauses: list[Clause], limit: int = 10):
    """All solutions, canonicalized and ranked; at most `limit` returned.

    Returns a list of (bindings, score) where bindings is a tuple of
    (tree ordinal, path, descriptor word or "") per clause.
    """
    per_clause = []
    for index, clause in enumerate(clauses):
        others = [c for j, c in enumerate(clauses) if j != index]
        candidates, _ = clause_candidates(base, clause, others)
        per_clause.append(candidates)

    config = base.config
    seen_bindings = set()
    scored = []
    for combo in product(*per_clause):
        bindings = []
        bound_descriptors = []  # (clause idx, descriptor) or None
        for clause, (tree, path, node) in zip(clauses, combo):
            descriptor = None
            if clause.descriptor_given:
                if clause.descriptor is not None:
                    descriptor = node.find_descriptor(clause.descriptor)
                else:
                    descriptor = best_descriptor(node)
            bound_descriptors.append(descriptor)
            # "" stands for no descriptor so binding tuples stay comparable
            bindings.append((tree_key_ordinal(tree.key), path,
                             descriptor.word if descriptor else ""))
        key = tuple(bindings)
        if key in seen_bindings:
            continue
        seen_bindings.add(key)

        score = 0.0
        score += sum(node.count for _, _, node in combo)
        score += sum(d.count for d in bound_descriptors if d is not None)

        tree_keys = [tree.key for tree, _, _ in combo]
        same_tree_pairs = sum(1 for a, b in combinations(range(len(combo)), 2)
                              if tree_keys[a] == tree_keys[b])
        score += config.w_same_tree * same_tree_pairs

        link_sum = 0
        for key_a, key_b in combinations(sorted(set(tree_keys), key=tree_key_ordinal), 2):
            link_sum += trees_linked(base, key_a, key_b)
        distinct_ids = sorted({d.id for d in bound_descriptors if d is not None})
        for d1, d2 in combinations(distinct_ids, 2):
            link_sum += descriptor_link_level(base, d1, d2)
        score += config.w_link * link_sum

        cycles = 0
        for a, b in combinations(range(len(combo)), 2):
            if not structurally_connected(base, tree_keys[a], tree_keys[b]):
                continue
            node_a, node_b = combo[a][2], combo[b][2]
            looped = any(
                descriptor_link_level(base, da.id, db.id) > 0
                for da in node_a.descriptors for db in node_b.descriptors
                if da.id != db.id
            )
            if looped:
                cycles += 1
        score += config.w_cycle * cycles

        scored.append((key, score))

    def sort_key(item):
        bindings, score = item
        ordinals = sorted({b[0] for b in bindings})
        return (-score, len(ordinals), tuple(ordinals), bindings)

    scored.sort(key=sort_key)
    return scored[:limit]
