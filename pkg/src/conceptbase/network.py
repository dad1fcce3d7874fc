"""Feedback loop and symbolic grouping.

Approving a query result is the one place the base learns from use: the
descriptors a solution bound get linked pairwise and re-counted, the trees
it spanned get linked, and the whole binding is grouped under a global
concept node. Global nodes sharing trees trigger each other, pulling in
related groups.
"""

from __future__ import annotations

from itertools import combinations

from . import links as linkops
from .errors import NotFoundError, StateError
from .model import ConceptBase, GlobalConceptNode
from .query import Binding, ResultSet, Solution


def _get_pending(base: ConceptBase, result_id: int) -> ResultSet:
    result = base.results.get(result_id)
    if result is None:
        raise NotFoundError(f"unknown result {result_id}")
    if result.status != "pending":
        raise StateError(f"result {result_id} already {result.status}")
    return result


def _resolve(base: ConceptBase, binding: Binding):
    tree = base.trees.get(binding.tree_key)
    if tree is None:
        raise StateError(f"result binding references removed tree '{binding.tree_key}'")
    node = tree.base
    for lemma in binding.path:
        node = node.find_child(lemma)
        if node is None:
            raise StateError(
                f"result binding path {list(binding.path)} no longer resolves "
                f"in tree '{binding.tree_key}'")
    return tree, node


def approve_result(base: ConceptBase, result_id: int, solution_index: int) -> GlobalConceptNode:
    """Accept one solution of a pending result and reinforce what it used.

    Every pair of descriptors the solution bound or suggested across
    distinct clauses gets a descriptor link (new links start as
    candidates), every pair of distinct bound trees gets a tree link from
    the earlier clause's node to the later clause's base, each bound
    descriptor's count grows by one without outgrowing its node, and the
    bound trees are grouped under a global concept node.
    """
    result = _get_pending(base, result_id)
    if not 0 <= solution_index < len(result.solutions):
        raise NotFoundError(
            f"result {result_id} has no solution #{solution_index}")
    solution = result.solutions[solution_index]

    # resolve everything before mutating anything: a stale result must fail
    # cleanly, not half-apply
    resolved = [_resolve(base, binding) for binding in solution.bindings]
    owners = base.descriptor_owners()
    for binding in solution.bindings:
        if binding.descriptor_id is not None and binding.descriptor_id not in owners:
            raise StateError(
                f"result binding descriptor '{binding.descriptor_word}' "
                f"({binding.descriptor_id}) no longer resolves")

    for binding_a, binding_b in combinations(solution.bindings, 2):
        if binding_a.descriptor_id is None or binding_b.descriptor_id is None:
            continue
        if binding_a.descriptor_id == binding_b.descriptor_id:
            continue
        linkops.link_descriptors(base, binding_a.descriptor_id, binding_b.descriptor_id)

    for (index_a, index_b) in combinations(range(len(solution.bindings)), 2):
        key_a = solution.bindings[index_a].tree_key
        key_b = solution.bindings[index_b].tree_key
        if key_a == key_b:
            continue
        linkops.link_trees(base, key_a, resolved[index_a][1], key_b)

    for binding, (tree, node) in zip(solution.bindings, resolved):
        if binding.descriptor_id is None:
            continue
        descriptor = node.find_descriptor(binding.descriptor_word)
        if descriptor is not None:
            descriptor.count = min(descriptor.count + 1, node.count)

    for tree, _ in resolved:
        base.touch_tree(tree)

    result.status = "approved"
    return group_result(base, solution, result.query.text())


def reject_result(base: ConceptBase, result_id: int) -> ResultSet:
    """Mark a pending result rejected; the base itself does not change."""
    result = _get_pending(base, result_id)
    result.status = "rejected"
    return result


def group_result(base: ConceptBase, solution: Solution, label: str) -> GlobalConceptNode:
    """Group the solution's trees under a global node, keyed by the exact
    tree set: a repeat approval re-counts the existing node."""
    refs = set(solution.tree_keys())
    if not refs:
        raise ValueError("solution binds no trees")
    for global_node in base.global_nodes.values():
        if global_node.tree_refs == refs:
            global_node.count += 1
            return global_node
    global_node = GlobalConceptNode(id=base.allocate_id(), label=label,
                                    tree_refs=refs, count=1)
    base.global_nodes[global_node.id] = global_node
    return global_node


def trigger(base: ConceptBase, global_id: int) -> set[str]:
    """The node's trees plus those of every global node sharing a tree
    with it — one hop, no transitive closure."""
    origin = base.global_nodes.get(global_id)
    if origin is None:
        raise NotFoundError(f"no global node with id {global_id}")
    keys = set(origin.tree_refs)
    for other in base.global_nodes.values():
        if other.id != global_id and other.tree_refs & origin.tree_refs:
            keys |= other.tree_refs
    return keys
