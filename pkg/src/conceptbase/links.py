"""Lifecycle of reinforceable links.

Both tree links and descriptor links share one 3-level state machine:
candidate (1) links are created by splits, approvals and direct calls;
enough reinforcement promotes them to established (2) and finally to
permanent (3), which decay can never remove or demote.
"""

from __future__ import annotations

from typing import Optional

from .errors import KeyNotFoundError, NotFoundError, SelfLinkError
from .model import (
    Config,
    ConceptBase,
    ConceptNode,
    DescriptorLink,
    LinkState,
    TreeLink,
)


def reinforce(state: LinkState, config: Config) -> LinkState:
    """Strengthen a link by one, promoting across thresholds. Mutates in place."""
    state.strength += 1
    if state.level == 1 and state.strength >= config.promote_t1:
        state.level = 2
    if state.level == 2 and state.strength >= config.promote_t2:
        state.level = 3
    return state


def decay_link(state: LinkState, config: Config) -> Optional[LinkState]:
    """Weaken a link by one. Returns None when the link should be removed.

    Permanent links pass through untouched; an established link falling
    under the first promotion threshold is demoted back to candidate.
    """
    if state.level == 3:
        return state
    state.strength = max(0, state.strength - 1)
    if state.level == 1 and state.strength == 0:
        return None
    if state.level == 2 and state.strength < config.promote_t1:
        state.level = 1
    return state


def link_descriptors(base: ConceptBase, d1: int, d2: int) -> DescriptorLink:
    """Create or reinforce the unordered descriptor link d1<->d2."""
    if d1 == d2:
        raise SelfLinkError(f"descriptor {d1} cannot link to itself")
    owners = base.descriptor_owners()
    for endpoint in (d1, d2):
        if endpoint not in owners:
            raise NotFoundError(f"no live descriptor with id {endpoint}")
    pair = DescriptorLink.normalize(d1, d2)
    link = base.descriptor_links.get(pair)
    if link is None:
        link = DescriptorLink(from_id=pair[0], to_id=pair[1])
        base.descriptor_links[pair] = link
    else:
        reinforce(link.state, base.config)
    base.touched_descriptor_pairs.add(pair)
    return link


def link_trees(base: ConceptBase, from_key: str, from_node: ConceptNode,
               to_key: str) -> TreeLink:
    """Create or reinforce a keyed link from a node to another tree's base."""
    if to_key not in base.trees:
        raise KeyNotFoundError(f"no tree with key '{to_key}'")
    from_tree = base.trees.get(from_key)
    if from_tree is None:
        raise KeyNotFoundError(f"no tree with key '{from_key}'")
    if not any(node is from_node for node in from_tree.base.walk()):
        raise NotFoundError(f"node '{from_node.lemma}' is not in tree '{from_key}'")
    link = from_node.find_link(to_key)
    if link is None:
        link = TreeLink(target_key=to_key)
        from_node.tree_links.append(link)
    else:
        reinforce(link.state, base.config)
    return link
