"""Tree construction and maintenance.

Concept sequences enter the base here. An insertion either starts a new
tree, increments an existing tree from its base, or — when a long enough
run matches deeper inside a tree — increments from an interior node. The
interior case is what makes the count rule enforceable only by splitting:
a node incremented past its parent is detached into its own tree and the
former parent keeps a keyed link to it.

Maintenance is two batch passes: decay (unused trees lose one count
everywhere, empties vanish) and merge (trees sharing a base concept are
grafted together).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import links as linkops
from .errors import ConceptBaseError
from .ingest import (
    ConceptTerm,
    corpus_popular_words,
    document_to_sequences,
    tag_word,
)
from .model import (
    DESCRIPTOR_FOR,
    CONCEPT_CLASSES,
    ConceptBase,
    ConceptNode,
    ConceptTree,
    Descriptor,
    DescriptorLink,
    LinkState,
    TreeLink,
    tree_key_ordinal,
)


class RejectedTermError(ConceptBaseError):
    """A concept term carries an impossible class pairing."""


@dataclass
class InsertionTarget:
    kind: str  # "new_tree" | "base_anchored" | "interior"
    tree_key: Optional[str] = None
    node: Optional[ConceptNode] = None  # anchor node for interior updates
    matched_prefix_length: int = 0


@dataclass
class SplitRecord:
    """One split event: `node` left `source_key` to become the base of `new_key`."""

    source_key: str
    new_key: str
    node: ConceptNode
    link: TreeLink


@dataclass
class InsertReport:
    tree_key: str
    created_tree: bool
    concepts: int = 0
    descriptor_attachments: int = 0
    splits: list[SplitRecord] = field(default_factory=list)


def _match_length(start: ConceptNode, sequence: list[ConceptTerm]) -> int:
    """Length of the sequence prefix matched by walking down from `start`."""
    if not sequence or start.lemma != sequence[0].lemma or start.pos != sequence[0].pos:
        return 0
    length, node = 1, start
    for term in sequence[1:]:
        child = node.find_child(term.lemma, term.pos)
        if child is None:
            break
        length, node = length + 1, child
    return length


def find_insertion_target(base: ConceptBase, sequence: list[ConceptTerm]) -> InsertionTarget:
    """Choose where a sequence lands.

    The tree whose base-anchored path matches the longest sequence prefix
    wins if the match reaches the overlap threshold; otherwise, with
    interior updates enabled, the shallowest interior node starting a long
    enough match wins; otherwise the sequence founds a new tree. Ties go to
    the higher base count, then the smaller tree key.
    """
    if not sequence:
        raise ValueError("cannot place an empty sequence")
    threshold = base.config.merge_overlap_threshold
    ordered = sorted(base.trees.values(), key=lambda t: tree_key_ordinal(t.key))

    best: tuple[int, int, int] | None = None  # (-length, -base count, ordinal)
    best_tree: Optional[ConceptTree] = None
    for tree in ordered:
        length = _match_length(tree.base, sequence)
        if length == 0:
            continue
        rank = (-length, -tree.base.count, tree_key_ordinal(tree.key))
        if best is None or rank < best:
            best, best_tree = rank, tree
    if best_tree is not None and -best[0] >= threshold:
        return InsertionTarget("base_anchored", best_tree.key,
                               matched_prefix_length=-best[0])

    if base.config.allow_interior_updates:
        interior_best: tuple[int, int, int, int] | None = None
        interior_node: Optional[ConceptNode] = None
        interior_tree: Optional[ConceptTree] = None
        for tree in ordered:
            order = 0
            stack: list[tuple[ConceptNode, int]] = [(tree.base, 0)]
            while stack:
                node, depth = stack.pop()
                if depth > 0:
                    length = _match_length(node, sequence)
                    if length >= threshold:
                        order += 1
                        rank = (depth, -tree.base.count,
                                tree_key_ordinal(tree.key), order)
                        if interior_best is None or rank < interior_best:
                            interior_best = rank
                            interior_node, interior_tree = node, tree
                for child in reversed(node.children):
                    stack.append((child, depth + 1))
        if interior_node is not None:
            return InsertionTarget("interior", interior_tree.key, interior_node,
                                   matched_prefix_length=_match_length(interior_node, sequence))

    return InsertionTarget("new_tree")


def _check_term(term: ConceptTerm, base: ConceptBase) -> None:
    if term.pos not in CONCEPT_CLASSES:
        raise RejectedTermError(f"'{term.lemma}' has class '{term.pos}', not a concept")
    wanted = DESCRIPTOR_FOR[term.pos]
    for word in term.descriptors:
        if tag_word(word, base.config) != wanted:
            raise RejectedTermError(
                f"descriptor '{word}' is not an {wanted} and cannot describe "
                f"{term.pos} '{term.lemma}'")


def _attach_descriptor(base: ConceptBase, node: ConceptNode, word: str) -> Descriptor:
    """Attach or re-count a descriptor, never letting it outgrow its node."""
    descriptor = node.find_descriptor(word)
    if descriptor is None:
        descriptor = Descriptor(id=base.allocate_id(), word=word,
                                count=min(1, node.count))
        node.descriptors.append(descriptor)
    else:
        descriptor.count = min(descriptor.count + 1, node.count)
    return descriptor


def insert_sequence(base: ConceptBase, target: InsertionTarget,
                    sequence: list[ConceptTerm]) -> InsertReport:
    """Apply a sequence at its target and restore the count rule by splitting."""
    if not sequence:
        raise ValueError("cannot insert an empty sequence")
    for term in sequence:
        _check_term(term, base)

    if target.kind == "new_tree":
        key = base.new_tree_key()
        root = ConceptNode(lemma=sequence[0].lemma, pos=sequence[0].pos, count=1)
        tree = ConceptTree(key=key, base=root,
                           last_access_cycle=base.maintenance_cycle,
                           access_count_since_cycle=0)
        base.trees[key] = tree
        report = InsertReport(tree_key=key, created_tree=True, concepts=1)
        for word in sequence[0].descriptors:
            _attach_descriptor(base, root, word)
            report.descriptor_attachments += 1
        node = root
        for term in sequence[1:]:
            child = ConceptNode(lemma=term.lemma, pos=term.pos, count=1)
            node.children.append(child)
            node = child
            report.concepts += 1
            for word in term.descriptors:
                _attach_descriptor(base, node, word)
                report.descriptor_attachments += 1
        base.touch_tree(tree)
        return report

    tree = base.trees[target.tree_key]
    anchor = tree.base if target.kind == "base_anchored" else target.node
    if anchor.lemma != sequence[0].lemma or anchor.pos != sequence[0].pos:
        raise ValueError("insertion target does not match the sequence head")

    report = InsertReport(tree_key=tree.key, created_tree=False)
    touched: list[ConceptNode] = []
    node = anchor
    node.count += 1
    touched.append(node)
    report.concepts += 1
    for word in sequence[0].descriptors:
        _attach_descriptor(base, node, word)
        report.descriptor_attachments += 1
    for term in sequence[1:]:
        child = node.find_child(term.lemma, term.pos)
        if child is None:
            child = ConceptNode(lemma=term.lemma, pos=term.pos, count=0)
            node.children.append(child)
        child.count += 1
        touched.append(child)
        report.concepts += 1
        for word in term.descriptors:
            _attach_descriptor(base, child, word)
            report.descriptor_attachments += 1
        node = child

    base.touch_tree(tree)
    # check_and_split over every incremented node; the fixpoint scan is
    # equivalent since only incremented nodes can violate the rule
    report.splits.extend(normalize_tree(base, tree))
    return report


def _find_parent(root: ConceptNode, target: ConceptNode) -> Optional[ConceptNode]:
    for parent, node in root.walk_with_parent():
        if node is target:
            return parent
    return None


def _detach(base: ConceptBase, tree: ConceptTree, parent: ConceptNode,
            node: ConceptNode) -> SplitRecord:
    parent.children.remove(node)
    new_key = base.new_tree_key()
    new_tree = ConceptTree(key=new_key, base=node,
                           last_access_cycle=base.maintenance_cycle,
                           access_count_since_cycle=1)
    base.trees[new_key] = new_tree
    link = TreeLink(target_key=new_key, state=LinkState(level=1, strength=1))
    parent.tree_links.append(link)
    return SplitRecord(source_key=tree.key, new_key=new_key, node=node, link=link)


def check_and_split(base: ConceptBase, tree: ConceptTree,
                    node: ConceptNode) -> list[SplitRecord]:
    """Detach `node` into its own tree if it outgrew its parent.

    Splitting can expose further violations inside the detached subtree
    (interior updates increment whole runs), so the new tree is normalized
    to a fixpoint. Base nodes are never split.
    """
    parent = _find_parent(tree.base, node)
    if parent is None or node.count <= parent.count:
        return []
    record = _detach(base, tree, parent, node)
    return [record] + normalize_tree(base, base.trees[record.new_key])


def normalize_tree(base: ConceptBase, tree: ConceptTree) -> list[SplitRecord]:
    """Split until no node outcounts its parent, following detached trees."""
    splits: list[SplitRecord] = []
    pending = [tree]
    while pending:
        current = pending.pop()
        while True:
            violation = next(
                ((parent, node) for parent, node in current.base.walk_with_parent()
                 if parent is not None and node.count > parent.count), None)
            if violation is None:
                break
            record = _detach(base, current, *violation)
            splits.append(record)
            pending.append(base.trees[record.new_key])
    return splits


@dataclass
class MaintenanceReport:
    decayed_trees: list[str] = field(default_factory=list)
    removed_trees: list[str] = field(default_factory=list)
    merged_trees: list[tuple[str, str]] = field(default_factory=list)  # (absorbed, survivor)
    removed_links: int = 0
    splits: list[SplitRecord] = field(default_factory=list)


def decay_pass(base: ConceptBase) -> MaintenanceReport:
    """One maintenance decrement over everything idle.

    A tree accessed during the window that is closing is exempt, and so is
    a tree inside its grace allowance. Every other tree loses one count on
    every node and descriptor, its links weaken, and whatever reaches zero
    is removed — the whole tree when its base empties. Descriptor links
    untouched since the previous pass weaken too. Counters reset and the
    cycle advances last, so stamps are compared against the window they
    were made in.
    """
    report = MaintenanceReport()
    config = base.config
    current = base.maintenance_cycle
    dead_descriptor_ids: set[int] = set()
    removed_keys: set[str] = set()

    for key, tree in list(base.trees.items()):
        if tree.access_count_since_cycle > 0:
            continue
        if current - tree.last_access_cycle <= config.decay_grace_cycles:
            continue
        report.decayed_trees.append(key)
        for node in tree.base.walk():
            node.count = max(0, node.count - 1)
            for descriptor in list(node.descriptors):
                descriptor.count = max(0, descriptor.count - 1)
                if descriptor.count == 0:
                    node.descriptors.remove(descriptor)
                    dead_descriptor_ids.add(descriptor.id)
            for link in list(node.tree_links):
                if linkops.decay_link(link.state, config) is None:
                    node.tree_links.remove(link)
                    report.removed_links += 1
        _prune_zero_nodes(tree, dead_descriptor_ids)
        if tree.base.count == 0:
            for node in tree.base.walk():
                dead_descriptor_ids.update(d.id for d in node.descriptors)
            del base.trees[key]
            removed_keys.add(key)
            report.removed_trees.append(key)

    if removed_keys:
        for tree in base.trees.values():
            for node in tree.base.walk():
                for link in list(node.tree_links):
                    if link.target_key in removed_keys:
                        node.tree_links.remove(link)
                        report.removed_links += 1
        for node_id, global_node in list(base.global_nodes.items()):
            global_node.tree_refs -= removed_keys
            if not global_node.tree_refs:
                del base.global_nodes[node_id]

    for pair, link in list(base.descriptor_links.items()):
        if dead_descriptor_ids.intersection(pair):
            del base.descriptor_links[pair]
            report.removed_links += 1
            continue
        if pair in base.touched_descriptor_pairs:
            continue
        if linkops.decay_link(link.state, config) is None:
            del base.descriptor_links[pair]
            report.removed_links += 1

    base.touched_descriptor_pairs.clear()
    for tree in base.trees.values():
        tree.access_count_since_cycle = 0
    base.maintenance_cycle += 1
    return report


def _prune_zero_nodes(tree: ConceptTree, dead_descriptor_ids: set[int]) -> None:
    """Drop zero-count nodes (and their subtrees) below the base."""

    def prune(node: ConceptNode) -> None:
        for child in list(node.children):
            if child.count == 0:
                node.children.remove(child)
                for buried in child.walk():
                    dead_descriptor_ids.update(d.id for d in buried.descriptors)
            else:
                prune(child)

    prune(tree.base)


def merge_pass(base: ConceptBase) -> MaintenanceReport:
    """Graft together trees that share a base concept.

    The largest base count survives (older key on ties); matching child
    paths sum counts and descriptor counts, disjoint branches are adopted
    wholesale. Inbound tree links and global-node references follow the
    absorbed key to the survivor, descriptor links follow their merged
    descriptors, and splitting restores the count rule afterwards.
    """
    report = MaintenanceReport()
    groups: dict[tuple[str, str], list[ConceptTree]] = {}
    for tree in base.trees.values():
        groups.setdefault((tree.base.lemma, tree.base.pos), []).append(tree)

    for trees in groups.values():
        if len(trees) < 2:
            continue
        trees.sort(key=lambda t: (-t.base.count, tree_key_ordinal(t.key)))
        survivor = trees[0]
        for absorbed in trees[1:]:
            id_remap: dict[int, int] = {}
            _merge_nodes(survivor.base, absorbed.base, id_remap, survivor.key)
            survivor.last_access_cycle = max(survivor.last_access_cycle,
                                             absorbed.last_access_cycle)
            survivor.access_count_since_cycle += absorbed.access_count_since_cycle
            del base.trees[absorbed.key]
            _rewrite_tree_key(base, absorbed.key, survivor.key)
            _remap_descriptor_links(base, id_remap)
            report.merged_trees.append((absorbed.key, survivor.key))
        report.splits.extend(normalize_tree(base, survivor))
    return report


def _merge_nodes(target: ConceptNode, source: ConceptNode,
                 id_remap: dict[int, int], survivor_key: str) -> None:
    target.count += source.count
    for descriptor in source.descriptors:
        existing = target.find_descriptor(descriptor.word)
        if existing is None:
            target.descriptors.append(descriptor)
        else:
            existing.count += descriptor.count
            id_remap[descriptor.id] = existing.id
    for link in source.tree_links:
        if link.target_key == survivor_key:
            continue  # the absorbed tree pointed at its absorber: vacuous now
        existing = target.find_link(link.target_key)
        if existing is None:
            target.tree_links.append(link)
        else:
            existing.state.level = max(existing.state.level, link.state.level)
            existing.state.strength = max(existing.state.strength, link.state.strength)
    for child in source.children:
        existing = target.find_child(child.lemma, child.pos)
        if existing is None:
            target.children.append(child)
        else:
            _merge_nodes(existing, child, id_remap, survivor_key)


def _rewrite_tree_key(base: ConceptBase, old_key: str, new_key: str) -> None:
    for tree in base.trees.values():
        for node in tree.base.walk():
            for link in list(node.tree_links):
                if link.target_key != old_key:
                    continue
                if tree.key == new_key:
                    # source and target collapsed into one tree: the link
                    # no longer navigates anywhere
                    node.tree_links.remove(link)
                    continue
                existing = node.find_link(new_key)
                if existing is None:
                    link.target_key = new_key
                else:
                    existing.state.level = max(existing.state.level, link.state.level)
                    existing.state.strength = max(existing.state.strength,
                                                  link.state.strength)
                    node.tree_links.remove(link)
    by_refs: dict[frozenset[str], int] = {}
    for node_id, global_node in list(base.global_nodes.items()):
        if old_key in global_node.tree_refs:
            global_node.tree_refs.discard(old_key)
            global_node.tree_refs.add(new_key)
        refs = frozenset(global_node.tree_refs)
        if refs in by_refs:
            base.global_nodes[by_refs[refs]].count += global_node.count
            del base.global_nodes[node_id]
        else:
            by_refs[refs] = node_id


def _remap_descriptor_links(base: ConceptBase, id_remap: dict[int, int]) -> None:
    """Follow merged descriptor ids through the link set.

    A link whose endpoints merged into one descriptor collapses away; two
    links landing on the same pair combine, keeping the stronger state.
    """
    if not id_remap:
        return
    relinked: dict[tuple[int, int], DescriptorLink] = {}
    touched: set[tuple[int, int]] = set()
    for pair, link in base.descriptor_links.items():
        mapped = DescriptorLink.normalize(id_remap.get(link.from_id, link.from_id),
                                          id_remap.get(link.to_id, link.to_id))
        if mapped[0] == mapped[1]:
            continue
        link.from_id, link.to_id = mapped
        existing = relinked.get(mapped)
        if existing is None:
            relinked[mapped] = link
        else:
            existing.state.level = max(existing.state.level, link.state.level)
            existing.state.strength = max(existing.state.strength, link.state.strength)
        if pair in base.touched_descriptor_pairs:
            touched.add(mapped)
    base.descriptor_links = relinked
    base.touched_descriptor_pairs = touched


def reorder_for_popular_base(sequence: list[ConceptTerm],
                             popularity: dict[str, int]) -> list[ConceptTerm]:
    """Stable sort putting the most popular concept first; descriptors travel."""
    return sorted(sequence, key=lambda term: -popularity.get(term.lemma, 0))


@dataclass
class IngestReport:
    sentences: int = 0
    concepts: int = 0
    descriptor_attachments: int = 0
    new_trees: int = 0
    trees_touched: set[str] = field(default_factory=set)
    splits: list[SplitRecord] = field(default_factory=list)


def ingest_document(base: ConceptBase, text: str) -> IngestReport:
    """Read a document into the base, one tree insertion per sentence."""
    sequences = document_to_sequences(text, base.config)
    popularity = (corpus_popular_words(sequences)
                  if base.config.popular_word_base_mode else None)
    report = IngestReport(sentences=len(sequences))
    for sequence in sequences:
        if popularity is not None:
            sequence = reorder_for_popular_base(sequence, popularity)
        target = find_insertion_target(base, sequence)
        inserted = insert_sequence(base, target, sequence)
        report.concepts += inserted.concepts
        report.descriptor_attachments += inserted.descriptor_attachments
        report.new_trees += int(inserted.created_tree)
        report.trees_touched.add(inserted.tree_key)
        report.trees_touched.update(s.new_key for s in inserted.splits)
        report.splits.extend(inserted.splits)
    return report
