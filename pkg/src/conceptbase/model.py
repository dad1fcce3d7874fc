"""Domain model for the concept base.

A concept base is a collection of counted trees whose nodes are noun/verb
concepts. Every node carries a frequency count and the structural rule is
that a child never counts higher than its parent; trees that would violate
the rule are split and re-joined through keyed tree links. Nodes carry
descriptor layers (adjectives on nouns, adverbs on verbs) which may link to
each other freely, within or across trees.

This module defines the data types, the `validate` well-formedness check
and basic navigation. Mutation lives in `builder`, `links`, `query` and
`network`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Optional

from .errors import KeyNotFoundError

if TYPE_CHECKING:
    from .query import ResultSet

NOUN = "noun"
VERB = "verb"
ADJECTIVE = "adjective"
ADVERB = "adverb"
STOPWORD = "stopword"
UNKNOWN = "unknown"

CONCEPT_CLASSES = (NOUN, VERB)
DESCRIPTOR_CLASSES = (ADJECTIVE, ADVERB)

#: word class of the descriptors a concept class accepts
DESCRIPTOR_FOR = {NOUN: ADJECTIVE, VERB: ADVERB}
#: concept class a descriptor class attaches to
HOST_FOR = {ADJECTIVE: NOUN, ADVERB: VERB}


@dataclass
class Config:
    """Tunable behaviour of the base. Thresholds and weights must be positive."""

    merge_overlap_threshold: int = 2
    allow_interior_updates: bool = True
    promote_t1: int = 3
    promote_t2: int = 10
    decay_grace_cycles: int = 1
    w_same_tree: float = 2
    w_link: float = 1
    w_cycle: float = 3
    popular_word_base_mode: bool = False
    max_solutions: int = 100
    stopwords: set[str] = field(default_factory=set)
    lexicon: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("merge_overlap_threshold", "promote_t1", "promote_t2",
                     "decay_grace_cycles", "w_same_tree", "w_link", "w_cycle",
                     "max_solutions"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config.{name} must be strictly positive")
        if self.promote_t1 >= self.promote_t2:
            raise ValueError("config.promote_t1 must be less than promote_t2")


@dataclass
class LinkState:
    """3-level link lifecycle: candidate (1), established (2), permanent (3).

    Level 3 links are permanent: decay never removes or demotes them.
    """

    level: int = 1
    strength: int = 1


@dataclass
class TreeLink:
    """Keyed reference from a node to the base of another tree."""

    target_key: str
    state: LinkState = field(default_factory=LinkState)


@dataclass
class Descriptor:
    """An adjective/adverb attached to a concept node, counted like the node."""

    id: int
    word: str
    count: int = 1


@dataclass
class DescriptorLink:
    """Reinforceable association between two descriptors (unordered pair)."""

    from_id: int
    to_id: int
    state: LinkState = field(default_factory=LinkState)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.from_id, self.to_id)

    @staticmethod
    def normalize(d1: int, d2: int) -> tuple[int, int]:
        return (d1, d2) if d1 <= d2 else (d2, d1)


@dataclass
class ConceptNode:
    """A noun or verb node in a concept tree."""

    lemma: str
    pos: str
    count: int = 1
    children: list[ConceptNode] = field(default_factory=list)
    descriptors: list[Descriptor] = field(default_factory=list)
    tree_links: list[TreeLink] = field(default_factory=list)

    def find_child(self, lemma: str, pos: str | None = None) -> Optional[ConceptNode]:
        """First child matching the lemma (and class, when given), insertion order."""
        for child in self.children:
            if child.lemma == lemma and (pos is None or child.pos == pos):
                return child
        return None

    def find_descriptor(self, word: str) -> Optional[Descriptor]:
        for descriptor in self.descriptors:
            if descriptor.word == word:
                return descriptor
        return None

    def find_link(self, target_key: str) -> Optional[TreeLink]:
        for link in self.tree_links:
            if link.target_key == target_key:
                return link
        return None

    def walk(self) -> Iterator[ConceptNode]:
        """Depth-first, pre-order, self included."""
        yield self
        for child in self.children:
            yield from child.walk()

    def walk_with_parent(self) -> Iterator[tuple[Optional[ConceptNode], ConceptNode]]:
        """(parent, node) pairs, pre-order; the root pairs with None."""
        stack: list[tuple[Optional[ConceptNode], ConceptNode]] = [(None, self)]
        while stack:
            parent, node = stack.pop()
            yield parent, node
            for child in reversed(node.children):
                stack.append((node, child))


@dataclass
class ConceptTree:
    """A counted tree plus the access bookkeeping the maintenance cycle reads."""

    key: str
    base: ConceptNode
    last_access_cycle: int = 0
    access_count_since_cycle: int = 0


@dataclass
class GlobalConceptNode:
    """Symbolic-network grouping of the trees bound by an approved query."""

    id: int
    label: str
    tree_refs: set[str]
    count: int = 1


@dataclass
class ConceptBase:
    """The whole database: trees, descriptor links, global nodes, counters.

    `results` is the session's query/approval store; it is deliberately not
    part of persisted state and is excluded from structural equality.
    """

    config: Config = field(default_factory=Config)
    trees: dict[str, ConceptTree] = field(default_factory=dict)
    descriptor_links: dict[tuple[int, int], DescriptorLink] = field(default_factory=dict)
    global_nodes: dict[int, GlobalConceptNode] = field(default_factory=dict)
    next_id: int = 1
    maintenance_cycle: int = 0
    results: dict[int, "ResultSet"] = field(default_factory=dict, compare=False, repr=False)
    # descriptor-link pairs touched since the last maintenance pass (session state)
    touched_descriptor_pairs: set[tuple[int, int]] = field(
        default_factory=set, compare=False, repr=False
    )

    def allocate_id(self) -> int:
        """Next identifier; never reused, shared by descriptors, results,
        global nodes and tree keys."""
        allocated = self.next_id
        self.next_id += 1
        return allocated

    def new_tree_key(self) -> str:
        return f"T{self.allocate_id()}"

    def iter_nodes(self) -> Iterator[tuple[ConceptTree, ConceptNode]]:
        for tree in self.trees.values():
            for node in tree.base.walk():
                yield tree, node

    def descriptor_owners(self) -> dict[int, tuple[ConceptTree, ConceptNode, Descriptor]]:
        """Map from descriptor id to its (tree, node, descriptor) owner."""
        owners: dict[int, tuple[ConceptTree, ConceptNode, Descriptor]] = {}
        for tree, node in self.iter_nodes():
            for descriptor in node.descriptors:
                owners[descriptor.id] = (tree, node, descriptor)
        return owners

    def touch_tree(self, tree: ConceptTree) -> None:
        """Stamp a tree as accessed within the current maintenance window."""
        tree.access_count_since_cycle += 1
        tree.last_access_cycle = self.maintenance_cycle


def tree_key_ordinal(key: str) -> int:
    """Numeric ordinal of a tree key for ordering; 'T12' -> 12."""
    return int(key[1:]) if key[1:].isdigit() else 0


@dataclass
class Violation:
    """One well-formedness report from `validate`."""

    severity: str  # "error" | "warning"
    code: str
    message: str
    tree_key: str = ""
    path: tuple[str, ...] = ()

    def __str__(self) -> str:
        where = f" [{self.tree_key}:{'/'.join(self.path)}]" if self.tree_key else ""
        return f"{self.severity}:{self.code}: {self.message}{where}"


def validate(base: ConceptBase) -> list[Violation]:
    """Check every structural invariant; never mutates.

    Returns one report per violated invariant: count rule, descriptor bound,
    dangling or duplicate links, bad word classes, unresolvable descriptor
    link endpoints. Self-targeting tree links are legal but reported as
    warnings. An empty list means the base is fully well-formed.
    """
    violations: list[Violation] = []

    def report(severity: str, code: str, message: str, tree_key: str = "",
               path: tuple[str, ...] = ()) -> None:
        violations.append(Violation(severity, code, message, tree_key, path))

    seen_descriptor_ids: dict[int, tuple[str, str]] = {}
    for tree in base.trees.values():
        stack: list[tuple[Optional[ConceptNode], ConceptNode, tuple[str, ...]]] = [
            (None, tree.base, (tree.base.lemma,))
        ]
        while stack:
            parent, node, path = stack.pop()
            if node.pos not in CONCEPT_CLASSES:
                report("error", "pos-mismatch",
                       f"node '{node.lemma}' has word class '{node.pos}'",
                       tree.key, path)
            if node.count < 0:
                report("error", "negative-count",
                       f"node '{node.lemma}' has count {node.count}", tree.key, path)
            if parent is not None and node.count > parent.count:
                report("error", "count-rule",
                       f"child '{node.lemma}' count {node.count} exceeds "
                       f"parent '{parent.lemma}' count {parent.count}",
                       tree.key, path)
            seen_words: set[str] = set()
            for descriptor in node.descriptors:
                if descriptor.count < 0:
                    report("error", "negative-count",
                           f"descriptor '{descriptor.word}' has count {descriptor.count}",
                           tree.key, path)
                if descriptor.count > node.count:
                    report("error", "descriptor-bound",
                           f"descriptor '{descriptor.word}' count {descriptor.count} "
                           f"exceeds node '{node.lemma}' count {node.count}",
                           tree.key, path)
                if descriptor.word in seen_words:
                    report("error", "duplicate-descriptor",
                           f"descriptor '{descriptor.word}' appears twice on "
                           f"node '{node.lemma}'", tree.key, path)
                seen_words.add(descriptor.word)
                if descriptor.id in seen_descriptor_ids:
                    report("error", "duplicate-descriptor-id",
                           f"descriptor id {descriptor.id} reused", tree.key, path)
                seen_descriptor_ids[descriptor.id] = (tree.key, descriptor.word)
            for link in node.tree_links:
                _check_link_state(link.state, report, tree.key, path)
                if link.target_key not in base.trees:
                    report("error", "dangling-link",
                           f"tree link targets unknown key '{link.target_key}'",
                           tree.key, path)
                elif link.target_key == tree.key:
                    report("warning", "self-link",
                           "tree link targets its own tree's base", tree.key, path)
            for child in node.children:
                stack.append((node, child, path + (child.lemma,)))

    for pair, link in base.descriptor_links.items():
        if link.from_id == link.to_id:
            report("error", "self-descriptor-link",
                   f"descriptor link joins id {link.from_id} to itself")
        _check_link_state(link.state, report)
        for endpoint in pair:
            if endpoint not in seen_descriptor_ids:
                report("error", "dangling-descriptor-link",
                       f"descriptor link endpoint {endpoint} does not resolve")

    for node_id, global_node in base.global_nodes.items():
        if not global_node.tree_refs:
            report("error", "empty-global-node",
                   f"global node {node_id} has no tree refs")
        for ref in global_node.tree_refs:
            if ref not in base.trees:
                report("error", "dangling-global-ref",
                       f"global node {node_id} references unknown tree '{ref}'")

    return violations


def _check_link_state(state: LinkState, report, tree_key: str = "",
                      path: tuple[str, ...] = ()) -> None:
    if state.level not in (1, 2, 3):
        report("error", "bad-link-level", f"link level {state.level} outside 1..3",
               tree_key, path)
    if state.strength < 0:
        report("error", "negative-strength",
               f"link strength {state.strength} negative", tree_key, path)


def validation_errors(base: ConceptBase) -> list[Violation]:
    """The error-severity subset of `validate` (warnings filtered out)."""
    return [v for v in validate(base) if v.severity == "error"]


def find_node(base: ConceptBase, key: str, path: list[str]) -> Optional[ConceptNode]:
    """Walk from the base of tree `key` matching `path` lemmas in order.

    An empty path is the base node itself. Returns None when the walk falls
    off the tree; raises KeyNotFoundError for an unknown tree key.
    """
    tree = base.trees.get(key)
    if tree is None:
        raise KeyNotFoundError(f"no tree with key '{key}'")
    node = tree.base
    for lemma in path:
        node = node.find_child(lemma)
        if node is None:
            return None
    return node

