"""Single-file persistence for the whole base.

The document is canonical JSON: keys sorted, trees ordered by key,
links by endpoint pair, so structurally identical bases serialize to
byte-identical files. Loading re-checks every structural invariant and
refuses corrupt documents.

The query/approval session store is not part of the base document; the
CLI keeps it alive between invocations in a sidecar file next to the base
(`save_results`/`load_results`).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .errors import (
    CorruptBaseError,
    DocumentParseError,
    PersistenceError,
    UnsupportedVersionError,
)
from .model import (
    Config,
    ConceptBase,
    ConceptNode,
    ConceptTree,
    Descriptor,
    DescriptorLink,
    GlobalConceptNode,
    LinkState,
    TreeLink,
    tree_key_ordinal,
    validation_errors,
)
from .query import Binding, Clause, Query, ResultSet, Solution

FORMAT_VERSION = 1
FILE_SUFFIX = ".cbase.json"


def node_to_dict(node: ConceptNode) -> dict[str, Any]:
    return {
        "lemma": node.lemma,
        "pos": node.pos,
        "count": node.count,
        "descriptors": [
            {"id": d.id, "word": d.word, "count": d.count} for d in node.descriptors
        ],
        "tree_links": [
            {"target_key": l.target_key, "level": l.state.level,
             "strength": l.state.strength}
            for l in node.tree_links
        ],
        "children": [node_to_dict(child) for child in node.children],
    }


def document(base: ConceptBase) -> dict[str, Any]:
    """The base as a plain JSON-ready dictionary."""
    return {
        "format_version": FORMAT_VERSION,
        "maintenance_cycle": base.maintenance_cycle,
        "next_id": base.next_id,
        "config": {
            "merge_overlap_threshold": base.config.merge_overlap_threshold,
            "allow_interior_updates": base.config.allow_interior_updates,
            "promote_t1": base.config.promote_t1,
            "promote_t2": base.config.promote_t2,
            "decay_grace_cycles": base.config.decay_grace_cycles,
            "w_same_tree": base.config.w_same_tree,
            "w_link": base.config.w_link,
            "w_cycle": base.config.w_cycle,
            "popular_word_base_mode": base.config.popular_word_base_mode,
            "max_solutions": base.config.max_solutions,
            "stopwords": sorted(base.config.stopwords),
            "lexicon": {word: list(classes)
                        for word, classes in sorted(base.config.lexicon.items())},
        },
        "trees": [
            {
                "key": tree.key,
                "last_access_cycle": tree.last_access_cycle,
                "access_count_since_cycle": tree.access_count_since_cycle,
                "base": node_to_dict(tree.base),
            }
            for tree in sorted(base.trees.values(),
                               key=lambda t: tree_key_ordinal(t.key))
        ],
        "descriptor_links": [
            {"from_id": link.from_id, "to_id": link.to_id,
             "level": link.state.level, "strength": link.state.strength}
            for _, link in sorted(base.descriptor_links.items())
        ],
        "global_nodes": [
            {"id": g.id, "label": g.label, "tree_refs": sorted(g.tree_refs),
             "count": g.count}
            for g in sorted(base.global_nodes.values(), key=lambda g: g.id)
        ],
    }


def save(base: ConceptBase, destination: Optional[str | Path] = None) -> str:
    """Serialize the base canonically; write it when a destination is given.

    Pure with respect to the base: no access stamping, no mutation.
    """
    text = json.dumps(document(base), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
    if destination is not None:
        try:
            Path(destination).write_text(text, encoding="utf-8")
        except OSError as error:
            raise PersistenceError(f"cannot write {destination}: {error}") from error
    return text


class _Reader:
    """Type-checked JSON access that remembers where it is."""

    def __init__(self, value: Any, path: str):
        self.value = value
        self.path = path

    def fail(self, message: str):
        raise DocumentParseError(message, self.path)

    def as_dict(self) -> dict:
        if not isinstance(self.value, dict):
            self.fail(f"expected object, got {type(self.value).__name__}")
        return self.value

    def child(self, key: str) -> "_Reader":
        mapping = self.as_dict()
        if key not in mapping:
            self.fail(f"missing field '{key}'")
        return _Reader(mapping[key], f"{self.path}.{key}")

    def item(self, index: int) -> "_Reader":
        return _Reader(self.value[index], f"{self.path}[{index}]")

    def as_list(self) -> list:
        if not isinstance(self.value, list):
            self.fail(f"expected array, got {type(self.value).__name__}")
        return self.value

    def as_int(self) -> int:
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            self.fail(f"expected integer, got {type(self.value).__name__}")
        return self.value

    def as_number(self) -> float:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            self.fail(f"expected number, got {type(self.value).__name__}")
        return self.value

    def as_str(self) -> str:
        if not isinstance(self.value, str):
            self.fail(f"expected string, got {type(self.value).__name__}")
        return self.value

    def as_bool(self) -> bool:
        if not isinstance(self.value, bool):
            self.fail(f"expected boolean, got {type(self.value).__name__}")
        return self.value


def _node_from(reader: _Reader) -> ConceptNode:
    node = ConceptNode(
        lemma=reader.child("lemma").as_str(),
        pos=reader.child("pos").as_str(),
        count=reader.child("count").as_int(),
    )
    descriptors = reader.child("descriptors")
    for index in range(len(descriptors.as_list())):
        entry = descriptors.item(index)
        node.descriptors.append(Descriptor(
            id=entry.child("id").as_int(),
            word=entry.child("word").as_str(),
            count=entry.child("count").as_int(),
        ))
    tree_links = reader.child("tree_links")
    for index in range(len(tree_links.as_list())):
        entry = tree_links.item(index)
        node.tree_links.append(TreeLink(
            target_key=entry.child("target_key").as_str(),
            state=LinkState(level=entry.child("level").as_int(),
                            strength=entry.child("strength").as_int()),
        ))
    children = reader.child("children")
    for index in range(len(children.as_list())):
        node.children.append(_node_from(children.item(index)))
    return node


def load(source: str | Path) -> ConceptBase:
    """Read a base document back; hard-fails on structural violations."""
    path = Path(source)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as error:
        raise PersistenceError(f"cannot read {source}: {error}") from error
    return loads(raw)


def loads(raw: str) -> ConceptBase:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as error:
        raise DocumentParseError(f"invalid JSON: {error.msg}", "$") from error
    root = _Reader(data, "$")

    version = root.child("format_version").as_int()
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"format_version {version} is not supported (expected {FORMAT_VERSION})")

    config_reader = root.child("config")
    stopwords_reader = config_reader.child("stopwords")
    stopwords = {stopwords_reader.item(i).as_str()
                 for i in range(len(stopwords_reader.as_list()))}
    lexicon_reader = config_reader.child("lexicon")
    lexicon: dict[str, list[str]] = {}
    for word, classes in lexicon_reader.as_dict().items():
        entry = _Reader(classes, f"{lexicon_reader.path}.{word}")
        lexicon[word] = [entry.item(i).as_str() for i in range(len(entry.as_list()))]
    try:
        config = Config(
            merge_overlap_threshold=config_reader.child("merge_overlap_threshold").as_int(),
            allow_interior_updates=config_reader.child("allow_interior_updates").as_bool(),
            promote_t1=config_reader.child("promote_t1").as_int(),
            promote_t2=config_reader.child("promote_t2").as_int(),
            decay_grace_cycles=config_reader.child("decay_grace_cycles").as_int(),
            w_same_tree=config_reader.child("w_same_tree").as_number(),
            w_link=config_reader.child("w_link").as_number(),
            w_cycle=config_reader.child("w_cycle").as_number(),
            popular_word_base_mode=config_reader.child("popular_word_base_mode").as_bool(),
            max_solutions=config_reader.child("max_solutions").as_int(),
            stopwords=stopwords,
            lexicon=lexicon,
        )
    except ValueError as error:
        raise CorruptBaseError(f"invalid config: {error}") from error

    base = ConceptBase(
        config=config,
        next_id=root.child("next_id").as_int(),
        maintenance_cycle=root.child("maintenance_cycle").as_int(),
    )

    trees = root.child("trees")
    for index in range(len(trees.as_list())):
        entry = trees.item(index)
        key = entry.child("key").as_str()
        if key in base.trees:
            raise CorruptBaseError(f"duplicate tree key '{key}'")
        base.trees[key] = ConceptTree(
            key=key,
            base=_node_from(entry.child("base")),
            last_access_cycle=entry.child("last_access_cycle").as_int(),
            access_count_since_cycle=entry.child("access_count_since_cycle").as_int(),
        )

    links = root.child("descriptor_links")
    for index in range(len(links.as_list())):
        entry = links.item(index)
        link = DescriptorLink(
            from_id=entry.child("from_id").as_int(),
            to_id=entry.child("to_id").as_int(),
            state=LinkState(level=entry.child("level").as_int(),
                            strength=entry.child("strength").as_int()),
        )
        base.descriptor_links[DescriptorLink.normalize(link.from_id, link.to_id)] = link

    globals_reader = root.child("global_nodes")
    for index in range(len(globals_reader.as_list())):
        entry = globals_reader.item(index)
        refs_reader = entry.child("tree_refs")
        node = GlobalConceptNode(
            id=entry.child("id").as_int(),
            label=entry.child("label").as_str(),
            tree_refs={refs_reader.item(i).as_str()
                       for i in range(len(refs_reader.as_list()))},
            count=entry.child("count").as_int(),
        )
        base.global_nodes[node.id] = node

    problems = validation_errors(base)
    if problems:
        raise CorruptBaseError(
            "document violates base invariants: "
            + "; ".join(str(p) for p in problems[:5]))
    return base


# --- session result store (CLI sidecar; not part of the base document) ---


def results_to_dict(base: ConceptBase) -> dict[str, Any]:
    return {
        "results": [
            {
                "id": result.id,
                "status": result.status,
                "clauses": [
                    {"concept": c.concept, "descriptor": c.descriptor,
                     "descriptor_given": c.descriptor_given}
                    for c in result.query.clauses
                ],
                "via_descriptor_links": list(result.via_descriptor_links),
                "solutions": [
                    {
                        "score": s.score,
                        "cycles": s.cycles,
                        "bindings": [
                            {
                                "clause_index": i,
                                "tree_key": b.tree_key,
                                "path": list(b.path),
                                "lemma": b.lemma,
                                "descriptor_word": b.descriptor_word,
                                "descriptor_id": b.descriptor_id,
                                "descriptor_count": b.descriptor_count,
                                "suggested": b.suggested,
                                "unfilled": b.unfilled,
                            }
                            for i, b in enumerate(s.bindings)
                        ],
                    }
                    for s in result.solutions
                ],
            }
            for _, result in sorted(base.results.items())
        ]
    }


def save_results(base: ConceptBase, destination: str | Path) -> None:
    text = json.dumps(results_to_dict(base), sort_keys=True, indent=2) + "\n"
    try:
        Path(destination).write_text(text, encoding="utf-8")
    except OSError as error:
        raise PersistenceError(f"cannot write {destination}: {error}") from error


def load_results(base: ConceptBase, source: str | Path) -> None:
    """Rehydrate the session store; missing sidecar means an empty store."""
    path = Path(source)
    if not path.exists():
        return
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise PersistenceError(f"cannot read results sidecar {source}: {error}") from error
    base.results.clear()
    for entry in data.get("results", []):
        clauses = tuple(
            Clause(concept=c["concept"], descriptor=c["descriptor"],
                   descriptor_given=c["descriptor_given"])
            for c in entry["clauses"]
        )
        solutions = []
        for s in entry["solutions"]:
            bindings = [
                Binding(
                    clause=clauses[b["clause_index"]],
                    tree_key=b["tree_key"],
                    path=tuple(b["path"]),
                    lemma=b["lemma"],
                    descriptor_word=b["descriptor_word"],
                    descriptor_id=b["descriptor_id"],
                    descriptor_count=b["descriptor_count"],
                    suggested=b["suggested"],
                    unfilled=b["unfilled"],
                )
                for b in s["bindings"]
            ]
            solutions.append(Solution(bindings=bindings, score=s["score"],
                                      cycles=s["cycles"]))
        result = ResultSet(
            id=entry["id"],
            query=Query(clauses=clauses),
            solutions=solutions,
            status=entry["status"],
            via_descriptor_links=list(entry["via_descriptor_links"]),
        )
        base.results[result.id] = result
