"""The wardrobe story: ingest one sentence, query it both ways, and watch
an approval turn a guess into a navigable link.

Run: python demos/01_feedback_loop.py
"""

from conceptbase import (
    ConceptBase,
    approve_result,
    default_config,
    execute_query,
    fill_slots,
    ingest_document,
)


def show_tree(base):
    for tree in base.trees.values():
        print(f"  tree {tree.key}:")
        stack = [(tree.base, 1)]
        while stack:
            node, depth = stack.pop()
            descriptors = ", ".join(f"{d.word}({d.count})" for d in node.descriptors)
            suffix = f"  [{descriptors}]" if descriptors else ""
            print(f"  {'  ' * depth}{node.lemma}({node.count}){suffix}")
            for child in reversed(node.children):
                stack.append((child, depth + 1))


def show_solutions(result):
    for index, solution in enumerate(result.solutions):
        parts = []
        for filled in fill_slots(solution):
            text = filled.concept
            if filled.descriptor:
                text += f":{filled.descriptor}"
            if filled.from_wildcard:
                text += " (suggested)"
            parts.append(f"[{text}]")
        print(f"  #{index} score={solution.score:g} " + " AND ".join(parts))


base = ConceptBase(config=default_config())

print("ingesting: 'Jack wore a white shirt and blue trousers.'")
ingest_document(base, "Jack wore a white shirt and blue trousers.")
show_tree(base)
print()
print("note the spurious blue on the shirt: 'blue' sat between two nouns, so")
print("it attached to both. feedback will decide which attachment matters.")
print()

print("query: [shirt:white] AND [trousers:?]   (what goes with the shirt?)")
forward = execute_query(base, "[shirt:white] AND [trousers:?]")
show_solutions(forward)
print()

print(f"approving result {forward.id}, solution 0 ...")
global_node = approve_result(base, forward.id, 0)
pair = next(iter(base.descriptor_links.values()))
print(f"  new descriptor link (level {pair.state.level}, "
      f"strength {pair.state.strength}) between white and blue")
print(f"  global concept node {global_node.id} groups trees "
      f"{sorted(global_node.tree_refs)}")
print()

print("query: [shirt:white] AND [?:blue]   (was something blue worn with it?)")
reverse = execute_query(base, "[shirt:white] AND [?:blue]")
show_solutions(reverse)
print()
print("the wildcard candidates came via the approved link "
      f"(per clause: {reverse.via_descriptor_links}), so only the trousers")
print("qualified; the shirt's own spurious blue was never considered.")
