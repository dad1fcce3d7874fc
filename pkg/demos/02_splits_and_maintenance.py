"""How the count rule restructures the base: interior updates split shared
tails into their own trees, merging unifies duplicates, decay forgets.

Run: python demos/02_splits_and_maintenance.py
"""

from conceptbase import ConceptBase, decay_pass, default_config, ingest_document, merge_pass
from conceptbase.builder import InsertionTarget, find_insertion_target, insert_sequence
from conceptbase.ingest import sentence_to_terms


def show(base, label):
    print(f"{label}:")
    for tree in sorted(base.trees.values(), key=lambda t: t.key):
        nodes = []
        for node in tree.base.walk():
            links = "".join(f" ->{l.target_key}" for l in node.tree_links)
            nodes.append(f"{node.lemma}({node.count}){links}")
        print(f"  {tree.key}: " + " / ".join(nodes))
    print()


base = ConceptBase(config=default_config())

ingest_document(base, "The cat drank milk.")
ingest_document(base, "The boy drank milk.")
show(base, "two sentences, one-word overlap: separate instances")

# 'drank milk' matches inside the cat tree, so this lands as an interior
# update; the incremented run outgrows the cat base and splits out
tail = sentence_to_terms("drank milk", base.config)
target = find_insertion_target(base, tail)
print(f"inserting [drank, milk] at {target.kind} of {target.tree_key}")
insert_sequence(base, target, tail)
show(base, "count rule forced a split; the cat tree keeps a keyed link")

# drive the same tail through the boy tree to give it a keyed link too
boy_tree = next(t for t in base.trees.values() if t.base.lemma == "boy")
insert_sequence(
    base,
    InsertionTarget("interior", boy_tree.key, boy_tree.base.find_child("drank"), 2),
    sentence_to_terms("drank milk", base.config),
)
show(base, "second split: two detached 'drank milk' trees")

merge_pass(base)
show(base, "merge pass: one shared tail, both sources point at it")

print("ten idle maintenance cycles (nothing accessed): everything decays away")
for _ in range(10):
    decay_pass(base)
show(base, "after decay")
print(f"trees left: {len(base.trees)}")
