"""Command-line front door.

Every mutating command loads the base file first and saves it (plus the
session results sidecar) afterwards, so the ingest -> query -> approve
feedback loop works across separate invocations.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import builder, network, query as queries, store
from .errors import ConceptBaseError
from .ingest import default_config
from .model import ConceptBase, tree_key_ordinal, validate

DEFAULT_BASE = "base.cbase.json"


def _base_path(args) -> Path:
    return Path(args.base or os.environ.get("CONCEPTBASE_PATH") or DEFAULT_BASE)


def _sidecar(path: Path) -> str:
    return f"{path}.results.json"


def _load(path: Path) -> ConceptBase:
    if path.exists():
        base = store.load(path)
        store.load_results(base, _sidecar(path))
        return base
    return ConceptBase(config=default_config())


def _save(base: ConceptBase, path: Path) -> None:
    store.save(base, path)
    store.save_results(base, _sidecar(path))


def _plural(count: int, noun: str) -> str:
    return f"{count} {noun}" + ("" if count == 1 else "s")


def _print_solution(index: int, solution: queries.Solution) -> None:
    print(f"#{index} score={solution.score:g} cycles={solution.cycles}")
    for filled, binding in zip(queries.fill_slots(solution), solution.bindings):
        concept = filled.concept
        if binding.clause.concept is None:
            concept = f"{concept} (suggested)"
        line = f"   {concept}"
        if binding.clause.descriptor_given:
            if filled.unfilled:
                line += ": (no descriptor to suggest)"
            elif binding.suggested:
                line += f": {filled.descriptor} (suggested)"
            else:
                line += f": {filled.descriptor}"
        line += f"   [{binding.tree_key}]"
        print(line)


def cmd_ingest(args) -> int:
    path = _base_path(args)
    base = _load(path)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as error:
        print(f"cannot read {args.file}: {error}", file=sys.stderr)
        return 1
    report = builder.ingest_document(base, text)
    _save(base, path)
    print(f"{_plural(report.sentences, 'sentence')}, "
          f"{_plural(len(report.trees_touched), 'tree')}, "
          f"{report.concepts} concepts, "
          f"{report.descriptor_attachments} descriptors")
    for split in report.splits:
        print(f"split: '{split.node.lemma}' left {split.source_key} "
              f"for new tree {split.new_key}")
    return 0


def cmd_query(args) -> int:
    path = _base_path(args)
    base = _load(path)
    result = queries.execute_query(base, args.expr)
    _save(base, path)
    print(f"result {result.id} ({len(result.solutions)} solutions)")
    for index, solution in enumerate(result.solutions[:args.top]):
        _print_solution(index, solution)
    return 0


def cmd_approve(args) -> int:
    path = _base_path(args)
    base = _load(path)
    global_node = network.approve_result(base, args.result_id, args.solution)
    _save(base, path)
    refs = ", ".join(sorted(global_node.tree_refs, key=tree_key_ordinal))
    print(f"approved result {args.result_id} solution {args.solution} -> "
          f"global node {global_node.id} (trees {refs}, count {global_node.count})")
    return 0


def cmd_reject(args) -> int:
    path = _base_path(args)
    base = _load(path)
    network.reject_result(base, args.result_id)
    _save(base, path)
    print(f"rejected result {args.result_id}")
    return 0


def cmd_maintain(args) -> int:
    path = _base_path(args)
    base = _load(path)
    decay = builder.decay_pass(base)
    merge = builder.merge_pass(base)
    _save(base, path)
    print(f"cycle {base.maintenance_cycle}: "
          f"decayed {len(decay.decayed_trees)}, removed {len(decay.removed_trees)} "
          f"trees, {decay.removed_links} links; merged {len(merge.merged_trees)} trees")
    return 0


def cmd_stats(args) -> int:
    base = _load(_base_path(args))
    nodes = sum(1 for _ in base.iter_nodes())
    descriptors = sum(len(node.descriptors) for _, node in base.iter_nodes())
    print(f"trees: {len(base.trees)}")
    print(f"nodes: {nodes}")
    print(f"descriptors: {descriptors}")
    print(f"descriptor links: {len(base.descriptor_links)}")
    print(f"global nodes: {len(base.global_nodes)}")
    print(f"results this session: {len(base.results)}")
    print(f"maintenance cycle: {base.maintenance_cycle}")
    return 0


def cmd_validate(args) -> int:
    base = _load(_base_path(args))
    violations = validate(base)
    if not violations:
        print("ok")
        return 0
    for violation in violations:
        print(str(violation))
    return 1 if any(v.severity == "error" for v in violations) else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    path = _base_path(args)
    base = _load(path)
    app = create_app(base, base_path=path, console_dir=args.console)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptbase",
        description="Concept-tree knowledge base: ingest text, query it, "
                    "approve results to strengthen links.")
    parser.add_argument("--base", help="base file path "
                        f"(default $CONCEPTBASE_PATH or ./{DEFAULT_BASE})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read a text document into the base")
    p.add_argument("file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help='run a query like "[shirt:white] AND [trousers:?]"')
    p.add_argument("expr")
    p.add_argument("--top", type=int, default=5, help="solutions to print")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("approve", help="approve one solution of a pending result")
    p.add_argument("result_id", type=int)
    p.add_argument("solution", type=int)
    p.set_defaults(func=cmd_approve)

    p = sub.add_parser("reject", help="reject a pending result")
    p.add_argument("result_id", type=int)
    p.set_defaults(func=cmd_reject)

    p = sub.add_parser("maintain", help="run one decay + merge maintenance cycle")
    p.set_defaults(func=cmd_maintain)

    p = sub.add_parser("stats", help="print base statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check every structural invariant")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8330)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--console", help="directory with the built web console")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConceptBaseError as error:
        print(str(error), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
