"""HTTP surface for the base: ingestion, querying, the approval loop,
maintenance and browsing.

One process serves one base. Every request handler runs under a single
process-wide lock, which trivially satisfies the exclusive-writer
contract; mutating endpoints persist the base (and the session results
sidecar) before returning when the app was created with a path.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import builder, network, query as queries, store
from .errors import (
    ConceptBaseError,
    KeyNotFoundError,
    NotFoundError,
    QueryParseError,
    StateError,
)
from .model import ConceptBase, tree_key_ordinal, validate


class IngestBody(BaseModel):
    text: str


class QueryBody(BaseModel):
    query: str


class ApproveBody(BaseModel):
    solution_index: int


def _binding_json(binding: queries.Binding) -> dict[str, Any]:
    return {
        "tree_key": binding.tree_key,
        "path": list(binding.path),
        "lemma": binding.lemma,
        "descriptor_word": binding.descriptor_word,
        "descriptor_id": binding.descriptor_id,
        "descriptor_count": binding.descriptor_count,
        "suggested": binding.suggested,
        "unfilled": binding.unfilled,
    }


def _solution_json(solution: queries.Solution) -> dict[str, Any]:
    return {
        "score": solution.score,
        "cycles": solution.cycles,
        "bindings": [_binding_json(b) for b in solution.bindings],
        "filled": [
            {
                "concept": f.concept,
                "descriptor": f.descriptor,
                "from_wildcard": f.from_wildcard,
                "unfilled": f.unfilled,
            }
            for f in queries.fill_slots(solution)
        ],
    }


def _result_json(result: queries.ResultSet) -> dict[str, Any]:
    return {
        "result_id": result.id,
        "query": result.query.text(),
        "status": result.status,
        "via_descriptor_links": list(result.via_descriptor_links),
        "solutions": [_solution_json(s) for s in result.solutions],
    }


def _global_json(node) -> dict[str, Any]:
    return {"id": node.id, "label": node.label,
            "tree_refs": sorted(node.tree_refs), "count": node.count}


def create_app(base: ConceptBase, base_path: Optional[str | Path] = None,
               console_dir: Optional[str | Path] = None) -> FastAPI:
    app = FastAPI(title="conceptbase")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    lock = threading.Lock()
    app.state.base = base

    def persist() -> None:
        if base_path is not None:
            store.save(base, base_path)
            store.save_results(base, f"{base_path}.results.json")

    @app.exception_handler(ConceptBaseError)
    async def handle_domain_error(request: Request, error: ConceptBaseError):
        if isinstance(error, QueryParseError):
            status = 400
        elif isinstance(error, (KeyNotFoundError, NotFoundError)):
            status = 404
        elif isinstance(error, StateError):
            status = 409
        else:
            status = 400
        return JSONResponse(status_code=status, content={"error": str(error)})

    @app.post("/ingest")
    def ingest(body: IngestBody):
        with lock:
            report = builder.ingest_document(base, body.text)
            persist()
            return {
                "sentences": report.sentences,
                "concepts": report.concepts,
                "descriptors": report.descriptor_attachments,
                "new_trees": report.new_trees,
                "trees_touched": sorted(report.trees_touched, key=tree_key_ordinal),
                "splits": [
                    {"source_key": s.source_key, "new_key": s.new_key,
                     "lemma": s.node.lemma}
                    for s in report.splits
                ],
            }

    @app.post("/query")
    def run_query(body: QueryBody):
        with lock:
            result = queries.execute_query(base, body.query)
            persist()
            return _result_json(result)

    @app.post("/results/{result_id}/approve")
    def approve(result_id: int, body: ApproveBody):
        with lock:
            global_node = network.approve_result(base, result_id, body.solution_index)
            persist()
            return {"result_id": result_id, "status": "approved",
                    "global_node": _global_json(global_node)}

    @app.post("/results/{result_id}/reject")
    def reject(result_id: int):
        with lock:
            network.reject_result(base, result_id)
            persist()
            return {"result_id": result_id, "status": "rejected"}

    @app.get("/trees")
    def tree_summaries():
        with lock:
            return [
                {
                    "key": tree.key,
                    "lemma": tree.base.lemma,
                    "pos": tree.base.pos,
                    "count": tree.base.count,
                    "nodes": sum(1 for _ in tree.base.walk()),
                    "last_access_cycle": tree.last_access_cycle,
                    "access_count_since_cycle": tree.access_count_since_cycle,
                }
                for tree in sorted(base.trees.values(),
                                   key=lambda t: tree_key_ordinal(t.key))
            ]

    @app.get("/trees/{key}")
    def tree_detail(key: str):
        with lock:
            tree = base.trees.get(key)
            if tree is None:
                raise KeyNotFoundError(f"no tree with key '{key}'")
            own_ids = {d.id for node in tree.base.walk() for d in node.descriptors}
            return {
                "key": tree.key,
                "last_access_cycle": tree.last_access_cycle,
                "access_count_since_cycle": tree.access_count_since_cycle,
                "base": store.node_to_dict(tree.base),
                "descriptor_links": [
                    {"from_id": link.from_id, "to_id": link.to_id,
                     "level": link.state.level, "strength": link.state.strength}
                    for pair, link in sorted(base.descriptor_links.items())
                    if own_ids.intersection(pair)
                ],
            }

    @app.get("/globals")
    def global_nodes():
        with lock:
            return [_global_json(node)
                    for node in sorted(base.global_nodes.values(), key=lambda g: g.id)]

    @app.get("/globals/{global_id}/trigger")
    def trigger_global(global_id: int):
        with lock:
            keys = network.trigger(base, global_id)
            return {"tree_keys": sorted(keys, key=tree_key_ordinal)}

    @app.post("/maintain")
    def maintain():
        with lock:
            decay = builder.decay_pass(base)
            merge = builder.merge_pass(base)
            persist()
            return {
                "cycle": base.maintenance_cycle,
                "decayed_trees": decay.decayed_trees,
                "removed_trees": decay.removed_trees,
                "removed_links": decay.removed_links,
                "merged_trees": [
                    {"absorbed": a, "survivor": s} for a, s in merge.merged_trees
                ],
                "splits": [
                    {"source_key": s.source_key, "new_key": s.new_key,
                     "lemma": s.node.lemma}
                    for s in merge.splits
                ],
            }

    @app.get("/stats")
    def stats():
        with lock:
            nodes = sum(1 for _ in base.iter_nodes())
            descriptors = sum(len(node.descriptors) for _, node in base.iter_nodes())
            tree_links = sum(len(node.tree_links) for _, node in base.iter_nodes())
            return {
                "trees": len(base.trees),
                "nodes": nodes,
                "descriptors": descriptors,
                "tree_links": tree_links,
                "descriptor_links": len(base.descriptor_links),
                "global_nodes": len(base.global_nodes),
                "results": len(base.results),
                "maintenance_cycle": base.maintenance_cycle,
                "next_id": base.next_id,
                "violations": [str(v) for v in validate(base)],
            }

    if console_dir is not None and Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/console", StaticFiles(directory=str(console_dir), html=True),
                  name="console")

    return app
