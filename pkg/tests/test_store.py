from __future__ import annotations

import json
import random

import pytest

from conceptbase.errors import (
    CorruptBaseError,
    DocumentParseError,
    PersistenceError,
    UnsupportedVersionError,
)
from conceptbase.model import validate
from conceptbase.network import approve_result
from conceptbase.query import execute_query
from conceptbase.store import (
    load,
    load_results,
    loads,
    save,
    save_results,
)
from generators import random_base


class TestSave:
    def test_empty_base(self, base):
        doc = json.loads(save(base))
        assert doc["format_version"] == 1
        assert doc["trees"] == []
        assert doc["descriptor_links"] == []
        assert doc["global_nodes"] == []

    def test_jack_base_contains_shirt(self, jack_base):
        doc = json.loads(save(jack_base))
        wore = doc["trees"][0]["base"]["children"][0]
        shirt = wore["children"][0]
        assert shirt["lemma"] == "shirt"
        assert {"id": shirt["descriptors"][0]["id"], "word": "white", "count": 1} \
               in shirt["descriptors"]

    def test_byte_identical_without_mutation(self, jack_base):
        assert save(jack_base) == save(jack_base)

    def test_save_is_pure(self, jack_base):
        tree = jack_base.trees["T1"]
        stamps = (tree.last_access_cycle, tree.access_count_since_cycle)
        save(jack_base)
        assert (tree.last_access_cycle, tree.access_count_since_cycle) == stamps

    def test_unwritable_destination(self, base, tmp_path):
        with pytest.raises(PersistenceError):
            save(base, tmp_path / "missing" / "deep" / "base.cbase.json")


class TestLoad:
    def test_round_trip_jack(self, jack_base):
        assert loads(save(jack_base)) == jack_base

    def test_round_trip_with_links_and_globals(self, jack_base):
        result = execute_query(jack_base, "[shirt:white] AND [trousers:?]")
        approve_result(jack_base, result.id, 0)
        restored = loads(save(jack_base))
        assert restored == jack_base
        assert save(restored) == save(jack_base)

    def test_round_trip_randomized(self):
        rng = random.Random(99)
        for _ in range(20):
            base = random_base(rng)
            text = save(base)
            restored = loads(text)
            assert restored == base
            assert save(restored) == text

    def test_file_round_trip(self, jack_base, tmp_path):
        path = tmp_path / "jack.cbase.json"
        save(jack_base, path)
        assert load(path) == jack_base

    def test_unsupported_version(self, base):
        doc = json.loads(save(base))
        doc["format_version"] = 2
        with pytest.raises(UnsupportedVersionError):
            loads(json.dumps(doc))

    def test_malformed_document_reports_path(self, jack_base):
        doc = json.loads(save(jack_base))
        doc["trees"][0]["base"]["count"] = "three"
        with pytest.raises(DocumentParseError) as err:
            loads(json.dumps(doc))
        assert "trees[0].base.count" in str(err.value)

    def test_missing_field(self, base):
        doc = json.loads(save(base))
        del doc["next_id"]
        with pytest.raises(DocumentParseError) as err:
            loads(json.dumps(doc))
        assert "next_id" in str(err.value)

    def test_invalid_json(self):
        with pytest.raises(DocumentParseError):
            loads("{not json")

    def test_corrupt_count_rule_rejected(self, jack_base):
        doc = json.loads(save(jack_base))
        doc["trees"][0]["base"]["count"] = 0  # children now outcount the base
        with pytest.raises(CorruptBaseError):
            loads(json.dumps(doc))

    def test_missing_file(self, tmp_path):
        with pytest.raises(PersistenceError):
            load(tmp_path / "nope.cbase.json")


class TestResultsSidecar:
    def test_round_trip(self, jack_base, tmp_path):
        result = execute_query(jack_base, "[shirt:white] AND [trousers:?]")
        execute_query(jack_base, "[?:blue]")
        sidecar = tmp_path / "base.results.json"
        save_results(jack_base, sidecar)

        restored = loads(save(jack_base))
        load_results(restored, sidecar)
        assert set(restored.results) == set(jack_base.results)
        again = restored.results[result.id]
        assert again.status == "pending"
        assert again.query.text() == "[shirt:white] AND [trousers:?]"
        assert [s.canonical() for s in again.solutions] == \
               [s.canonical() for s in result.solutions]
        # the rehydrated result is still approvable
        approve_result(restored, result.id, 0)
        assert len(restored.descriptor_links) == 1
        assert validate(restored) == []

    def test_missing_sidecar_is_empty_store(self, base, tmp_path):
        load_results(base, tmp_path / "absent.results.json")
        assert base.results == {}
