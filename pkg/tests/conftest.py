from __future__ import annotations

import pytest

from conceptbase.builder import ingest_document
from conceptbase.ingest import default_config
from conceptbase.model import ConceptBase, Config

JACK_SENTENCE = "Jack wore a white shirt and blue trousers."


@pytest.fixture(scope="session")
def shipped_config() -> Config:
    return default_config()


@pytest.fixture()
def config(shipped_config) -> Config:
    # fresh Config sharing the (read-only) shipped lexicon/stopwords
    return Config(stopwords=shipped_config.stopwords, lexicon=shipped_config.lexicon)


@pytest.fixture()
def base(config) -> ConceptBase:
    return ConceptBase(config=config)


@pytest.fixture()
def jack_base(base) -> ConceptBase:
    ingest_document(base, JACK_SENTENCE)
    return base
