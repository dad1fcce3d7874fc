"""Text ingestion: raw documents to ordered concept sequences.

The pipeline is deliberately deterministic: sentences are split on
terminator punctuation, tokens are lowercased and stripped of punctuation,
word classes come from a shipped plain-text lexicon with suffix heuristics
as fallback, and stopwords vanish before concept extraction. Nouns and
verbs become concepts; adjectives and adverbs become descriptors attached
to the nearest eligible concept on each side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .model import (
    ADJECTIVE,
    ADVERB,
    CONCEPT_CLASSES,
    HOST_FOR,
    NOUN,
    STOPWORD,
    VERB,
    Config,
)

_SENTENCE_BOUNDARY = re.compile(r"[.?!;]+|\n+")
_NON_ALNUM = re.compile(r"[^a-z0-9]+")

# suffix fallbacks applied in order when the lexicon has no entry
_SUFFIX_RULES = (
    ("ly", ADVERB),
    ("ous", ADJECTIVE),
    ("ful", ADJECTIVE),
    ("ive", ADJECTIVE),
    ("less", ADJECTIVE),
    ("ed", VERB),
    ("ing", VERB),
)


@dataclass
class Token:
    surface: str
    norm: str
    tag: str


@dataclass
class ConceptTerm:
    """A noun/verb occurrence with the descriptor words attached to it."""

    lemma: str
    pos: str
    descriptors: list[str] = field(default_factory=list)


def split_sentences(text: str) -> list[str]:
    """Split at '.', '?', '!', ';' and newline runs; trim; drop empties."""
    return [part.strip() for part in _SENTENCE_BOUNDARY.split(text) if part.strip()]


def normalize_word(word: str) -> str:
    """Lowercase and delete punctuation; the form every count keys on."""
    return _NON_ALNUM.sub("", word.lower())


def tag_word(word: str, config: Config) -> str:
    """Word class for a normalized word.

    Stopwords win, then the first class the lexicon lists, then suffix
    rules, and anything still unresolved is a noun.
    """
    if word in config.stopwords:
        return STOPWORD
    classes = config.lexicon.get(word)
    if classes:
        return classes[0]
    for suffix, cls in _SUFFIX_RULES:
        if len(word) > len(suffix) and word.endswith(suffix):
            return cls
    return NOUN


def tokenize(sentence: str, config: Config) -> list[Token]:
    """Lowercase, strip punctuation, tag, and drop stopwords and empties."""
    tokens = []
    for chunk in sentence.split():
        norm = normalize_word(chunk)
        if not norm:
            continue
        tag = tag_word(norm, config)
        if tag == STOPWORD:
            continue
        tokens.append(Token(surface=chunk, norm=norm, tag=tag))
    return tokens


def extract_concept_sequence(tokens: list[Token]) -> list[ConceptTerm]:
    """Concept terms in order of appearance, descriptors attached.

    A descriptor attaches to the nearest concept on each side, and only
    when that concept is of the class it describes: the first noun or verb
    reached walking left, and the first reached walking right. An
    intervening concept of the wrong class blocks that side. A descriptor
    with no eligible host on either side is dropped.
    """
    terms: list[ConceptTerm] = []
    term_at: dict[int, ConceptTerm] = {}
    for index, token in enumerate(tokens):
        if token.tag in CONCEPT_CLASSES:
            term = ConceptTerm(lemma=token.norm, pos=token.tag)
            terms.append(term)
            term_at[index] = term

    def nearest_concept(start: int, step: int) -> ConceptTerm | None:
        index = start + step
        while 0 <= index < len(tokens):
            if tokens[index].tag in CONCEPT_CLASSES:
                return term_at[index]
            index += step
        return None

    for index, token in enumerate(tokens):
        if token.tag not in (ADJECTIVE, ADVERB):
            continue
        host_pos = HOST_FOR[token.tag]
        for step in (-1, 1):
            host = nearest_concept(index, step)
            if host is not None and host.pos == host_pos:
                host.descriptors.append(token.norm)
    return terms


def sentence_to_terms(sentence: str, config: Config) -> list[ConceptTerm]:
    return extract_concept_sequence(tokenize(sentence, config))


def document_to_sequences(text: str, config: Config) -> list[list[ConceptTerm]]:
    """Full preprocessing of a document: one concept sequence per sentence,
    empty sequences dropped."""
    sequences = []
    for sentence in split_sentences(text):
        terms = sentence_to_terms(sentence, config)
        if terms:
            sequences.append(terms)
    return sequences


def corpus_popular_words(sequences: list[list[ConceptTerm]]) -> dict[str, int]:
    """Occurrence count of each concept lemma across all sequences."""
    counts: dict[str, int] = {}
    for sequence in sequences:
        for term in sequence:
            counts[term.lemma] = counts.get(term.lemma, 0) + 1
    return counts


def parse_lexicon(text: str) -> dict[str, list[str]]:
    """Parse lexicon text: `word<TAB>class[,class...]` per line, '#' comments."""
    lexicon: dict[str, list[str]] = {}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, classes = line.partition("\t")
        lexicon[word.strip()] = [c.strip() for c in classes.split(",") if c.strip()]
    return lexicon


def parse_stopwords(text: str) -> set[str]:
    """Parse stopword text: one word per line, '#' comments."""
    words = set()
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def load_lexicon(path: str | Path) -> dict[str, list[str]]:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def load_stopwords(path: str | Path) -> set[str]:
    return parse_stopwords(Path(path).read_text(encoding="utf-8"))


def default_config(**overrides) -> Config:
    """A Config backed by the shipped lexicon and stopword list."""
    data = resources.files("conceptbase").joinpath("data")
    overrides.setdefault(
        "lexicon", parse_lexicon(data.joinpath("lexicon.txt").read_text(encoding="utf-8"))
    )
    overrides.setdefault(
        "stopwords", parse_stopwords(data.joinpath("stopwords.txt").read_text(encoding="utf-8"))
    )
    return Config(**overrides)
