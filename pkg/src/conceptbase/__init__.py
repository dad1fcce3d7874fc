"""conceptbase: counted concept trees with descriptor layers, conjunctive
queries and feedback-reinforced links."""

from .builder import (
    IngestReport,
    InsertionTarget,
    check_and_split,
    decay_pass,
    find_insertion_target,
    ingest_document,
    insert_sequence,
    merge_pass,
    reorder_for_popular_base,
)
from .errors import ConceptBaseError
from .ingest import (
    ConceptTerm,
    Token,
    corpus_popular_words,
    default_config,
    extract_concept_sequence,
    split_sentences,
    tag_word,
    tokenize,
)
from .links import decay_link, link_descriptors, link_trees, reinforce
from .model import (
    ConceptBase,
    ConceptNode,
    ConceptTree,
    Config,
    Descriptor,
    DescriptorLink,
    GlobalConceptNode,
    LinkState,
    TreeLink,
    Violation,
    find_node,
    validate,
    validation_errors,
)
from .network import approve_result, group_result, reject_result, trigger
from .query import (
    Clause,
    Query,
    ResultSet,
    Solution,
    enumerate_solutions,
    execute_query,
    fill_slots,
    match_clause,
    parse_query,
    score_solution,
)
from .store import load, save

__version__ = "0.1.0"
