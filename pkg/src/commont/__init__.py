"""Agent communication protocols with commitment semantics.

Communication acts are classes in an ontology; their effects are fluents
(propositions, acceptances, commitments) tracked on a logical clock.
Protocols are deterministic transition systems over act classes, and two
protocols are related by the effects their runs leave behind rather than by
their structure.
"""

from .errors import (
    AmbiguousSemanticsError,
    CommontError,
    CyclicProtocolError,
    Diagnostic,
    FinalStateError,
    InvalidActError,
    OntologyError,
    ParseError,
    ProtocolError,
    SemanticsError,
    SourceSpan,
    UnknownClassError,
)
from .ontology import (
    ActClass,
    ContentClass,
    Ontology,
    default_catalog_text,
    default_ontology,
    load_ontology,
    load_ontology_files,
    load_ontology_sources,
    most_specific_semantic_ancestor,
    subsumes,
)
from .semantics import (
    DEFAULT_REGISTRY,
    Acceptance,
    ActEvent,
    Commitment,
    ConditionalCommitment,
    FluentStore,
    Proposition,
    apply_event,
    effect_template,
    matches,
    replay,
)
from .protocol import (
    Protocol,
    Run,
    Transition,
    ValidationReport,
    enumerate_runs,
    example_protocol,
    example_protocol_text,
    load_protocol,
    load_protocol_file,
    simulate,
    validate,
)
from .traces import (
    AbstractTraceMultiset,
    ProtocolTrace,
    abstract_set,
    abstract_time,
    trace_of_run,
    trace_set,
)
from .relations import (
    RELATIONS,
    MatchingMap,
    RelationVerdict,
    Witness,
    compare,
    compare_trace_sets,
    shallow_trace_specializes,
    trace_specializes,
)
from .dsl import (
    parse_ontology_file,
    parse_protocol_file,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_REGISTRY",
    "RELATIONS",
    "abstract_set",
    "abstract_time",
    "AbstractTraceMultiset",
    "Acceptance",
    "ActClass",
    "ActEvent",
    "AmbiguousSemanticsError",
    "apply_event",
    "Commitment",
    "CommontError",
    "compare",
    "compare_trace_sets",
    "ConditionalCommitment",
    "ContentClass",
    "CyclicProtocolError",
    "default_catalog_text",
    "default_ontology",
    "Diagnostic",
    "effect_template",
    "enumerate_runs",
    "example_protocol",
    "example_protocol_text",
    "FinalStateError",
    "FluentStore",
    "InvalidActError",
    "load_ontology",
    "load_ontology_files",
    "load_ontology_sources",
    "load_protocol",
    "load_protocol_file",
    "matches",
    "MatchingMap",
    "most_specific_semantic_ancestor",
    "Ontology",
    "OntologyError",
    "parse_ontology_file",
    "parse_protocol_file",
    "ParseError",
    "Proposition",
    "Protocol",
    "ProtocolError",
    "ProtocolTrace",
    "RelationVerdict",
    "replay",
    "Run",
    "SemanticsError",
    "serialize",
    "shallow_trace_specializes",
    "simulate",
    "SourceSpan",
    "subsumes",
    "trace_of_run",
    "trace_set",
    "trace_specializes",
    "Transition",
    "UnknownClassError",
    "validate",
    "ValidationReport",
    "Witness",
]
