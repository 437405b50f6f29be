"""Episodic knowledge graph: named-graph store, TriG wire format, emission."""

from .emit import (
    Claim,
    EmissionResult,
    Emitter,
    InvalidAttributionDimension,
    MentionRef,
    emit_from_scenario,
    person_registry,
)
from .namespaces import Iri, Literal, Node, PREFIXES, expand, ns
from .store import (
    CLAIMS,
    ConflictGroup,
    FIXED_GRAPHS,
    GraphStore,
    INSTANCES,
    INTERACTIONS,
    PERSPECTIVES,
    PartitionViolation,
    Quad,
    QueryResult,
    validate_partition,
)
from .trig import ParseError, parse_trig, serialize_trig

__all__ = [
    "CLAIMS",
    "Claim",
    "ConflictGroup",
    "EmissionResult",
    "Emitter",
    "FIXED_GRAPHS",
    "GraphStore",
    "INSTANCES",
    "INTERACTIONS",
    "InvalidAttributionDimension",
    "Iri",
    "Literal",
    "MentionRef",
    "Node",
    "PERSPECTIVES",
    "PREFIXES",
    "ParseError",
    "PartitionViolation",
    "Quad",
    "QueryResult",
    "emit_from_scenario",
    "expand",
    "ns",
    "parse_trig",
    "person_registry",
    "serialize_trig",
    "validate_partition",
]
