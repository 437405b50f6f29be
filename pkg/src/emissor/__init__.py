"""EMISSOR: multimodal interaction scenarios with layered annotations,
persisted as JSON-LD folders, grounded into an episodic knowledge graph."""

from .model import (
    Annotation,
    AtomicRuler,
    AudioSignal,
    BoundingBox,
    DanglingContainer,
    EmissorError,
    EmptyAnnotationList,
    EntityLink,
    Face,
    ImageSignal,
    Index,
    Label,
    Mention,
    MultiIndex,
    OutOfBounds,
    Person,
    Scenario,
    ScenarioBundle,
    ScenarioContext,
    TemporalRuler,
    TextSignal,
    TimeSegment,
    Token,
    TripleValue,
    UnknownBase,
    ValidationReport,
    add_mention,
    container_closure,
    coreference_index,
    stack_annotation,
    validate_scenario,
)
from .storage import load_scenario, resolve_media, save_scenario

__version__ = "0.1.0"
