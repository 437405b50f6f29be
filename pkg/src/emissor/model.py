"""In-memory domain model: scenarios, rulers, segments, signals, mentions, annotations.

All times are integer milliseconds relative to the scenario epoch; annotation
timestamps are epoch milliseconds UTC. Index segments are half-open
[start, stop); box bounds are half-open on the pixel grid [x0,x1) x [y0,y1).
"""

from __future__ import annotations

import time as _time
import uuid
from dataclasses import dataclass, field
from typing import Any, Iterator, Union


class EmissorError(Exception):
    """Base class for model and storage errors."""


class DanglingContainer(EmissorError):
    def __init__(self, container_id: str):
        super().__init__(f"unresolved container id: {container_id}")
        self.container_id = container_id


class OutOfBounds(EmissorError):
    pass


class EmptyAnnotationList(EmissorError):
    pass


class UnknownBase(EmissorError):
    def __init__(self, base_id: str):
        super().__init__(f"no annotation value with id {base_id}")
        self.base_id = base_id


def new_id() -> str:
    return str(uuid.uuid4())


def now_ms() -> int:
    return int(_time.time() * 1000)


# ---------------------------------------------------------------------------
# Rulers and segments


@dataclass
class TemporalRuler:
    container_id: str
    start: int
    end: int


@dataclass
class TimeSegment:
    container_id: str
    start: int
    end: int
    # Source files tag time blocks either "TimeSegment" or "TemporalRuler";
    # the original tag is kept so a re-save stays close to the input.
    type_tag: str = "TimeSegment"


@dataclass
class Index:
    """Character/sample offset ruler or segment, half-open [start, stop)."""

    container_id: str
    start: int
    stop: int


@dataclass
class MultiIndex:
    """Pixel-grid ruler with bounds [x0, y0, x1, y1]."""

    container_id: str
    bounds: list[int]


@dataclass
class BoundingBox:
    container_id: str
    bounds: list[int]


@dataclass
class AtomicRuler:
    """Ruler of an indivisible annotation value (no extent)."""

    container_id: str


Ruler = Union[TemporalRuler, Index, MultiIndex, AtomicRuler]
Segment = Union[Index, BoundingBox, TimeSegment]


def covers(ruler: Ruler, segment: Segment) -> bool:
    """Interval/box inclusion of a segment in its parent ruler."""
    if isinstance(ruler, Index) and isinstance(segment, Index):
        return ruler.start <= segment.start <= segment.stop <= ruler.stop
    if isinstance(ruler, MultiIndex) and isinstance(segment, BoundingBox):
        rx0, ry0, rx1, ry1 = ruler.bounds
        x0, y0, x1, y1 = segment.bounds
        return rx0 <= x0 <= x1 <= rx1 and ry0 <= y0 <= y1 <= ry1
    if isinstance(ruler, TemporalRuler) and isinstance(segment, TimeSegment):
        return ruler.start <= segment.start <= segment.end <= ruler.end
    if isinstance(ruler, AtomicRuler):
        # Atomic containers admit only zero-extent index segments.
        return isinstance(segment, Index) and segment.start == segment.stop == 0
    return False


def well_formed(segment: Segment) -> bool:
    """start <= stop (or box corners ordered); independent of any ruler."""
    if isinstance(segment, Index):
        return 0 <= segment.start <= segment.stop
    if isinstance(segment, BoundingBox):
        x0, y0, x1, y1 = segment.bounds
        return x0 <= x1 and y0 <= y1
    return segment.start <= segment.end


# ---------------------------------------------------------------------------
# Annotation values


@dataclass
class Token:
    id: str
    value: str
    ruler: AtomicRuler

    @classmethod
    def create(cls, value: str) -> "Token":
        tid = new_id()
        return cls(id=tid, value=value, ruler=AtomicRuler(container_id=tid))


@dataclass
class Person:
    id: str
    name: str
    birth_date: str | None = None
    gender: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Face:
    instance: Person
    age: int | None = None
    gender: str | None = None
    faceprob: float | None = None


@dataclass
class EntityLink:
    """Grounding of a segment to an identity IRI (absolute or prefixed)."""

    iri: str


@dataclass
class TripleValue:
    subject: str
    predicate: str
    object: str
    # Perspective values by dimension: certainty/polarity/emotion/sentiment.
    perspective: dict[str, str] = field(default_factory=dict)


@dataclass
class Label:
    value: str


AnnotationValue = Union[Token, Face, EntityLink, TripleValue, Label, str, dict]


@dataclass
class Annotation:
    type: str
    value: AnnotationValue
    source: str
    timestamp: int
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Mention:
    id: str
    segment: list[Segment]
    annotations: list[Annotation]
    extra: dict[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Signals


@dataclass
class Signal:
    id: str
    modality: str
    files: list[str]
    time: TimeSegment
    mentions: list[Mention]
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class TextSignal(Signal):
    ruler: Index = None  # type: ignore[assignment]
    seq: str = ""
    speaker: Person | None = None


@dataclass
class ImageSignal(Signal):
    ruler: MultiIndex = None  # type: ignore[assignment]


@dataclass
class AudioSignal(Signal):
    """Audio metadata; the ruler indexes samples. No published sample data
    exists for this modality, so the schema mirrors TextSignal minus the
    character sequence."""

    ruler: Index = None  # type: ignore[assignment]


MODALITIES = ("text", "image", "audio", "video")


# ---------------------------------------------------------------------------
# Scenario


@dataclass
class ScenarioContext:
    agent: str
    speaker: Person | None = None
    persons: list[Person] = field(default_factory=list)
    objects: list[dict] = field(default_factory=list)
    # Free-form scenario attributes (location, intentions, ...); optional.
    attributes: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Scenario:
    id: str
    context: ScenarioContext
    ruler: TemporalRuler
    signals: dict[str, str]
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class ScenarioBundle:
    """A scenario plus its per-modality signals as loaded from disk.

    Treated as an immutable snapshot after loading; mutation goes through the
    explicit APIs below and requires exclusive access to the bundle.
    """

    scenario: Scenario
    signals: dict[str, list[Signal]]
    root: str | None = None
    warnings: list[str] = field(default_factory=list)

    def all_signals(self) -> Iterator[Signal]:
        for modality in sorted(self.signals):
            yield from self.signals[modality]

    def find_signal(self, signal_id: str) -> Signal | None:
        for signal in self.all_signals():
            if signal.id == signal_id:
                return signal
        return None


# ---------------------------------------------------------------------------
# Validation


@dataclass
class Violation:
    kind: str
    where: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, where: str, message: str) -> None:
        self.violations.append(Violation(kind, where, message))


def _annotation_values(mention: Mention) -> Iterator[AnnotationValue]:
    for annotation in mention.annotations:
        yield annotation.value


def _value_containers(signal: Signal) -> dict[str, AnnotationValue]:
    """Annotation values that own a container id (e.g. tokens with atomic rulers)."""
    out: dict[str, AnnotationValue] = {}
    for mention in signal.mentions:
        for value in _annotation_values(mention):
            if isinstance(value, Token):
                out[value.id] = value
    return out


def container_closure(bundle: ScenarioBundle) -> dict[str, Any]:
    """Resolve every container id referenced by rulers and segments.

    Returns a map container_id -> container (scenario, signal or annotation
    value). Raises DanglingContainer on the first unresolved reference.
    """
    scenario = bundle.scenario
    known: dict[str, Any] = {scenario.id: scenario}
    for signal in bundle.all_signals():
        known[signal.id] = signal
        known.update(_value_containers(signal))

    closure: dict[str, Any] = {}

    def resolve(container_id: str) -> None:
        if container_id not in known:
            raise DanglingContainer(container_id)
        closure[container_id] = known[container_id]

    resolve(scenario.ruler.container_id)
    for signal in bundle.all_signals():
        resolve(signal.time.container_id)
        ruler = getattr(signal, "ruler", None)
        if ruler is not None:
            resolve(ruler.container_id)
        for mention in signal.mentions:
            for segment in mention.segment:
                resolve(segment.container_id)
            for value in _annotation_values(mention):
                if isinstance(value, Token):
                    resolve(value.ruler.container_id)
    return closure


def _ruler_of(container: Any) -> Ruler | None:
    if isinstance(container, Scenario):
        return container.ruler
    if isinstance(container, Signal):
        return getattr(container, "ruler", None)
    if isinstance(container, Token):
        return container.ruler
    return None


def validate_scenario(bundle: ScenarioBundle, root: str | None = None) -> ValidationReport:
    """Structural validation; every problem is a report entry, never a failure."""
    import os

    report = ValidationReport()
    scenario = bundle.scenario
    root = root if root is not None else bundle.root

    if scenario.ruler.container_id != scenario.id:
        report.add("dangling_container", scenario.id,
                   f"scenario ruler measures {scenario.ruler.container_id!r}")
    if scenario.ruler.start > scenario.ruler.end:
        report.add("inverted_extent", scenario.id, "scenario ruler start > end")

    for modality in scenario.signals:
        if modality not in MODALITIES:
            report.add("unknown_modality", scenario.id, f"modality {modality!r}")

    known: dict[str, Any] = {scenario.id: scenario}
    for signal in bundle.all_signals():
        known[signal.id] = signal
        known.update(_value_containers(signal))

    for signal in bundle.all_signals():
        where = f"{signal.modality}/{signal.id}"
        if signal.time.container_id != scenario.id:
            report.add("dangling_container", where,
                       f"signal time anchored to {signal.time.container_id!r}")
        elif not well_formed(signal.time):
            report.add("inverted_extent", where, "signal time start > end")
        elif not covers(scenario.ruler, signal.time):
            report.add("out_of_bounds", where, "signal time outside scenario ruler")

        ruler = getattr(signal, "ruler", None)
        if ruler is not None and ruler.container_id != signal.id:
            report.add("dangling_container", where,
                       f"signal ruler measures {ruler.container_id!r}")
        if isinstance(signal, TextSignal) and ruler is not None \
                and ruler.stop - ruler.start != len(signal.seq):
            report.add("ruler_mismatch", where,
                       f"ruler [{ruler.start}, {ruler.stop}) vs seq length {len(signal.seq)}")

        if root is not None:
            for file_ref in signal.files:
                path = file_ref.split("#", 1)[0]
                if not os.path.exists(os.path.join(root, path)):
                    report.add("missing_media", where, f"missing media file {path!r}")

        for mention in signal.mentions:
            mwhere = f"{where}/{mention.id}"
            if not mention.segment:
                report.add("empty_mention", mwhere, "mention without segments")
            if not mention.annotations:
                report.add("empty_mention", mwhere, "mention without annotations")
            for segment in mention.segment:
                container = known.get(segment.container_id)
                if container is None:
                    report.add("dangling_container", mwhere,
                               f"segment cites unknown container {segment.container_id!r}")
                    continue
                if not well_formed(segment):
                    report.add("inverted_extent", mwhere, "segment start > stop")
                    continue
                parent = _ruler_of(container)
                if parent is not None and not covers(parent, segment):
                    report.add("out_of_bounds", mwhere,
                               f"segment outside container {segment.container_id!r}")
    return report


# ---------------------------------------------------------------------------
# Co-reference and mention editing


def _identity_of(value: AnnotationValue) -> str | None:
    if isinstance(value, EntityLink):
        return value.iri
    if isinstance(value, Face) and value.instance is not None:
        return value.instance.id
    return None


def coreference_index(bundle: ScenarioBundle) -> dict[str, list[tuple[str, str, str]]]:
    """Group mentions whose annotations carry the same identity identifier.

    Returns iri -> [(modality, signal id, mention id)], ordered by
    (modality, signal time start, mention id).
    """
    hits: dict[str, set[tuple[str, int, str, str]]] = {}
    for signal in bundle.all_signals():
        for mention in signal.mentions:
            for value in _annotation_values(mention):
                identity = _identity_of(value)
                if identity is not None:
                    hits.setdefault(identity, set()).add(
                        (signal.modality, signal.time.start, signal.id, mention.id))
    index: dict[str, list[tuple[str, str, str]]] = {}
    for identity, entries in hits.items():
        ordered = sorted(entries, key=lambda e: (e[0], e[1], e[3]))
        index[identity] = [(m, s, mid) for m, _, s, mid in ordered]
    return index


def add_mention(signal: Signal, segments: list[Segment],
                annotations: list[Annotation], timestamp: int | None = None) -> Mention:
    """Append a mention with a fresh id; segments must lie within the signal ruler."""
    if not annotations:
        raise EmptyAnnotationList("a mention needs at least one annotation")
    if not segments:
        raise OutOfBounds("a mention needs at least one segment")
    ruler = getattr(signal, "ruler", None)
    for segment in segments:
        if segment.container_id == signal.id:
            if ruler is None or not covers(ruler, segment):
                raise OutOfBounds(f"segment outside signal ruler: {segment}")
    stamp = timestamp if timestamp is not None else now_ms()
    for annotation in annotations:
        if annotation.timestamp is None:
            annotation.timestamp = stamp
    mention = Mention(id=new_id(), segment=list(segments), annotations=list(annotations))
    signal.mentions.append(mention)
    return mention


def stack_annotation(signal: Signal, base_value_id: str, annotation: Annotation) -> Mention:
    """Layer an annotation on top of an existing annotation value (e.g. a token).

    The new mention's segment cites the base value's own container id.
    """
    bases = _value_containers(signal)
    if base_value_id not in bases:
        raise UnknownBase(base_value_id)
    if annotation.timestamp is None:
        annotation.timestamp = now_ms()
    mention = Mention(
        id=new_id(),
        segment=[Index(container_id=base_value_id, start=0, stop=0)],
        annotations=[annotation],
    )
    signal.mentions.append(mention)
    return mention
