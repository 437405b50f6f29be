"""Turn annotated scenarios into perspective-qualified claims in the quad store.

Every claim lives in its own named graph holding exactly its one triple; the
Claims graph types it and links the mentions that denote it; the Perspectives
graph carries the mention nodes and their attributions. Negative statements
stay positive triples with a NEGATIVE polarity attribution on the mention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..model import (
    EntityLink,
    Face,
    ImageSignal,
    Index,
    Mention,
    ScenarioBundle,
    Signal,
    TextSignal,
    TripleValue,
)
from ..segmentation import NewInstance, resolve_identity
from .namespaces import (
    EPS_CONTEXT,
    EPS_HAS_CONTEXT,
    EPS_HAS_DETECTION,
    GAF_ASSERTION,
    GAF_CONTAINS_DENOTATION,
    GAF_DENOTED_BY,
    GAF_DENOTED_IN,
    GAF_DENOTES,
    GAF_INSTANCE,
    GAF_MENTION,
    GRASP_ATTRIBUTION,
    GRASP_ATTRIBUTION_VALUE,
    GRASP_CHAT,
    GRASP_DETECTION,
    GRASP_EXPERIENCE,
    GRASP_HAS_ATTRIBUTION,
    GRASP_IS_ATTRIBUTION_FOR,
    GRASP_SOURCE,
    GRASP_STATEMENT,
    GRASP_UTTERANCE,
    GRASP_VISUAL,
    GRASP_WAS_ATTRIBUTED_TO,
    Iri,
    Literal,
    Node,
    OWL_SAMEAS,
    PROV_DERIVED_FROM,
    RDF_TYPE,
    RDF_VALUE,
    RDFS_LABEL,
    SEM_ACTOR,
    SEM_EVENT,
    SEM_HAS_ACTOR,
    SEM_HAS_BEGIN,
    SEM_HAS_EVENT,
    SEM_HAS_PLACE,
    SEM_HAS_SUBEVENT,
    SEM_PLACE,
    SEM_TIME,
    STRING_DT,
    expand,
    ns,
)
from .store import CLAIMS, GraphStore, INSTANCES, INTERACTIONS, PERSPECTIVES, Quad


class InvalidAttributionDimension(Exception):
    pass


# Attribution dimensions in their fixed id-joining order. Certainty values
# beyond CERTAIN/PROBABLE extend the observed inventory along the same scale.
DIMENSIONS = ("certainty", "polarity", "emotion", "sentiment")
_DIMENSION_SPEC = {
    "certainty": ("graspf", "CertaintyValue",
                  {"CERTAIN", "PROBABLE", "POSSIBLE", "UNDERSPECIFIED"}),
    "polarity": ("graspf", "PolarityValue", {"POSITIVE", "NEGATIVE"}),
    "emotion": ("graspe", "EmotionValue", None),
    "sentiment": ("grasps", "SentimentValue", None),
}


def _sanitize(part: str) -> str:
    return re.sub(r"[^A-Za-z0-9-]", "-", part)


@dataclass
class Claim:
    id: Iri
    triple: tuple[Iri, Iri, Node]

    @property
    def graph_name(self) -> Iri:
        return self.id


@dataclass
class MentionRef:
    """A scenario mention projected into the graph: id encodes signal + segment."""

    iri: Iri
    kind: Iri  # grasp:Statement or grasp:Experience
    derived_from: Iri
    attributed_to: Iri | None = None
    value: str | None = None
    contains: tuple[Iri, ...] = ()
    time_ms: int = 0


@dataclass
class EmissionResult:
    delta: list[Quad]
    batches: list[tuple[str, list[Quad]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.delta)


class Emitter:
    """Stateful emission façade over a GraphStore.

    Instance IRIs are minted deterministically from labels, so re-emitting the
    same content only merges mention evidence (set semantics all the way down).
    """

    def __init__(self, store: GraphStore):
        self.store = store
        self._pending: list[Quad] = []

    # -- low-level helpers

    def _add(self, graph: Iri, subject: Iri, predicate: Iri, obj: Node) -> None:
        self._pending.append((graph, subject, predicate, obj))

    def flush(self) -> list[Quad]:
        delta = self.store.add_batch(self._pending)
        self._pending = []
        return delta

    def _graph_triples(self, graph: Iri) -> set:
        pending = {(s, p, o) for g, s, p, o in self._pending if g == graph}
        return pending | self.store.graph(graph)

    def _as_node(self, value: str | Iri | Literal) -> Node:
        if isinstance(value, (Iri, Literal)):
            return value
        try:
            return expand(value)
        except KeyError:
            return Literal(value, STRING_DT)

    # -- instances

    def emit_instance(self, label_or_iri: str | Iri, types: tuple[Iri, ...] = (),
                      mentions: tuple[Iri, ...] = (),
                      context_id: Iri | None = None) -> Iri:
        """Register an identity in the Instances graph with denotedIn evidence."""
        if isinstance(label_or_iri, Iri):
            iri = label_or_iri
        else:
            try:
                iri = expand(label_or_iri)
            except KeyError:
                iri = ns("robotWorld", _sanitize(label_or_iri))
        local = iri.local
        known = iri in self.store._instance_order or any(
            q[0] == INSTANCES and q[1] == iri for q in self._pending)
        self._add(INSTANCES, iri, RDF_TYPE, GAF_INSTANCE)
        if types:
            inferred = list(types)
        elif known:
            inferred = []  # keep whatever typing the first emission chose
        else:
            inferred = [ns("robotMu", "object")]
            suffixed = re.fullmatch(r"(.+?)-(\d+)", local)
            if suffixed:
                inferred.append(ns("robotMu", _sanitize(suffixed.group(1))))
                self._add(INSTANCES, iri, ns("robotMu", "id"),
                          Literal(suffixed.group(2), STRING_DT))
        for type_iri in inferred:
            self._add(INSTANCES, iri, RDF_TYPE, type_iri)
        self._add(INSTANCES, iri, RDFS_LABEL, Literal(local))
        for mention in mentions:
            self._add(INSTANCES, iri, GAF_DENOTED_IN, mention)
        if context_id is not None:
            self._add(INSTANCES, iri, EPS_HAS_CONTEXT, context_id)
        self.store.record_instance(iri)
        return iri

    # -- claims

    def claim_iri(self, triple: tuple[Iri, Iri, Node]) -> Iri:
        """Deterministic claim id `<subj>_<pred>_<obj>`, lowercased predicate,
        all parts sanitized to [A-Za-z0-9-]; collisions get a numeric suffix."""
        subject, predicate, obj = triple
        olocal = obj.local if isinstance(obj, Iri) else str(obj)
        base = "_".join((_sanitize(subject.local), _sanitize(predicate.local.lower()),
                         _sanitize(olocal)))
        candidate = ns("robotWorld", base)
        suffix = 2
        while True:
            existing = self._graph_triples(candidate)
            if not existing or existing == {triple}:
                return candidate
            candidate = ns("robotWorld", f"{base}{suffix}")
            suffix += 1

    def _emit_mention_node(self, mention: MentionRef) -> None:
        self._add(PERSPECTIVES, mention.iri, RDF_TYPE, GAF_MENTION)
        self._add(PERSPECTIVES, mention.iri, RDF_TYPE, mention.kind)
        self._add(PERSPECTIVES, mention.iri, RDFS_LABEL, Literal(mention.iri.local))
        if mention.value is not None:
            self._add(PERSPECTIVES, mention.iri, RDF_VALUE,
                      Literal(mention.value, STRING_DT))
        self._add(PERSPECTIVES, mention.iri, PROV_DERIVED_FROM, mention.derived_from)
        for instance in mention.contains:
            self._add(PERSPECTIVES, mention.iri, GAF_CONTAINS_DENOTATION, instance)
        if mention.attributed_to is not None:
            self._add(PERSPECTIVES, mention.iri, GRASP_WAS_ATTRIBUTED_TO,
                      mention.attributed_to)
        self.store.mention_times.setdefault(mention.iri, mention.time_ms)

    def _emit_attribution(self, claim: Iri, mention: MentionRef,
                          values: dict[str, str]) -> Iri:
        ordered = []
        for dimension in values:
            if dimension not in _DIMENSION_SPEC:
                raise InvalidAttributionDimension(dimension)
        for dimension in DIMENSIONS:
            if dimension not in values:
                continue
            value = values[dimension]
            prefix, value_class, allowed = _DIMENSION_SPEC[dimension]
            if allowed is not None and value not in allowed:
                raise InvalidAttributionDimension(f"{dimension}={value}")
            ordered.append((ns(prefix, value), ns(prefix, value_class)))
        attribution = ns("robotTalk", f"{claim.local}_" +
                         "-".join(values[d] for d in DIMENSIONS if d in values))
        self._add(PERSPECTIVES, attribution, RDF_TYPE, GRASP_ATTRIBUTION)
        self._add(PERSPECTIVES, attribution, RDFS_LABEL, Literal(attribution.local))
        for value_iri, class_iri in ordered:
            self._add(PERSPECTIVES, attribution, RDF_VALUE, value_iri)
            self._add(PERSPECTIVES, value_iri, RDF_TYPE, GRASP_ATTRIBUTION_VALUE)
            self._add(PERSPECTIVES, value_iri, RDF_TYPE, class_iri)
        self._add(PERSPECTIVES, attribution, GRASP_IS_ATTRIBUTION_FOR, mention.iri)
        self._add(PERSPECTIVES, mention.iri, GRASP_HAS_ATTRIBUTION, attribution)
        return attribution

    def emit_claim(self, triple: tuple[Iri | str, Iri | str, Node | str],
                   mention: MentionRef | None = None,
                   values: dict[str, str] | None = None,
                   same_as: Iri | None = None,
                   context_id: Iri | None = None) -> Claim:
        """Assert a triple: claim graph + Claims typing + mention grounding +
        attribution carrying the given perspective values (omitted when empty)."""
        subject = expand(triple[0])
        predicate = expand(triple[1])
        obj = self._as_node(triple[2])
        claim = self.claim_iri((subject, predicate, obj))

        self._add(claim, subject, predicate, obj)
        self._add(CLAIMS, claim, RDF_TYPE, GAF_ASSERTION)
        self._add(CLAIMS, claim, RDF_TYPE, SEM_EVENT)
        self._add(CLAIMS, claim, RDFS_LABEL, Literal(claim.local))
        if same_as is not None:
            self._add(CLAIMS, claim, OWL_SAMEAS, same_as)
        if context_id is not None:
            self._add(CLAIMS, claim, EPS_HAS_CONTEXT, context_id)
        if mention is not None:
            self._add(CLAIMS, claim, GAF_DENOTED_BY, mention.iri)
            self._emit_mention_node(mention)
            self._add(PERSPECTIVES, mention.iri, GAF_DENOTES, claim)
            if values:
                self._emit_attribution(claim, mention, values)
        return Claim(id=claim, triple=(subject, predicate, obj))

    def emit_perspective(self, claim: Iri, mention: MentionRef,
                         values: dict[str, str]) -> Iri:
        """Attach a source's stance toward a claim to a mention that evidences
        it without denoting it (no denotes/denotedBy edges). Mints the claim's
        graph and typing when the claim is new."""
        if not self._graph_triples(claim):
            self._add(CLAIMS, claim, RDF_TYPE, GAF_ASSERTION)
            self._add(CLAIMS, claim, RDF_TYPE, SEM_EVENT)
            self._add(CLAIMS, claim, RDFS_LABEL, Literal(claim.local))
        self._emit_mention_node(mention)
        return self._emit_attribution(claim, mention, values)

    # -- interaction context

    def emit_source(self, iri: Iri, types: tuple[Iri, ...]) -> Iri:
        """A speaker or sensor as an attributable actor in Interactions."""
        for type_iri in (GAF_INSTANCE, GRASP_SOURCE, SEM_ACTOR) + types:
            self._add(INTERACTIONS, iri, RDF_TYPE, type_iri)
        self._add(INTERACTIONS, iri, RDFS_LABEL, Literal(iri.local))
        return iri

    def emit_event(self, iri: Iri, kind: Iri, numeric_id: str | None = None,
                   actor: Iri | None = None, parent: Iri | None = None) -> Iri:
        self._add(INTERACTIONS, iri, RDF_TYPE, SEM_EVENT)
        self._add(INTERACTIONS, iri, RDF_TYPE, kind)
        self._add(INTERACTIONS, iri, RDFS_LABEL, Literal(iri.local))
        if numeric_id is not None:
            self._add(INTERACTIONS, iri, ns("robotMu", "id"),
                      Literal(numeric_id, STRING_DT))
        if actor is not None:
            self._add(INTERACTIONS, iri, SEM_HAS_ACTOR, actor)
        if parent is not None:
            self._add(INTERACTIONS, parent, SEM_HAS_SUBEVENT, iri)
        return iri

    def emit_context(self, attributes: dict[str, str], events: list[Iri],
                     detections: list[Iri]) -> Iri | None:
        """Episode context: detections, day-granular begin time, events, and a
        place with its containment chain."""
        context_id = attributes.get("context_id")
        if context_id is None:
            return None
        context = ns("robotContext", f"context{context_id}")
        self._add(INTERACTIONS, context, RDF_TYPE, EPS_CONTEXT)
        self._add(INTERACTIONS, context, RDFS_LABEL, Literal(context.local))
        self._add(INTERACTIONS, context, ns("robotMu", "id"),
                  Literal(context_id, STRING_DT))
        for detection in detections:
            self._add(INTERACTIONS, context, EPS_HAS_DETECTION, detection)
        for event in events:
            self._add(INTERACTIONS, context, SEM_HAS_EVENT, event)

        date = attributes.get("date")
        if date is not None:
            date_node = ns("robotContext", date)
            year, month, day = date.split("-")
            self._add(INTERACTIONS, context, SEM_HAS_BEGIN, date_node)
            self._add(INTERACTIONS, date_node, RDF_TYPE, SEM_TIME)
            self._add(INTERACTIONS, date_node, RDF_TYPE,
                      ns("time", "DateTimeDescription"))
            self._add(INTERACTIONS, date_node, RDFS_LABEL, Literal(date))
            self._add(INTERACTIONS, date_node, ns("time", "day"),
                      Literal(str(int(day)), ns("xml1", "gDay")))
            self._add(INTERACTIONS, date_node, ns("time", "month"),
                      Literal(str(int(month)), ns("xml1", "gMonthDay")))
            self._add(INTERACTIONS, date_node, ns("time", "unitType"),
                      ns("time", "unitDay"))
            self._add(INTERACTIONS, date_node, ns("time", "year"),
                      Literal(year, ns("xml1", "gYear")))

        place = attributes.get("place")
        if place is not None:
            place_node = ns("robotContext", _sanitize(place))
            self._add(INTERACTIONS, context, SEM_HAS_PLACE, place_node)
            self._add(INTERACTIONS, place_node, RDF_TYPE, ns("robotMu", "location"))
            self._add(INTERACTIONS, place_node, RDF_TYPE, SEM_PLACE)
            self._add(INTERACTIONS, place_node, RDFS_LABEL, Literal(place))
            if "place_id" in attributes:
                self._add(INTERACTIONS, place_node, ns("robotMu", "id"),
                          Literal(attributes["place_id"], STRING_DT))
            for level in ("country", "region", "city"):
                name = attributes.get(level)
                if name is None:
                    continue
                area = ns("robotWorld", _sanitize(name))
                self._add(INTERACTIONS, place_node, ns("robotMu", "in"), area)
                self._add(INTERACTIONS, area, RDF_TYPE, ns("robotMu", "location"))
                self._add(INTERACTIONS, area, RDF_TYPE, SEM_PLACE)
                self._add(INTERACTIONS, area, RDF_TYPE, ns("robotMu", level))
                self._add(INTERACTIONS, area, RDFS_LABEL, Literal(name))
        return context


# ---------------------------------------------------------------------------
# Whole-scenario emission


def _segment_suffix(mention: Mention, signal: Signal) -> str:
    if isinstance(signal, ImageSignal):
        return f"pixel0-{len(mention.segment)}"
    segment = mention.segment[0]
    if isinstance(segment, Index):
        return f"char{segment.start}-{segment.stop}"
    return f"time{segment.start}-{segment.end}"


def _speaker_name(signal: Signal, bundle: ScenarioBundle) -> str | None:
    if isinstance(signal, TextSignal) and signal.speaker is not None:
        return signal.speaker.name
    if bundle.scenario.context.speaker is not None:
        return bundle.scenario.context.speaker.name
    return None


def person_registry(bundle: ScenarioBundle) -> list[tuple[str, str]]:
    """(source iri, display name) pairs for the scenario's known persons."""
    return [(ns("robotFriends", _sanitize(p.id)).value, p.name)
            for p in bundle.scenario.context.persons]


def emit_from_scenario(bundle: ScenarioBundle, store: GraphStore) -> EmissionResult:
    """Project every triple/link annotation of the scenario into the store.

    Text signals become chat/utterance events, image signals become visual
    detection events; mention node ids encode the annotated segment (char
    offsets for text, box index range for image). Never removes quads.
    """
    emitter = Emitter(store)
    scenario = bundle.scenario
    attributes = {k: str(v) for k, v in scenario.context.attributes.items()}
    chat_id = attributes.get("chat_id", "1")
    visual_id = attributes.get("visual_id", "1")

    agent = ns("robotWorld", _sanitize(scenario.context.agent or "agent"))
    registry = person_registry(bundle)

    chat = ns("robotTalk", f"chat{chat_id}")
    visual = ns("robotTalk", f"visual{visual_id}")

    batches: list[tuple[str, list[Quad]]] = []
    delta: list[Quad] = []
    detections: list[Iri] = []
    events: list[Iri] = []
    sensors: set[str] = set()

    # Robot bootstrap: the agent's world identity and who it knows.
    emitter.emit_instance(agent, types=(ns("robotMu", "robot"),))
    for person in scenario.context.persons:
        friend = emitter.emit_source(ns("robotFriends", _sanitize(person.id)),
                                     types=(ns("robotMu", "person"),))
        same = ns("robotWorld", friend.local) if friend.local == agent.local else None
        emitter.emit_claim((agent, ns("robotMu", "know"), friend), same_as=same)
    bootstrap = emitter.flush()
    delta.extend(bootstrap)

    text_signals = sorted(bundle.signals.get("text", []), key=lambda s: s.time.start)
    image_signals = sorted(bundle.signals.get("image", []), key=lambda s: s.time.start)
    ordered: list[tuple[Signal, Iri, int]] = []
    for number, signal in enumerate(text_signals, start=1):
        ordered.append((signal, chat, number))
    for number, signal in enumerate(image_signals, start=1):
        ordered.append((signal, visual, number))
    ordered.sort(key=lambda item: item[0].time.start)

    for signal, parent, number in ordered:
        is_text = parent == chat
        batch_kind = "statements" if is_text else "objectdetection"
        event_local = (f"{parent.local}_utterance{number}" if is_text
                       else f"{parent.local}_detection{number}")
        event = ns("robotTalk", event_local)
        produced = False

        if is_text:
            speaker = _speaker_name(signal, bundle)
            resolved = resolve_identity(speaker, registry) if speaker else None
            if isinstance(resolved, NewInstance):
                source = ns("robotFriends", _sanitize(resolved.name.lower()))
            else:
                source = Iri(resolved) if resolved else None
            source_types = (ns("robotMu", "person"),)
        else:
            sensor = next((a.source for m in signal.mentions for a in m.annotations
                           if isinstance(a.value, TripleValue)), None)
            source = ns("robotInputs", _sanitize(sensor)) if sensor else None
            source_types = (ns("robotMu", "sensor"),)
            if sensor:
                sensors.add(sensor)

        for mention in signal.mentions:
            triples = [a for a in mention.annotations
                       if isinstance(a.value, TripleValue) and a.type != "perspective"]
            perspectives = [a for a in mention.annotations
                            if isinstance(a.value, TripleValue) and a.type == "perspective"]
            links = [a.value.iri for a in mention.annotations
                     if isinstance(a.value, EntityLink)]
            faces = [a.value for a in mention.annotations
                     if isinstance(a.value, Face) and a.value.instance is not None]

            if not (triples or perspectives or links or faces):
                continue
            produced = True
            mention_iri = ns("robotTalk",
                             f"{event_local}_{_segment_suffix(mention, signal)}")
            store.mention_times.setdefault(mention_iri, signal.time.start)
            contains = tuple(expand(iri) for iri in links)

            for instance in contains:
                context_iri = (ns("robotContext", f"context{attributes['context_id']}")
                               if "context_id" in attributes
                               and re.fullmatch(r".+?-\d+", instance.local) else None)
                emitter.emit_instance(instance, mentions=(mention_iri,),
                                      context_id=context_iri)
                if re.fullmatch(r".+?-\d+", instance.local):
                    detections.append(instance)
            for face in faces:
                emitter.emit_instance(ns("robotWorld", _sanitize(face.instance.id)),
                                      types=(ns("robotMu", "person"),),
                                      mentions=(mention_iri,))

            if not (triples or perspectives):
                continue

            ref = MentionRef(
                iri=mention_iri,
                kind=GRASP_STATEMENT if is_text else GRASP_EXPERIENCE,
                derived_from=event,
                attributed_to=source,
                value=(signal.seq[mention.segment[0].start:mention.segment[0].stop]
                       if is_text and isinstance(mention.segment[0], Index) else None),
                contains=contains,
                time_ms=signal.time.start,
            )
            claim_context = (ns("robotContext", f"context{attributes['context_id']}")
                             if "context_id" in attributes and not is_text else None)
            world_ns = ns("robotWorld", "").value
            for annotation in triples:
                value = annotation.value
                subject = expand(value.subject)
                if subject.value.startswith(world_ns):
                    emitter.emit_instance(subject)
                obj = emitter._as_node(value.object)
                if isinstance(obj, Iri) and obj.value.startswith(world_ns) \
                        and obj not in contains:
                    emitter.emit_instance(obj)
                emitter.emit_claim((subject, value.predicate, obj), mention=ref,
                                   values=dict(value.perspective),
                                   context_id=claim_context)
            for annotation in perspectives:
                value = annotation.value
                # Mint the target claim fully (graph triple + typing), then
                # attach the stance without denotes/denotedBy edges.
                claim = emitter.emit_claim((value.subject, value.predicate,
                                            value.object))
                emitter.emit_perspective(claim.id, ref, dict(value.perspective))

        if produced:
            emitter.emit_event(parent, GRASP_CHAT if is_text else GRASP_VISUAL,
                               numeric_id=chat_id if is_text else visual_id)
            emitter.emit_event(event, GRASP_UTTERANCE if is_text else GRASP_DETECTION,
                               numeric_id=str(number), actor=source, parent=parent)
            if source is not None:
                emitter.emit_source(source, types=source_types)
            if parent not in events:
                events.append(parent)
            batch = emitter.flush()
            delta.extend(batch)
            if batch:
                batches.append((batch_kind, batch))

    for sensor in sorted(sensors):
        emitter.emit_claim((agent, ns("robotMu", "sense"),
                            ns("robotInputs", _sanitize(sensor))))
    emitter.emit_context(attributes, events, detections)
    tail = emitter.flush()
    delta.extend(tail)
    if tail:
        if batches:
            batches[0] = (batches[0][0], batches[0][1] + tail)
        else:
            batches.append(("statements", tail))
    if bootstrap:
        if batches:
            batches[0] = (batches[0][0], bootstrap + batches[0][1])
        else:
            batches.append(("statements", bootstrap))

    return EmissionResult(delta=delta, batches=batches)
