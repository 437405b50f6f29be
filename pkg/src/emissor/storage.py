"""Scenario folder layout and per-modality JSON-LD metadata, round-trip safe.

A scenario folder holds modality subfolders (text/, image/, audio/, video/,
rdf/), one metadata file per modality (text.json, ...) and a scenario file
named after the folder. Unknown JSON keys are preserved verbatim; normalization
events (inverted rulers, epoch-second timestamps, duplicate keys) become
warnings, never silent edits.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
import os
from dataclasses import dataclass, field
from typing import Any

from .model import (
    Annotation,
    AtomicRuler,
    AudioSignal,
    BoundingBox,
    EmissorError,
    EntityLink,
    Face,
    ImageSignal,
    Index,
    Label,
    Mention,
    MultiIndex,
    Person,
    Scenario,
    ScenarioBundle,
    ScenarioContext,
    Signal,
    TemporalRuler,
    TextSignal,
    TimeSegment,
    Token,
    TripleValue,
)

CONTEXT_IRI = "http://emissor.org/jsonldcontext.jsonld"

# Annotation timestamps in [EPOCH_S_MIN, EPOCH_S_MAX) are epoch seconds and get
# converted to epoch ms; smaller values are scenario ms offsets and are kept.
EPOCH_S_MIN = 10**8
EPOCH_S_MAX = 10**11


class MissingScenarioFile(EmissorError):
    pass


class MalformedJson(EmissorError):
    def __init__(self, file: str, position: int, message: str):
        super().__init__(f"{file}: {message} (char {position})")
        self.file = file
        self.position = position


class SchemaViolation(EmissorError):
    def __init__(self, file: str, pointer: str, message: str):
        super().__init__(f"{file}{pointer}: {message}")
        self.file = file
        self.pointer = pointer


class MissingMedia(EmissorError):
    pass


class RowOutOfRange(EmissorError):
    pass


def bundled_context() -> dict:
    """The vendored JSON-LD context document; never fetched from the network."""
    text = importlib.resources.files("emissor").joinpath("jsonldcontext.jsonld").read_text("utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, file: str, warnings: list[str]):
        self.file = file
        self.warnings = warnings

    def fail(self, pointer: str, message: str) -> SchemaViolation:
        return SchemaViolation(self.file, pointer, message)

    def warn(self, message: str) -> None:
        self.warnings.append(f"{self.file}: {message}")

    # -- scalar helpers

    def _int(self, obj: dict, key: str, ptr: str) -> int:
        value = obj.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(f"{ptr}/{key}", f"expected integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise self.fail(f"{ptr}/{key}", f"expected integer, got {value!r}")
        return int(value)

    def _str(self, obj: dict, key: str, ptr: str) -> str:
        value = obj.get(key)
        if not isinstance(value, str):
            raise self.fail(f"{ptr}/{key}", f"expected string, got {value!r}")
        return value

    def _id(self, obj: dict, ptr: str) -> str:
        # Source data uses "id" and "@id" interchangeably; "id" wins on write.
        if "id" in obj:
            return self._str(obj, "id", ptr)
        if "@id" in obj:
            return self._str(obj, "@id", ptr)
        raise self.fail(ptr, "missing id")

    def _extra(self, obj: dict, known: tuple[str, ...]) -> dict[str, Any]:
        return {k: v for k, v in obj.items() if k not in known}

    # -- rulers and segments

    def time_segment(self, obj: dict, ptr: str) -> TimeSegment:
        start = self._int(obj, "start", ptr)
        end = self._int(obj, "end", ptr)
        if start > end:
            self.warn(f"{ptr}: inverted time extent [{start}, {end}] swapped")
            start, end = end, start
        return TimeSegment(
            container_id=self._str(obj, "container_id", ptr),
            start=start,
            end=end,
            type_tag=obj.get("type", "TimeSegment"),
        )

    def temporal_ruler(self, obj: dict, ptr: str) -> TemporalRuler:
        start = self._int(obj, "start", ptr)
        end = self._int(obj, "end", ptr)
        if start > end:
            self.warn(f"{ptr}: inverted temporal ruler [{start}, {end}] swapped")
            start, end = end, start
        return TemporalRuler(container_id=self._str(obj, "container_id", ptr),
                             start=start, end=end)

    def index(self, obj: dict, ptr: str) -> Index:
        return Index(container_id=self._str(obj, "container_id", ptr),
                     start=self._int(obj, "start", ptr),
                     stop=self._int(obj, "stop", ptr))

    def bounds(self, obj: dict, ptr: str) -> list[int]:
        value = obj.get("bounds")
        if not isinstance(value, list) or len(value) != 4 \
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise self.fail(f"{ptr}/bounds", f"expected 4 integer bounds, got {value!r}")
        return list(value)

    def segment(self, obj: dict, ptr: str):
        tag = obj.get("type")
        if tag == "Index":
            return self.index(obj, ptr)
        if tag == "BoundingBox":
            return BoundingBox(container_id=self._str(obj, "container_id", ptr),
                               bounds=self.bounds(obj, ptr))
        if tag in ("TimeSegment", "TemporalRuler"):
            return self.time_segment(obj, ptr)
        raise self.fail(f"{ptr}/type", f"unknown segment type {tag!r}")

    # -- annotation values

    def person(self, obj: dict, ptr: str) -> Person:
        return Person(
            id=self._id(obj, ptr),
            name=obj.get("name", ""),
            birth_date=obj.get("birthDate"),
            gender=obj.get("gender"),
            extra=self._extra(obj, ("id", "@id", "name", "birthDate", "gender", "type")),
        )

    def annotation_value(self, value: Any, ptr: str):
        if not isinstance(value, dict):
            return value
        tag = value.get("type")
        if tag == "Token":
            return Token(id=self._id(value, ptr),
                         value=self._str(value, "value", ptr),
                         ruler=AtomicRuler(container_id=self._str(
                             value.get("ruler", {}), "container_id", f"{ptr}/ruler")))
        if tag == "Face":
            instance = value.get("instance")
            faceprob = value.get("faceprob")
            if faceprob is not None and not 0.0 <= float(faceprob) <= 1.0:
                raise self.fail(f"{ptr}/faceprob", f"faceprob {faceprob!r} outside [0, 1]")
            return Face(
                instance=self.person(instance, f"{ptr}/instance") if instance else None,
                age=value.get("age"),
                gender=value.get("gender"),
                faceprob=faceprob,
            )
        if tag == "EntityLink":
            return EntityLink(iri=self._str(value, "iri", ptr))
        if tag == "Triple":
            return TripleValue(
                subject=self._str(value, "subject", ptr),
                predicate=self._str(value, "predicate", ptr),
                object=self._str(value, "object", ptr),
                perspective=dict(value.get("perspective", {})),
            )
        if tag == "Label":
            return Label(value=self._str(value, "value", ptr))
        return value  # unknown value shapes survive untouched

    def annotation(self, obj: dict, ptr: str,
                   allow_missing_timestamp: bool = False) -> Annotation:
        if allow_missing_timestamp and obj.get("timestamp") is None:
            timestamp = None  # filled in by add_mention
        else:
            timestamp = self._int(obj, "timestamp", ptr)
            if EPOCH_S_MIN <= timestamp < EPOCH_S_MAX:
                self.warn(f"{ptr}: timestamp {timestamp} read as epoch seconds, "
                          "converted to ms")
                timestamp *= 1000
        return Annotation(
            type=self._str(obj, "type", ptr),
            value=self.annotation_value(obj.get("value"), f"{ptr}/value"),
            source=self._str(obj, "source", ptr),
            timestamp=timestamp,
            extra=self._extra(obj, ("type", "value", "source", "timestamp")),
        )

    def mention(self, obj: dict, ptr: str) -> Mention:
        segments = obj.get("segment")
        annotations = obj.get("annotations")
        if not isinstance(segments, list):
            raise self.fail(f"{ptr}/segment", "expected a list of segments")
        if not isinstance(annotations, list):
            raise self.fail(f"{ptr}/annotations", "expected a list of annotations")
        return Mention(
            id=self._id(obj, ptr),
            segment=[self.segment(s, f"{ptr}/segment/{i}") for i, s in enumerate(segments)],
            annotations=[self.annotation(a, f"{ptr}/annotations/{i}")
                         for i, a in enumerate(annotations)],
            extra=self._extra(obj, ("type", "id", "@id", "annotations", "segment")),
        )

    # -- signals

    _SIGNAL_KEYS = ("@context", "type", "id", "@id", "files", "modality",
                    "time", "ruler", "mentions", "seq", "speaker")

    def signal(self, obj: dict, ptr: str) -> Signal:
        modality = self._str(obj, "modality", ptr)
        common = dict(
            id=self._id(obj, ptr),
            modality=modality,
            files=list(obj.get("files", [])),
            time=self.time_segment(obj.get("time", {}), f"{ptr}/time"),
            mentions=[self.mention(m, f"{ptr}/mentions/{i}")
                      for i, m in enumerate(obj.get("mentions", []))],
            extra=self._extra(obj, self._SIGNAL_KEYS),
        )
        if modality == "text":
            seq = obj.get("seq", "")
            if isinstance(seq, list):
                seq = "".join(seq)
            speaker = obj.get("speaker")
            return TextSignal(ruler=self.index(obj.get("ruler", {}), f"{ptr}/ruler"),
                              seq=seq,
                              speaker=self.person(speaker, f"{ptr}/speaker") if speaker else None,
                              **common)
        if modality in ("image", "video"):
            ruler_obj = obj.get("ruler", {})
            return ImageSignal(ruler=MultiIndex(
                container_id=self._str(ruler_obj, "container_id", f"{ptr}/ruler"),
                bounds=self.bounds(ruler_obj, f"{ptr}/ruler")), **common)
        if modality == "audio":
            return AudioSignal(ruler=self.index(obj.get("ruler", {}), f"{ptr}/ruler"), **common)
        raise self.fail(f"{ptr}/modality", f"unknown modality {modality!r}")

    # -- scenario

    def scenario(self, obj: dict, ptr: str = "") -> Scenario:
        context = obj.get("context", {})
        speaker = context.get("speaker")
        return Scenario(
            id=self._id(obj, ptr),
            context=ScenarioContext(
                agent=context.get("agent", ""),
                speaker=self.person(speaker, f"{ptr}/context/speaker") if speaker else None,
                persons=[self.person(p, f"{ptr}/context/persons/{i}")
                         for i, p in enumerate(context.get("persons", []))],
                objects=list(context.get("objects", [])),
                attributes=dict(context.get("attributes", {})),
                extra=self._extra(context, ("agent", "speaker", "persons", "objects",
                                            "attributes")),
            ),
            ruler=self.temporal_ruler(obj.get("ruler", {}), f"{ptr}/ruler"),
            signals={k: v for k, v in obj.get("signals", {}).items()},
            extra=self._extra(obj, ("@context", "type", "id", "@id", "context",
                                    "ruler", "signals")),
        )


def _load_json(path: str, warnings: list[str]) -> Any:
    """JSON parse that keeps the last occurrence of duplicated keys, with a warning."""
    def hook(pairs):
        seen: dict[str, Any] = {}
        for key, value in pairs:
            if key in seen:
                warnings.append(f"{os.path.basename(path)}: duplicate key {key!r}, "
                                f"keeping the last occurrence")
            seen[key] = value
        return seen

    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        return json.loads(text, object_pairs_hook=hook)
    except json.JSONDecodeError as exc:
        raise MalformedJson(os.path.basename(path), exc.pos, exc.msg) from exc


def load_scenario(path: str) -> ScenarioBundle:
    """Load a scenario folder; returns the bundle with normalization warnings."""
    root = os.path.abspath(path)
    name = os.path.basename(root.rstrip("/"))
    scenario_file = os.path.join(root, f"{name}.json")
    if not os.path.exists(scenario_file):
        raise MissingScenarioFile(scenario_file)

    warnings: list[str] = []
    parser = _Parser(f"{name}.json", warnings)
    scenario = parser.scenario(_load_json(scenario_file, warnings))

    signals: dict[str, list[Signal]] = {}
    for modality, rel in scenario.signals.items():
        meta_path = os.path.join(root, rel.lstrip("./"))
        if not os.path.exists(meta_path):
            raise MissingScenarioFile(meta_path)
        modality_parser = _Parser(os.path.basename(meta_path), warnings)
        data = _load_json(meta_path, warnings)
        if not isinstance(data, list):
            raise modality_parser.fail("", "expected a JSON array of signals")
        signals[modality] = [modality_parser.signal(s, f"/{i}") for i, s in enumerate(data)]
    return ScenarioBundle(scenario=scenario, signals=signals, root=root, warnings=warnings)


# ---------------------------------------------------------------------------
# Serialization

def _person_dict(person: Person) -> dict:
    out: dict[str, Any] = {}
    if "@context" in person.extra:
        out["@context"] = person.extra["@context"]
    out["id"] = person.id
    out["type"] = "Person"
    if person.birth_date is not None:
        out["birthDate"] = person.birth_date
    if person.gender is not None:
        out["gender"] = person.gender
    out["name"] = person.name
    out.update({k: v for k, v in person.extra.items() if k != "@context"})
    return out


def _segment_dict(segment) -> dict:
    if isinstance(segment, Index):
        return {"type": "Index", "container_id": segment.container_id,
                "start": segment.start, "stop": segment.stop}
    if isinstance(segment, BoundingBox):
        return {"type": "BoundingBox", "container_id": segment.container_id,
                "bounds": list(segment.bounds)}
    return {"type": segment.type_tag, "container_id": segment.container_id,
            "start": segment.start, "end": segment.end}


def _value_dict(value) -> Any:
    if isinstance(value, Token):
        return {"id": value.id,
                "ruler": {"container_id": value.ruler.container_id, "type": "AtomicRuler"},
                "type": "Token", "value": value.value}
    if isinstance(value, Face):
        out: dict[str, Any] = {"type": "Face"}
        if value.instance is not None:
            out["instance"] = _person_dict(value.instance)
        if value.age is not None:
            out["age"] = value.age
        if value.gender is not None:
            out["gender"] = value.gender
        if value.faceprob is not None:
            out["faceprob"] = value.faceprob
        return out
    if isinstance(value, EntityLink):
        return {"type": "EntityLink", "iri": value.iri}
    if isinstance(value, TripleValue):
        out = {"type": "Triple", "subject": value.subject,
               "predicate": value.predicate, "object": value.object}
        if value.perspective:
            out["perspective"] = dict(value.perspective)
        return out
    if isinstance(value, Label):
        return {"type": "Label", "value": value.value}
    return value


def _annotation_dict(annotation: Annotation) -> dict:
    out = {"source": annotation.source, "timestamp": annotation.timestamp,
           "type": annotation.type, "value": _value_dict(annotation.value)}
    out.update(annotation.extra)
    return out


def _mention_dict(mention: Mention) -> dict:
    out = {"type": "Mention", "id": mention.id,
           "annotations": [_annotation_dict(a) for a in mention.annotations],
           "segment": [_segment_dict(s) for s in mention.segment]}
    out.update(mention.extra)
    return out


def _signal_dict(signal: Signal) -> dict:
    out: dict[str, Any] = {"@context": signal.extra.get("@context", CONTEXT_IRI)}
    out["type"] = type(signal).__name__
    out["id"] = signal.id
    out["files"] = list(signal.files)
    out["modality"] = signal.modality
    out["time"] = _segment_dict(signal.time)
    if isinstance(signal, ImageSignal):
        out["ruler"] = {"type": "MultiIndex", "container_id": signal.ruler.container_id,
                        "bounds": list(signal.ruler.bounds)}
    else:
        out["ruler"] = {"type": "Index", "container_id": signal.ruler.container_id,
                        "start": signal.ruler.start, "stop": signal.ruler.stop}
    if isinstance(signal, TextSignal):
        out["seq"] = list(signal.seq)
        if signal.speaker is not None:
            out["speaker"] = _person_dict(signal.speaker)
    out["mentions"] = [_mention_dict(m) for m in signal.mentions]
    out.update({k: v for k, v in signal.extra.items() if k != "@context"})
    return out


def scenario_dict(scenario: Scenario) -> dict:
    ctx = scenario.context
    context: dict[str, Any] = {"agent": ctx.agent, "objects": list(ctx.objects),
                               "persons": [_person_dict(p) for p in ctx.persons]}
    if ctx.speaker is not None:
        context["speaker"] = _person_dict(ctx.speaker)
    if ctx.attributes:
        context["attributes"] = dict(ctx.attributes)
    context.update(ctx.extra)
    out: dict[str, Any] = {"@context": scenario.extra.get("@context", CONTEXT_IRI),
                           "type": "Scenario", "id": scenario.id, "context": context,
                           "ruler": {"type": "TemporalRuler",
                                     "container_id": scenario.ruler.container_id,
                                     "end": scenario.ruler.end,
                                     "start": scenario.ruler.start},
                           "signals": dict(scenario.signals)}
    out.update({k: v for k, v in scenario.extra.items() if k != "@context"})
    return out


def _dump(data: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def save_scenario(bundle: ScenarioBundle, path: str) -> None:
    """Write the scenario folder; deterministic output, media files untouched."""
    root = os.path.abspath(path)
    name = os.path.basename(root.rstrip("/"))
    if name != bundle.scenario.id:
        raise EmissorError(f"scenario id {bundle.scenario.id!r} must equal "
                           f"the folder name {name!r}")
    os.makedirs(root, exist_ok=True)
    for modality, rel in bundle.scenario.signals.items():
        os.makedirs(os.path.join(root, modality), exist_ok=True)
        _dump([_signal_dict(s) for s in bundle.signals.get(modality, [])],
              os.path.join(root, rel.lstrip("./")))
    _dump(scenario_dict(bundle.scenario), os.path.join(root, f"{name}.json"))


# ---------------------------------------------------------------------------
# Media resolution


@dataclass
class ResolvedMedia:
    path: str
    row: int | None = None
    _cache: str | None = field(default=None, repr=False)

    def load(self) -> bytes | str:
        """File bytes, or the utterance text when the reference is a CSV row."""
        if self.row is None:
            with open(self.path, "rb") as handle:
                return handle.read()
        return _csv_row(self.path, self.row)["utterance"]


def _csv_row(path: str, row: int) -> dict[str, str]:
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    if not 0 <= row < len(rows):
        raise RowOutOfRange(f"{path}#{row}: file has {len(rows)} data rows")
    return rows[row]


def resolve_media(signal: Signal, root: str) -> list[ResolvedMedia]:
    """Resolve a signal's file references; `#n` fragments are 0-based CSV data rows."""
    out = []
    for ref in signal.files:
        rel, _, fragment = ref.partition("#")
        path = os.path.join(root, rel)
        if not os.path.exists(path):
            raise MissingMedia(path)
        row = int(fragment) if fragment else None
        if row is not None:
            _csv_row(path, row)  # raises RowOutOfRange eagerly
        out.append(ResolvedMedia(path=path, row=row))
    return out
