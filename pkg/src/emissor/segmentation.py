"""Baseline segmenters and the first-match identity resolver.

Stateless pure functions; real detectors plug in through PerceptionPlugin.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, Sequence

from .model import (
    Annotation,
    BoundingBox,
    Face,
    ImageSignal,
    Label,
    Mention,
    add_mention,
)

# Maximal runs of word characters (apostrophes included), else one
# non-whitespace character per token.
_TOKEN = re.compile(r"[\w']+|[^\w\s]")


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Split text into (value, start, stop) tokens; offsets index the input,
    half-open, so text[start:stop] == value for every token."""
    return [(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


@dataclass
class Detection:
    bounds: list[int]
    kind: str
    attrs: dict


def box_mentions(signal: ImageSignal, detections: Sequence[Detection],
                 detector: str = "baseline_detector") -> list[Mention]:
    """One mention per detection, annotated with a Face or Label value.

    Face detections expect attrs with instance/age/gender/faceprob; anything
    else becomes a Label of the detection kind. Raises OutOfBounds for boxes
    outside the image ruler.
    """
    mentions = []
    for detection in detections:
        if detection.kind == "face":
            value = Face(instance=detection.attrs.get("instance"),
                         age=detection.attrs.get("age"),
                         gender=detection.attrs.get("gender"),
                         faceprob=detection.attrs.get("faceprob"))
            kind = "person"
        else:
            value = Label(value=detection.kind)
            kind = "object"
        annotation = Annotation(type=kind, value=value, source=detector,
                                timestamp=signal.time.start)
        segment = BoundingBox(container_id=signal.id, bounds=list(detection.bounds))
        mentions.append(add_mention(signal, [segment], [annotation],
                                    timestamp=signal.time.start))
    return mentions


@dataclass
class NewInstance:
    """Directive to mint a fresh identity of the given type."""

    name: str
    type: str = "PERSON"


def resolve_identity(query: str | Face,
                     registry: Sequence[tuple[str, str]]) -> str | NewInstance:
    """First registry entry whose name matches case-insensitively, in insertion
    order; otherwise a NewInstance directive. Faces resolve by instance name."""
    name = query.instance.name if isinstance(query, Face) else query
    needle = name.casefold()
    for iri, candidate in registry:
        if candidate.casefold() == needle:
            return iri
    return NewInstance(name=name)


def detect_entities(tokens: Sequence[tuple[str, int, int]],
                    gazetteer: dict[str, str]) -> list[tuple[tuple[int, int], str]]:
    """Longest-match, left-to-right, non-overlapping gazetteer lookup.

    Returns ((first_token, last_token_exclusive), label) spans over the token
    sequence. Gazetteer surface forms are token sequences joined by single
    spaces, matched case-sensitively.
    """
    compiled = {tuple(surface.split()): label for surface, label in gazetteer.items()}
    max_len = max((len(k) for k in compiled), default=0)
    spans = []
    i = 0
    while i < len(tokens):
        match = None
        for width in range(min(max_len, len(tokens) - i), 0, -1):
            candidate = tuple(t[0] for t in tokens[i:i + width])
            if candidate in compiled:
                match = (width, compiled[candidate])
                break
        if match is None:
            i += 1
        else:
            width, label = match
            spans.append(((i, i + width), label))
            i += width
    return spans


def load_gazetteer(path: str) -> dict[str, str]:
    """Gazetteer file: one `name<TAB>label` per line, UTF-8."""
    out = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            name, _, label = line.partition("\t")
            out[name] = label
    return out


class PerceptionPlugin(Protocol):
    """Seam for swapping the baseline boxes/identities for real detectors."""

    def detect(self, signal: ImageSignal, media_path: str) -> list[Detection]:
        ...
