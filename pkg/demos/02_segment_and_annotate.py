"""Baseline segmentation: tokens with character offsets, detector boxes,
gazetteer entities, first-match identity resolution, layered annotations.

Run from the repository root:  python demos/02_segment_and_annotate.py
"""

import os

from emissor import Annotation, EntityLink, load_scenario
from emissor.model import stack_annotation
from emissor.segmentation import (
    Detection,
    box_mentions,
    detect_entities,
    resolve_identity,
    tokenize,
)

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures", "carl-robot")
bundle = load_scenario(ROOT)

text = "That is Carl and his daughter Carla"
tokens = tokenize(text)
print(f"{text!r} tokenizes to:")
for value, start, stop in tokens:
    assert text[start:stop] == value  # offset fidelity
    print(f"  [{start:>2},{stop:>2})  {value!r}")

gazetteer = {"Carl": "PERSON", "Carla": "PERSON"}
print("\ngazetteer entities (longest match, left to right):")
for (first, last), label in detect_entities(tokens, gazetteer):
    surface = " ".join(t[0] for t in tokens[first:last])
    print(f"  {label}: {surface!r} (tokens {first}..{last})")

registry = [("http://emissor.org/robot/friends/carl", "Carl"),
            ("http://emissor.org/robot/friends/carl2", "Carl")]
print("\nidentity resolution picks the first matching name:")
print(f"  'Carl'  -> {resolve_identity('Carl', registry)}")
print(f"  'carla' -> {resolve_identity('carla', registry)}  (minted)")

image = bundle.signals["image"][0]
created = box_mentions(image, [
    Detection(bounds=[100, 200, 400, 600], kind="table", attrs={}),
], detector="object_baseline")
print(f"\nbox detector added mention {created[0].id[:8]}… "
      f"bounds={created[0].segment[0].bounds}")

token_value = bundle.signals["text"][0].mentions[5].annotations[0].value
layered = stack_annotation(
    bundle.signals["text"][0], token_value.id,
    Annotation("link", EntityLink("http://emissor.org/robot/world/pills"),
               "demo", None))
print(f"layered an entity link on token {token_value.value!r}: "
      f"mention {layered.id[:8]}… cites container {layered.segment[0].container_id[:8]}…")
