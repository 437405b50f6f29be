"""Walk through a scenario folder: signals, rulers, validation, co-reference.

Run from the repository root:  python demos/01_explore_scenario.py
"""

import os

from emissor import (
    container_closure,
    coreference_index,
    load_scenario,
    validate_scenario,
)
from emissor.storage import resolve_media

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures", "carl-robot")

bundle = load_scenario(ROOT)
scenario = bundle.scenario

print(f"scenario {scenario.id!r}")
print(f"  temporal ruler: [{scenario.ruler.start}, {scenario.ruler.end}] ms")
print(f"  speaker: {scenario.context.speaker.name}")
print(f"  modalities: {sorted(scenario.signals)}")

print("\nimport warnings (normalization events):")
for warning in bundle.warnings[:5]:
    print(f"  - {warning}")
print(f"  ... {len(bundle.warnings)} total")

print("\ntext signals:")
for signal in sorted(bundle.signals["text"], key=lambda s: s.time.start):
    print(f"  t={signal.time.start:>5} ms  {signal.seq!r}  "
          f"({len(signal.mentions)} mentions)")

print("\nimage signals:")
for signal in sorted(bundle.signals["image"], key=lambda s: s.time.start):
    boxes = [seg.bounds for m in signal.mentions for seg in m.segment]
    print(f"  t=[{signal.time.start}, {signal.time.end}) ms  "
          f"{signal.files[0]}  boxes={boxes}")

report = validate_scenario(bundle)
print(f"\nvalidation: {len(report.violations)} violations")

closure = container_closure(bundle)
print(f"container closure: {len(closure)} containers "
      "(scenario, signals, tokens)")

print("\ncross-modality co-reference (same identity in several signals):")
for iri, entries in coreference_index(bundle).items():
    print(f"  {iri}")
    for modality, signal_id, mention_id in entries:
        print(f"    {modality}  signal={signal_id[:8]}…  mention={mention_id[:8]}…")

signal = next(s for s in bundle.signals["text"]
              if s.files == ["text/carl-robot.csv#2"])
media = resolve_media(signal, bundle.root)[0]
print(f"\nmedia reference {signal.files[0]!r} resolves to row {media.row}: "
      f"{media.load()!r}")
