"""Two realities at one time point: query the graph per source and watch the
answer change, then surface the polarity conflict.

Run from the repository root:  python demos/04_two_realities.py
"""

import os

from emissor import load_scenario
from emissor.ekg import GraphStore, emit_from_scenario, person_registry
from emissor.segmentation import resolve_identity

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures",
                    "carl-robot-annotated")

bundle = load_scenario(ROOT)
store = GraphStore()
emit_from_scenario(bundle, store)

registry = person_registry(bundle)
carl = resolve_identity("Carl", registry)
leolani = resolve_identity("Leolani", registry)


def ask(label, **kwargs):
    print(f"\nwhere are the pills, {label}?")
    results = store.query("robotWorld:pills", "robotMu:locatedUnder", **kwargs)
    if not results:
        print("  (no knowledge yet)")
    for r in results:
        values = ", ".join(v.local for v in r.values) or "no attribution"
        print(f"  {r.triple[2].curie()}  [{values}]  "
              f"via {r.mention.local} at t={r.timestamp}")


ask("according to Carl at t=1000", time=1000, source=carl)
ask("according to Leolani at t=1000", time=1000, source=leolani)
ask("according to the camera at t=1000", time=1000,
    source="robotInputs:front-camera")
ask("according to Leolani at t=4000", time=4000, source=leolani)
ask("according to anyone, any time")

print("\nconflicting stances on (pills, locatedUnder):")
for group in store.detect_conflicts("robotWorld:pills", "robotMu:locatedUnder"):
    for entry in group.entries:
        source = entry.source.curie() if entry.source else "?"
        print(f"  {source:<24} {entry.polarity:<8} "
              f"{entry.claim.local} at t={entry.timestamp}")
