import copy

from emissor.ekg import GraphStore, emit_from_scenario, ns, validate_partition
from emissor.ekg.namespaces import (
    GAF_DENOTED_BY,
    GAF_MENTION,
    PROV_DERIVED_FROM,
    RDF_TYPE,
    RDF_VALUE,
)
from emissor.ekg.store import INTERACTIONS, PERSPECTIVES
from emissor.model import TripleValue


def test_utterance_two_mention_id_and_value(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    mention = ns("robotTalk", "chat1_utterance2_char0-39")
    values = store.objects(PERSPECTIVES, mention, RDF_VALUE)
    assert [v.lexical for v in values] == ["I found them. They are under the table."]
    assert (PERSPECTIVES, mention, PROV_DERIVED_FROM,
            ns("robotTalk", "chat1_utterance2")) in store.quads


def test_scenario_without_triples_emits_no_claims(carl_robot):
    store = GraphStore()
    emit_from_scenario(carl_robot, store)
    # token-only text plus face boxes: instances and events, but no assertions
    assert store.claim_ids() == []


def test_two_detections_one_event_two_claims(carl_robot_annotated):
    bundle = copy.deepcopy(carl_robot_annotated)
    store = GraphStore()
    emit_from_scenario(bundle, store)
    detection = ns("robotTalk", "visual1_detection2")
    sub_events = [q for q in store.quads
                  if q[0] == INTERACTIONS and q[3] == detection
                  and q[2] == ns("sem", "hasSubEvent")]
    assert len(sub_events) == 1
    see_claims = [c for c in store.claim_ids() if c.local.startswith("lani_see_")]
    assert len(see_claims) == 2


def test_segment_id_fidelity(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    texts = sorted(carl_robot_annotated.signals["text"], key=lambda s: s.time.start)
    for number, signal in enumerate(texts, start=1):
        for mention in signal.mentions:
            if not any(isinstance(a.value, TripleValue) for a in mention.annotations):
                continue
            segment = mention.segment[0]
            iri = ns("robotTalk",
                     f"chat1_utterance{number}_char{segment.start}-{segment.stop}")
            assert (PERSPECTIVES, iri, RDF_TYPE, GAF_MENTION) in store.quads
    frame30 = sorted(carl_robot_annotated.signals["image"],
                     key=lambda s: s.time.start)[1]
    detection_mention = next(m for m in frame30.mentions
                             if any(isinstance(a.value, TripleValue)
                                    for a in m.annotations))
    suffix = f"pixel0-{len(detection_mention.segment)}"
    assert (PERSPECTIVES, ns("robotTalk", f"visual1_detection2_{suffix}"),
            RDF_TYPE, GAF_MENTION) in store.quads


def test_grounding_totality(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    mention_backed = {q[3] for q in store.quads if q[2] == GAF_DENOTED_BY}
    for claim in store.claim_ids():
        has_mention = any(q[2] == GAF_DENOTED_BY and q[1] == claim
                          for q in store.quads)
        bootstrap = claim.local.startswith(("lani_know_", "lani_sense_"))
        assert has_mention or bootstrap
    # every mention node derives from an event in Interactions
    mentions = {q[1] for q in store.quads
                if q[0] == PERSPECTIVES and q[2] == RDF_TYPE and q[3] == GAF_MENTION}
    events = {q[1] for q in store.quads if q[0] == INTERACTIONS}
    for mention in mentions:
        derived = [q[3] for q in store.quads
                   if q[1] == mention and q[2] == PROV_DERIVED_FROM]
        assert derived and all(d in events for d in derived)


def test_monotonic_accumulation_and_partition(carl_robot_annotated):
    store = GraphStore()
    sizes = [0]
    result = emit_from_scenario(carl_robot_annotated, store)
    validate_partition(store.quads)
    sizes.append(len(store))
    again = emit_from_scenario(carl_robot_annotated, store)
    sizes.append(len(store))
    assert sizes == sorted(sizes)
    assert len(again.delta) == 0
    assert sum(len(q) for _, q in result.batches) == len(result.delta)


def test_mention_times_follow_signal_time(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    assert store.mention_times[ns("robotTalk", "chat1_utterance2_char0-39")] == 3933
    assert store.mention_times[ns("robotTalk", "visual1_detection2_pixel0-3")] == 1000


def test_entity_links_become_denoted_in_evidence(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    pills = ns("robotWorld", "pills")
    denoted_in = {q[3] for q in store.quads
                  if q[1] == pills and q[2] == ns("gaf", "denotedIn")}
    assert ns("robotTalk", "chat1_utterance2_char0-39") in denoted_in
