"""Acceptance suite: fixture-exact checks plus randomized property suites
(1000 cases each). One pass/fail line per criterion is printed in the
terminal summary (see conftest)."""

import os
import time

import pytest
from hypothesis import given, settings, strategies as st

from emissor.convert import from_dialogue_csv, from_frames
from emissor.model import (
    Annotation,
    BoundingBox,
    DanglingContainer,
    EntityLink,
    Face,
    ImageSignal,
    Index,
    Mention,
    MultiIndex,
    Person,
    Scenario,
    ScenarioBundle,
    ScenarioContext,
    TemporalRuler,
    TextSignal,
    TimeSegment,
    Token,
    container_closure,
    coreference_index,
    covers,
    validate_scenario,
)
from emissor.segmentation import NewInstance, resolve_identity, tokenize
from emissor.storage import load_scenario, save_scenario
from emissor.ekg import (
    Emitter,
    GraphStore,
    Literal,
    MentionRef,
    emit_from_scenario,
    ns,
    parse_trig,
    person_registry,
    serialize_trig,
    validate_partition,
)
from emissor.ekg.namespaces import (
    GAF_DENOTED_BY,
    GAF_DENOTES,
    GRASP_IS_ATTRIBUTION_FOR,
    GRASP_STATEMENT,
    RDF_TYPE,
    RDF_VALUE,
)
from emissor.ekg.store import CLAIMS, INSTANCES, INTERACTIONS, PERSPECTIVES

from tests.test_segmentation import TOKEN_ORACLE

FACE_BOX_FRAME0 = [2830, 241, 3034, 521]
FACE_BOX_FRAME30 = [2831, 235, 3036, 514]


# ---------------------------------------------------------------------------
# Criterion: fixture fidelity


def test_fixture_fidelity(fixtures_root):
    started = time.perf_counter()
    bundle = load_scenario(os.path.join(fixtures_root, "carl-robot"))

    ruler = bundle.scenario.ruler
    assert (ruler.start, ruler.end) == (0, 11133)
    assert len(bundle.signals["text"]) == 3
    assert len(bundle.signals["image"]) >= 2

    boxes = [segment.bounds
             for signal in bundle.signals["image"]
             for mention in signal.mentions
             for segment in mention.segment
             if isinstance(segment, BoundingBox)]
    assert FACE_BOX_FRAME0 in boxes and FACE_BOX_FRAME30 in boxes

    first_signal = next(s for s in bundle.signals["text"]
                        if s.files == ["text/carl-robot.csv#0"])
    token_spans = {(m.annotations[0].value.value,
                    m.segment[0].start, m.segment[0].stop)
                   for m in first_signal.mentions
                   if isinstance(m.annotations[0].value, Token)}
    assert ("I", 0, 1) in token_spans
    assert (".", 47, 48) in token_spans

    assert time.perf_counter() - started < 1.0


# ---------------------------------------------------------------------------
# Criterion: round-trip on all fixtures


def test_round_trip_all_fixtures(fixtures_root, tmp_path):
    names = [n for n in sorted(os.listdir(fixtures_root))
             if os.path.isfile(os.path.join(fixtures_root, n, f"{n}.json"))]
    assert names == ["carl-robot", "carl-robot-annotated"]
    for name in names:
        original = load_scenario(os.path.join(fixtures_root, name))
        first = tmp_path / "first" / name
        save_scenario(original, str(first))
        reloaded = load_scenario(str(first))
        assert reloaded.scenario == original.scenario, name
        assert reloaded.signals == original.signals, name

        second = tmp_path / "second" / name
        save_scenario(reloaded, str(second))
        diffs = []
        for dirpath, _, filenames in os.walk(first):
            for filename in filenames:
                a = os.path.join(dirpath, filename)
                b = a.replace(str(first), str(second))
                if open(a, "rb").read() != open(b, "rb").read():
                    diffs.append(filename)
        assert diffs == [], name


# ---------------------------------------------------------------------------
# Criterion: tokenizer oracle


def test_tokenizer_matches_committed_oracle():
    utterances = [
        "I need to take my pills, but I cannot find them.",
        "I found them. They are under the table.",
        "Oh! Got it. Thank you.",
    ]
    for utterance in utterances:
        assert tokenize(utterance) == TOKEN_ORACLE[utterance]


# ---------------------------------------------------------------------------
# Criterion: eKG pattern (cluster isomorphism against the corrected TriG)


def _cluster(store: GraphStore, claim) -> set:
    """All quads tied to a claim: its graph, its Claims entry, the mentions
    that denote it or carry claim-named attributions, those attributions, and
    the typing of their values."""
    quads = store.quads
    out = {q for q in quads if q[0] == claim}
    out |= {q for q in quads if q[0] == CLAIMS and q[1] == claim}

    prefix = claim.local + "_"
    attributions = {q[1] for q in quads
                    if q[0] == PERSPECTIVES and q[2] == GRASP_IS_ATTRIBUTION_FOR
                    and q[1].local.startswith(prefix)}
    mentions = {q[3] for q in quads
                if q[0] == CLAIMS and q[1] == claim and q[2] == GAF_DENOTED_BY}
    mentions |= {q[1] for q in quads
                 if q[0] == PERSPECTIVES and q[2] == GAF_DENOTES and q[3] == claim}
    mentions |= {q[3] for q in quads
                 if q[1] in attributions and q[2] == GRASP_IS_ATTRIBUTION_FOR}

    out |= {q for q in quads if q[0] == PERSPECTIVES
            and (q[1] in attributions or q[1] in mentions)}
    values = {q[3] for q in quads if q[1] in attributions and q[2] == RDF_VALUE}
    out |= {q for q in quads
            if q[0] == PERSPECTIVES and q[1] in values and q[2] == RDF_TYPE}
    return out


def test_ekg_pattern_isomorphic_to_corrected_trig(carl_robot_annotated,
                                                  fixtures_root):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)

    with open(os.path.join(fixtures_root, "carl-robot-annotated", "rdf",
                           "statements2.trig"), "rb") as handle:
        reference = parse_trig(handle.read())

    claim = ns("robotWorld", "pills_locatedunder_table")
    emitted_cluster = _cluster(store, claim)
    reference_cluster = _cluster(reference, claim)
    assert emitted_cluster == reference_cluster

    # claim graph holds exactly its one triple
    assert store.claim_triple(claim) == (ns("robotWorld", "pills"),
                                         ns("robotMu", "locatedUnder"),
                                         ns("robotWorld", "table"))
    # Claims entry is denoted by the char0-39 mention only
    denoted_by = [q[3] for q in store.quads
                  if q[0] == CLAIMS and q[1] == claim and q[2] == GAF_DENOTED_BY]
    assert denoted_by == [ns("robotTalk", "chat1_utterance2_char0-39")]
    # chat attribution carries exactly CERTAIN+POSITIVE+NEUTRAL+NEUTRAL
    chat_attribution = ns(
        "robotTalk", "pills_locatedunder_table_CERTAIN-POSITIVE-NEUTRAL-NEUTRAL")
    assert set(store.attribution_values(chat_attribution)) == {
        ns("graspf", "CERTAIN"), ns("graspf", "POSITIVE"),
        ns("graspe", "NEUTRAL"), ns("grasps", "NEUTRAL")}
    # the visual mention carries the PROBABLE attribution
    visual_attribution = ns("robotTalk", "pills_locatedunder_table_PROBABLE")
    assert set(store.attribution_values(visual_attribution)) == {
        ns("graspf", "PROBABLE")}
    assert (PERSPECTIVES, visual_attribution, GRASP_IS_ATTRIBUTION_FOR,
            ns("robotTalk", "visual1_detection2_pixel0-3")) in store.quads


# ---------------------------------------------------------------------------
# Criterion: two-realities query and conflict detection


def test_two_realities_query_and_conflicts(carl_robot_annotated):
    store = GraphStore()
    emit_from_scenario(carl_robot_annotated, store)
    registry = person_registry(carl_robot_annotated)
    leolani = resolve_identity("Leolani", registry)
    carl = resolve_identity("Carl", registry)
    assert not isinstance(leolani, NewInstance)
    assert not isinstance(carl, NewInstance)

    as_leolani = store.query("robotWorld:pills", "robotMu:locatedUnder",
                             time=4000, source=leolani)
    assert [r.triple[2] for r in as_leolani] == [ns("robotWorld", "table")]
    assert as_leolani[0].polarity == "POSITIVE"
    assert as_leolani[0].certainty == "CERTAIN"

    as_carl = store.query("robotWorld:pills", "robotMu:locatedUnder",
                          time=1000, source=carl)
    assert as_carl and all(r.polarity == "NEGATIVE" for r in as_carl)

    groups = store.detect_conflicts("robotWorld:pills", "robotMu:locatedUnder")
    assert len(groups) == 1
    assert len(groups[0]) == 2


# ---------------------------------------------------------------------------
# Criterion: converter reproduces the fixture scenario


def test_converter_reproduces_fixture_scenario(fixtures_root, tmp_path):
    csv_path = os.path.join(fixtures_root, "carl-robot", "text", "carl-robot.csv")
    frames = os.path.join(fixtures_root, "carl-robot", "image")

    bundle = from_dialogue_csv(csv_path, "carl-robot")
    bundle.signals["image"] = from_frames(frames, "carl-robot")
    bundle.scenario.signals["image"] = "./image.json"

    report = validate_scenario(bundle)
    assert report.violations == []

    fixture = load_scenario(os.path.join(fixtures_root, "carl-robot"))
    assert bundle.scenario.ruler == fixture.scenario.ruler


# ---------------------------------------------------------------------------
# Property suites (1000 randomized cases each)

RUNS = settings(max_examples=1000, deadline=None)

_rulers = st.one_of(
    st.tuples(st.just("index"), st.integers(0, 60)),
    st.tuples(st.just("box"), st.tuples(st.integers(0, 50), st.integers(0, 50))),
    st.tuples(st.just("time"), st.integers(0, 5000)),
)


@RUNS
@given(kind_and_size=_rulers, a=st.integers(-10, 70), b=st.integers(-10, 70),
       c=st.integers(-10, 70), d=st.integers(-10, 70))
def test_property_segment_containment(kind_and_size, a, b, c, d):
    kind, size = kind_and_size
    if kind == "index":
        ruler = Index("r", 0, size)
        segment = Index("r", a, b)
        expected = 0 <= a <= b <= size
    elif kind == "time":
        ruler = TemporalRuler("r", 0, size)
        segment = TimeSegment("r", a, b)
        expected = 0 <= a <= b <= size
    else:
        width, height = size
        ruler = MultiIndex("r", [0, 0, width, height])
        segment = BoundingBox("r", [a, b, c, d])
        expected = 0 <= a <= c <= width and 0 <= b <= d <= height
    assert covers(ruler, segment) == expected


@st.composite
def _scenarios(draw):
    scenario_id = "gen"
    n_text = draw(st.integers(0, 3))
    n_image = draw(st.integers(0, 2))
    iri_pool = ["robotWorld:pills", "robotWorld:table", "robotWorld:carl"]
    signals: dict[str, list] = {"text": [], "image": []}
    for i in range(n_text):
        seq = draw(st.text("abc d", min_size=0, max_size=12))
        signal = TextSignal(id=f"text-{i}", modality="text", files=[],
                            time=TimeSegment(scenario_id, i * 10, i * 10),
                            mentions=[], ruler=Index(f"text-{i}", 0, len(seq)),
                            seq=seq)
        for j in range(draw(st.integers(0, 2))):
            start = draw(st.integers(0, max(0, len(seq))))
            stop = draw(st.integers(start, len(seq)))
            annotations = [Annotation("link", EntityLink(draw(st.sampled_from(iri_pool))),
                                      "gen", 0)]
            signal.mentions.append(Mention(f"m-text-{i}-{j}",
                                           [Index(f"text-{i}", start, stop)],
                                           annotations))
        signals["text"].append(signal)
    for i in range(n_image):
        signal = ImageSignal(id=f"img-{i}", modality="image", files=[],
                             time=TimeSegment(scenario_id, 5 + i, 5 + i),
                             mentions=[],
                             ruler=MultiIndex(f"img-{i}", [0, 0, 100, 100]))
        for j in range(draw(st.integers(0, 2))):
            x0 = draw(st.integers(0, 90))
            y0 = draw(st.integers(0, 90))
            value = draw(st.one_of(
                st.builds(EntityLink, st.sampled_from(iri_pool)),
                st.just(Face(instance=Person(id=draw(st.sampled_from(
                    ["p-1", "p-2"])), name="P")))))
            signal.mentions.append(Mention(
                f"m-img-{i}-{j}",
                [BoundingBox(f"img-{i}", [x0, y0, x0 + 5, y0 + 5])],
                [Annotation("link", value, "gen", 0)]))
        signals["image"].append(signal)
    scenario = Scenario(id=scenario_id, context=ScenarioContext(agent="robot"),
                        ruler=TemporalRuler(scenario_id, 0, 100),
                        signals={k: f"./{k}.json" for k, v in signals.items() if v})
    return ScenarioBundle(scenario=scenario,
                          signals={k: v for k, v in signals.items() if v})


@RUNS
@given(bundle=_scenarios(), ghost=st.booleans())
def test_property_container_closure(bundle, ghost):
    if ghost:
        victims = [m for s in bundle.all_signals() for m in s.mentions]
        if victims:
            victims[0].segment[0].container_id = "ghost"
            with pytest.raises(DanglingContainer):
                container_closure(bundle)
            return
    closure = container_closure(bundle)
    referenced = {bundle.scenario.ruler.container_id}
    for signal in bundle.all_signals():
        referenced.add(signal.time.container_id)
        referenced.add(signal.ruler.container_id)
        for mention in signal.mentions:
            referenced.update(seg.container_id for seg in mention.segment)
    assert referenced <= set(closure)


@RUNS
@given(bundle=_scenarios())
def test_property_coreference_equals_brute_force(bundle):
    index = coreference_index(bundle)
    brute: dict[str, set] = {}
    for modality, signals in bundle.signals.items():
        for signal in signals:
            for mention in signal.mentions:
                for annotation in mention.annotations:
                    value = annotation.value
                    key = None
                    if isinstance(value, EntityLink):
                        key = value.iri
                    elif isinstance(value, Face) and value.instance:
                        key = value.instance.id
                    if key is not None:
                        brute.setdefault(key, set()).add(
                            (modality, signal.id, mention.id))
    assert {k: set(v) for k, v in index.items()} == brute
    for entries in index.values():
        assert entries == sorted(entries, key=lambda e: (e[0],))  # modality-major


_locals = st.sampled_from(["pills", "table", "carl", "lani", "box-1", "a_b"])
_literals = st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)


@st.composite
def _stores(draw):
    quads = []
    seen_triples = set()
    for _ in range(draw(st.integers(0, 12))):
        graph = draw(st.sampled_from([INSTANCES, INTERACTIONS, CLAIMS,
                                      PERSPECTIVES]))
        subject = ns("robotWorld", draw(_locals))
        predicate = draw(st.sampled_from([RDF_TYPE, ns("rdfs", "label"),
                                          ns("robotMu", "id")]))
        obj = draw(st.one_of(
            st.builds(lambda l: Literal(l), _literals),
            st.builds(lambda l: Literal(l, ns("xml1", "string")), _literals),
            st.sampled_from([ns("gaf", "Instance"), ns("robotMu", "object")])))
        if (subject, predicate, obj) in seen_triples:
            continue
        seen_triples.add((subject, predicate, obj))
        quads.append((graph, subject, predicate, obj))
    for index in range(draw(st.integers(0, 3))):
        claim = ns("robotWorld", f"claim_{index}")
        triple = (ns("robotWorld", f"s{index}"), ns("robotMu", "p"),
                  ns("robotWorld", draw(_locals)))
        quads.append((claim, *triple))
    return quads


@RUNS
@given(quads=_stores())
def test_property_trig_round_trip(quads):
    store = GraphStore()
    store.add_batch(quads)
    assert parse_trig(serialize_trig(store)).quads == store.quads


_claim_ops = st.lists(st.tuples(
    _locals, st.sampled_from(["locatedUnder", "see", "know"]), _locals,
    st.sampled_from([None, {"certainty": "CERTAIN"},
                     {"polarity": "NEGATIVE"},
                     {"certainty": "PROBABLE", "polarity": "POSITIVE"}]),
    st.booleans()), max_size=6)


def _apply_ops(store, ops):
    emitter = Emitter(store)
    for i, (subject, predicate, obj, values, with_mention) in enumerate(ops):
        mention = None
        if with_mention:
            mention = MentionRef(
                iri=ns("robotTalk", f"chat1_utterance{i + 1}_char0-5"),
                kind=GRASP_STATEMENT,
                derived_from=ns("robotTalk", f"chat1_utterance{i + 1}"),
                attributed_to=ns("robotFriends", "lani"), time_ms=i)
        emitter.emit_claim((ns("robotWorld", subject),
                            ns("robotMu", predicate),
                            ns("robotWorld", obj)),
                           mention=mention, values=values)
        emitter.flush()
        yield


@RUNS
@given(ops=_claim_ops)
def test_property_partition_after_every_emission(ops):
    store = GraphStore()
    for _ in _apply_ops(store, ops):
        validate_partition(store.quads)


@RUNS
@given(ops=_claim_ops)
def test_property_monotonic_growth(ops):
    store = GraphStore()
    sizes = [len(store)]
    for _ in _apply_ops(store, ops):
        sizes.append(len(store))
    assert sizes == sorted(sizes)


_names = st.sampled_from(["Ann", "Bob", "Cam", "Dee"])


@RUNS
@given(registry=st.lists(st.tuples(st.uuids().map(str), _names), max_size=8),
       query=_names, rng=st.randoms())
def test_property_first_match_permutation_invariance(registry, query, rng):
    result = resolve_identity(query, registry)
    matches = [i for i, (_, name) in enumerate(registry)
               if name.casefold() == query.casefold()]
    if not matches:
        assert isinstance(result, NewInstance)
        return
    first = matches[0]
    assert result == registry[first][0]
    tail = list(registry[first + 1:])
    rng.shuffle(tail)
    assert resolve_identity(query, registry[:first + 1] + tail) == result
