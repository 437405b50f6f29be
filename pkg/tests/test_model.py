import copy

import pytest

from emissor.model import (
    Annotation,
    BoundingBox,
    DanglingContainer,
    EmptyAnnotationList,
    EntityLink,
    Index,
    Label,
    OutOfBounds,
    Scenario,
    ScenarioBundle,
    ScenarioContext,
    TemporalRuler,
    Token,
    UnknownBase,
    add_mention,
    container_closure,
    coreference_index,
    stack_annotation,
    validate_scenario,
)

TEXT_SIGNAL_1 = "85c27957-9b18-497e-9557-761b02bdbc21"


def empty_scenario(scenario_id="empty"):
    scenario = Scenario(id=scenario_id, context=ScenarioContext(agent="robot"),
                        ruler=TemporalRuler(container_id=scenario_id, start=0, end=1000),
                        signals={})
    return ScenarioBundle(scenario=scenario, signals={})


class TestContainerClosure:
    def test_carl_robot_resolves_scenario_and_token_ids(self, carl_robot):
        closure = container_closure(carl_robot)
        assert "carl-robot" in closure
        assert TEXT_SIGNAL_1 in closure
        token_ids = [m.annotations[0].value.id
                     for s in carl_robot.signals["text"] for m in s.mentions
                     if isinstance(m.annotations[0].value, Token)]
        assert token_ids and all(t in closure for t in token_ids)

    def test_empty_scenario_closure_is_the_scenario(self):
        closure = container_closure(empty_scenario())
        assert set(closure) == {"empty"}

    def test_removed_signal_dangles(self, carl_robot):
        broken = copy.deepcopy(carl_robot)
        # keep the mentions but drop their carrier from the known containers
        lost = broken.signals["text"].pop(0)
        broken.signals["text"][0].mentions.extend(lost.mentions)
        with pytest.raises(DanglingContainer):
            container_closure(broken)


class TestValidateScenario:
    def test_carl_robot_fixture_is_clean(self, carl_robot):
        assert validate_scenario(carl_robot).violations == []

    def test_no_signals_vacuously_clean(self):
        assert validate_scenario(empty_scenario()).violations == []

    def test_stop_past_seq_end_is_out_of_bounds(self, carl_robot):
        broken = copy.deepcopy(carl_robot)
        signal = next(s for s in broken.signals["text"] if s.id == TEXT_SIGNAL_1)
        assert len(signal.seq) == 48
        segment = signal.mentions[-1].segment[0]
        segment.stop = 49
        report = validate_scenario(broken)
        assert [v.kind for v in report.violations] == ["out_of_bounds"]

    def test_missing_media_reported(self, carl_robot):
        broken = copy.deepcopy(carl_robot)
        broken.signals["image"][0].files = ["image/not-there.jpg"]
        report = validate_scenario(broken)
        assert any(v.kind == "missing_media" for v in report.violations)

    def test_inverted_segment_reported(self, carl_robot):
        broken = copy.deepcopy(carl_robot)
        segment = broken.signals["text"][0].mentions[0].segment[0]
        segment.start, segment.stop = 5, 2
        report = validate_scenario(broken)
        assert any(v.kind == "inverted_extent" for v in report.violations)


class TestCoreference:
    def test_face_instance_groups_both_frames(self, carl_robot):
        index = coreference_index(carl_robot)
        person = "bc913d64-a597-4876-a3fe-fe47472cd274"
        entries = index[person]
        assert len(entries) == 2
        assert [e[0] for e in entries] == ["image", "image"]
        assert entries[0][1] == "21830691-4410-45f2-b611-f61cb4dbc0de"  # frame0 first

    def test_token_only_scenario_has_empty_index(self, carl_robot):
        text_only = ScenarioBundle(scenario=carl_robot.scenario,
                                   signals={"text": carl_robot.signals["text"]},
                                   root=carl_robot.root)
        assert coreference_index(text_only) == {}

    def test_cross_modality_link_groups_with_brute_force(self, carl_robot):
        bundle = copy.deepcopy(carl_robot)
        iri = "robotWorld:pills"
        text_signal = bundle.signals["text"][0]
        image_signal = bundle.signals["image"][0]
        add_mention(text_signal, [Index(text_signal.id, 18, 23)],
                    [Annotation("link", EntityLink(iri), "test", 1)])
        add_mention(image_signal,
                    [BoundingBox(image_signal.id, [10, 10, 50, 50])],
                    [Annotation("link", EntityLink(iri), "test", 1)])
        index = coreference_index(bundle)

        brute = {}
        for modality in bundle.signals:
            for signal in bundle.signals[modality]:
                for mention in signal.mentions:
                    for annotation in mention.annotations:
                        key = None
                        if isinstance(annotation.value, EntityLink):
                            key = annotation.value.iri
                        elif getattr(annotation.value, "instance", None) is not None:
                            key = annotation.value.instance.id
                        if key:
                            brute.setdefault(key, set()).add(
                                (modality, signal.id, mention.id))
        assert {k: set(v) for k, v in index.items()} == brute
        assert len(index[iri]) == 2


class TestAddMention:
    def test_token_mention_like_fixture(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        token = Token.create("I")
        mention = add_mention(signal, [Index(signal.id, 0, 1)],
                              [Annotation("token", token, "test", None)])
        assert len(mention.segment) == 1 and len(mention.annotations) == 1
        assert mention.annotations[0].timestamp is not None
        assert signal.seq[0:1] == "I"

    def test_full_frame_box_accepted_at_equality(self, carl_robot):
        signal = carl_robot.signals["image"][0]
        mention = add_mention(signal, [BoundingBox(signal.id, [0, 0, 3840, 1080])],
                              [Annotation("object", Label("frame"), "test", 0)])
        assert mention in signal.mentions

    def test_box_beyond_ruler_rejected(self, carl_robot):
        signal = carl_robot.signals["image"][0]
        with pytest.raises(OutOfBounds):
            add_mention(signal, [BoundingBox(signal.id, [4000, 0, 4100, 100])],
                        [Annotation("object", Label("ghost"), "test", 0)])

    def test_empty_annotations_rejected(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        with pytest.raises(EmptyAnnotationList):
            add_mention(signal, [Index(signal.id, 0, 1)], [])


class TestStackAnnotation:
    def test_entity_link_on_token(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        token_id = signal.mentions[0].annotations[0].value.id
        mention = stack_annotation(signal, token_id,
                                   Annotation("link", EntityLink("robotWorld:carl"),
                                              "test", 1))
        assert mention.segment[0].container_id == token_id
        closure = container_closure(carl_robot)
        assert token_id in closure and signal.id in closure

    def test_unknown_base_rejected(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        with pytest.raises(UnknownBase):
            stack_annotation(signal, "no-such-value",
                             Annotation("label", Label("x"), "test", 1))

    def test_stacked_level_validates(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        token_id = signal.mentions[0].annotations[0].value.id
        stack_annotation(signal, token_id,
                         Annotation("sentiment", Label("positive"), "test", 1))
        assert validate_scenario(carl_robot).violations == []
