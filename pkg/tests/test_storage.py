import json
import os
import shutil

import pytest

from emissor.storage import (
    MalformedJson,
    MissingMedia,
    MissingScenarioFile,
    RowOutOfRange,
    SchemaViolation,
    bundled_context,
    load_scenario,
    resolve_media,
    save_scenario,
)


def test_carl_robot_scenario_header(carl_robot):
    scenario = carl_robot.scenario
    assert scenario.id == "carl-robot"
    assert (scenario.ruler.start, scenario.ruler.end) == (0, 11133)
    assert scenario.context.speaker.name == "Carl"
    assert scenario.context.agent == "robot_agent"
    assert set(scenario.signals) == {"image", "text"}


def test_text_signals_shape(carl_robot):
    texts = sorted(carl_robot.signals["text"], key=lambda s: s.time.start)
    assert len(texts) == 3
    assert texts[0].seq == "I need to take my pills, but I cannot find them."
    assert texts[0].ruler.stop == 48 == len(texts[0].seq)
    # the published final signal has an inverted extent; import swaps it
    assert (texts[2].time.start, texts[2].time.end) == (7133, 10976)
    assert any("inverted" in w for w in carl_robot.warnings)


def test_epoch_second_timestamps_converted(carl_robot):
    annotation = carl_robot.signals["text"][0].mentions[0].annotations[0]
    assert annotation.timestamp == 1616442473000
    assert any("epoch seconds" in w for w in carl_robot.warnings)
    # ms offsets stay untouched
    image_annotation = carl_robot.signals["image"][0].mentions[0].annotations[0]
    assert image_annotation.timestamp == 0


def test_duplicate_annotation_type_keeps_last(carl_robot):
    annotation = carl_robot.signals["image"][0].mentions[0].annotations[0]
    assert annotation.type == "person"
    assert any("duplicate key" in w for w in carl_robot.warnings)


def test_at_id_alias_accepted(carl_robot):
    frame30 = next(s for s in carl_robot.signals["image"]
                   if s.time.start == 1000)
    face = frame30.mentions[0].annotations[0].value
    assert face.instance.id == "bc913d64-a597-4876-a3fe-fe47472cd274"
    assert face.faceprob == 1.0


def test_missing_scenario_file(tmp_path):
    os.makedirs(tmp_path / "nothing")
    with pytest.raises(MissingScenarioFile):
        load_scenario(str(tmp_path / "nothing"))


def test_empty_signals_map_loads(tmp_path):
    folder = tmp_path / "bare"
    folder.mkdir()
    (folder / "bare.json").write_text(json.dumps({
        "type": "Scenario", "id": "bare",
        "context": {"agent": "robot"},
        "ruler": {"type": "TemporalRuler", "container_id": "bare",
                  "start": 0, "end": 10},
        "signals": {},
    }))
    bundle = load_scenario(str(folder))
    assert bundle.signals == {}


def test_malformed_json_reports_position(tmp_path, fixtures_root):
    folder = tmp_path / "bad"
    shutil.copytree(os.path.join(fixtures_root, "carl-robot"), folder)
    (folder / "bad.json").write_text("{ nope")
    os.remove(folder / "carl-robot.json")
    with pytest.raises(MalformedJson) as err:
        load_scenario(str(folder))
    assert err.value.position >= 0


def test_bounds_of_length_three_is_schema_violation(tmp_path, fixtures_root):
    folder = tmp_path / "carl-robot"
    shutil.copytree(os.path.join(fixtures_root, "carl-robot"), folder)
    data = json.loads((folder / "image.json").read_text())
    data[0]["mentions"][0]["segment"][0]["bounds"] = [2830, 241, 3034]
    (folder / "image.json").write_text(json.dumps(data))
    with pytest.raises(SchemaViolation) as err:
        load_scenario(str(folder))
    assert err.value.pointer == "/0/mentions/0/segment/0/bounds"


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["carl-robot", "carl-robot-annotated"])
    def test_load_save_load_structural_equality(self, fixtures_root, tmp_path, name):
        first = load_scenario(os.path.join(fixtures_root, name))
        out = tmp_path / name
        save_scenario(first, str(out))
        second = load_scenario(str(out))
        assert first.scenario == second.scenario
        assert first.signals == second.signals

    @pytest.mark.parametrize("name", ["carl-robot", "carl-robot-annotated"])
    def test_double_save_byte_identity(self, fixtures_root, tmp_path, name):
        bundle = load_scenario(os.path.join(fixtures_root, name))
        first, second = tmp_path / "one" / name, tmp_path / "two" / name
        save_scenario(bundle, str(first))
        save_scenario(load_scenario(str(first)), str(second))
        for dirpath, _, filenames in os.walk(first):
            for filename in filenames:
                if not filename.endswith(".json"):
                    continue
                a = os.path.join(dirpath, filename)
                b = a.replace(str(first), str(second))
                assert open(a, "rb").read() == open(b, "rb").read(), filename

    def test_unknown_keys_survive_round_trip(self, fixtures_root, tmp_path):
        folder = tmp_path / "carl-robot"
        shutil.copytree(os.path.join(fixtures_root, "carl-robot"), folder)
        data = json.loads((folder / "text.json").read_text())
        data[0]["custom_flag"] = {"nested": [1, 2, 3]}
        data[0]["mentions"][0]["reviewer"] = "lenka"
        (folder / "text.json").write_text(json.dumps(data))

        bundle = load_scenario(str(folder))
        out = tmp_path / "saved" / "carl-robot"
        save_scenario(bundle, str(out))
        saved = json.loads((out / "text.json").read_text())
        assert saved[0]["custom_flag"] == {"nested": [1, 2, 3]}
        assert saved[0]["mentions"][0]["reviewer"] == "lenka"

    def test_empty_scenario_saves_one_file(self, tmp_path):
        from tests.test_model import empty_scenario

        bundle = empty_scenario("solo")
        out = tmp_path / "solo"
        save_scenario(bundle, str(out))
        assert sorted(os.listdir(out)) == ["solo.json"]

    def test_context_iri_written(self, carl_robot, tmp_path):
        out = tmp_path / "carl-robot"
        save_scenario(carl_robot, str(out))
        data = json.loads((out / "carl-robot.json").read_text())
        assert data["@context"] == "http://emissor.org/jsonldcontext.jsonld"


def test_bundled_context_matches_published_document():
    context = bundled_context()["@context"]
    assert context["id"] == "@id"
    assert context["type"] == "@type"
    assert context["container_id"] == {"@type": "@id"}
    assert context["Mention"] == "grasp:Mention"
    assert context["@base"] == "http://experiment.my/"


class TestResolveMedia:
    def test_csv_fragment_row_two(self, carl_robot):
        signal = next(s for s in carl_robot.signals["text"]
                      if s.files == ["text/carl-robot.csv#2"])
        media = resolve_media(signal, carl_robot.root)
        assert media[0].row == 2
        assert media[0].load() == "Oh! Got it. Thank you."

    def test_fragment_zero_is_first_data_row(self, carl_robot):
        signal = next(s for s in carl_robot.signals["text"]
                      if s.files == ["text/carl-robot.csv#0"])
        assert resolve_media(signal, carl_robot.root)[0].load().startswith("I need")

    def test_row_out_of_range(self, carl_robot):
        signal = carl_robot.signals["text"][0]
        signal = type(signal)(**{**signal.__dict__})
        signal.files = ["text/carl-robot.csv#3"]
        with pytest.raises(RowOutOfRange):
            resolve_media(signal, carl_robot.root)

    def test_missing_media(self, carl_robot):
        signal = carl_robot.signals["image"][0]
        signal = type(signal)(**{**signal.__dict__})
        signal.files = ["image/gone.jpg"]
        with pytest.raises(MissingMedia):
            resolve_media(signal, carl_robot.root)

    def test_plain_path_resolves_bytes(self, carl_robot):
        signal = carl_robot.signals["image"][0]
        media = resolve_media(signal, carl_robot.root)
        assert media[0].row is None
        assert media[0].load()[:2] == b"\xff\xd8"  # JPEG magic
