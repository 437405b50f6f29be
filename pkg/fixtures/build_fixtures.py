"""Regenerate the CarLani fixtures.

carl-robot/ reconstructs the published CarLani excerpt: the elided token
mentions are filled in deterministically, and the excerpt's data quirks
(duplicate annotation "type" keys, an "@id" alias, epoch-second timestamps, one
inverted temporal ruler) are preserved on purpose so the importer's
normalization path stays exercised. carl-robot-annotated/ adds the triple,
entity-link and perspective annotations that feed the knowledge-graph demo,
plus the corrected statements2.trig. See README.md here for the documented
corrections.

Run from the repository root: python fixtures/build_fixtures.py
"""

from __future__ import annotations

import json
import os
import shutil
import uuid

from PIL import Image as PILImage

from emissor.model import (
    Annotation,
    BoundingBox,
    EntityLink,
    Index,
    Mention,
    Person,
    TripleValue,
)
from emissor.segmentation import tokenize
from emissor.storage import load_scenario, save_scenario

HERE = os.path.dirname(os.path.abspath(__file__))

UTTERANCES = [
    ("Carl", "I need to take my pills, but I cannot find them.", 0),
    ("Leolani", "I found them. They are under the table.", 3933),
    ("Carl", "Oh! Got it. Thank you.", 7133),
]

TEXT_SIGNAL_IDS = [
    "85c27957-9b18-497e-9557-761b02bdbc21",
    "9b2adcba-17ec-4e98-9429-4901ed04ebbe",  # middle signal is reconstructed
    "2142b6d8-4cda-481b-a056-1b6d874da648",
]

# (mention id, token id) pairs published for the first and last tokens of
# signals 0 and 2; everything else is minted deterministically below.
PUBLISHED_TOKEN_IDS = {
    (0, "first"): ("0d830564-ab25-4aac-82f6-f34fc61b0481",
                   "b1ec4a11-cd35-4c10-be47-244147da1086"),
    (0, "last"): ("a930c234-f3f2-4932-a32d-bde0acc2aafd",
                  "13d77c30-4f10-481a-b0c4-3b80532b038f"),
    (2, "first"): ("c851ca48-81b6-44fe-a772-9f62840ca2f6",
                   "d7770947-0be5-413f-9c1e-4e9d130e6a41"),
    (2, "last"): ("e62ae54b-bbb4-4464-8796-fe1a5ce22fac",
                  "fb7a3f36-11c4-486c-bd60-aeedd4377bb7"),
}

# The final signal's inverted extent is preserved from the excerpt.
SIGNAL_TIMES = [(0, 0), (3933, 3933), (10976, 7133)]

ANNOTATION_TIMESTAMP = 1616442473  # epoch seconds, as published

CSV = """speaker,utterance,time
Carl,"I need to take my pills, but I cannot find them.",0
Leolani,"I found them. They are under the table.",3933
Carl,"Oh! Got it. Thank you.",7133
"""

SCENARIO_JSON = """{
  "@context" : "http://emissor.org/jsonldcontext.jsonld",
  "type": "Scenario",
  "id": "carl-robot",
  "context": {
    "agent": "robot_agent",
    "objects": [],
    "persons": [],
    "speaker": {
      "@context" : "http://schema.org/docs/jsonldcontext.jsonld",
      "id": "bc913d64-a597-4876-a3fe-fe47472cd274",
      "type": "Person",
      "birthDate": "1995-04-09T20:00:00Z",
      "gender": "Male",
      "name": "Carl"
    }
  },
  "ruler": {
    "type": "TemporalRuler",
    "container_id": "carl-robot",
    "end": 11133,
    "start": 0
  },
  "signals": {
    "image": "./image.json",
    "text": "./text.json"
  }
}
"""


def _image_signal_json(signal_id: str, frame: str, start: int, end: int,
                       mention: str) -> str:
    return """{
  "@context" : "http://emissor.org/jsonldcontext.jsonld",
  "type": "ImageSignal",
  "id": "%s",
  "files": [
    "image/%s"
  ],
  "modality": "image",
  "time": {
    "type": "TimeSegment",
    "container_id": "carl-robot",
    "start": %d,
    "end": %d
  },
  "ruler": {
    "type": "MultiIndex",
    "container_id": "%s",
    "bounds": [0, 0, 3840, 1080]
  },
  "mentions": [%s]
}""" % (signal_id, frame, start, end, signal_id, mention)


FRAME0_MENTION = """
    {
      "type": "Mention",
      "id": "54920da9-41d4-421e-b3f4-7955e71f053a",
      "annotations": [
        {
          "type": "Annotation",
          "source": "machine",
          "timestamp": 0,
          "type": "person",
          "value": {
            "type": "Face",
            "instance": {
              "@context" : "http://schema.org/docs/jsonldcontext.jsonld",
              "id": "bc913d64-a597-4876-a3fe-fe47472cd274",
              "type": "Person",
              "birthDate": "1995-04-09T20:00:00Z",
              "gender": "Male",
              "name": "Speaker"
            },
            "age": 23,
            "gender": "male",
            "faceprob": 1.0
          }
        }
      ],
      "segment": [
        {
          "type": "BoundingBox",
          "container_id": "21830691-4410-45f2-b611-f61cb4dbc0de",
          "bounds": [2830, 241, 3034, 521]
        }
      ]
    }
  """

FRAME30_MENTION = """
    {
      "type": "Mention",
      "id": "92af1ea9-41d4-421e-b3f4-7955e71a1a97",
      "annotations": [
        {
          "type": "Annotation",
          "source": "machine",
          "timestamp": 1000,
          "type": "person",
          "value": {
            "type": "Face",
            "instance": {
              "@context" : "http://schema.org/docs/jsonldcontext.jsonld",
              "@id": "bc913d64-a597-4876-a3fe-fe47472cd274",
              "type": "Person",
              "birthDate": "1995-04-09T20:00:00Z",
              "gender": "Male",
              "name": "Speaker"
            },
            "age": 21,
            "gender": "male",
            "faceprob": 1.0
          }
        }
      ],
      "segment": [
        {
          "type": "BoundingBox",
          "container_id": "88a31791-4410-45f2-b611-f61cb4d321ff",
          "bounds": [2831, 235, 3036, 514]
        }
      ]
    }
  """

IMAGE_SIGNALS = [
    ("21830691-4410-45f2-b611-f61cb4dbc0de", "carl-robot-000_frame0_0.jpg",
     0, 33, FRAME0_MENTION),
    ("88a31791-4410-45f2-b611-f61cb4d321ff", "carl-robot-000_frame30_1000.jpg",
     1000, 1033, FRAME30_MENTION),
    ("4a7c1b22-0f3d-45a9-9cfa-52c2f01bd071", "carl-robot-000_frame60_2000.jpg",
     2000, 2033, ""),
]

STATEMENTS2_TRIG = """@prefix robotContext: <http://emissor.org/robot/context/> .
@prefix robotWorld: <http://emissor.org/robot/world/> .
@prefix robotTalk: <http://emissor.org/robot/talk/> .
@prefix robotFriends: <http://emissor.org/robot/friends/> .
@prefix robotInputs: <http://emissor.org/robot/inputs/> .
@prefix robotMu: <http://emissor.org/robot/ontology/> .
@prefix eps: <http://emissor.org/robot/episodic#> .
@prefix xml1: <https://www.w3.org/TR/xmlschema-2/#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix wdt: <http://www.wikidata.org/prop/direct/> .
@prefix ceo: <http://www.newsreader-project.eu/domain-ontology#> .
@prefix gaf: <http://groundedannotationframework.org/gaf#> .
@prefix ns1: <urn:x-rdflib:> .
@prefix wd: <http://www.wikidata.org/entity/> .
@prefix grasp: <http://groundedannotationframework.org/grasp#> .
@prefix xml: <http://www.w3.org/XML/1998/namespace> .
@prefix grasps: <http://groundedannotationframework.org/grasp/sentiment#> .
@prefix graspe: <http://groundedannotationframework.org/grasp/emotion#> .
@prefix sem: <http://semanticweb.cs.vu.nl/2009/11/sem/> .
@prefix prov: <http://www.w3.org/ns/prov#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix time: <http://www.w3.org/2006/time#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
@prefix wgs: <http://www.w3.org/2003/01/geo/wgs84_pos#> .
@prefix graspf: <http://groundedannotationframework.org/grasp/factuality#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .


robotWorld:Instances {
  robotWorld:lani a gaf:Instance, robotMu:robot ;
                  rdfs:label "lani" .
  robotWorld:pills a gaf:Instance, robotMu:object ;
                  rdfs:label "pills" ;
                  gaf:denotedIn robotTalk:chat1_utterance2_char0-39 .
  robotWorld:pills-277239 a gaf:Instance, robotMu:object, robotMu:pills ;
                  rdfs:label "pills-277239" ;
                  robotMu:id "277239"^^xml1:string ;
                  gaf:denotedIn robotTalk:visual1_detection2_pixel0-3 ;
                  eps:hasContext robotContext:context212127 .
  robotWorld:table a gaf:Instance, robotMu:object ;
                  rdfs:label "table" ;
                  gaf:denotedIn robotTalk:chat1_utterance2_char0-39 .
  robotWorld:table-208510 a gaf:Instance, robotMu:object, robotMu:table ;
                  rdfs:label "table-208510" ;
                  robotMu:id "208510"^^xml1:string ;
                  gaf:denotedIn robotTalk:visual1_detection2_pixel0-3 ;
                  eps:hasContext robotContext:context212127 .
}

robotTalk:Interactions {
  robotWorld:Netherlands a robotMu:location, sem:Place, robotMu:country ;
                  rdfs:label "Netherlands" .
  robotWorld:Gelderland a robotMu:location, sem:Place, robotMu:region ;
                  rdfs:label "Gelderland" .
  robotWorld:Apeldoorn a robotMu:location, sem:Place, robotMu:city ;
                  rdfs:label "Apeldoorn" .
  robotTalk:chat1 a sem:Event, grasp:Chat ;
                  rdfs:label "chat1" ;
                  robotMu:id "1"^^xml1:string ;
                  sem:hasSubEvent robotTalk:chat1_utterance2 .
  robotTalk:visual1 a sem:Event, grasp:Visual ;
                  rdfs:label "visual1" ;
                  robotMu:id "1"^^xml1:string ;
                  sem:hasSubEvent robotTalk:visual1_detection2 .
  robotTalk:chat1_utterance2 a sem:Event, grasp:Utterance ;
                  rdfs:label "chat1_utterance2" ;
                  robotMu:id "2"^^xml1:string ;
                  sem:hasActor robotFriends:lani .
  robotTalk:visual1_detection2 a sem:Event, grasp:Detection ;
                  rdfs:label "visual1_detection2" ;
                  robotMu:id "2"^^xml1:string ;
                  sem:hasActor robotInputs:front-camera .
  robotInputs:front-camera a gaf:Instance, grasp:Source, sem:Actor, robotMu:sensor ;
                  rdfs:label "front-camera" .
  robotFriends:lani a robotMu:person, gaf:Instance, grasp:Source, sem:Actor ;
                  rdfs:label "lani" .
  robotContext:home a robotMu:location, sem:Place ;
                  rdfs:label "home" ;
                  robotMu:id "251375"^^xml1:string ;
                  robotMu:in robotWorld:Netherlands, robotWorld:Gelderland, robotWorld:Apeldoorn .
  robotContext:context212127 a eps:Context ;
                  rdfs:label "context212127" ;
                  robotMu:id "212127"^^xml1:string ;
                  eps:hasDetection robotWorld:pills-277239, robotWorld:table-208510 ;
                  sem:hasBeginTimeStamp robotContext:2021-03-12 ;
                  sem:hasEvent robotTalk:chat1, robotTalk:visual1 ;
                  sem:hasPlace robotContext:home .
  robotContext:2021-03-12 a sem:Time, time:DateTimeDescription ;
                  rdfs:label "2021-03-12" ;
                  time:day "12"^^xml1:gDay ;
                  time:month "3"^^xml1:gMonthDay ;
                  time:unitType time:unitDay ;
                  time:year "2021"^^xml1:gYear .
}

robotWorld:Claims {
  robotWorld:lani_sense_front-camera a gaf:Assertion, sem:Event ;
                  rdfs:label "lani_sense_front-camera" .
  robotWorld:lani_know_lani a gaf:Assertion, sem:Event ;
                  rdfs:label "lani_know_lani" ;
                  owl:sameAs robotWorld:lani .
  robotWorld:pills_locatedunder_table a gaf:Assertion, sem:Event ;
                  rdfs:label "pills_locatedunder_table" ;
                  gaf:denotedBy robotTalk:chat1_utterance2_char0-39 .
  robotWorld:lani_see_pills-277239 a gaf:Assertion, sem:Event ;
                  rdfs:label "lani_see_pills-277239" ;
                  gaf:denotedBy robotTalk:visual1_detection2_pixel0-3 ;
                  eps:hasContext robotContext:context212127 .
  robotWorld:lani_see_table-208510 a gaf:Assertion, sem:Event ;
                  rdfs:label "lani_see_table-208510" ;
                  gaf:denotedBy robotTalk:visual1_detection2_pixel0-3 ;
                  eps:hasContext robotContext:context212127 .
}

robotTalk:Perspectives {
  robotTalk:chat1_utterance2_char0-39 a gaf:Mention, grasp:Statement ;
                  rdfs:label "chat1_utterance2_char0-39" ;
                  rdf:value "I found them. They are under the table."^^xml1:string ;
                  prov:wasDerivedFrom robotTalk:chat1_utterance2 ;
                  gaf:denotes robotWorld:pills_locatedunder_table ;
                  gaf:containsDenotation robotWorld:pills, robotWorld:table ;
                  grasp:wasAttributedTo robotFriends:lani ;
                  grasp:hasAttribution robotTalk:pills_locatedunder_table_CERTAIN-POSITIVE-NEUTRAL-NEUTRAL .
  robotTalk:visual1_detection2_pixel0-3 a gaf:Mention, grasp:Experience ;
                  rdfs:label "visual1_detection2_pixel0-3" ;
                  prov:wasDerivedFrom robotTalk:visual1_detection2 ;
                  gaf:denotes robotWorld:lani_see_pills-277239, robotWorld:lani_see_table-208510 ;
                  gaf:containsDenotation robotWorld:pills-277239, robotWorld:table-208510 ;
                  grasp:wasAttributedTo robotInputs:front-camera ;
                  grasp:hasAttribution robotTalk:pills_locatedunder_table_PROBABLE .
  robotTalk:pills_locatedunder_table_CERTAIN-POSITIVE-NEUTRAL-NEUTRAL a grasp:Attribution ;
                  rdfs:label "pills_locatedunder_table_CERTAIN-POSITIVE-NEUTRAL-NEUTRAL" ;
                  rdf:value graspf:CERTAIN, graspf:POSITIVE, graspe:NEUTRAL, grasps:NEUTRAL ;
                  grasp:isAttributionFor robotTalk:chat1_utterance2_char0-39 .
  robotTalk:pills_locatedunder_table_PROBABLE a grasp:Attribution ;
                  rdfs:label "pills_locatedunder_table_PROBABLE" ;
                  rdf:value graspf:PROBABLE ;
                  grasp:isAttributionFor robotTalk:visual1_detection2_pixel0-3 .
  graspe:NEUTRAL a grasp:AttributionValue, graspe:EmotionValue .
  grasps:NEUTRAL a grasp:AttributionValue, grasps:SentimentValue .
  graspf:CERTAIN a grasp:AttributionValue, graspf:CertaintyValue .
  graspf:POSITIVE a grasp:AttributionValue, graspf:PolarityValue .
  graspf:PROBABLE a grasp:AttributionValue, graspf:CertaintyValue .
}

robotWorld:lani_know_lani {
  robotWorld:lani robotMu:know robotFriends:lani .
}

robotWorld:lani_sense_front-camera {
  robotWorld:lani robotMu:sense robotInputs:front-camera .
}

robotWorld:pills_locatedunder_table {
  robotWorld:pills robotMu:locatedUnder robotWorld:table .
}

robotWorld:lani_see_pills-277239 {
  robotWorld:lani robotMu:see robotWorld:pills-277239 .
}

robotWorld:lani_see_table-208510 {
  robotWorld:lani robotMu:see robotWorld:table-208510 .
}
"""


def _fixed_uuid(seed: str) -> str:
    return str(uuid.uuid5(uuid.NAMESPACE_URL, f"http://emissor.org/fixtures/{seed}"))


def _token_mention(signal_id: str, signal_index: int, token_index: int,
                   value: str, start: int, stop: int, n_tokens: int) -> dict:
    if token_index == 0 and (signal_index, "first") in PUBLISHED_TOKEN_IDS:
        mention_id, token_id = PUBLISHED_TOKEN_IDS[(signal_index, "first")]
    elif token_index == n_tokens - 1 and (signal_index, "last") in PUBLISHED_TOKEN_IDS:
        mention_id, token_id = PUBLISHED_TOKEN_IDS[(signal_index, "last")]
    else:
        mention_id = _fixed_uuid(f"mention/{signal_index}/{token_index}")
        token_id = _fixed_uuid(f"token/{signal_index}/{token_index}")
    return {
        "type": "Mention",
        "id": mention_id,
        "annotations": [
            {
                "source": "annotation_tool",
                "timestamp": ANNOTATION_TIMESTAMP,
                "type": "token",
                "value": {
                    "id": token_id,
                    "ruler": {"container_id": token_id, "type": "AtomicRuler"},
                    "type": "Token",
                    "value": value,
                },
            }
        ],
        "segment": [
            {"container_id": signal_id, "start": start, "stop": stop, "type": "Index"}
        ],
    }


def _text_signal_json(index: int) -> dict:
    _, utterance, _ = UTTERANCES[index]
    signal_id = TEXT_SIGNAL_IDS[index]
    tokens = tokenize(utterance)
    start, end = SIGNAL_TIMES[index]
    return {
        "@context": "http://emissor.org/jsonldcontext.jsonld",
        "files": [f"text/carl-robot.csv#{index}"],
        "id": signal_id,
        "mentions": [
            _token_mention(signal_id, index, i, value, tstart, tstop, len(tokens))
            for i, (value, tstart, tstop) in enumerate(tokens)
        ],
        "modality": "text",
        "ruler": {"container_id": signal_id, "start": 0, "stop": len(utterance),
                  "type": "Index"},
        "seq": list(utterance),
        "time": {"container_id": "carl-robot", "end": end, "start": start,
                 "type": "TemporalRuler"},
        "type": "TextSignal",
    }


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _frame_jpg(path: str, shade: int) -> None:
    image = PILImage.new("RGB", (3840, 1080), (shade, shade, shade + 20))
    image.save(path, "JPEG", quality=30)


def build_primary(root: str) -> None:
    _write(os.path.join(root, "text", "carl-robot.csv"), CSV)
    _write(os.path.join(root, "carl-robot.json"), SCENARIO_JSON)
    image_json = "[" + ",\n".join(
        _image_signal_json(*spec) for spec in IMAGE_SIGNALS) + "]\n"
    _write(os.path.join(root, "image.json"), image_json)
    text_json = json.dumps([_text_signal_json(i) for i in range(3)],
                           indent=2, ensure_ascii=False) + "\n"
    _write(os.path.join(root, "text.json"), text_json)
    os.makedirs(os.path.join(root, "image"), exist_ok=True)
    for i, (_, frame, *_rest) in enumerate(IMAGE_SIGNALS):
        _frame_jpg(os.path.join(root, "image", frame), 90 + 20 * i)
    os.makedirs(os.path.join(root, "rdf"), exist_ok=True)


PILLS_BOX = [1200, 620, 1450, 840]
TABLE_BOX = [800, 540, 2400, 1060]
PERSON_BOX = [2831, 235, 3036, 514]


def build_annotated(primary_root: str, root: str) -> None:
    if os.path.exists(root):
        shutil.rmtree(root)
    shutil.copytree(primary_root, root,
                    ignore=shutil.ignore_patterns("carl-robot.json", "rdf"))

    bundle = load_scenario(primary_root)
    scenario = bundle.scenario
    scenario_id = os.path.basename(root)
    scenario.id = scenario_id
    scenario.ruler.container_id = scenario_id
    for signal in bundle.all_signals():
        signal.time.container_id = scenario_id

    carl = Person(id="carl", name="Carl")
    lani = Person(id="lani", name="Leolani")
    scenario.context.agent = "lani"
    scenario.context.persons = [carl, lani]
    scenario.context.attributes = {
        "chat_id": "1",
        "context_id": "212127",
        "date": "2021-03-12",
        "place": "home",
        "place_id": "251375",
        "city": "Apeldoorn",
        "region": "Gelderland",
        "country": "Netherlands",
    }

    texts = sorted(bundle.signals["text"], key=lambda s: s.time.start)
    texts[0].speaker = carl
    texts[1].speaker = lani
    texts[2].speaker = carl

    stamp = 1616442473000
    texts[0].mentions.append(Mention(
        id=_fixed_uuid("annotated/carl-negative"),
        segment=[Index(container_id=texts[0].id, start=0, stop=48)],
        annotations=[
            Annotation(type="triple", source="annotation_tool", timestamp=stamp,
                       value=TripleValue(subject="robotWorld:pills",
                                         predicate="robotMu:locatedUnder",
                                         object="robotWorld:somewhere",
                                         perspective={"polarity": "NEGATIVE"})),
            Annotation(type="link", source="annotation_tool", timestamp=stamp,
                       value=EntityLink(iri="robotWorld:pills")),
        ]))
    texts[1].mentions.append(Mention(
        id=_fixed_uuid("annotated/lani-positive"),
        segment=[Index(container_id=texts[1].id, start=0, stop=39)],
        annotations=[
            Annotation(type="triple", source="annotation_tool", timestamp=stamp,
                       value=TripleValue(subject="robotWorld:pills",
                                         predicate="robotMu:locatedUnder",
                                         object="robotWorld:table",
                                         perspective={"certainty": "CERTAIN",
                                                      "polarity": "POSITIVE",
                                                      "emotion": "NEUTRAL",
                                                      "sentiment": "NEUTRAL"})),
            Annotation(type="link", source="annotation_tool", timestamp=stamp,
                       value=EntityLink(iri="robotWorld:pills")),
            Annotation(type="link", source="annotation_tool", timestamp=stamp,
                       value=EntityLink(iri="robotWorld:table")),
        ]))

    images = sorted(bundle.signals["image"], key=lambda s: s.time.start)
    frame30 = images[1]
    frame30.mentions.append(Mention(
        id=_fixed_uuid("annotated/camera-detections"),
        segment=[BoundingBox(container_id=frame30.id, bounds=PILLS_BOX),
                 BoundingBox(container_id=frame30.id, bounds=TABLE_BOX),
                 BoundingBox(container_id=frame30.id, bounds=PERSON_BOX)],
        annotations=[
            Annotation(type="triple", source="front-camera", timestamp=1000,
                       value=TripleValue(subject="robotWorld:lani",
                                         predicate="robotMu:see",
                                         object="robotWorld:pills-277239")),
            Annotation(type="triple", source="front-camera", timestamp=1000,
                       value=TripleValue(subject="robotWorld:lani",
                                         predicate="robotMu:see",
                                         object="robotWorld:table-208510")),
            Annotation(type="perspective", source="front-camera", timestamp=1000,
                       value=TripleValue(subject="robotWorld:pills",
                                         predicate="robotMu:locatedUnder",
                                         object="robotWorld:table",
                                         perspective={"certainty": "PROBABLE"})),
            Annotation(type="link", source="front-camera", timestamp=1000,
                       value=EntityLink(iri="robotWorld:pills-277239")),
            Annotation(type="link", source="front-camera", timestamp=1000,
                       value=EntityLink(iri="robotWorld:table-208510")),
        ]))

    save_scenario(bundle, root)
    _write(os.path.join(root, "rdf", "statements2.trig"), STATEMENTS2_TRIG)


def main() -> None:
    primary = os.path.join(HERE, "carl-robot")
    build_primary(primary)
    build_annotated(primary, os.path.join(HERE, "carl-robot-annotated"))
    print("fixtures written under", HERE)


if __name__ == "__main__":
    main()
