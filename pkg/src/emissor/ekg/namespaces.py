"""IRI handling and the fixed prefix table of the episodic knowledge graph."""

from __future__ import annotations

from dataclasses import dataclass

PREFIXES: dict[str, str] = {
    "robotWorld": "http://emissor.org/robot/world/",
    "robotTalk": "http://emissor.org/robot/talk/",
    "robotFriends": "http://emissor.org/robot/friends/",
    "robotInputs": "http://emissor.org/robot/inputs/",
    "robotContext": "http://emissor.org/robot/context/",
    "robotMu": "http://emissor.org/robot/ontology/",
    "eps": "http://emissor.org/robot/episodic#",
    "gaf": "http://groundedannotationframework.org/gaf#",
    "grasp": "http://groundedannotationframework.org/grasp#",
    "graspf": "http://groundedannotationframework.org/grasp/factuality#",
    "graspe": "http://groundedannotationframework.org/grasp/emotion#",
    "grasps": "http://groundedannotationframework.org/grasp/sentiment#",
    "sem": "http://semanticweb.cs.vu.nl/2009/11/sem/",
    "prov": "http://www.w3.org/ns/prov#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "time": "http://www.w3.org/2006/time#",
    "xml1": "https://www.w3.org/TR/xmlschema-2/#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "wgs": "http://www.w3.org/2003/01/geo/wgs84_pos#",
    "wd": "http://www.wikidata.org/entity/",
    "wdt": "http://www.wikidata.org/prop/direct/",
    "ceo": "http://www.newsreader-project.eu/domain-ontology#",
}

# Longest namespaces first so curie() picks the most specific prefix.
_BY_LENGTH = sorted(PREFIXES.items(), key=lambda kv: -len(kv[1]))


class UnknownPrefix(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    @property
    def local(self) -> str:
        curie = self.curie()
        if curie is not None:
            return curie.split(":", 1)[1]
        return self.value.rsplit("/", 1)[-1].rsplit("#", 1)[-1]

    def curie(self) -> str | None:
        for prefix, namespace in _BY_LENGTH:
            if self.value.startswith(namespace) and len(self.value) > len(namespace):
                return f"{prefix}:{self.value[len(namespace):]}"
        return None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: Iri | None = None

    def __str__(self) -> str:
        return self.lexical


Node = Iri | Literal


def expand(name: str | Iri) -> Iri:
    """Expand a curie against the prefix table; absolute IRIs pass through."""
    if isinstance(name, Iri):
        return name
    if "://" in name or name.startswith("urn:"):
        return Iri(name)
    prefix, sep, local = name.partition(":")
    if not sep:
        raise UnknownPrefix(f"not a curie or absolute IRI: {name!r}")
    if prefix not in PREFIXES:
        raise UnknownPrefix(prefix)
    return Iri(PREFIXES[prefix] + local)


def ns(prefix: str, local: str) -> Iri:
    return Iri(PREFIXES[prefix] + local)


# Frequently used vocabulary terms.
RDF_TYPE = ns("rdf", "type")
RDF_VALUE = ns("rdf", "value")
RDFS_LABEL = ns("rdfs", "label")
OWL_SAMEAS = ns("owl", "sameAs")
GAF_INSTANCE = ns("gaf", "Instance")
GAF_ASSERTION = ns("gaf", "Assertion")
GAF_MENTION = ns("gaf", "Mention")
GAF_DENOTES = ns("gaf", "denotes")
GAF_DENOTED_BY = ns("gaf", "denotedBy")
GAF_DENOTED_IN = ns("gaf", "denotedIn")
GAF_CONTAINS_DENOTATION = ns("gaf", "containsDenotation")
GRASP_STATEMENT = ns("grasp", "Statement")
GRASP_EXPERIENCE = ns("grasp", "Experience")
GRASP_ATTRIBUTION = ns("grasp", "Attribution")
GRASP_ATTRIBUTION_VALUE = ns("grasp", "AttributionValue")
GRASP_SOURCE = ns("grasp", "Source")
GRASP_CHAT = ns("grasp", "Chat")
GRASP_VISUAL = ns("grasp", "Visual")
GRASP_UTTERANCE = ns("grasp", "Utterance")
GRASP_DETECTION = ns("grasp", "Detection")
GRASP_WAS_ATTRIBUTED_TO = ns("grasp", "wasAttributedTo")
GRASP_HAS_ATTRIBUTION = ns("grasp", "hasAttribution")
GRASP_IS_ATTRIBUTION_FOR = ns("grasp", "isAttributionFor")
SEM_EVENT = ns("sem", "Event")
SEM_ACTOR = ns("sem", "Actor")
SEM_PLACE = ns("sem", "Place")
SEM_TIME = ns("sem", "Time")
SEM_HAS_SUBEVENT = ns("sem", "hasSubEvent")
SEM_HAS_ACTOR = ns("sem", "hasActor")
SEM_HAS_EVENT = ns("sem", "hasEvent")
SEM_HAS_PLACE = ns("sem", "hasPlace")
SEM_HAS_BEGIN = ns("sem", "hasBeginTimeStamp")
PROV_DERIVED_FROM = ns("prov", "wasDerivedFrom")
EPS_CONTEXT = ns("eps", "Context")
EPS_HAS_CONTEXT = ns("eps", "hasContext")
EPS_HAS_DETECTION = ns("eps", "hasDetection")
XML1_STRING = ns("xml1", "string")

STRING_DT = XML1_STRING
