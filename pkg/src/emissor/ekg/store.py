"""Named-graph quad store: Instances, Interactions, Claims, Perspectives, plus
one graph per claim. Grows monotonically; concurrent readers see frozen
snapshots while a single writer appends batches."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .namespaces import (
    GAF_ASSERTION,
    GAF_DENOTED_BY,
    GAF_DENOTES,
    GRASP_HAS_ATTRIBUTION,
    GRASP_IS_ATTRIBUTION_FOR,
    GRASP_WAS_ATTRIBUTED_TO,
    Iri,
    Literal,
    Node,
    RDF_TYPE,
    RDF_VALUE,
    expand,
    ns,
)

Quad = tuple[Iri, Iri, Iri, Node]  # (graph, subject, predicate, object)

INSTANCES = ns("robotWorld", "Instances")
INTERACTIONS = ns("robotTalk", "Interactions")
CLAIMS = ns("robotWorld", "Claims")
PERSPECTIVES = ns("robotTalk", "Perspectives")
FIXED_GRAPHS = (INSTANCES, INTERACTIONS, CLAIMS, PERSPECTIVES)

CERTAINTY_RANK = {"CERTAIN": 3, "PROBABLE": 2, "POSSIBLE": 1, "UNDERSPECIFIED": 0}

_CERTAINTY = ns("graspf", "CertaintyValue")
_POLARITY = ns("graspf", "PolarityValue")


class PartitionViolation(Exception):
    pass


@dataclass
class QueryResult:
    claim: Iri
    triple: tuple[Iri, Iri, Node]
    mention: Iri
    attribution: Iri | None
    values: tuple[Iri, ...]
    source: Iri | None
    timestamp: int

    @property
    def certainty(self) -> str | None:
        return self._dimension(_CERTAINTY)

    @property
    def polarity(self) -> str | None:
        return self._dimension(_POLARITY)

    def _dimension(self, dimension: Iri) -> str | None:
        for value in self.values:
            if value in self._typing and dimension in self._typing[value]:
                return value.local
        return None

    _typing: dict[Iri, set[Iri]] = field(default_factory=dict, repr=False)


@dataclass
class ConflictEntry:
    claim: Iri
    object: Node
    polarity: str
    source: Iri | None
    timestamp: int


@dataclass
class ConflictGroup:
    subject: Iri
    predicate: Iri
    entries: list[ConflictEntry]

    def __len__(self) -> int:
        return len(self.entries)


class GraphStore:
    def __init__(self) -> None:
        self._quads: frozenset[Quad] = frozenset()
        # Signal time (scenario ms) per mention node; auxiliary because the
        # TriG surface only carries day-granular context time.
        self.mention_times: dict[Iri, int] = {}
        self._instance_order: list[Iri] = []
        self._lock = threading.Lock()

    # -- write side

    def add_batch(self, quads: list[Quad]) -> list[Quad]:
        """Append a batch atomically; returns the delta (previously unseen quads)."""
        with self._lock:
            delta = [q for q in dict.fromkeys(quads) if q not in self._quads]
            merged = self._quads | frozenset(delta)
            validate_partition(merged)
            self._quads = merged
        return delta

    def record_instance(self, iri: Iri) -> None:
        if iri not in self._instance_order:
            self._instance_order.append(iri)

    # -- read side

    @property
    def quads(self) -> frozenset[Quad]:
        return self._quads

    def __len__(self) -> int:
        return len(self._quads)

    def graphs(self) -> set[Iri]:
        return {g for g, *_ in self._quads}

    def graph(self, name: Iri) -> set[tuple[Iri, Iri, Node]]:
        return {(s, p, o) for g, s, p, o in self._quads if g == name}

    def objects(self, graph: Iri, subject: Iri, predicate: Iri) -> list[Node]:
        return sorted((o for g, s, p, o in self._quads
                       if g == graph and s == subject and p == predicate),
                      key=str)

    def claim_ids(self) -> list[Iri]:
        return sorted({s for g, s, p, o in self._quads
                       if g == CLAIMS and p == RDF_TYPE and o == GAF_ASSERTION},
                      key=str)

    def claim_triple(self, claim: Iri) -> tuple[Iri, Iri, Node] | None:
        triples = self.graph(claim)
        if len(triples) != 1:
            return None
        return next(iter(triples))

    def registry(self) -> list[tuple[str, str]]:
        """(iri, label) pairs in eKG insertion order, for identity resolution."""
        label_iri = ns("rdfs", "label")
        out = []
        for iri in self._instance_order:
            label = next((str(o) for g, s, p, o in self._quads
                          if g == INSTANCES and s == iri and p == label_iri),
                         iri.local)
            out.append((iri.value, label))
        return out

    # -- claim supports

    def _value_typing(self) -> dict[Iri, set[Iri]]:
        typing: dict[Iri, set[Iri]] = {}
        for g, s, p, o in self._quads:
            if g == PERSPECTIVES and p == RDF_TYPE and isinstance(o, Iri):
                typing.setdefault(s, set()).add(o)
        return typing

    def supports(self, claim: Iri) -> list[tuple[Iri, Iri | None]]:
        """(mention, attribution) pairs backing a claim.

        A mention supports a claim through gaf:denotes/denotedBy or through an
        attribution named after the claim (perspective-only evidence).
        """
        quads = self._quads
        mentions: set[Iri] = set()
        for g, s, p, o in quads:
            if p == GAF_DENOTED_BY and s == claim and isinstance(o, Iri):
                mentions.add(o)
            elif p == GAF_DENOTES and o == claim:
                mentions.add(s)

        prefix = claim.local + "_"
        claim_attributions = {s for g, s, p, o in quads
                              if g == PERSPECTIVES and p == GRASP_IS_ATTRIBUTION_FOR
                              and s.local.startswith(prefix)}

        pairs: set[tuple[Iri, Iri | None]] = set()
        for attribution in claim_attributions:
            for g, s, p, o in quads:
                if g == PERSPECTIVES and s == attribution \
                        and p == GRASP_IS_ATTRIBUTION_FOR and isinstance(o, Iri):
                    pairs.add((o, attribution))
        for mention in mentions:
            mention_attrs = {o for g, s, p, o in quads
                             if g == PERSPECTIVES and s == mention
                             and p == GRASP_HAS_ATTRIBUTION and isinstance(o, Iri)
                             and o.local.startswith(prefix)}
            if mention_attrs:
                pairs.update((mention, a) for a in mention_attrs)
            elif not any(m == mention for m, _ in pairs):
                pairs.add((mention, None))
        return sorted(pairs, key=lambda pair: (str(pair[0]), str(pair[1])))

    def attribution_values(self, attribution: Iri) -> tuple[Iri, ...]:
        return tuple(o for o in self.objects(PERSPECTIVES, attribution, RDF_VALUE)
                     if isinstance(o, Iri))

    def mention_source(self, mention: Iri) -> Iri | None:
        sources = self.objects(PERSPECTIVES, mention, GRASP_WAS_ATTRIBUTED_TO)
        return sources[0] if sources else None

    # -- query and reasoning

    def query(self, subject: str | Iri | None = None,
              predicate: str | Iri | None = None,
              object: str | Iri | None = None,
              time: int | None = None,
              source: str | Iri | None = None) -> list[QueryResult]:
        """Claims matching the triple pattern, each paired with its supporting
        mention and attribution.

        Only mentions whose signal time is <= `time` qualify (unknown times
        count as 0); `source` filters on grasp:wasAttributedTo. Results come
        newest mention first, ties broken by certainty. An empty result is a
        knowledge gap, not an error.
        """
        want_s = expand(subject) if subject is not None else None
        want_p = expand(predicate) if predicate is not None else None
        want_o = self._as_node(object) if object is not None else None
        want_src = expand(source) if source is not None else None
        typing = self._value_typing()

        results = []
        for claim in self.claim_ids():
            triple = self.claim_triple(claim)
            if triple is None:
                continue
            s, p, o = triple
            if want_s is not None and s != want_s:
                continue
            if want_p is not None and p != want_p:
                continue
            if want_o is not None and o != want_o:
                continue
            for mention, attribution in self.supports(claim):
                stamp = self.mention_times.get(mention, 0)
                if time is not None and stamp > time:
                    continue
                if want_src is not None and self.mention_source(mention) != want_src:
                    continue
                values = self.attribution_values(attribution) if attribution else ()
                results.append(QueryResult(
                    claim=claim, triple=triple, mention=mention,
                    attribution=attribution, values=values,
                    source=self.mention_source(mention), timestamp=stamp,
                    _typing=typing))
        results.sort(key=lambda r: (-r.timestamp,
                                    -CERTAINTY_RANK.get(r.certainty or "", -1),
                                    str(r.claim), str(r.mention)))
        return results

    def _as_node(self, value: str | Iri | Literal) -> Node:
        if isinstance(value, Literal):
            return value
        try:
            return expand(value)
        except KeyError:
            return Literal(str(value))

    def detect_conflicts(self, subject: str | Iri,
                         predicate: str | Iri) -> list[ConflictGroup]:
        """Group stance-carrying claim supports on (subject, predicate) that
        disagree in polarity or in object.

        Only attributions carrying a PolarityValue take part; certainty-only
        evidence neither creates nor joins conflicts.
        """
        want_s = expand(subject)
        want_p = expand(predicate)
        typing = self._value_typing()

        entries: list[ConflictEntry] = []
        for claim in self.claim_ids():
            triple = self.claim_triple(claim)
            if triple is None or triple[0] != want_s or triple[1] != want_p:
                continue
            for mention, attribution in self.supports(claim):
                if attribution is None:
                    continue
                polarity = next((v.local for v in self.attribution_values(attribution)
                                 if _POLARITY in typing.get(v, set())), None)
                if polarity is None:
                    continue
                entries.append(ConflictEntry(
                    claim=claim, object=triple[2], polarity=polarity,
                    source=self.mention_source(mention),
                    timestamp=self.mention_times.get(mention, 0)))

        conflicting = any(a.polarity != b.polarity or a.object != b.object
                          for i, a in enumerate(entries) for b in entries[i + 1:])
        if not conflicting:
            return []
        entries.sort(key=lambda e: (e.timestamp, str(e.claim)))
        return [ConflictGroup(subject=want_s, predicate=want_p, entries=entries)]


def validate_partition(quads: frozenset[Quad] | set[Quad] | list[Quad]) -> None:
    """Every quad sits in exactly one partition and no triple repeats across
    graph names. Claim graphs must hold exactly one triple."""
    by_triple: dict[tuple[Iri, Iri, Node], set[Iri]] = {}
    claim_graphs: dict[Iri, int] = {}
    for g, s, p, o in quads:
        by_triple.setdefault((s, p, o), set()).add(g)
        if g not in FIXED_GRAPHS:
            claim_graphs[g] = claim_graphs.get(g, 0) + 1
    for triple, graphs in by_triple.items():
        if len(graphs) > 1:
            raise PartitionViolation(
                f"triple {tuple(map(str, triple))} appears in {len(graphs)} partitions")
    for graph, count in claim_graphs.items():
        if count != 1:
            raise PartitionViolation(
                f"claim graph {graph} holds {count} triples, expected exactly 1")
