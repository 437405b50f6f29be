"""TriG serialization for the quad store.

Covers the profile the store emits: named graph blocks, prefixed names,
<absolute> IRIs, plain and ^^-typed string literals, `a`, `;` and `,` lists.
The parser is strict; anything outside the profile is a ParseError. Stores are
blank-node free, so round-trip equality is plain quad-set equality.
"""

from __future__ import annotations

import re

from .namespaces import PREFIXES, Iri, Literal, Node, RDF_TYPE
from .store import GraphStore, Quad

_RDF_TYPE = RDF_TYPE


class ParseError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# Serialization


def _term(node: Node, used: set[str]) -> str:
    if isinstance(node, Iri):
        curie = node.curie()
        if curie is not None:
            used.add(curie.split(":", 1)[0])
            return curie
        return f"<{node.value}>"
    escaped = (node.lexical.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\r", "\\r"))
    if node.datatype is not None:
        return f'"{escaped}"^^{_term(node.datatype, used)}'
    return f'"{escaped}"'


def serialize_trig(store: GraphStore) -> bytes:
    """Deterministic TriG rendering of the store's quads."""
    used: set[str] = set()
    blocks = []
    by_graph: dict[Iri, list[tuple[Iri, Iri, Node]]] = {}
    for g, s, p, o in store.quads:
        by_graph.setdefault(g, []).append((s, p, o))

    for graph in sorted(by_graph, key=str):
        lines = [f"{_term(graph, used)} {{"]
        by_subject: dict[Iri, list[tuple[Iri, Node]]] = {}
        for s, p, o in by_graph[graph]:
            by_subject.setdefault(s, []).append((p, o))
        for subject in sorted(by_subject, key=str):
            by_predicate: dict[Iri, list[Node]] = {}
            for p, o in by_subject[subject]:
                by_predicate.setdefault(p, []).append(o)
            # rdf:type first as `a`, then the rest alphabetically.
            predicates = sorted(by_predicate, key=lambda p: (p != _RDF_TYPE, str(p)))
            parts = []
            for predicate in predicates:
                verb = "a" if predicate == _RDF_TYPE else _term(predicate, used)
                objects = ", ".join(_term(o, used)
                                    for o in sorted(by_predicate[predicate], key=str))
                parts.append(f"{verb} {objects}")
            joined = " ;\n        ".join(parts)
            lines.append(f"    {_term(subject, used)} {joined} .")
        lines.append("}")
        blocks.append("\n".join(lines))

    header = "".join(f"@prefix {prefix}: <{PREFIXES[prefix]}> .\n"
                     for prefix in sorted(used))
    body = "\n\n".join(blocks)
    return (header + ("\n" + body + "\n" if body else "")).encode("utf-8")


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iriref><[^<>\s]*>)
  | (?P<literal>"(?:[^"\\]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<punct>[{};,.])
  | (?P<prefixdecl>@prefix)
  | (?P<pname>[A-Za-z_][\w-]*:[\w.-]*[\w-]|[A-Za-z_][\w-]*:)
  | (?P<kw_a>\ba\b)
""", re.VERBOSE)

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
_ESCAPE_RE = re.compile(r"\\(.)")


def _tokens(text: str):
    pos = 0
    line = 1
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(line, f"unexpected character {text[pos]!r}")
        line += text[pos:match.end()].count("\n")
        pos = match.end()
        kind = match.lastgroup
        if kind in ("ws", "comment"):
            continue
        yield kind, match.group(), line
    yield "eof", "", line


class _TrigParser:
    def __init__(self, text: str):
        self._stream = _tokens(text)
        self.prefixes: dict[str, str] = {}
        self.quads: list[Quad] = []
        self._advance()

    def _advance(self):
        self.kind, self.value, self.line = next(self._stream)

    def _expect(self, kind: str, value: str | None = None) -> str:
        if self.kind != kind or (value is not None and self.value != value):
            raise ParseError(self.line,
                             f"expected {value or kind}, got {self.value!r}")
        got = self.value
        self._advance()
        return got

    def _iri(self) -> Iri:
        if self.kind == "iriref":
            value = self.value[1:-1]
            self._advance()
            return Iri(value)
        if self.kind == "pname":
            prefix, _, local = self.value.partition(":")
            if prefix not in self.prefixes:
                raise ParseError(self.line, f"undeclared prefix {prefix!r}")
            self._advance()
            return Iri(self.prefixes[prefix] + local)
        raise ParseError(self.line, f"expected an IRI, got {self.value!r}")

    def _literal(self) -> Literal:
        raw = _ESCAPE_RE.sub(lambda m: _ESCAPES.get(m.group(1), m.group(1)),
                             self.value[1:-1])
        self._advance()
        datatype = None
        if self.kind == "dtype":
            self._advance()
            datatype = self._iri()
        return Literal(raw, datatype)

    def _object(self) -> Node:
        if self.kind == "literal":
            return self._literal()
        return self._iri()

    def _predicate_object_list(self, graph: Iri, subject: Iri) -> None:
        while True:
            if self.kind == "kw_a":
                predicate = _RDF_TYPE
                self._advance()
            else:
                predicate = self._iri()
            while True:
                self.quads.append((graph, subject, predicate, self._object()))
                if self.kind == "punct" and self.value == ",":
                    self._advance()
                    continue
                break
            if self.kind == "punct" and self.value == ";":
                self._advance()
                # tolerate a trailing semicolon before `.` or `}`
                if self.kind == "punct" and self.value in (".", "}"):
                    break
                continue
            break

    def _graph_block(self, graph: Iri) -> None:
        self._expect("punct", "{")
        while not (self.kind == "punct" and self.value == "}"):
            subject = self._iri()
            self._predicate_object_list(graph, subject)
            if self.kind == "punct" and self.value == ".":
                self._advance()
        self._expect("punct", "}")

    def parse(self) -> list[Quad]:
        while self.kind != "eof":
            if self.kind == "prefixdecl":
                self._advance()
                name = self._expect("pname")
                if not name.endswith(":"):
                    prefix, _, rest = name.partition(":")
                    if rest:
                        raise ParseError(self.line, "malformed prefix declaration")
                    name = prefix + ":"
                iri = self._expect("iriref")[1:-1]
                self._expect("punct", ".")
                self.prefixes[name[:-1]] = iri
            else:
                graph = self._iri()
                self._graph_block(graph)
        return self.quads


def parse_trig(data: bytes | str) -> GraphStore:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    store = GraphStore()
    store.add_batch(_TrigParser(text).parse())
    return store
