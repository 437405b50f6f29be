"""HTTP API over a scenario root: CRUD for mentions, identities, triples,
emission and queries. The filesystem stays the source of truth (write-through),
so CLI and UI edits interoperate."""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .model import (
    Annotation,
    EmissorError,
    EmptyAnnotationList,
    Mention,
    OutOfBounds,
    now_ms,
    ScenarioBundle,
    TripleValue,
    add_mention,
    validate_scenario,
)
from .storage import (
    RowOutOfRange,
    _csv_row,
    _mention_dict,
    _Parser,
    _signal_dict,
    load_scenario,
    save_scenario,
    scenario_dict,
)
from .ekg import GraphStore, emit_from_scenario, ns, serialize_trig
from .ekg.emit import Emitter, person_registry

DEFAULT_PORT = 8000


@dataclass
class _ScenarioState:
    bundle: ScenarioBundle
    store: GraphStore = field(default_factory=GraphStore)
    version: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


class ScenarioService:
    """Per-root registry of scenarios with single-writer-per-scenario locking."""

    def __init__(self, root: str):
        self.root = os.path.abspath(root)
        self._states: dict[str, _ScenarioState] = {}
        self._registry_lock = threading.Lock()

    def scenario_ids(self) -> list[str]:
        out = []
        for name in sorted(os.listdir(self.root)):
            if os.path.isfile(os.path.join(self.root, name, f"{name}.json")):
                out.append(name)
        return out

    def state(self, scenario_id: str) -> _ScenarioState:
        if scenario_id not in self._states:
            path = os.path.join(self.root, scenario_id)
            if not os.path.isfile(os.path.join(path, f"{scenario_id}.json")):
                raise HTTPException(status_code=404,
                                    detail=f"unknown scenario {scenario_id!r}")
            self._states[scenario_id] = _ScenarioState(bundle=load_scenario(path))
        return self._states[scenario_id]

    def find_mention(self, mention_id: str) -> tuple[_ScenarioState, object, Mention] | None:
        for scenario_id in self.scenario_ids():
            state = self.state(scenario_id)
            for signal in state.bundle.all_signals():
                for mention in signal.mentions:
                    if mention.id == mention_id:
                        return state, signal, mention
        return None

    # -- identities

    @property
    def _identities_path(self) -> str:
        return os.path.join(self.root, "identities.json")

    def identities(self) -> list[dict]:
        with self._registry_lock:
            stored = []
            if os.path.exists(self._identities_path):
                with open(self._identities_path, encoding="utf-8") as handle:
                    stored = json.load(handle)
        seen = {entry["iri"] for entry in stored}
        for scenario_id in self.scenario_ids():
            for iri, name in person_registry(self.state(scenario_id).bundle):
                if iri not in seen:
                    stored.append({"iri": iri, "name": name})
                    seen.add(iri)
        return stored

    def mint_identity(self, name: str, kind: str = "PERSON") -> dict:
        iri = ns("robotWorld", f"{_slug(name)}-{uuid.uuid4().hex[:6]}").value
        entry = {"iri": iri, "name": name, "type": kind}
        with self._registry_lock:
            stored = []
            if os.path.exists(self._identities_path):
                with open(self._identities_path, encoding="utf-8") as handle:
                    stored = json.load(handle)
            stored.append(entry)
            with open(self._identities_path, "w", encoding="utf-8") as handle:
                json.dump(stored, handle, indent=2)
                handle.write("\n")
        return entry


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in name.lower()).strip("-") or "entity"


def _check_version(state: _ScenarioState, payload: dict) -> None:
    version = payload.get("version")
    if version is not None and version != state.version:
        raise HTTPException(status_code=409,
                            detail={"expected": state.version, "got": version})


def _persist(service: ScenarioService, state: _ScenarioState) -> None:
    """Write-through; reload from disk when the mutation breaks validity."""
    report = validate_scenario(state.bundle)
    if not report.ok:
        path = state.bundle.root
        state.bundle = load_scenario(path)
        raise HTTPException(status_code=422, detail={
            "violations": [v.__dict__ for v in report.violations]})
    save_scenario(state.bundle, state.bundle.root)
    state.version += 1


def create_app(root: str) -> FastAPI:
    service = ScenarioService(root)
    app = FastAPI(title="emissor", version="0.1.0")
    app.state.service = service

    @app.get("/scenarios")
    def list_scenarios() -> list[dict]:
        out = []
        for scenario_id in service.scenario_ids():
            state = service.state(scenario_id)
            scenario = state.bundle.scenario
            out.append({"id": scenario.id,
                        "ruler": {"start": scenario.ruler.start,
                                  "end": scenario.ruler.end},
                        "modalities": sorted(scenario.signals)})
        return out

    @app.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str) -> dict:
        state = service.state(scenario_id)
        return {
            "scenario": scenario_dict(state.bundle.scenario),
            "signals": {modality: [_signal_dict(s) for s in signals]
                        for modality, signals in sorted(state.bundle.signals.items())},
            "version": state.version,
            "warnings": state.bundle.warnings,
        }

    @app.get("/scenarios/{scenario_id}/media/{path:path}")
    def get_media(scenario_id: str, path: str, row: int | None = None) -> Response:
        state = service.state(scenario_id)
        full = os.path.abspath(os.path.join(state.bundle.root, path))
        if not full.startswith(state.bundle.root + os.sep):
            raise HTTPException(status_code=404, detail="outside scenario folder")
        if not os.path.isfile(full):
            raise HTTPException(status_code=404, detail=f"no media {path!r}")
        if row is not None:
            try:
                return PlainTextResponse(_csv_row(full, row)["utterance"])
            except RowOutOfRange as exc:
                raise HTTPException(status_code=404, detail=str(exc))
        media_type = "image/jpeg" if full.endswith((".jpg", ".jpeg")) else None
        with open(full, "rb") as handle:
            return Response(content=handle.read(), media_type=media_type)

    @app.post("/scenarios/{scenario_id}/signals/{signal_id}/mentions", status_code=201)
    def post_mention(scenario_id: str, signal_id: str, payload: dict) -> dict:
        state = service.state(scenario_id)
        with state.lock:
            _check_version(state, payload)
            signal = state.bundle.find_signal(signal_id)
            if signal is None:
                raise HTTPException(status_code=404,
                                    detail=f"unknown signal {signal_id!r}")
            parser = _Parser("request", state.bundle.warnings)
            try:
                segments = [parser.segment(s, f"/segments/{i}")
                            for i, s in enumerate(payload.get("segments", []))]
                annotations = [
                    parser.annotation(a, f"/annotations/{i}",
                                      allow_missing_timestamp=True)
                    for i, a in enumerate(payload.get("annotations", []))]
            except EmissorError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            try:
                mention = add_mention(signal, segments, annotations)
            except (OutOfBounds, EmptyAnnotationList) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            try:
                _persist(service, state)
            except HTTPException:
                signal.mentions.remove(mention)
                raise
            return {"mention": _mention_dict(mention), "version": state.version}

    @app.patch("/mentions/{mention_id}")
    def patch_mention(mention_id: str, payload: dict) -> dict:
        found = service.find_mention(mention_id)
        if found is None:
            raise HTTPException(status_code=404, detail=f"unknown mention {mention_id!r}")
        state, signal, mention = found
        with state.lock:
            _check_version(state, payload)
            parser = _Parser("request", state.bundle.warnings)
            before_segments, before_annotations = mention.segment, mention.annotations
            try:
                if "segments" in payload:
                    mention.segment = [parser.segment(s, f"/segments/{i}")
                                       for i, s in enumerate(payload["segments"])]
                if "annotations" in payload:
                    mention.annotations = [
                        parser.annotation(a, f"/annotations/{i}",
                                          allow_missing_timestamp=True)
                        for i, a in enumerate(payload["annotations"])]
                    for annotation in mention.annotations:
                        if annotation.timestamp is None:
                            annotation.timestamp = now_ms()
                _persist(service, state)
            except (HTTPException, EmissorError) as exc:
                mention.segment = before_segments
                mention.annotations = before_annotations
                if isinstance(exc, HTTPException):
                    raise
                raise HTTPException(status_code=422, detail=str(exc))
            return {"mention": _mention_dict(mention), "version": state.version}

    @app.delete("/mentions/{mention_id}")
    def delete_mention(mention_id: str, version: int | None = None) -> dict:
        found = service.find_mention(mention_id)
        if found is None:
            raise HTTPException(status_code=404, detail=f"unknown mention {mention_id!r}")
        state, signal, mention = found
        with state.lock:
            _check_version(state, {"version": version})
            signal.mentions.remove(mention)
            try:
                _persist(service, state)
            except HTTPException:
                signal.mentions.append(mention)
                raise
            return {"deleted": mention_id, "version": state.version}

    @app.get("/identities")
    def get_identities() -> list[dict]:
        return service.identities()

    @app.post("/identities", status_code=201)
    def post_identity(payload: dict) -> dict:
        name = payload.get("name")
        if not name:
            raise HTTPException(status_code=422, detail="missing name")
        return service.mint_identity(name, payload.get("type", "PERSON"))

    @app.post("/scenarios/{scenario_id}/triples", status_code=201)
    def post_triple(scenario_id: str, payload: dict) -> dict:
        state = service.state(scenario_id)
        for key in ("subject", "predicate", "object"):
            if not payload.get(key):
                raise HTTPException(status_code=422, detail=f"missing {key}")
        with state.lock:
            _check_version(state, payload)
            perspective = dict(payload.get("perspective", {}))
            signal_id = payload.get("signal_id")
            if signal_id is not None:
                signal = state.bundle.find_signal(signal_id)
                if signal is None:
                    raise HTTPException(status_code=404,
                                        detail=f"unknown signal {signal_id!r}")
                parser = _Parser("request", state.bundle.warnings)
                segments = [parser.segment(s, f"/segments/{i}")
                            for i, s in enumerate(payload.get("segments", []))]
                annotation = Annotation(
                    type="triple",
                    source=payload.get("source", "annotation_tool"),
                    timestamp=signal.time.start,
                    value=TripleValue(subject=payload["subject"],
                                      predicate=payload["predicate"],
                                      object=payload["object"],
                                      perspective=perspective))
                try:
                    add_mention(signal, segments, [annotation],
                                timestamp=signal.time.start)
                except (OutOfBounds, EmissorError) as exc:
                    raise HTTPException(status_code=422, detail=str(exc))
                _persist(service, state)
            emitter = Emitter(state.store)
            try:
                claim = emitter.emit_claim(
                    (payload["subject"], payload["predicate"], payload["object"]),
                    values=None)
                emitter.flush()
            except KeyError as exc:
                raise HTTPException(status_code=422, detail=f"bad iri: {exc}")
            return {"claim": claim.id.curie() or claim.id.value,
                    "version": state.version}

    @app.post("/scenarios/{scenario_id}/emit")
    def post_emit(scenario_id: str) -> dict:
        state = service.state(scenario_id)
        with state.lock:
            result = emit_from_scenario(state.bundle, state.store)
            written = write_batches(state.bundle.root, result.batches)
        return {"delta": len(result.delta), "size": len(state.store),
                "files": written}

    @app.get("/scenarios/{scenario_id}/graph")
    def get_graph(scenario_id: str, format: str = "trig") -> Response:
        if format != "trig":
            raise HTTPException(status_code=422, detail=f"unknown format {format!r}")
        state = service.state(scenario_id)
        return PlainTextResponse(serialize_trig(state.store).decode("utf-8"),
                                 media_type="application/trig")

    @app.get("/scenarios/{scenario_id}/query")
    def get_query(scenario_id: str, s: str | None = None, p: str | None = None,
                  o: str | None = None, t: int | None = None,
                  source: str | None = None) -> list[dict]:
        state = service.state(scenario_id)
        try:
            results = state.store.query(subject=s, predicate=p, object=o,
                                        time=t, source=_resolve_source(service, source))
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"bad iri: {exc}")
        return [_result_dict(r) for r in results]

    ui_dir = os.environ.get("EMISSOR_UI_DIR",
                            os.path.join(os.path.dirname(__file__), "..", "..",
                                         "frontend", "dist"))
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _resolve_source(service: ScenarioService, source: str | None):
    if source is None:
        return None
    if ":" in source:
        return source
    for entry in service.identities():
        if entry["name"].casefold() == source.casefold():
            return entry["iri"]
    return source


def _result_dict(result) -> dict:
    triple = result.triple
    return {
        "claim": result.claim.curie() or result.claim.value,
        "subject": triple[0].curie() or triple[0].value,
        "predicate": triple[1].curie() or triple[1].value,
        "object": (triple[2].curie() or triple[2].value)
        if hasattr(triple[2], "curie") else str(triple[2]),
        "mention": result.mention.curie() or result.mention.value,
        "source": (result.source.curie() or result.source.value)
        if result.source else None,
        "certainty": result.certainty,
        "polarity": result.polarity,
        "timestamp": result.timestamp,
    }


def write_batches(root: str, batches) -> list[str]:
    """One TriG file per emission batch under rdf/, never overwriting."""
    from .ekg.store import GraphStore as _Store

    rdf_dir = os.path.join(root, "rdf")
    os.makedirs(rdf_dir, exist_ok=True)
    written = []
    counters: dict[str, int] = {}
    for kind, quads in batches:
        if not quads:
            continue
        number = counters.get(kind, 0) + 1
        while os.path.exists(os.path.join(rdf_dir, f"{kind}{number}.trig")):
            number += 1
        counters[kind] = number
        batch_store = _Store()
        batch_store.add_batch(list(quads))
        path = os.path.join(rdf_dir, f"{kind}{number}.trig")
        with open(path, "wb") as handle:
            handle.write(serialize_trig(batch_store))
        written.append(os.path.relpath(path, root))
    return written


def main() -> None:
    import uvicorn

    root = os.environ.get("EMISSOR_ROOT", ".")
    port = int(os.environ.get("EMISSOR_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(root), host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()
