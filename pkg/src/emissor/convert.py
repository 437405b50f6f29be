"""Converters that turn external recordings into scenario folders."""

from __future__ import annotations

import csv
import os
import re
import uuid
from typing import Sequence

from PIL import Image as PILImage

from .model import (
    Annotation,
    EmissorError,
    ImageSignal,
    Index,
    Label,
    Mention,
    MultiIndex,
    Person,
    Scenario,
    ScenarioBundle,
    ScenarioContext,
    TemporalRuler,
    TextSignal,
    TimeSegment,
)
from .segmentation import NewInstance, resolve_identity
from .storage import save_scenario

# Gap appended after the last utterance so the scenario ruler closes cleanly;
# derived from the CarLani recordings (7133 -> 11133) and overridable per call.
CLOSING_MARGIN_MS = 4000

DIALOGUE_HEADER = ["speaker", "utterance", "time"]


class BadHeader(EmissorError):
    pass


class NonMonotonicTime(Warning):
    pass


class PatternMismatch(EmissorError):
    pass


class ColumnMappingError(EmissorError):
    pass


def stable_id(*parts: str) -> str:
    """Content-derived UUID so re-converting identical inputs is byte-identical."""
    return str(uuid.uuid5(uuid.NAMESPACE_URL,
                          "http://emissor.org/convert/" + "/".join(parts)))


def _dialogue_rows(csv_path: str) -> list[dict[str, str]]:
    with open(csv_path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != DIALOGUE_HEADER:
            raise BadHeader(f"{csv_path}: expected header "
                            f"{','.join(DIALOGUE_HEADER)!r}, got {reader.fieldnames}")
        return list(reader)


def _text_signal(utterance: str, time_ms: int, file_ref: str,
                 scenario_id: str, speaker: Person | None) -> TextSignal:
    signal_id = stable_id(scenario_id, file_ref)
    return TextSignal(
        id=signal_id,
        modality="text",
        files=[file_ref],
        # Utterances are point events unless the source provides durations.
        time=TimeSegment(container_id=scenario_id, start=time_ms, end=time_ms,
                         type_tag="TemporalRuler"),
        mentions=[],
        ruler=Index(container_id=signal_id, start=0, stop=len(utterance)),
        seq=utterance,
        speaker=speaker,
    )


def _resolve_speaker(name: str, context: ScenarioContext) -> Person:
    registry = [(p.id, p.name) for p in context.persons]
    resolved = resolve_identity(name, registry)
    if isinstance(resolved, NewInstance):
        person = Person(id=name.lower().replace(" ", "-"), name=name)
        context.persons.append(person)
        return person
    return next(p for p in context.persons if p.id == resolved)


def from_dialogue_csv(csv_path: str, scenario_id: str,
                      context: ScenarioContext | None = None,
                      margin_ms: int = CLOSING_MARGIN_MS) -> ScenarioBundle:
    """One text signal per dialogue row; the scenario ruler spans
    [0, last utterance time + margin]."""
    rows = _dialogue_rows(csv_path)
    context = context if context is not None else ScenarioContext(agent="robot_agent")
    name = os.path.basename(csv_path)

    warnings: list[str] = []
    signals = []
    previous = None
    for row_index, row in enumerate(rows):
        time_ms = int(float(row["time"]))
        if previous is not None and time_ms < previous:
            warnings.append(f"{name}#{row_index}: time {time_ms} before previous "
                            f"{previous} (kept, signals re-sorted)")
        previous = time_ms
        speaker = _resolve_speaker(row["speaker"], context)
        signals.append(_text_signal(row["utterance"], time_ms,
                                    f"text/{name}#{row_index}", scenario_id, speaker))
    signals.sort(key=lambda s: s.time.start)

    end = (signals[-1].time.start + margin_ms) if signals else margin_ms
    scenario = Scenario(
        id=scenario_id,
        context=context,
        ruler=TemporalRuler(container_id=scenario_id, start=0, end=end),
        signals={"text": "./text.json"},
    )
    return ScenarioBundle(scenario=scenario, signals={"text": signals},
                          warnings=warnings)


_FRAME = re.compile(r"(?P<scenario>.+)_frame(?P<frame>\d+)_(?P<ms>\d+)\.(jpg|jpeg|png)$")


def from_frames(directory: str, scenario_id: str,
                default_duration_ms: int = 33) -> list[ImageSignal]:
    """One image signal per `<scenario>_frame<F>_<ms>` file; the per-frame
    duration is inferred from consecutive frame numbers."""
    frames = []
    for filename in sorted(os.listdir(directory)):
        if filename.startswith("."):
            continue
        match = _FRAME.match(filename)
        if match is None:
            raise PatternMismatch(filename)
        frames.append((int(match.group("frame")), int(match.group("ms")), filename))
    frames.sort()

    duration = default_duration_ms
    if len(frames) >= 2:
        (f0, ms0, _), (f1, ms1, _) = frames[0], frames[1]
        if f1 > f0 and ms1 > ms0:
            duration = (ms1 - ms0) // (f1 - f0)

    signals = []
    for _, ms, filename in frames:
        with PILImage.open(os.path.join(directory, filename)) as image:
            width, height = image.size
        signal_id = stable_id(scenario_id, "image", filename)
        signals.append(ImageSignal(
            id=signal_id,
            modality="image",
            files=[f"image/{filename}"],
            time=TimeSegment(container_id=scenario_id, start=ms, end=ms + duration),
            mentions=[],
            ruler=MultiIndex(container_id=signal_id, bounds=[0, 0, width, height]),
        ))
    return signals


def convert_dialogue_folder(csv_path: str, out_dir: str,
                            frames_dir: str | None = None,
                            margin_ms: int = CLOSING_MARGIN_MS) -> ScenarioBundle:
    """CSV (plus optional frame directory) -> a scenario folder on disk."""
    scenario_id = os.path.basename(out_dir.rstrip("/"))
    bundle = from_dialogue_csv(csv_path, scenario_id, margin_ms=margin_ms)
    if frames_dir is not None:
        bundle.signals["image"] = from_frames(frames_dir, scenario_id)
        bundle.scenario.signals["image"] = "./image.json"

    os.makedirs(os.path.join(out_dir, "text"), exist_ok=True)
    _copy(csv_path, os.path.join(out_dir, "text", os.path.basename(csv_path)))
    if frames_dir is not None:
        os.makedirs(os.path.join(out_dir, "image"), exist_ok=True)
        for filename in sorted(os.listdir(frames_dir)):
            if not filename.startswith("."):
                _copy(os.path.join(frames_dir, filename),
                      os.path.join(out_dir, "image", filename))
    save_scenario(bundle, out_dir)
    bundle.root = os.path.abspath(out_dir)
    return bundle


def _copy(src: str, dst: str) -> None:
    if os.path.abspath(src) == os.path.abspath(dst):
        return
    with open(src, "rb") as fin, open(dst, "wb") as fout:
        fout.write(fin.read())


# Column aliases accepted when mapping MELD/IEMOCAP-style transcripts.
_MELD_COLUMNS = {
    "speaker": ("speaker", "Speaker"),
    "utterance": ("utterance", "Utterance", "transcript", "text"),
    "start": ("start", "StartTime", "start_time", "time"),
    "emotion": ("emotion", "Emotion", "label"),
}


def _pick(fieldnames: Sequence[str], aliases: Sequence[str]) -> str | None:
    for alias in aliases:
        if alias in fieldnames:
            return alias
    return None


def import_meld_like(csv_path: str, scenario_id: str,
                     margin_ms: int = CLOSING_MARGIN_MS) -> ScenarioBundle:
    """Transcript with speaker/utterance/start (seconds or ms) and an optional
    emotion column; emotions become Label annotations over the whole utterance."""
    with open(csv_path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        fieldnames = reader.fieldnames or []
        columns = {role: _pick(fieldnames, aliases)
                   for role, aliases in _MELD_COLUMNS.items()}
        missing = [role for role in ("speaker", "utterance", "start")
                   if columns[role] is None]
        if missing:
            raise ColumnMappingError(f"{csv_path}: cannot map columns for {missing}")
        rows = list(reader)

    context = ScenarioContext(agent="dataset")
    name = os.path.basename(csv_path)
    signals = []
    for row_index, row in enumerate(rows):
        raw_start = row[columns["start"]]
        # Float-formatted start times are seconds; integers are already ms.
        time_ms = int(float(raw_start) * 1000) if "." in raw_start else int(raw_start)
        speaker = _resolve_speaker(row[columns["speaker"]], context)
        signal = _text_signal(row[columns["utterance"]], time_ms,
                              f"text/{name}#{row_index}", scenario_id, speaker)
        if columns["emotion"] and row.get(columns["emotion"]):
            annotation = Annotation(type="emotion",
                                    value=Label(value=row[columns["emotion"]]),
                                    source="dataset", timestamp=time_ms)
            segment = Index(container_id=signal.id, start=0, stop=len(signal.seq))
            signal.mentions.append(
                Mention(id=stable_id(scenario_id, f"emotion/{row_index}"),
                        segment=[segment], annotations=[annotation]))
        signals.append(signal)
    signals.sort(key=lambda s: s.time.start)

    end = (signals[-1].time.start + margin_ms) if signals else margin_ms
    scenario = Scenario(id=scenario_id, context=context,
                        ruler=TemporalRuler(container_id=scenario_id, start=0, end=end),
                        signals={"text": "./text.json"})
    return ScenarioBundle(scenario=scenario, signals={"text": signals})
