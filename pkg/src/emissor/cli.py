"""Command line entry points: convert, validate, emit, query, serve."""

from __future__ import annotations

import os
import sys

import click

from .convert import (
    CLOSING_MARGIN_MS,
    convert_dialogue_folder,
    from_frames,
    import_meld_like,
)
from .model import Scenario, ScenarioBundle, ScenarioContext, TemporalRuler, validate_scenario
from .storage import load_scenario, save_scenario
from .ekg import GraphStore, emit_from_scenario
from .service import write_batches


@click.group()
def main() -> None:
    """Multimodal scenario tooling."""


@main.group()
def convert() -> None:
    """Convert external recordings into scenario folders."""


@convert.command("csv")
@click.option("--in", "csv_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--frames", "frames_dir", type=click.Path(exists=True), default=None,
              help="Optional directory of <scenario>_frame<F>_<ms>.jpg files.")
@click.option("--margin-ms", default=CLOSING_MARGIN_MS, show_default=True)
def convert_csv(csv_path: str, out_dir: str, frames_dir: str | None,
                margin_ms: int) -> None:
    """Dialogue CSV (speaker,utterance,time) to a scenario folder."""
    bundle = convert_dialogue_folder(csv_path, out_dir, frames_dir, margin_ms)
    for warning in bundle.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"wrote scenario {bundle.scenario.id!r} to {out_dir}")


@convert.command("frames")
@click.option("--in", "frames_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--margin-ms", default=CLOSING_MARGIN_MS, show_default=True)
def convert_frames(frames_dir: str, out_dir: str, margin_ms: int) -> None:
    """Frame files to an image-only scenario folder."""
    scenario_id = os.path.basename(out_dir.rstrip("/"))
    signals = from_frames(frames_dir, scenario_id)
    end = (max(s.time.end for s in signals) if signals else 0) + margin_ms
    scenario = Scenario(id=scenario_id, context=ScenarioContext(agent="robot_agent"),
                        ruler=TemporalRuler(container_id=scenario_id, start=0, end=end),
                        signals={"image": "./image.json"})
    bundle = ScenarioBundle(scenario=scenario, signals={"image": signals})
    os.makedirs(os.path.join(out_dir, "image"), exist_ok=True)
    for filename in sorted(os.listdir(frames_dir)):
        if filename.startswith("."):
            continue
        with open(os.path.join(frames_dir, filename), "rb") as fin, \
                open(os.path.join(out_dir, "image", filename), "wb") as fout:
            fout.write(fin.read())
    save_scenario(bundle, out_dir)
    click.echo(f"wrote scenario {scenario_id!r} with {len(signals)} image signals")


@convert.command("meld")
@click.option("--in", "csv_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--margin-ms", default=CLOSING_MARGIN_MS, show_default=True)
def convert_meld(csv_path: str, out_dir: str, margin_ms: int) -> None:
    """MELD/IEMOCAP-style transcript to a scenario folder."""
    scenario_id = os.path.basename(out_dir.rstrip("/"))
    bundle = import_meld_like(csv_path, scenario_id, margin_ms)
    os.makedirs(os.path.join(out_dir, "text"), exist_ok=True)
    with open(csv_path, "rb") as fin, \
            open(os.path.join(out_dir, "text", os.path.basename(csv_path)), "wb") as fout:
        fout.write(fin.read())
    save_scenario(bundle, out_dir)
    click.echo(f"wrote scenario {scenario_id!r} with "
               f"{len(bundle.signals['text'])} text signals")


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True))
def validate(scenario_dir: str) -> None:
    """Validate a scenario folder; exits non-zero when violations are found."""
    bundle = load_scenario(scenario_dir)
    for warning in bundle.warnings:
        click.echo(f"warning: {warning}")
    report = validate_scenario(bundle)
    for violation in report.violations:
        click.echo(f"violation[{violation.kind}] {violation.where}: {violation.message}")
    click.echo(f"{len(report.violations)} violations, {len(bundle.warnings)} warnings")
    if not report.ok:
        sys.exit(1)


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True))
def emit(scenario_dir: str) -> None:
    """Emit the scenario's annotations into TriG batches under rdf/."""
    bundle = load_scenario(scenario_dir)
    store = GraphStore()
    result = emit_from_scenario(bundle, store)
    written = write_batches(bundle.root, result.batches)
    click.echo(f"emitted {len(result.delta)} quads in {len(result.batches)} batches")
    for path in written:
        click.echo(f"  {path}")


@main.command()
@click.argument("scenario_dir", type=click.Path(exists=True))
@click.option("--s", "subject", default=None)
@click.option("--p", "predicate", default=None)
@click.option("--o", "object_", default=None)
@click.option("--t", "time", type=int, default=None)
@click.option("--source", default=None)
def query(scenario_dir: str, subject: str | None, predicate: str | None,
          object_: str | None, time: int | None, source: str | None) -> None:
    """Emit the scenario in memory and query the resulting store."""
    from .ekg.emit import person_registry
    from .segmentation import NewInstance, resolve_identity

    bundle = load_scenario(scenario_dir)
    store = GraphStore()
    emit_from_scenario(bundle, store)
    if source is not None and ":" not in source:
        resolved = resolve_identity(source, person_registry(bundle))
        if not isinstance(resolved, NewInstance):
            source = resolved
    results = store.query(subject=subject, predicate=predicate, object=object_,
                          time=time, source=source)
    if not results:
        click.echo("no knowledge (empty result)")
        return
    for result in results:
        values = ",".join(v.local for v in result.values) or "-"
        source_str = result.source.curie() if result.source else "-"
        click.echo(f"{result.claim.curie()}  [{values}]  source={source_str}  "
                   f"t={result.timestamp}")


@main.command()
@click.option("--root", default=lambda: os.environ.get("EMISSOR_ROOT", "."),
              type=click.Path(exists=True))
@click.option("--port", default=lambda: int(os.environ.get("EMISSOR_PORT", "8000")))
@click.option("--host", default="127.0.0.1")
def serve(root: str, port: int, host: str) -> None:
    """Serve the HTTP API (and the annotation UI when built) over a scenario root."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(root), host=host, port=port)


if __name__ == "__main__":
    main()
