"""Command-line entry point: render, animate, validate data, serve.

Exit codes: 0 success, 1 data error, 2 validation error, 3 unknown
phoneme. Output files are byte-deterministic for identical inputs.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import params, presets, sequencer, views
from .geometry import GeometryError, default_data_dir, load_prototype_library
from .params import ValidationError
from .presets import UnknownPhoneme
from .scene import scene_to_svg
from .sequencer import InvalidTiming
from .service import animate_doc, render_view
from .solver import solve

EXIT_DATA_ERROR = 1
EXIT_VALIDATION = 2
EXIT_UNKNOWN_PHONEME = 3

CLI_SEGMENT_DURATION = 0.5  # slower than the library default; readable on screen


def _load(data_dir: Path):
    try:
        lib = load_prototype_library(data_dir / "contours.json")
        inventory = presets.load_inventory(data_dir / "phonemes.json")
    except (GeometryError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    return lib, inventory


def _write(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


data_option = click.option(
    "--data",
    "data_dir",
    type=click.Path(path_type=Path, file_okay=False),
    default=None,
    help="Data directory (defaults to the bundled contour and phoneme files).",
)


@click.group()
def main():
    """Deterministic 2D articulatory model."""


@main.command()
@click.option("--phoneme", default=None, help="SAMPA symbol to render.")
@click.option("--state", "state_file", type=click.Path(path_type=Path, exists=False),
              default=None, help="JSON file with a flat control-state document.")
@click.option("--view", default="sagittal", show_default=True,
              type=click.Choice(["sagittal", "glottal", "palatal", "composite"]))
@click.option("--overlay", default=None, help="Second SAMPA symbol drawn dashed (sagittal only).")
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output SVG path; stdout when omitted.")
@click.option("--size", default=640, show_default=True, type=click.IntRange(1, 4096),
              help="Output height in pixels.")
@data_option
def render(phoneme, state_file, view, overlay, out, size, data_dir):
    """Render one articulatory configuration as SVG."""
    if (phoneme is None) == (state_file is None):
        raise click.UsageError("provide exactly one of --phoneme or --state")
    if overlay is not None and view != "sagittal":
        raise click.UsageError("--overlay is only supported with --view sagittal")
    lib, inventory = _load(data_dir or default_data_dir())

    if phoneme is not None and overlay is None:
        try:
            svg = render_view(lib, inventory, phoneme, view, size)
        except UnknownPhoneme as exc:
            click.echo(str(exc), err=True)
            sys.exit(EXIT_UNKNOWN_PHONEME)
        _write(svg, out)
        return

    if state_file is not None:
        try:
            raw = json.loads(Path(state_file).read_text(encoding="utf-8"))
            control = params.validate(raw)
        except (OSError, json.JSONDecodeError) as exc:
            click.echo(f"cannot read state file: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except ValidationError as exc:
            for v in exc.violations:
                click.echo(f"{v.kind}: {v.field} = {v.value!r} (allowed {v.allowed})", err=True)
            sys.exit(EXIT_VALIDATION)
    else:
        try:
            control = inventory.lookup(phoneme).state
        except UnknownPhoneme as exc:
            click.echo(str(exc), err=True)
            sys.exit(EXIT_UNKNOWN_PHONEME)

    frame = solve(lib, control)
    overlay_frame = None
    if overlay is not None:
        try:
            overlay_frame = solve(lib, inventory.lookup(overlay).state)
        except UnknownPhoneme as exc:
            click.echo(str(exc), err=True)
            sys.exit(EXIT_UNKNOWN_PHONEME)

    if view == "sagittal":
        scene = views.render_sagittal(lib, frame, overlay=overlay_frame, show_airflow=True)
    elif view == "glottal":
        scene = views.compute_glottal_view(control)
    elif view == "palatal":
        contact = views.compute_palatal_contact(lib, frame, control.discrete, control.consonantal)
        scene = views.contact_map_to_scene(contact)
    else:
        scene = views.render_composite(lib, frame, control)
    _write(scene_to_svg(scene, size), out)


@main.command()
@click.option("--sampa", required=True, help="SAMPA symbol sequence, e.g. 'ata'.")
@click.option("--fps", default=25.0, show_default=True)
@click.option("--segment-duration", default=CLI_SEGMENT_DURATION, show_default=True)
@click.option("--transition-fraction", default=sequencer.DEFAULT_TRANSITION_FRACTION,
              show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output JSON path; stdout when omitted.")
@data_option
def animate(sampa, fps, segment_duration, transition_fraction, out, data_dir):
    """Sample an animation as a timestamped frame-sequence document."""
    lib, inventory = _load(data_dir or default_data_dir())
    try:
        doc = animate_doc(lib, inventory, sampa, fps, segment_duration, transition_fraction)
    except InvalidTiming as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    except UnknownPhoneme as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_UNKNOWN_PHONEME)
    _write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n", out)


@main.command("validate-data")
@click.option("--max-errors", default=5, show_default=True)
@data_option
def validate_data(max_errors, data_dir):
    """Load the library and inventory, reporting schema problems."""
    directory = data_dir or default_data_dir()
    errors: list[str] = []
    for loader, filename in (
        (load_prototype_library, "contours.json"),
        (presets.load_inventory, "phonemes.json"),
    ):
        try:
            loader(directory / filename)
        except (GeometryError, OSError, json.JSONDecodeError) as exc:
            errors.append(f"{filename}: {exc}")
        if len(errors) >= max_errors:
            break
    if errors:
        for line in errors[:max_errors]:
            click.echo(line, err=True)
        sys.exit(EXIT_DATA_ERROR)
    click.echo(f"ok: {directory}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8571, show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(path_type=Path, file_okay=False), default=None,
              help="Directory with the trainer UI bundle to serve at /.")
@data_option
def serve(host, port, ui_dir, data_dir):
    """Run the HTTP service."""
    from . import service

    directory = data_dir or default_data_dir()
    _load(directory)  # fail fast with a data error before binding
    service.run(directory, ui_dir, host=host, port=port)


if __name__ == "__main__":
    main()
