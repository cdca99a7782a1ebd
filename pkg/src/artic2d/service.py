"""HTTP facade: solve, render, and animate over JSON, plus the UI bundle.

All endpoints are stateless with respect to request history; the library
and inventory are loaded once at startup and shared read-only. Error
bodies always carry {code, message, details?}.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import params, presets, sequencer, views
from .geometry import PrototypeLibrary, default_data_dir, load_prototype_library
from .params import ValidationError
from .presets import PhonemeInventory, UnknownPhoneme
from .scene import scene_to_svg
from .sequencer import InvalidTiming
from .solver import solve

VIEW_NAMES = ("sagittal", "glottal", "palatal", "composite")


def api_error(code: str, message: str, details: list | None = None, status: int = 400) -> JSONResponse:
    body: dict[str, Any] = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return JSONResponse(status_code=status, content=body)


def render_view(
    lib: PrototypeLibrary, inventory: PhonemeInventory, sampa: str, view: str, size: int = 640
) -> str:
    entry = inventory.lookup(sampa)
    frame = solve(lib, entry.state)
    if view == "sagittal":
        scene = views.render_sagittal(lib, frame, show_airflow=True)
    elif view == "glottal":
        scene = views.compute_glottal_view(entry.state)
    elif view == "palatal":
        contact = views.compute_palatal_contact(
            lib, frame, entry.state.discrete, entry.state.consonantal
        )
        scene = views.contact_map_to_scene(contact)
    elif view == "composite":
        scene = views.render_composite(lib, frame, entry.state)
    else:
        raise ValueError(f"unknown view {view!r}")
    return scene_to_svg(scene, size)


def animate_doc(
    lib: PrototypeLibrary,
    inventory: PhonemeInventory,
    sampa: str,
    fps: float,
    segment_duration: float,
    transition_fraction: float,
) -> dict:
    timeline = sequencer.from_phoneme_string(
        inventory, sampa, segment_duration=segment_duration, transition_fraction=transition_fraction
    )
    frames = []
    for t, state in sequencer.sample_states(timeline, fps):
        frame = solve(lib, state)
        frames.append({"time": t, "state": state.to_doc(), "frame": frame.to_doc()})
    return {
        "sampa": sampa,
        "fps": fps,
        "segmentDuration": segment_duration,
        "transitionFraction": transition_fraction,
        "span": timeline.span,
        "frames": frames,
    }


def create_app(
    data_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
    preload: bool = True,
) -> FastAPI:
    """Build the service; with preload=False data loads lazily never, and
    endpoints answer 503 until a library is attached (startup lifecycle)."""
    app = FastAPI(title="artic2d", docs_url=None, redoc_url=None)
    app.state.library = None
    app.state.inventory = None

    directory = Path(data_dir) if data_dir is not None else default_data_dir()
    if preload:
        app.state.library = load_prototype_library(directory / "contours.json")
        app.state.inventory = presets.load_inventory(directory / "phonemes.json")

    @app.exception_handler(RequestValidationError)
    async def _on_validation(_req: Request, exc: RequestValidationError):
        return api_error("badRequest", "malformed request", details=[str(exc)])

    @app.exception_handler(Exception)
    async def _on_internal(_req: Request, exc: Exception):
        return api_error("internal", f"{type(exc).__name__}: {exc}", status=500)

    def loaded() -> tuple[PrototypeLibrary, PhonemeInventory] | None:
        if app.state.library is None or app.state.inventory is None:
            return None
        return app.state.library, app.state.inventory

    @app.get("/healthz")
    async def healthz():
        if loaded() is None:
            return api_error("internal", "data not loaded", status=503)
        return {"status": "ok"}

    @app.get("/api/phonemes")
    async def phonemes():
        state = loaded()
        if state is None:
            return api_error("internal", "data not loaded", status=503)
        _lib, inventory = state
        return {"phonemes": [e.to_doc() for e in presets.list_phonemes(inventory)]}

    @app.post("/api/solve")
    async def solve_endpoint(request: Request):
        state = loaded()
        if state is None:
            return api_error("internal", "data not loaded", status=503)
        lib, _inventory = state
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return api_error("badRequest", f"invalid JSON: {exc}")
        if not isinstance(body, dict):
            return api_error("badRequest", "body must be a control-state object")
        try:
            control = params.validate(body)
        except ValidationError as exc:
            return api_error(
                "badRequest", "control state failed validation",
                details=[v.to_doc() for v in exc.violations],
            )
        return solve(lib, control).to_doc()

    @app.get("/api/render")
    async def render_endpoint(phoneme: str = "", view: str = "sagittal", size: int = 640):
        state = loaded()
        if state is None:
            return api_error("internal", "data not loaded", status=503)
        lib, inventory = state
        if not phoneme:
            return api_error("badRequest", "missing query parameter 'phoneme'")
        if view not in VIEW_NAMES:
            return api_error("badRequest", f"view must be one of {', '.join(VIEW_NAMES)}")
        if size <= 0 or size > 4096:
            return api_error("badRequest", "size must be in 1..4096")
        try:
            svg = render_view(lib, inventory, phoneme, view, size)
        except UnknownPhoneme as exc:
            return api_error("unknownPhoneme", str(exc), status=404)
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/api/animate")
    async def animate_endpoint(request: Request):
        state = loaded()
        if state is None:
            return api_error("internal", "data not loaded", status=503)
        lib, inventory = state
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return api_error("badRequest", f"invalid JSON: {exc}")
        if not isinstance(body, dict):
            return api_error("badRequest", "body must be an object")
        sampa = body.get("sampa", "")
        fps = body.get("fps", 25)
        segment = body.get("segmentDuration", sequencer.DEFAULT_SEGMENT_DURATION)
        transition = body.get("transitionFraction", sequencer.DEFAULT_TRANSITION_FRACTION)
        for name, value in (("fps", fps), ("segmentDuration", segment), ("transitionFraction", transition)):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                return api_error("badRequest", f"{name} must be a number")
        if not isinstance(sampa, str):
            return api_error("badRequest", "sampa must be a string")
        try:
            return animate_doc(lib, inventory, sampa, float(fps), float(segment), float(transition))
        except UnknownPhoneme as exc:
            return api_error("unknownPhoneme", str(exc), status=404)
        except InvalidTiming as exc:
            return api_error("badRequest", str(exc))

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def run(
    data_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
    host: str = "127.0.0.1",
    port: int = 8571,
) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, ui_dir), host=host, port=port, log_level="warning")
