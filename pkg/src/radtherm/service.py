"""Monitoring service: synthetic acquisition, correction, ROI queries.

One process hosts ingestion, correction and queries; corrected-frame
metadata is fanned out to Server-Sent-Events subscribers per camera.
API payloads use operator units: temperatures in Celsius, converted at
this boundary. Binary frame payloads keep the internal convention
(signal units for raw frames, kelvin for corrected ones).
"""

from __future__ import annotations

import asyncio
import json
import time

import anyio
from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse

from .constants import kelvin_to_celsius
from .errors import DomainError, NotFoundError, RadthermError
from .frames import (BISECTION, CORRECTED_TEMPERATURE, SURROGATE,
                     RoiGeometry, SceneSpec, correct_frame,
                     render_synthetic_frame, roi_stats)
from .inversion import DEFAULT_SOLVER, SolverConfig
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .store import FrameStore, frame_meta
from .surrogate import MlpModel


class EventBus:
    """In-process fan-out of corrected-frame metadata per camera."""

    def __init__(self) -> None:
        self._subscribers: dict[str, list[asyncio.Queue]] = {}

    def subscribe(self, camera_id: str) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue()
        self._subscribers.setdefault(camera_id, []).append(queue)
        return queue

    def unsubscribe(self, camera_id: str, queue: asyncio.Queue) -> None:
        queues = self._subscribers.get(camera_id, [])
        if queue in queues:
            queues.remove(queue)

    async def publish(self, camera_id: str, payload: dict) -> None:
        for queue in self._subscribers.get(camera_id, []):
            await queue.put(payload)


def _celsius_stats(stats_json: dict, corrected: bool) -> dict:
    """Convert kelvin-valued statistics fields to Celsius for the API."""
    if not corrected:
        return stats_json
    out = dict(stats_json)
    for key in ("mean", "minimum", "maximum"):
        out[key] = kelvin_to_celsius(out[key])
    out["values"] = [kelvin_to_celsius(v) for v in out["values"]]
    out["percentiles"] = {k: kelvin_to_celsius(v)
                          for k, v in out["percentiles"].items()}
    out["histogram_edges"] = [kelvin_to_celsius(v)
                              for v in out["histogram_edges"]]
    return out


def create_app(store: FrameStore, model: MlpModel | None = None,
               solver: SolverConfig = DEFAULT_SOLVER,
               quadrature: QuadratureConfig = DEFAULT_QUADRATURE) -> FastAPI:
    app = FastAPI(title="radtherm monitoring service")
    bus = EventBus()
    app.state.store = store
    app.state.model = model
    app.state.bus = bus

    @app.exception_handler(RadthermError)
    async def _domain_error(request: Request, exc: RadthermError):
        status = 404 if isinstance(exc, NotFoundError) else 422
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.get("/cameras")
    async def cameras():
        return {"cameras": store.cameras()}

    @app.post("/frames/synthetic")
    async def synthetic(body: dict):
        spec = SceneSpec.from_json(body["scene"])
        width = int(body["width"])
        height = int(body["height"])
        timestamp = int(body.get("timestamp_ms", time.time() * 1000))
        frame = await anyio.to_thread.run_sync(
            lambda: render_synthetic_frame(spec, width, height, quadrature,
                                           timestamp_ms=timestamp)
        )
        store.store_frame(frame)
        return frame_meta(frame)

    @app.get("/frames")
    async def frames(camera: str, t_from: int | None = Query(None, alias="from"),
                     t_to: int | None = Query(None, alias="to")):
        return {"frames": store.list_frames(camera, t_from, t_to)}

    @app.get("/frames/{frame_id}")
    async def frame_binary(frame_id: str):
        return Response(content=store.frame_bytes(frame_id),
                        media_type="application/octet-stream")

    @app.get("/frames/{frame_id}/meta")
    async def frame_metadata(frame_id: str):
        return store.get_meta(frame_id)

    @app.put("/masks/{camera_id}")
    async def put_mask(camera_id: str, body: dict):
        mask = store.upsert_mask(camera_id, body)
        return {"camera_id": camera_id, "version": mask.version,
                "mask_id": mask.mask_id}

    @app.get("/masks/{camera_id}")
    async def get_mask(camera_id: str):
        return store.get_mask(camera_id).to_json()

    @app.post("/frames/{frame_id}/correct")
    async def correct(frame_id: str, body: dict):
        method = body.get("method", BISECTION)
        if method == SURROGATE and app.state.model is None:
            raise DomainError("no surrogate model loaded; use bisection")
        frame = store.get_frame(frame_id)
        mask = store.get_mask(frame.camera_id)
        corrected = await anyio.to_thread.run_sync(
            lambda: correct_frame(frame, mask, method, solver, quadrature,
                                  model=app.state.model)
        )
        store.store_frame(corrected)
        meta = frame_meta(corrected)
        await bus.publish(frame.camera_id, meta)
        return meta

    @app.post("/roi/query")
    async def roi_query(body: dict):
        frame = store.get_frame(body["frame_id"])
        geom = RoiGeometry.from_json(body["geometry"])
        stats = roi_stats(frame, geom)
        corrected = frame.kind == CORRECTED_TEMPERATURE
        return {
            "frame_id": frame.frame_id,
            "frame_kind": frame.kind,
            "units": "C" if corrected else "signal",
            "stats": _celsius_stats(stats.to_json(), corrected),
        }

    @app.get("/roi/timeseries")
    async def roi_timeseries(camera: str, geom: str,
                             t_from: int | None = Query(None, alias="from"),
                             t_to: int | None = Query(None, alias="to")):
        geometry = RoiGeometry.from_json(json.loads(geom))
        series = store.roi_timeseries(camera, geometry, t_from, t_to)
        points = []
        for timestamp, summary in series:
            converted = dict(summary)
            for key in ("mean", "minimum", "maximum"):
                converted[key] = kelvin_to_celsius(converted[key])
            converted["timestamp_ms"] = timestamp
            points.append(converted)
        return {"camera_id": camera, "units": "C", "series": points}

    @app.get("/stream")
    async def stream(camera: str):
        queue = bus.subscribe(camera)

        async def events():
            try:
                yield ": connected\n\n"
                while True:
                    payload = await queue.get()
                    yield f"data: {json.dumps(payload)}\n\n"
            finally:
                bus.unsubscribe(camera, queue)

        return StreamingResponse(events(), media_type="text/event-stream")

    return app
