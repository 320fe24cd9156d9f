"""File-backed frame store.

Layout under the store root::

    frames/<frame_id>.thfr   binary pixel payload
    frames/<frame_id>.json   sidecar metadata
    masks/<camera_id>.json   current parameter mask (versioned)
    index.json               camera -> [frame entries]

Frames are immutable once stored; mask upserts and index updates are
serialized behind one lock so a correction always reads one consistent
mask version.
"""

from __future__ import annotations

import json
import struct
import threading
from pathlib import Path

import numpy as np

from .errors import FrameFileError, NotFoundError
from .frames import (CORRECTED_TEMPERATURE, RAW_SIGNAL, ParameterMask,
                     RoiGeometry, ThermalFrame, roi_stats)

_MAGIC = b"THFR"
_VERSION = 1
_KIND_CODES = {RAW_SIGNAL: 0, CORRECTED_TEMPERATURE: 1}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


def write_frame_file(frame: ThermalFrame, path) -> None:
    header = _MAGIC + struct.pack(
        "<IIIBq", _VERSION, frame.width, frame.height,
        _KIND_CODES[frame.kind], frame.timestamp_ms,
    )
    payload = np.ascontiguousarray(frame.values, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)


def read_frame_file(path, meta: dict) -> ThermalFrame:
    with open(path, "rb") as fh:
        blob = fh.read()
    header_size = 4 + struct.calcsize("<IIIBq")
    if len(blob) < header_size:
        raise FrameFileError(f"frame file truncated at {len(blob)} bytes")
    if blob[:4] != _MAGIC:
        raise FrameFileError("bad magic, not a frame file")
    version, width, height, kind_code, timestamp = struct.unpack(
        "<IIIBq", blob[4:header_size]
    )
    if version != _VERSION:
        raise FrameFileError(f"unsupported frame file version {version}")
    if kind_code not in _KIND_NAMES:
        raise FrameFileError(f"unknown frame kind code {kind_code}")
    expected = header_size + width * height * 4
    if len(blob) != expected:
        raise FrameFileError(
            f"frame payload has {len(blob) - header_size} bytes, "
            f"expected {width * height * 4}"
        )
    values = np.frombuffer(blob[header_size:], dtype="<f4").reshape(height, width)
    return ThermalFrame(
        frame_id=meta["frame_id"],
        camera_id=meta["camera_id"],
        timestamp_ms=timestamp,
        width=width,
        height=height,
        values=values.copy(),
        kind=_KIND_NAMES[kind_code],
        mask_version=meta.get("mask_version"),
        method=meta.get("method"),
        error_count=int(meta.get("error_count", 0)),
        source_frame_id=meta.get("source_frame_id"),
    )


def frame_meta(frame: ThermalFrame) -> dict:
    return {
        "frame_id": frame.frame_id,
        "camera_id": frame.camera_id,
        "timestamp_ms": frame.timestamp_ms,
        "width": frame.width,
        "height": frame.height,
        "kind": frame.kind,
        "mask_version": frame.mask_version,
        "method": frame.method,
        "error_count": frame.error_count,
        "source_frame_id": frame.source_frame_id,
    }


class FrameStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "frames").mkdir(parents=True, exist_ok=True)
        (self.root / "masks").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._index_path = self.root / "index.json"
        if not self._index_path.exists():
            self._write_index({})

    # -- index helpers -------------------------------------------------

    def _read_index(self) -> dict:
        return json.loads(self._index_path.read_text(encoding="utf-8"))

    def _write_index(self, index: dict) -> None:
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(index, indent=1, sort_keys=True),
                       encoding="utf-8")
        tmp.replace(self._index_path)

    def _frame_path(self, frame_id: str) -> Path:
        return self.root / "frames" / f"{frame_id}.thfr"

    def _meta_path(self, frame_id: str) -> Path:
        return self.root / "frames" / f"{frame_id}.json"

    # -- frames --------------------------------------------------------

    def store_frame(self, frame: ThermalFrame) -> str:
        meta = frame_meta(frame)
        write_frame_file(frame, self._frame_path(frame.frame_id))
        self._meta_path(frame.frame_id).write_text(
            json.dumps(meta, indent=1), encoding="utf-8"
        )
        with self._lock:
            index = self._read_index()
            entries = index.setdefault(frame.camera_id, [])
            entries.append({
                "frame_id": frame.frame_id,
                "timestamp_ms": frame.timestamp_ms,
                "kind": frame.kind,
            })
            self._write_index(index)
        return frame.frame_id

    def get_meta(self, frame_id: str) -> dict:
        path = self._meta_path(frame_id)
        if not path.exists():
            raise NotFoundError(f"unknown frame {frame_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def get_frame(self, frame_id: str) -> ThermalFrame:
        meta = self.get_meta(frame_id)
        return read_frame_file(self._frame_path(frame_id), meta)

    def frame_bytes(self, frame_id: str) -> bytes:
        path = self._frame_path(frame_id)
        if not path.exists():
            raise NotFoundError(f"unknown frame {frame_id!r}")
        return path.read_bytes()

    def cameras(self) -> list[str]:
        return sorted(self._read_index().keys())

    def list_frames(self, camera_id: str, t_from: int | None = None,
                    t_to: int | None = None, kind: str | None = None) -> list[dict]:
        index = self._read_index()
        if camera_id not in index:
            raise NotFoundError(f"unknown camera {camera_id!r}")
        entries = index[camera_id]
        out = []
        for entry in entries:
            ts = entry["timestamp_ms"]
            if t_from is not None and ts < t_from:
                continue
            if t_to is not None and ts > t_to:
                continue
            if kind is not None and entry["kind"] != kind:
                continue
            out.append(self.get_meta(entry["frame_id"]))
        out.sort(key=lambda m: (m["timestamp_ms"], m["frame_id"]))
        return out

    # -- masks -----------------------------------------------------------

    def _mask_path(self, camera_id: str) -> Path:
        return self.root / "masks" / f"{camera_id}.json"

    def upsert_mask(self, camera_id: str, mask_json: dict) -> ParameterMask:
        """Replace the camera's mask, bumping the version monotonically."""
        with self._lock:
            current = self._read_mask(camera_id)
            version = (current.version + 1) if current is not None else 1
            mask = ParameterMask.from_json(mask_json, camera_id=camera_id,
                                           version=version)
            self._mask_path(camera_id).write_text(
                json.dumps(mask.to_json(), indent=1), encoding="utf-8"
            )
            return mask

    def _read_mask(self, camera_id: str) -> ParameterMask | None:
        path = self._mask_path(camera_id)
        if not path.exists():
            return None
        return ParameterMask.from_json(
            json.loads(path.read_text(encoding="utf-8"))
        )

    def get_mask(self, camera_id: str) -> ParameterMask:
        mask = self._read_mask(camera_id)
        if mask is None:
            raise NotFoundError(f"no mask stored for camera {camera_id!r}")
        return mask

    # -- time series -----------------------------------------------------

    def roi_timeseries(self, camera_id: str, geom: RoiGeometry,
                       t_from: int | None = None, t_to: int | None = None,
                       kind: str = CORRECTED_TEMPERATURE) -> list[tuple[int, dict]]:
        """ROI summary per stored frame, ordered by timestamp.

        Recomputation is idempotent: the series is derived from the
        stored frames on every call.
        """
        metas = self.list_frames(camera_id, t_from, t_to, kind=kind)
        series = []
        for meta in metas:
            frame = self.get_frame(meta["frame_id"])
            stats = roi_stats(frame, geom)
            series.append((meta["timestamp_ms"], {
                "frame_id": meta["frame_id"],
                "mean": stats.mean,
                "std": stats.std,
                "minimum": stats.minimum,
                "maximum": stats.maximum,
                "pixel_count": stats.pixel_count,
            }))
        return series
