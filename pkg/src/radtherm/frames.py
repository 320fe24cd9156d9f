"""Thermal frames, operator parameter masks and ROI statistics.

Pixel convention: a frame is a row-major (height, width) float32 grid;
the pixel at column ``x``, row ``y`` has its center at integer
coordinates ``(x, y)``. Geometry vertices are floats in the same
coordinate space. Polygon membership is decided by the even-odd rule on
pixel centers; lines traverse pixels with Bresenham's algorithm; a point
covers its 3x3 neighborhood clipped to the frame.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass, field

import numpy as np

from .constants import celsius_to_kelvin, kelvin_to_celsius
from .errors import DomainError
from .inversion import DEFAULT_SOLVER, SolverConfig, bisect_prepared_many
from .models import FurnaceScene, ModelKind, PreparedModel, signal_d_batch
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .spectral import DEFAULT_BAND, Band, SpectralCurve
from .surrogate import FEATURE_NAMES, MlpModel, PARAMETER_RANGES, predict

RAW_SIGNAL = "raw_signal"
CORRECTED_TEMPERATURE = "corrected_temperature"

BISECTION = "bisection"
SURROGATE = "surrogate"


@dataclass(frozen=True)
class ThermalFrame:
    frame_id: str
    camera_id: str
    timestamp_ms: int
    width: int
    height: int
    values: np.ndarray
    kind: str = RAW_SIGNAL
    mask_version: int | None = None
    method: str | None = None
    error_count: int = 0
    source_frame_id: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (RAW_SIGNAL, CORRECTED_TEMPERATURE):
            raise DomainError(f"unknown frame kind {self.kind!r}")
        if self.values.shape != (self.height, self.width):
            raise DomainError(
                f"values shape {self.values.shape} != ({self.height}, {self.width})"
            )
        if self.values.dtype != np.float32:
            raise DomainError("frame values must be float32")
        # Raw frames are always finite; corrected frames may carry NaN
        # sentinels for pixels whose inversion failed (counted).
        if self.kind == RAW_SIGNAL and not np.all(np.isfinite(self.values)):
            raise DomainError("raw frame contains non-finite values")


@dataclass(frozen=True)
class MaskParameters:
    """The eight assumed scene parameters attached to a mask region.

    Temperatures kelvin; every field must lie in the surrogate sampling
    ranges so both correction methods remain applicable.
    """

    wall_temp: float
    gas_temp: float
    emis_height: float
    emis_mean: float
    emis_sigma: float
    abs_height: float
    abs_mean: float
    abs_sigma: float

    def __post_init__(self) -> None:
        for name in ("wall_temp", "gas_temp", "emis_height", "emis_mean",
                     "emis_sigma", "abs_height", "abs_mean", "abs_sigma"):
            lo, hi = PARAMETER_RANGES[name]
            value = getattr(self, name)
            if not (lo <= value <= hi):
                raise DomainError(
                    f"mask parameter {name}={value} outside [{lo}, {hi}]"
                )

    def as_tuple(self) -> tuple[float, ...]:
        return (self.wall_temp, self.gas_temp, self.emis_height,
                self.emis_mean, self.emis_sigma, self.abs_height,
                self.abs_mean, self.abs_sigma)

    def scene(self, band: Band = DEFAULT_BAND) -> FurnaceScene:
        return FurnaceScene(
            tube_temp=1000.0,  # replaced by the solver
            wall_temp=self.wall_temp,
            gas_temp=self.gas_temp,
            emissivity=SpectralCurve.bell(self.emis_height, self.emis_mean,
                                          self.emis_sigma),
            absorption=SpectralCurve.bell(self.abs_height, self.abs_mean,
                                          self.abs_sigma),
            band=band,
        )

    def to_json(self) -> dict:
        """JSON form with boundary units (temperatures in Celsius)."""
        return {
            "wall_temp_c": kelvin_to_celsius(self.wall_temp),
            "gas_temp_c": kelvin_to_celsius(self.gas_temp),
            "emis_height": self.emis_height,
            "emis_mean": self.emis_mean,
            "emis_sigma": self.emis_sigma,
            "abs_height": self.abs_height,
            "abs_mean": self.abs_mean,
            "abs_sigma": self.abs_sigma,
        }

    @staticmethod
    def from_json(obj: dict) -> "MaskParameters":
        return MaskParameters(
            wall_temp=celsius_to_kelvin(float(obj["wall_temp_c"])),
            gas_temp=celsius_to_kelvin(float(obj["gas_temp_c"])),
            emis_height=float(obj["emis_height"]),
            emis_mean=float(obj["emis_mean"]),
            emis_sigma=float(obj["emis_sigma"]),
            abs_height=float(obj["abs_height"]),
            abs_mean=float(obj["abs_mean"]),
            abs_sigma=float(obj["abs_sigma"]),
        )


@dataclass(frozen=True)
class MaskRegion:
    polygon: tuple[tuple[float, float], ...]
    parameters: MaskParameters

    def __post_init__(self) -> None:
        if len(self.polygon) < 3:
            raise DomainError("mask region polygon needs >= 3 vertices")


@dataclass(frozen=True)
class ParameterMask:
    camera_id: str
    default_parameters: MaskParameters
    regions: tuple[MaskRegion, ...] = ()
    version: int = 1
    mask_id: str = field(default_factory=lambda: uuid.uuid4().hex)

    def resolve(self, width: int, height: int) -> tuple[np.ndarray, list[MaskParameters]]:
        """Per-pixel parameter assignment.

        Returns ``(group_ids, parameters)`` where ``group_ids`` is a
        (height, width) int array indexing ``parameters``. Later regions
        win overlaps; unclaimed pixels use the default tuple, so every
        pixel resolves to exactly one parameter set.
        """
        groups = np.zeros((height, width), dtype=np.int32)
        params = [self.default_parameters]
        for region in self.regions:
            inside = polygon_pixel_mask(region.polygon, width, height)
            params.append(region.parameters)
            groups[inside] = len(params) - 1
        return groups, params

    def to_json(self) -> dict:
        return {
            "camera_id": self.camera_id,
            "mask_id": self.mask_id,
            "version": self.version,
            "default_parameters": self.default_parameters.to_json(),
            "regions": [
                {"polygon": [list(v) for v in r.polygon],
                 "parameters": r.parameters.to_json()}
                for r in self.regions
            ],
        }

    @staticmethod
    def from_json(obj: dict, camera_id: str | None = None,
                  version: int | None = None) -> "ParameterMask":
        return ParameterMask(
            camera_id=camera_id or obj["camera_id"],
            default_parameters=MaskParameters.from_json(obj["default_parameters"]),
            regions=tuple(
                MaskRegion(
                    polygon=tuple((float(x), float(y)) for x, y in r["polygon"]),
                    parameters=MaskParameters.from_json(r["parameters"]),
                )
                for r in obj.get("regions", [])
            ),
            version=version if version is not None else int(obj.get("version", 1)),
            mask_id=obj.get("mask_id", uuid.uuid4().hex),
        )


class RoiKind(str, enum.Enum):
    POINT = "point"
    LINE = "line"
    POLYGON = "polygon"


@dataclass(frozen=True)
class RoiGeometry:
    kind: RoiKind
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        counts = {RoiKind.POINT: 1, RoiKind.LINE: 2}
        if self.kind in counts and len(self.vertices) != counts[self.kind]:
            raise DomainError(
                f"{self.kind.value} geometry needs exactly "
                f"{counts[self.kind]} vertex/vertices"
            )
        if self.kind == RoiKind.POLYGON:
            if len(self.vertices) < 3:
                raise DomainError("polygon needs >= 3 vertices")
            if abs(_shoelace_area(self.vertices)) < 1e-12:
                raise DomainError("polygon vertices are collinear")

    def to_json(self) -> dict:
        return {"kind": self.kind.value,
                "vertices": [list(v) for v in self.vertices]}

    @staticmethod
    def from_json(obj: dict) -> "RoiGeometry":
        return RoiGeometry(
            kind=RoiKind(obj["kind"]),
            vertices=tuple((float(x), float(y)) for x, y in obj["vertices"]),
        )


@dataclass(frozen=True)
class RoiStats:
    """Statistics of the frame values selected by one geometry.

    ``values`` is populated for lines (pixel traversal order) and
    carries the selected pixel values for polygons; histogram fields are
    polygon-only.
    """

    kind: RoiKind
    pixel_count: int
    mean: float
    std: float
    minimum: float
    maximum: float
    values: tuple[float, ...] = ()
    percentiles: dict[str, float] = field(default_factory=dict)
    histogram_counts: tuple[int, ...] = ()
    histogram_edges: tuple[float, ...] = ()

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "pixel_count": self.pixel_count,
            "mean": self.mean,
            "std": self.std,
            "minimum": self.minimum,
            "maximum": self.maximum,
            "values": list(self.values),
            "percentiles": dict(self.percentiles),
            "histogram_counts": list(self.histogram_counts),
            "histogram_edges": list(self.histogram_edges),
        }


def _shoelace_area(vertices) -> float:
    area = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return 0.5 * area


def point_in_polygon(x: float, y: float, vertices) -> bool:
    """Even-odd rule crossing test."""
    inside = False
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < x_cross:
                inside = not inside
    return inside


def polygon_pixel_mask(vertices, width: int, height: int) -> np.ndarray:
    """Boolean mask of pixels whose centers fall inside the polygon."""
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    x_min = max(0, int(np.floor(min(xs))))
    x_max = min(width - 1, int(np.ceil(max(xs))))
    y_min = max(0, int(np.floor(min(ys))))
    y_max = min(height - 1, int(np.ceil(max(ys))))
    mask = np.zeros((height, width), dtype=bool)
    for y in range(y_min, y_max + 1):
        for x in range(x_min, x_max + 1):
            if point_in_polygon(float(x), float(y), vertices):
                mask[y, x] = True
    return mask


def bresenham_line(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    """Integer pixel traversal from (x0, y0) to (x1, y1), inclusive."""
    points = []
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        points.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy
    return points


def _check_bounds(geom: RoiGeometry, width: int, height: int) -> None:
    for x, y in geom.vertices:
        if not (0.0 <= x <= width - 1 and 0.0 <= y <= height - 1):
            raise DomainError(
                f"geometry vertex ({x}, {y}) outside frame {width}x{height}"
            )


def roi_stats(frame: ThermalFrame, geom: RoiGeometry) -> RoiStats:
    """Statistics of the frame under a point, line or polygon selection."""
    _check_bounds(geom, frame.width, frame.height)
    grid = frame.values
    if geom.kind == RoiKind.POINT:
        px = int(round(geom.vertices[0][0]))
        py = int(round(geom.vertices[0][1]))
        x0, x1 = max(0, px - 1), min(frame.width - 1, px + 1)
        y0, y1 = max(0, py - 1), min(frame.height - 1, py + 1)
        window = grid[y0:y1 + 1, x0:x1 + 1].astype(float).ravel()
        return RoiStats(
            kind=geom.kind,
            pixel_count=window.size,
            mean=float(np.mean(window)),
            std=float(np.std(window)),
            minimum=float(np.min(window)),
            maximum=float(np.max(window)),
        )
    if geom.kind == RoiKind.LINE:
        (ax, ay), (bx, by) = geom.vertices
        pixels = bresenham_line(int(round(ax)), int(round(ay)),
                                int(round(bx)), int(round(by)))
        values = np.array([float(grid[y, x]) for x, y in pixels])
        return RoiStats(
            kind=geom.kind,
            pixel_count=len(values),
            mean=float(np.mean(values)),
            std=float(np.std(values)),
            minimum=float(np.min(values)),
            maximum=float(np.max(values)),
            values=tuple(values),
        )
    mask = polygon_pixel_mask(geom.vertices, frame.width, frame.height)
    selected = grid[mask].astype(float)
    if selected.size == 0:
        raise DomainError("polygon encloses no pixel centers")
    counts, edges = np.histogram(selected, bins=32)
    percentiles = {
        str(p): float(np.percentile(selected, p)) for p in (5, 25, 50, 75, 95)
    }
    return RoiStats(
        kind=geom.kind,
        pixel_count=int(selected.size),
        mean=float(np.mean(selected)),
        std=float(np.std(selected)),
        minimum=float(np.min(selected)),
        maximum=float(np.max(selected)),
        values=tuple(float(v) for v in selected),
        percentiles=percentiles,
        histogram_counts=tuple(int(c) for c in counts),
        histogram_edges=tuple(float(e) for e in edges),
    )


@dataclass(frozen=True)
class TubeSpec:
    """A simulated tube: circular footprint at a uniform temperature."""

    center_x: float
    center_y: float
    radius: float
    tube_temp: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise DomainError("tube radius must be positive")


@dataclass(frozen=True)
class SceneSpec:
    """Synthetic stand-in for a camera acquisition.

    Background pixels view the furnace wall (rendered as a surface at
    the wall temperature under the same parameter set); tube pixels view
    tubes at their own temperatures. ``parameters`` doubles as the
    frame's generating mask.
    """

    camera_id: str
    parameters: MaskParameters
    tubes: tuple[TubeSpec, ...] = ()
    noise_amplitude: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.noise_amplitude < 0.0:
            raise DomainError("noise amplitude must be >= 0")
        lo, hi = PARAMETER_RANGES["tube_temp"]
        for tube in self.tubes:
            if not (lo <= tube.tube_temp <= hi):
                raise DomainError(
                    f"tube temperature {tube.tube_temp} K outside [{lo}, {hi}]"
                )

    def generating_mask(self, version: int = 1) -> ParameterMask:
        return ParameterMask(
            camera_id=self.camera_id,
            default_parameters=self.parameters,
            version=version,
        )

    def to_json(self) -> dict:
        return {
            "camera_id": self.camera_id,
            "parameters": self.parameters.to_json(),
            "tubes": [
                {"center_x": t.center_x, "center_y": t.center_y,
                 "radius": t.radius,
                 "tube_temp_c": kelvin_to_celsius(t.tube_temp)}
                for t in self.tubes
            ],
            "noise_amplitude": self.noise_amplitude,
            "seed": self.seed,
        }

    @staticmethod
    def from_json(obj: dict) -> "SceneSpec":
        return SceneSpec(
            camera_id=obj["camera_id"],
            parameters=MaskParameters.from_json(obj["parameters"]),
            tubes=tuple(
                TubeSpec(
                    center_x=float(t["center_x"]),
                    center_y=float(t["center_y"]),
                    radius=float(t["radius"]),
                    tube_temp=celsius_to_kelvin(float(t["tube_temp_c"])),
                )
                for t in obj.get("tubes", [])
            ),
            noise_amplitude=float(obj.get("noise_amplitude", 0.0)),
            seed=int(obj.get("seed", 0)),
        )


def ground_truth_temperatures(spec: SceneSpec, width: int, height: int) -> np.ndarray:
    """Per-pixel true surface temperature the renderer uses [K]."""
    yy, xx = np.mgrid[0:height, 0:width]
    temps = np.full((height, width), spec.parameters.wall_temp)
    for tube in spec.tubes:
        inside = (xx - tube.center_x) ** 2 + (yy - tube.center_y) ** 2 <= tube.radius**2
        temps[inside] = tube.tube_temp
    return temps


def render_synthetic_frame(spec: SceneSpec, width: int, height: int,
                           q: QuadratureConfig = DEFAULT_QUADRATURE,
                           timestamp_ms: int = 0,
                           frame_id: str | None = None) -> ThermalFrame:
    """Forward-model every pixel and add seeded uniform noise."""
    temps = ground_truth_temperatures(spec, width, height)
    unique_temps, inverse = np.unique(temps, return_inverse=True)
    p = spec.parameters
    n = len(unique_temps)
    signals = signal_d_batch(
        unique_temps,
        np.full(n, p.wall_temp), np.full(n, p.gas_temp),
        np.full(n, p.emis_height), np.full(n, p.emis_mean), np.full(n, p.emis_sigma),
        np.full(n, p.abs_height), np.full(n, p.abs_mean), np.full(n, p.abs_sigma),
        q=q,
    )
    grid = signals[inverse].reshape(height, width)
    if spec.noise_amplitude > 0.0:
        rng = np.random.default_rng(spec.seed)
        grid = grid + rng.uniform(-spec.noise_amplitude, spec.noise_amplitude,
                                  grid.shape)
    return ThermalFrame(
        frame_id=frame_id or uuid.uuid4().hex,
        camera_id=spec.camera_id,
        timestamp_ms=timestamp_ms,
        width=width,
        height=height,
        values=grid.astype(np.float32),
        kind=RAW_SIGNAL,
    )


def correct_frame(frame: ThermalFrame, mask: ParameterMask, method: str,
                  cfg: SolverConfig = DEFAULT_SOLVER,
                  q: QuadratureConfig = DEFAULT_QUADRATURE,
                  model: MlpModel | None = None,
                  frame_id: str | None = None) -> ThermalFrame:
    """Invert every pixel signal to a tube temperature under the mask.

    ``method`` selects bisection or the surrogate network (which needs
    ``model``). Pixels whose signal cannot be bracketed are set to NaN
    and counted instead of failing the frame, so operators keep partial
    results while editing masks.
    """
    if frame.kind != RAW_SIGNAL:
        raise DomainError("only raw signal frames can be corrected")
    if method not in (BISECTION, SURROGATE):
        raise DomainError(f"unknown correction method {method!r}")
    if method == SURROGATE and model is None:
        raise DomainError("surrogate correction requires a trained model")
    groups, params = mask.resolve(frame.width, frame.height)
    signals = frame.values.astype(float).ravel()
    flat_groups = groups.ravel()
    temps = np.empty_like(signals)
    failures = 0
    for gid, p in enumerate(params):
        sel = flat_groups == gid
        if not np.any(sel):
            continue
        if method == BISECTION:
            prepared = PreparedModel(ModelKind.D, p.scene(), q)
            solved, ok = bisect_prepared_many(prepared, signals[sel], cfg)
            temps[sel] = solved
            failures += int((~ok).sum())
        else:
            rows = np.empty((int(sel.sum()), len(FEATURE_NAMES)))
            rows[:, 0] = signals[sel]
            rows[:, 1:] = p.as_tuple()
            temps[sel] = predict(model, rows)
    return ThermalFrame(
        frame_id=frame_id or uuid.uuid4().hex,
        camera_id=frame.camera_id,
        timestamp_ms=frame.timestamp_ms,
        width=frame.width,
        height=frame.height,
        values=temps.reshape(frame.height, frame.width).astype(np.float32),
        kind=CORRECTED_TEMPERATURE,
        mask_version=mask.version,
        method=method,
        error_count=failures,
        source_frame_id=frame.frame_id,
    )
