"""Neural surrogate of the model-D inverse.

A fixed, bias-free multilayer perceptron (9 -> 96 -> 125 -> 1, ReLU
hidden activations, linear output, 12,989 weights) maps a measured
signal plus the eight assumed scene parameters to the tube temperature,
replacing per-pixel bisection with one batched matrix pipeline.

Training is plain mini-batch Adam on the mean squared error of min-max
normalized outputs; everything is seeded and deterministic.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass, field

import numpy as np

from .constants import celsius_to_kelvin
from .errors import DomainError, ModelFileError, TrainingError
from .inversion import DEFAULT_SOLVER, SolverConfig, invert_batch, InversionResult
from .models import FurnaceScene, ModelKind, signal_d_batch
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .spectral import DEFAULT_BAND, Band, SpectralCurve

LAYER_SIZES = (9, 96, 125, 1)
PARAMETER_COUNT = sum(a * b for a, b in zip(LAYER_SIZES, LAYER_SIZES[1:]))

#: Input feature order. The first column is the measured signal, the
#: rest are the assumed scene parameters (temperatures in kelvin).
FEATURE_NAMES = (
    "signal", "wall_temp", "gas_temp",
    "emis_height", "emis_mean", "emis_sigma",
    "abs_height", "abs_mean", "abs_sigma",
)

#: Sampling ranges for dataset generation and mask validation
#: (kelvin / um / unitless), keyed like FEATURE_NAMES minus the signal,
#: plus the tube temperature target.
PARAMETER_RANGES: dict[str, tuple[float, float]] = {
    "tube_temp": (celsius_to_kelvin(800.0), celsius_to_kelvin(1200.0)),
    "wall_temp": (celsius_to_kelvin(800.0), celsius_to_kelvin(1300.0)),
    "gas_temp": (celsius_to_kelvin(500.0), celsius_to_kelvin(1000.0)),
    "emis_height": (0.65, 0.95),
    "emis_mean": (3.3, 4.6),
    "emis_sigma": (0.2, 1.8),
    "abs_height": (0.0, 0.2),
    "abs_mean": (3.3, 4.6),
    "abs_sigma": (0.2, 1.8),
}


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 256
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise DomainError("epochs must be >= 1")
        if self.batch_size < 1:
            raise DomainError("batch_size must be >= 1")


@dataclass(frozen=True)
class LabeledDataset:
    """Sampled scenes: ``inputs`` (n, 9) per FEATURE_NAMES, ``targets``
    (n,) tube temperatures [K]."""

    inputs: np.ndarray
    targets: np.ndarray
    seed: int

    def __len__(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class MlpModel:
    """Trained network weights plus the normalization baked into it."""

    weights: tuple[np.ndarray, ...]
    input_norm: np.ndarray   # (9, 2) per-feature (lo, hi)
    output_norm: np.ndarray  # (2,) (lo, hi)
    training_seed: int = 0

    def __post_init__(self) -> None:
        shapes = tuple(w.shape for w in self.weights)
        expected = tuple((a, b) for a, b in zip(LAYER_SIZES, LAYER_SIZES[1:]))
        if shapes != expected:
            raise DomainError(f"weight shapes {shapes} do not match {expected}")
        count = sum(w.size for w in self.weights)
        if count != PARAMETER_COUNT:
            raise DomainError(
                f"parameter count {count} != {PARAMETER_COUNT}"
            )
        if self.input_norm.shape != (len(FEATURE_NAMES), 2):
            raise DomainError("input_norm must have shape (9, 2)")
        if np.any(self.input_norm[:, 0] >= self.input_norm[:, 1]):
            raise DomainError("normalization ranges need lo < hi")
        if not self.output_norm[0] < self.output_norm[1]:
            raise DomainError("output normalization needs lo < hi")


@dataclass(frozen=True)
class TrainingReport:
    final_rms: float
    wall_time: float
    epochs: int
    train_count: int
    validation_count: int


@dataclass(frozen=True)
class BenchResult:
    n: int
    surrogate_seconds: float
    bisection_seconds: float
    speedup: float
    failures: int
    surrogate_output: np.ndarray = field(repr=False)
    bisection_output: np.ndarray = field(repr=False)


def generate_dataset(n: int, seed: int = 0,
                     ranges: dict[str, tuple[float, float]] = PARAMETER_RANGES,
                     q: QuadratureConfig = DEFAULT_QUADRATURE,
                     band: Band = DEFAULT_BAND) -> LabeledDataset:
    """Sample ``n`` scenes uniformly and compute their model-D signals.

    Reproducible from ``seed``: the same seed yields bit-identical rows.
    """
    if n < 1:
        raise DomainError("dataset size must be >= 1")
    rng = np.random.default_rng(seed)
    cols = {name: rng.uniform(*ranges[name], n) for name in (
        "tube_temp", "wall_temp", "gas_temp",
        "emis_height", "emis_mean", "emis_sigma",
        "abs_height", "abs_mean", "abs_sigma",
    )}
    signal = signal_d_batch(
        cols["tube_temp"], cols["wall_temp"], cols["gas_temp"],
        cols["emis_height"], cols["emis_mean"], cols["emis_sigma"],
        cols["abs_height"], cols["abs_mean"], cols["abs_sigma"],
        band=band, q=q,
    )
    inputs = np.column_stack([signal] + [cols[name] for name in FEATURE_NAMES[1:]])
    return LabeledDataset(inputs=inputs, targets=cols["tube_temp"], seed=seed)


def scene_for_row(row: np.ndarray, band: Band = DEFAULT_BAND) -> FurnaceScene:
    """Assumed furnace scene encoded by one input row (signal ignored)."""
    return FurnaceScene(
        tube_temp=1000.0,  # placeholder; the solver replaces it
        wall_temp=float(row[1]),
        gas_temp=float(row[2]),
        emissivity=SpectralCurve.bell(float(row[3]), float(row[4]), float(row[5])),
        absorption=SpectralCurve.bell(float(row[6]), float(row[7]), float(row[8])),
        band=band,
    )


def _forward_pass(weights, x):
    z1 = x @ weights[0]
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ weights[1]
    a2 = np.maximum(z2, 0.0)
    return z1, a1, z2, a2, a2 @ weights[2]


def loss_and_gradients(weights, x_norm: np.ndarray, y_norm: np.ndarray):
    """Mean squared error and its gradients w.r.t. every weight matrix."""
    n = len(x_norm)
    z1, a1, z2, a2, y_hat = _forward_pass(weights, x_norm)
    diff = y_hat - y_norm
    loss = float(np.mean(diff**2))
    d = 2.0 * diff / n
    g3 = a2.T @ d
    dz2 = (d @ weights[2].T) * (z2 > 0.0)
    g2 = a1.T @ dz2
    dz1 = (dz2 @ weights[1].T) * (z1 > 0.0)
    g1 = x_norm.T @ dz1
    return loss, (g1, g2, g3)


def initial_weights(seed: int) -> tuple[np.ndarray, ...]:
    """Seeded uniform initialization in +-sqrt(6 / (fan_in + fan_out))."""
    rng = np.random.default_rng(seed)
    out = []
    for fan_in, fan_out in zip(LAYER_SIZES, LAYER_SIZES[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        out.append(rng.uniform(-bound, bound, (fan_in, fan_out)))
    return tuple(out)


def _norm_ranges(data: LabeledDataset) -> tuple[np.ndarray, np.ndarray]:
    lo = [float(data.inputs[:, 0].min())]
    hi = [float(data.inputs[:, 0].max())]
    for name in FEATURE_NAMES[1:]:
        r = PARAMETER_RANGES[name]
        lo.append(r[0])
        hi.append(r[1])
    input_norm = np.column_stack([lo, hi])
    output_norm = np.array(PARAMETER_RANGES["tube_temp"], dtype=float)
    if input_norm[0, 0] == input_norm[0, 1]:
        # degenerate single-signal dataset; widen so lo < hi holds
        input_norm[0, 1] = input_norm[0, 0] + 1.0
    return input_norm, output_norm


def _normalize(x: np.ndarray, norm: np.ndarray) -> np.ndarray:
    return (x - norm[:, 0]) / (norm[:, 1] - norm[:, 0])


def train(data: LabeledDataset, cfg: TrainConfig = TrainConfig(),
          validation_fraction: float = 0.1) -> tuple[MlpModel, TrainingReport]:
    """Train the surrogate; returns the model and its validation report.

    The dataset is shuffled once (seeded) and split into train and
    validation parts before any optimization. The reported RMS is in
    kelvin on denormalized outputs. A non-finite loss aborts with
    :class:`TrainingError` naming the epoch.
    """
    if len(data) < 1:
        raise DomainError("dataset is empty")
    if not (0.0 <= validation_fraction < 1.0):
        raise DomainError("validation_fraction must be in [0, 1)")
    started = time.perf_counter()
    input_norm, output_norm = _norm_ranges(data)
    x = _normalize(data.inputs, input_norm)
    y = ((data.targets - output_norm[0])
         / (output_norm[1] - output_norm[0])).reshape(-1, 1)

    rng = np.random.default_rng(cfg.seed)
    order = rng.permutation(len(data))
    n_val = int(round(len(data) * validation_fraction))
    n_val = min(n_val, len(data) - 1)
    val_idx, train_idx = order[:n_val], order[n_val:]
    x_train, y_train = x[train_idx], y[train_idx]
    x_val, y_val = x[val_idx], y[val_idx]

    weights = [w.copy() for w in initial_weights(cfg.seed)]
    m = [np.zeros_like(w) for w in weights]
    v = [np.zeros_like(w) for w in weights]
    step = 0
    for epoch in range(cfg.epochs):
        perm = rng.permutation(len(x_train))
        for start in range(0, len(x_train), cfg.batch_size):
            idx = perm[start:start + cfg.batch_size]
            loss, grads = loss_and_gradients(weights, x_train[idx], y_train[idx])
            if not np.isfinite(loss):
                raise TrainingError(f"loss diverged at epoch {epoch}")
            step += 1
            bias1 = 1.0 - cfg.beta1**step
            bias2 = 1.0 - cfg.beta2**step
            for j, g in enumerate(grads):
                m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g
                v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g
                weights[j] -= (cfg.learning_rate * (m[j] / bias1)
                               / (np.sqrt(v[j] / bias2) + cfg.adam_eps))

    model = MlpModel(
        weights=tuple(weights),
        input_norm=input_norm,
        output_norm=output_norm,
        training_seed=cfg.seed,
    )
    if len(x_val):
        scale = output_norm[1] - output_norm[0]
        y_hat = _forward_pass(weights, x_val)[-1]
        rms = float(np.sqrt(np.mean(((y_hat - y_val) * scale) ** 2)))
    else:
        y_hat = _forward_pass(weights, x_train)[-1]
        scale = output_norm[1] - output_norm[0]
        rms = float(np.sqrt(np.mean(((y_hat - y_train) * scale) ** 2)))
    report = TrainingReport(
        final_rms=rms,
        wall_time=time.perf_counter() - started,
        epochs=cfg.epochs,
        train_count=len(x_train),
        validation_count=len(x_val),
    )
    return model, report


def predict(model: MlpModel, inputs: np.ndarray) -> np.ndarray:
    """Surrogate tube temperatures [K] for rows of features.

    Pure feed-forward on normalized features; rows modestly outside the
    training ranges are evaluated as-is (no clamping). The result does
    not depend on how the batch is partitioned.
    """
    x = np.asarray(inputs, dtype=float)
    if x.ndim != 2 or x.shape[1] != len(FEATURE_NAMES):
        raise DomainError(
            f"inputs must have shape (n, {len(FEATURE_NAMES)}), got {x.shape}"
        )
    x_norm = _normalize(x, model.input_norm)
    y_norm = _forward_pass(model.weights, x_norm)[-1]
    lo, hi = model.output_norm
    return (lo + y_norm * (hi - lo)).ravel()


def bench(model: MlpModel, inputs: np.ndarray,
          cfg: SolverConfig = DEFAULT_SOLVER,
          q: QuadratureConfig = DEFAULT_QUADRATURE,
          kind: ModelKind = ModelKind.D) -> BenchResult:
    """Wall-clock comparison of surrogate inference vs batch bisection.

    Both paths see identical inputs. Solver failures are excluded
    pairwise from the reported outputs and counted in ``failures``.
    """
    x = np.asarray(inputs, dtype=float)
    if len(x) < 1000:
        raise DomainError("bench needs at least 1000 rows for stable timing")

    t0 = time.perf_counter()
    surrogate_out = predict(model, x)
    surrogate_seconds = time.perf_counter() - t0

    scenes = [scene_for_row(row) for row in x]
    t0 = time.perf_counter()
    results = invert_batch(kind, scenes, x[:, 0], cfg, q)
    bisection_seconds = time.perf_counter() - t0

    ok = np.array([isinstance(r, InversionResult) for r in results])
    bisection_out = np.array([
        r.temperature if isinstance(r, InversionResult) else np.nan
        for r in results
    ])
    return BenchResult(
        n=len(x),
        surrogate_seconds=surrogate_seconds,
        bisection_seconds=bisection_seconds,
        speedup=bisection_seconds / surrogate_seconds,
        failures=int((~ok).sum()),
        surrogate_output=surrogate_out[ok],
        bisection_output=bisection_out[ok],
    )


_MAGIC = b"MLPT"
_VERSION = 1


def save_model(model: MlpModel, path) -> None:
    """Write the model file: magic, version, layer count, per-layer
    (rows, cols, row-major float64), 10 normalization pairs, seed."""
    chunks = [_MAGIC, struct.pack("<I", _VERSION),
              struct.pack("<I", len(model.weights))]
    for w in model.weights:
        chunks.append(struct.pack("<II", w.shape[0], w.shape[1]))
        chunks.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
    for lo, hi in model.input_norm:
        chunks.append(struct.pack("<dd", lo, hi))
    chunks.append(struct.pack("<dd", *model.output_norm))
    chunks.append(struct.pack("<Q", model.training_seed))
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def load_model(path) -> MlpModel:
    """Read a model file written by :func:`save_model`.

    Raises :class:`ModelFileError` with the failing byte offset for
    truncated or corrupt files, naming the offending layer for shape
    mismatches.
    """
    with open(path, "rb") as fh:
        blob = fh.read()

    offset = 0

    def take(count: int, what: str) -> bytes:
        nonlocal offset
        if offset + count > len(blob):
            raise ModelFileError(f"truncated file while reading {what}", offset)
        piece = blob[offset:offset + count]
        offset += count
        return piece

    if take(4, "magic") != _MAGIC:
        raise ModelFileError("bad magic, not a surrogate model file", 0)
    (version,) = struct.unpack("<I", take(4, "version"))
    if version != _VERSION:
        raise ModelFileError(f"unsupported version {version}", 4)
    (layer_count,) = struct.unpack("<I", take(4, "layer count"))
    if layer_count != len(LAYER_SIZES) - 1:
        raise ModelFileError(f"expected 3 layers, found {layer_count}", 8)
    weights = []
    for layer in range(layer_count):
        shape_offset = offset
        rows, cols = struct.unpack("<II", take(8, f"layer {layer} shape"))
        expected = (LAYER_SIZES[layer], LAYER_SIZES[layer + 1])
        if (rows, cols) != expected:
            raise ModelFileError(
                f"layer {layer} has shape {rows}x{cols}, expected "
                f"{expected[0]}x{expected[1]}", shape_offset
            )
        raw = take(rows * cols * 8, f"layer {layer} weights")
        weights.append(np.frombuffer(raw, dtype="<f8").reshape(rows, cols).copy())
    pairs = [struct.unpack("<dd", take(16, f"normalization pair {i}"))
             for i in range(len(FEATURE_NAMES) + 1)]
    (seed,) = struct.unpack("<Q", take(8, "seed"))
    if offset != len(blob):
        raise ModelFileError("trailing bytes after model payload", offset)
    return MlpModel(
        weights=tuple(weights),
        input_norm=np.array(pairs[:-1], dtype=float),
        output_norm=np.array(pairs[-1], dtype=float),
        training_seed=seed,
    )
