"""Command-line entry points for every toolkit capability.

Temperature-valued flags accept a ``C`` or ``K`` suffix and default to
Celsius (``--ts 950``, ``--ts 950C`` and ``--ts 1223.15K`` are the same
temperature). Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from .constants import celsius_to_kelvin, kelvin_to_celsius
from .errors import RadthermError
from .frames import SceneSpec, render_synthetic_frame
from .inversion import SolverConfig, invert_signal
from .models import ModelKind, forward_signal
from .quadrature import QuadratureConfig
from .sensitivity import (default_spec, emit_sweep_report, model_budgets,
                          perturbation_sweep)
from .spectral import Band, SpectralCurve
from .store import FrameStore, frame_meta, write_frame_file
from .surrogate import (LabeledDataset, TrainConfig, bench,
                        generate_dataset, load_model, save_model, train)

ENV_DATA_DIR = "RADTHERM_DATA_DIR"


def parse_temperature(text: str) -> float:
    """Temperature flag -> kelvin. Bare numbers are Celsius."""
    s = text.strip()
    if s and s[-1] in "cCkK":
        unit, s = s[-1].upper(), s[:-1]
    else:
        unit = "C"
    try:
        value = float(s)
    except ValueError:
        raise click.BadParameter(f"not a temperature: {text!r}") from None
    return value if unit == "K" else celsius_to_kelvin(value)


class TemperatureParam(click.ParamType):
    name = "temperature"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        return parse_temperature(str(value))


TEMPERATURE = TemperatureParam()


def _load_config(ctx: click.Context, param, value):
    if value:
        defaults = json.loads(Path(value).read_text(encoding="utf-8"))
        ctx.default_map = dict(defaults)
    return value


@click.group()
@click.option("--config", type=click.Path(exists=True), callback=_load_config,
              expose_value=False, is_eager=True,
              help="JSON file supplying default values for any flag, "
                   "keyed by subcommand.")
def main() -> None:
    """Radiation-thermometry error correction toolkit."""


def _scene_options(fn):
    fn = click.option("--band-lo", type=float, default=3.7, show_default=True,
                      help="Band lower edge [um].")(fn)
    fn = click.option("--band-hi", type=float, default=4.2, show_default=True,
                      help="Band upper edge [um].")(fn)
    fn = click.option("--alpha", type=float, default=0.05, show_default=True,
                      help="Constant effective gas absorption.")(fn)
    fn = click.option("--eps", type=float, default=0.82, show_default=True,
                      help="Constant tube emissivity.")(fn)
    fn = click.option("--tg", type=TEMPERATURE, default="980C",
                      help="Gas temperature (default Celsius).")(fn)
    fn = click.option("--tw", type=TEMPERATURE, default="1105C",
                      help="Wall temperature (default Celsius).")(fn)
    return fn


def _build_scene(ts_k: float, tw: float, tg: float, eps: float, alpha: float,
                 band_lo: float, band_hi: float):
    from .models import FurnaceScene

    return FurnaceScene(
        tube_temp=ts_k,
        wall_temp=tw,
        gas_temp=tg,
        emissivity=SpectralCurve.constant(eps),
        absorption=SpectralCurve.constant(alpha),
        band=Band(band_lo, band_hi),
    )


def _write_or_echo(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command()
@click.option("--model", "model_name", default="D", show_default=True)
@click.option("--ts", type=TEMPERATURE, required=True,
              help="Tube temperature (default Celsius).")
@_scene_options
@click.option("--nodes", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def forward(model_name, ts, tw, tg, eps, alpha, band_lo, band_hi, nodes, out):
    """Evaluate the forward signal for one scene."""
    try:
        kind = ModelKind.parse(model_name)
        scene = _build_scene(ts, tw, tg, eps, alpha, band_lo, band_hi)
        signal = forward_signal(kind, scene, QuadratureConfig(node_count=nodes))
    except RadthermError as exc:
        _fail(exc)
    _write_or_echo(f"{signal!r}", out)


@main.command()
@click.option("--model", "model_name", default="D", show_default=True)
@click.option("--signal", type=float, required=True,
              help="Measured band signal [W m^-2 sr^-1].")
@_scene_options
@click.option("--tolerance", type=float, default=1e-3, show_default=True,
              help="Bisection temperature tolerance [K].")
@click.option("--out", type=click.Path(), default=None)
def invert(model_name, signal, tw, tg, eps, alpha, band_lo, band_hi,
           tolerance, out):
    """Recover the tube temperature behind a measured signal."""
    try:
        kind = ModelKind.parse(model_name)
        scene = _build_scene(celsius_to_kelvin(950.0), tw, tg, eps, alpha,
                             band_lo, band_hi)
        result = invert_signal(kind, scene, signal,
                               SolverConfig(tolerance_t=tolerance))
    except RadthermError as exc:
        _fail(exc)
    _write_or_echo(
        f"{kelvin_to_celsius(result.temperature):.4f} C "
        f"({result.temperature:.4f} K, {result.iterations} iterations)",
        out,
    )


@main.command()
@click.option("--model", "model_name", default="B", show_default=True)
@click.option("--param", "param_name", required=True,
              type=click.Choice(["wavelength", "emissivity", "absorption",
                                 "wall_temp", "gas_temp"]))
@click.option("--grid-points", type=int, default=41, show_default=True)
@click.option("--out", type=click.Path(), default="reports", show_default=True,
              help="Output directory for CSV and PNG.")
@click.option("--plot/--no-plot", default=True, show_default=True)
def sweep(model_name, param_name, grid_points, out, plot):
    """Run one parameter-perturbation sweep and write its report."""
    try:
        kind = ModelKind.parse(model_name)
        result = perturbation_sweep(kind, default_spec(param_name, grid_points))
        sweeps_path, _ = emit_sweep_report([(kind, result)], [], out)
        if plot:
            from .reports import render_sweep_figure

            figure = render_sweep_figure(
                kind, result, Path(out) / f"sweep_{kind.name}_{param_name}.png"
            )
            click.echo(f"wrote {sweeps_path} and {figure}")
        else:
            click.echo(f"wrote {sweeps_path}")
    except RadthermError as exc:
        _fail(exc)


@main.command()
@click.option("--model", "model_name", default="D", show_default=True)
@click.option("--k", "coverage_k", type=float, default=1.96, show_default=True)
@click.option("--grid-points", type=int, default=41, show_default=True)
@click.option("--out", type=click.Path(), default="reports", show_default=True)
@click.option("--plot/--no-plot", default=True, show_default=True)
def budget(model_name, coverage_k, grid_points, out, plot):
    """Full uncertainty budget for a model (all sweeps + quadrature sum)."""
    try:
        kind = ModelKind.parse(model_name)
        sweeps, budgets = model_budgets(kind, coverage_k=coverage_k,
                                        grid_points=grid_points)
        paths = emit_sweep_report(
            [(kind, s) for s in sweeps],
            [(kind, ts, b) for ts, b in budgets],
            out,
        )
        written = list(paths)
        if plot:
            from .reports import render_budget_figure, render_sweep_figure

            written.append(render_budget_figure(
                kind, budgets, Path(out) / f"budget_{kind.name}.png"))
            for s in sweeps:
                written.append(render_sweep_figure(
                    kind, s,
                    Path(out) / f"sweep_{kind.name}_{s.parameter.name}.png"))
        click.echo("wrote " + ", ".join(str(p) for p in written))
    except RadthermError as exc:
        _fail(exc)


@main.command()
@click.option("--n", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--out", type=click.Path(), default="dataset.npz", show_default=True)
def dataset(n, seed, out):
    """Sample labeled training data from the model-D forward map."""
    try:
        data = generate_dataset(n, seed=seed)
    except RadthermError as exc:
        _fail(exc)
    np.savez(out, inputs=data.inputs, targets=data.targets, seed=data.seed)
    click.echo(f"wrote {out} ({n} rows, seed {seed})")


@main.command(name="train")
@click.option("--data", "data_path", type=click.Path(exists=True), required=True)
@click.option("--epochs", type=int, default=200, show_default=True)
@click.option("--lr", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=int, default=256, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--val-fraction", type=float, default=0.1, show_default=True)
@click.option("--out", type=click.Path(), default="model.mlpt", show_default=True)
def train_cmd(data_path, epochs, lr, batch_size, seed, val_fraction, out):
    """Train the surrogate network on a generated dataset."""
    blob = np.load(data_path)
    data = LabeledDataset(inputs=blob["inputs"], targets=blob["targets"],
                          seed=int(blob["seed"]))
    cfg = TrainConfig(epochs=epochs, learning_rate=lr, batch_size=batch_size,
                      seed=seed)
    try:
        model, report = train(data, cfg, validation_fraction=val_fraction)
    except RadthermError as exc:
        _fail(exc)
    save_model(model, out)
    click.echo(
        f"wrote {out}: validation RMS {report.final_rms:.4f} K on "
        f"{report.validation_count} rows ({report.wall_time:.1f} s)"
    )


@main.command(name="bench")
@click.option("--model-file", type=click.Path(exists=True), required=True)
@click.option("--n", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=11, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def bench_cmd(model_file, n, seed, out):
    """Time surrogate inference against batched bisection."""
    try:
        model = load_model(model_file)
        data = generate_dataset(n, seed=seed)
        result = bench(model, data.inputs)
    except RadthermError as exc:
        _fail(exc)
    _write_or_echo(
        f"n={result.n}: surrogate {result.surrogate_seconds * 1e3:.2f} ms, "
        f"bisection {result.bisection_seconds * 1e3:.2f} ms, "
        f"speedup x{result.speedup:.1f}, failures {result.failures}",
        out,
    )


@main.command()
@click.option("--scene", "scene_path", type=click.Path(exists=True), required=True,
              help="SceneSpec JSON file.")
@click.option("--width", type=int, default=96, show_default=True)
@click.option("--height", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(), default="frame.thfr", show_default=True)
def render(scene_path, width, height, out):
    """Render a synthetic frame to a binary frame file + JSON sidecar."""
    try:
        spec = SceneSpec.from_json(
            json.loads(Path(scene_path).read_text(encoding="utf-8")))
        frame = render_synthetic_frame(spec, width, height,
                                       timestamp_ms=int(time.time() * 1000))
        write_frame_file(frame, out)
    except RadthermError as exc:
        _fail(exc)
    sidecar = Path(out).with_suffix(".json")
    sidecar.write_text(json.dumps(frame_meta(frame), indent=1),
                       encoding="utf-8")
    click.echo(f"wrote {out} and {sidecar}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(), default=None,
              envvar=ENV_DATA_DIR, show_default="$RADTHERM_DATA_DIR or ./data")
@click.option("--model-file", type=click.Path(exists=True), default=None,
              help="Surrogate model enabling the surrogate correction method.")
def serve(port, host, data_dir, model_file):
    """Run the monitoring HTTP service."""
    import uvicorn

    from .service import create_app

    store = FrameStore(data_dir or "data")
    model = load_model(model_file) if model_file else None
    uvicorn.run(create_app(store, model=model), host=host, port=port)


if __name__ == "__main__":
    main()
