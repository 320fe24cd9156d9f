"""Parameter-perturbation sweeps and the measurement uncertainty budget.

For each swept parameter the *true* scene stays at its nominal values
while the thermometer's *assumed* value of that parameter is moved
across a grid; the recovered tube temperature minus the true one is the
induced error ``delta_t``. This orientation (error lives in the
assumption used for inversion) is what reproduces the observed signs:
an overestimated emissivity lowers the reading of a selective radiator,
but raises it once wall reflections dominate.

Per-parameter uncertainty is the maximum absolute ``delta_t`` over the
grid; uncertainties combine in quadrature, and the expanded uncertainty
applies the coverage factor ``k`` (1.96 for a 95 % interval).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .constants import celsius_to_kelvin, kelvin_to_celsius
from .errors import DomainError
from .inversion import DEFAULT_SOLVER, SolverConfig, invert_signal
from .models import FurnaceScene, ModelKind, forward_signal
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .spectral import DEFAULT_BAND, SpectralCurve

WAVELENGTH = "wavelength"
EMISSIVITY = "emissivity"
ABSORPTION = "absorption"
WALL_TEMP = "wall_temp"
GAS_TEMP = "gas_temp"

#: Parameters that participate in each measurement model.
MODEL_PARAMETERS: dict[ModelKind, tuple[str, ...]] = {
    ModelKind.A: (WAVELENGTH,),
    ModelKind.B: (WAVELENGTH, EMISSIVITY),
    ModelKind.C: (WAVELENGTH, EMISSIVITY, WALL_TEMP),
    ModelKind.D: (WAVELENGTH, EMISSIVITY, WALL_TEMP, ABSORPTION, GAS_TEMP),
}

#: Nominal operating point and sweep ranges of a typical steam reformer.
#: Temperatures kelvin, wavelength um (band center), the rest unitless.
NOMINAL_RANGES: dict[str, tuple[float, float, float]] = {
    WAVELENGTH: (3.95, 3.7, 4.2),
    EMISSIVITY: (0.82, 0.72, 0.92),
    ABSORPTION: (0.05, 0.0, 0.1),
    WALL_TEMP: (celsius_to_kelvin(1105.0), celsius_to_kelvin(1030.0), celsius_to_kelvin(1180.0)),
    GAS_TEMP: (celsius_to_kelvin(980.0), celsius_to_kelvin(880.0), celsius_to_kelvin(1080.0)),
}

#: Tube temperatures [K] at which sweeps are evaluated by default.
DEFAULT_TUBE_TEMPS = tuple(
    celsius_to_kelvin(t) for t in (880.0, 910.0, 940.0, 970.0, 1000.0, 1030.0)
)

DEFAULT_GRID_POINTS = 41


@dataclass(frozen=True)
class ParameterSpec:
    """One swept parameter: nominal value, grid range and resolution."""

    name: str
    nominal: float
    range_lo: float
    range_hi: float
    grid_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if self.name not in NOMINAL_RANGES:
            raise DomainError(f"unknown parameter {self.name!r}")
        if not (self.range_lo <= self.nominal <= self.range_hi):
            raise DomainError(
                f"nominal {self.nominal} outside range "
                f"[{self.range_lo}, {self.range_hi}]"
            )
        if self.grid_points < 3:
            raise DomainError("grid_points must be >= 3")

    def grid(self) -> np.ndarray:
        return np.linspace(self.range_lo, self.range_hi, self.grid_points)


def default_spec(name: str, grid_points: int = DEFAULT_GRID_POINTS) -> ParameterSpec:
    nominal, lo, hi = NOMINAL_RANGES[name]
    return ParameterSpec(name, nominal, lo, hi, grid_points)


def nominal_scene(tube_temp: float = celsius_to_kelvin(950.0)) -> FurnaceScene:
    """Scene at the nominal operating point with constant curves."""
    return FurnaceScene(
        tube_temp=tube_temp,
        wall_temp=NOMINAL_RANGES[WALL_TEMP][0],
        gas_temp=NOMINAL_RANGES[GAS_TEMP][0],
        emissivity=SpectralCurve.constant(NOMINAL_RANGES[EMISSIVITY][0]),
        absorption=SpectralCurve.constant(NOMINAL_RANGES[ABSORPTION][0]),
        band=DEFAULT_BAND,
    )


def apply_parameter(scene: FurnaceScene, name: str, value: float) -> FurnaceScene:
    """Scene with one parameter replaced by ``value``.

    The wavelength parameter re-centers the band at fixed width; the
    emissivity and absorption parameters rescale the curve height so
    constant and bell configurations perturb identically.
    """
    if name == WAVELENGTH:
        return replace(scene, band=scene.band.shifted_to(value))
    if name == EMISSIVITY:
        return replace(scene, emissivity=scene.emissivity.with_height(value))
    if name == ABSORPTION:
        return replace(scene, absorption=scene.absorption.with_height(value))
    if name == WALL_TEMP:
        return replace(scene, wall_temp=value)
    if name == GAS_TEMP:
        return replace(scene, gas_temp=value)
    raise DomainError(f"unknown parameter {name!r}")


@dataclass(frozen=True)
class SweepResult:
    """delta_t[i, j] = recovered - true tube temperature at
    ``tube_temps[i]`` when the assumed parameter equals ``grid[j]``."""

    parameter: ParameterSpec
    tube_temps: tuple[float, ...]
    grid: tuple[float, ...]
    delta_t: np.ndarray

    def row(self, tube_temp: float) -> np.ndarray:
        for i, t in enumerate(self.tube_temps):
            if abs(t - tube_temp) <= 1e-9:
                return self.delta_t[i]
        raise DomainError(f"tube temperature {tube_temp} K not in sweep")


@dataclass(frozen=True)
class UncertaintyBudget:
    """Per-parameter uncertainties with quadrature combination [K]."""

    per_parameter: dict[str, float]
    combined: float
    coverage_k: float
    expanded: float


def perturbation_sweep(kind: ModelKind, spec: ParameterSpec,
                       tube_temps: Sequence[float] = DEFAULT_TUBE_TEMPS,
                       nominals: FurnaceScene | None = None,
                       cfg: SolverConfig = DEFAULT_SOLVER,
                       q: QuadratureConfig = DEFAULT_QUADRATURE) -> SweepResult:
    """Sweep one assumed parameter across its grid at several tube temps.

    Solver failures for individual grid cells propagate; with the
    default ranges every cell converges.
    """
    if spec.name not in MODEL_PARAMETERS[kind]:
        raise DomainError(
            f"parameter {spec.name!r} is not part of model {kind.name}"
        )
    scene = nominals if nominals is not None else nominal_scene()
    grid = spec.grid()
    delta = np.empty((len(tube_temps), len(grid)))
    for i, ts in enumerate(tube_temps):
        true_scene = scene.with_tube_temp(float(ts))
        s_true = forward_signal(kind, true_scene, q)
        for j, value in enumerate(grid):
            assumed = apply_parameter(true_scene, spec.name, float(value))
            result = invert_signal(kind, assumed, s_true, cfg, q)
            delta[i, j] = result.temperature - ts
    return SweepResult(
        parameter=spec,
        tube_temps=tuple(float(t) for t in tube_temps),
        grid=tuple(float(v) for v in grid),
        delta_t=delta,
    )


def uncertainty_for_parameter(sweep: SweepResult, tube_temp: float) -> float:
    """Maximum absolute temperature error across the sweep grid [K]."""
    return float(np.max(np.abs(sweep.row(tube_temp))))


def combine_budget(per_parameter: Mapping[str, float],
                   coverage_k: float = 1.96) -> UncertaintyBudget:
    """Quadrature combination ``u_c = sqrt(sum u_i^2)`` and expansion
    ``U = k * u_c``."""
    values = dict(per_parameter)
    for name, u in values.items():
        if u < 0.0 or not np.isfinite(u):
            raise DomainError(f"uncertainty for {name!r} must be >= 0, got {u}")
    combined = float(np.sqrt(sum(u * u for u in values.values())))
    return UncertaintyBudget(
        per_parameter=values,
        combined=combined,
        coverage_k=float(coverage_k),
        expanded=float(coverage_k) * combined,
    )


def model_budgets(kind: ModelKind,
                  tube_temps: Sequence[float] = DEFAULT_TUBE_TEMPS,
                  coverage_k: float = 1.96,
                  grid_points: int = DEFAULT_GRID_POINTS,
                  nominals: FurnaceScene | None = None,
                  cfg: SolverConfig = DEFAULT_SOLVER,
                  q: QuadratureConfig = DEFAULT_QUADRATURE,
                  ) -> tuple[list[SweepResult], list[tuple[float, UncertaintyBudget]]]:
    """Run every sweep a model supports and budget each tube temperature."""
    sweeps = [
        perturbation_sweep(kind, default_spec(name, grid_points), tube_temps,
                           nominals, cfg, q)
        for name in MODEL_PARAMETERS[kind]
    ]
    budgets = []
    for ts in tube_temps:
        us = {s.parameter.name: uncertainty_for_parameter(s, ts) for s in sweeps}
        budgets.append((float(ts), combine_budget(us, coverage_k)))
    return sweeps, budgets


_TEMPERATURE_PARAMS = (WALL_TEMP, GAS_TEMP)


def _param_value_out(name: str, value: float) -> float:
    """Temperatures cross the file boundary in Celsius."""
    return kelvin_to_celsius(value) if name in _TEMPERATURE_PARAMS else value


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def emit_sweep_report(sweeps: Sequence[tuple[ModelKind, SweepResult]],
                      budgets: Sequence[tuple[ModelKind, float, UncertaintyBudget]],
                      out_dir: str | Path) -> tuple[Path, Path]:
    """Write sweep and budget tables as CSV under ``out_dir``.

    Returns ``(sweeps_path, budgets_path)``. Temperatures are written in
    Celsius, numbers with six significant digits.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sweeps_path = out / "sweeps.csv"
    budgets_path = out / "budgets.csv"
    with sweeps_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "parameter", "tube_temp_C", "param_value", "delta_T_C"])
        for kind, sweep in sweeps:
            name = sweep.parameter.name
            for i, ts in enumerate(sweep.tube_temps):
                for j, value in enumerate(sweep.grid):
                    writer.writerow([
                        kind.name,
                        name,
                        _fmt(kelvin_to_celsius(ts)),
                        _fmt(_param_value_out(name, value)),
                        _fmt(sweep.delta_t[i, j]),
                    ])
    with budgets_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "tube_temp_C", "parameter", "u_C", "u_c_C", "k", "U_C"])
        for kind, ts, budget in budgets:
            for name, u in budget.per_parameter.items():
                writer.writerow([
                    kind.name,
                    _fmt(kelvin_to_celsius(ts)),
                    name,
                    _fmt(u),
                    _fmt(budget.combined),
                    _fmt(budget.coverage_k),
                    _fmt(budget.expanded),
                ])
    return sweeps_path, budgets_path
