"""Figure rendering for sweep and budget reports.

The CSV tables are the machine-readable contract; these PNG companions
give operators the same curves at a glance: temperature error against
the perturbed parameter (one line per tube temperature) and the
per-parameter uncertainty against tube temperature.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .constants import kelvin_to_celsius
from .models import ModelKind
from .sensitivity import (GAS_TEMP, WALL_TEMP, SweepResult, UncertaintyBudget)

_PARAM_LABELS = {
    "wavelength": "band center [um]",
    "emissivity": "assumed emissivity",
    "absorption": "assumed absorption",
    "wall_temp": "assumed wall temperature [C]",
    "gas_temp": "assumed gas temperature [C]",
}


def _grid_for_plot(sweep: SweepResult):
    if sweep.parameter.name in (WALL_TEMP, GAS_TEMP):
        return [kelvin_to_celsius(v) for v in sweep.grid]
    return list(sweep.grid)


def render_sweep_figure(kind: ModelKind, sweep: SweepResult, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = _grid_for_plot(sweep)
    for i, ts in enumerate(sweep.tube_temps):
        ax.plot(xs, sweep.delta_t[i], label=f"Ts = {kelvin_to_celsius(ts):.0f} C")
    nominal = sweep.parameter.nominal
    if sweep.parameter.name in (WALL_TEMP, GAS_TEMP):
        nominal = kelvin_to_celsius(nominal)
    ax.axvline(nominal, color="black", linestyle=":", linewidth=1)
    ax.set_xlabel(_PARAM_LABELS.get(sweep.parameter.name, sweep.parameter.name))
    ax.set_ylabel("temperature error [C]")
    ax.set_title(f"model {kind.name}: {sweep.parameter.name} sweep")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def render_budget_figure(kind: ModelKind,
                         budgets: Sequence[tuple[float, UncertaintyBudget]],
                         path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    tube_temps = [kelvin_to_celsius(ts) for ts, _ in budgets]
    names = list(budgets[0][1].per_parameter.keys())
    for name in names:
        ax.plot(tube_temps, [b.per_parameter[name] for _, b in budgets],
                marker="o", label=f"u({name})")
    ax.plot(tube_temps, [b.combined for _, b in budgets],
            marker="s", color="black", label="combined u_c")
    ax.set_xlabel("tube temperature [C]")
    ax.set_ylabel("uncertainty [C]")
    ax.set_title(f"model {kind.name}: uncertainty budget (k = "
                 f"{budgets[0][1].coverage_k:g})")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
