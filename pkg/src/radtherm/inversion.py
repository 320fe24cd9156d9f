"""Tube-temperature recovery from a measured signal.

The forward signal is strictly increasing in the tube temperature, so
bisection on the bracketing interval recovers the temperature without
derivatives and with a guaranteed iteration bound
``ceil(log2((hi - lo) / tol))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, DomainError
from .models import FurnaceScene, ModelKind, PreparedModel
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig

#: Default bracket: 700..1300 C, a superset of every operating range here.
DEFAULT_BRACKET_LO = 973.15
DEFAULT_BRACKET_HI = 1573.15


@dataclass(frozen=True)
class SolverConfig:
    bracket_lo: float = DEFAULT_BRACKET_LO
    bracket_hi: float = DEFAULT_BRACKET_HI
    tolerance_t: float = 1e-3
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if not self.bracket_lo < self.bracket_hi:
            raise DomainError("bracket_lo must be below bracket_hi")
        if not self.tolerance_t > 0.0:
            raise DomainError("tolerance_t must be positive")
        if self.max_iterations < 20:
            raise DomainError("max_iterations must be >= 20")

    @property
    def iteration_bound(self) -> int:
        return math.ceil(
            math.log2((self.bracket_hi - self.bracket_lo) / self.tolerance_t)
        )


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class InversionResult:
    temperature: float
    iterations: int
    residual: float
    converged: bool


def _bisect(prepared: PreparedModel, s_measured: float, cfg: SolverConfig) -> InversionResult:
    lo, hi = cfg.bracket_lo, cfg.bracket_hi
    s_lo = prepared.signal(lo)
    s_hi = prepared.signal(hi)
    if not (s_lo <= s_measured <= s_hi):
        raise BracketError(
            f"signal {s_measured:.6g} outside bracket image "
            f"[{s_lo:.6g}, {s_hi:.6g}]; assumed scene parameters are "
            "inconsistent with the measurement"
        )
    iterations = 0
    while hi - lo > cfg.tolerance_t:
        if iterations >= cfg.max_iterations:
            raise ConvergenceError(
                f"no convergence after {iterations} iterations "
                f"(interval width {hi - lo:.3g} K)"
            )
        mid = 0.5 * (lo + hi)
        if prepared.signal(mid) < s_measured:
            lo = mid
        else:
            hi = mid
        iterations += 1
    temperature = 0.5 * (lo + hi)
    return InversionResult(
        temperature=temperature,
        iterations=iterations,
        residual=prepared.signal(temperature) - s_measured,
        converged=True,
    )


def invert_signal(kind: ModelKind, assumed: FurnaceScene, s_measured: float,
                  cfg: SolverConfig = DEFAULT_SOLVER,
                  q: QuadratureConfig = DEFAULT_QUADRATURE) -> InversionResult:
    """Recover the tube temperature that reproduces ``s_measured``.

    ``assumed`` supplies every scene parameter except the tube
    temperature (its ``tube_temp`` field is ignored). Raises
    :class:`BracketError` when the signal lies outside the image of the
    bracket, which in practice flags wrong assumed parameters rather
    than clamping to a misleading boundary temperature.
    """
    return _bisect(PreparedModel(kind, assumed, q), float(s_measured), cfg)


def invert_batch(kind: ModelKind, assumed_scenes, signals,
                 cfg: SolverConfig = DEFAULT_SOLVER,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> list[InversionResult | Exception]:
    """Elementwise :func:`invert_signal` over equal-length sequences.

    Order is preserved. A failing element carries its exception in the
    result list instead of aborting the remaining work.
    """
    scenes = list(assumed_scenes)
    values = list(signals)
    if len(scenes) != len(values):
        raise DomainError(
            f"batch length mismatch: {len(scenes)} scenes vs {len(values)} signals"
        )
    out: list[InversionResult | Exception] = []
    for scene, s in zip(scenes, values):
        try:
            out.append(invert_signal(kind, scene, s, cfg, q))
        except (BracketError, ConvergenceError, DomainError) as exc:
            out.append(exc)
    return out


def bisect_prepared_many(prepared: PreparedModel, signals: np.ndarray,
                         cfg: SolverConfig = DEFAULT_SOLVER) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bisection for many signals under one assumed scene.

    Used by per-pixel frame correction where whole mask regions share
    the same parameter tuple. Returns ``(temperatures, ok)``; entries
    whose signal falls outside the bracket image are NaN with
    ``ok = False``.
    """
    s = np.asarray(signals, dtype=float)
    lo = np.full(s.shape, cfg.bracket_lo)
    hi = np.full(s.shape, cfg.bracket_hi)
    s_lo = prepared.signal(cfg.bracket_lo)
    s_hi = prepared.signal(cfg.bracket_hi)
    ok = (s >= s_lo) & (s <= s_hi)
    steps = min(cfg.iteration_bound, cfg.max_iterations)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        below = prepared.signal_many(mid) < s
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    temps = 0.5 * (lo + hi)
    return np.where(ok, temps, np.nan), ok
