"""Spectral curves and wavelength bands.

A :class:`SpectralCurve` represents a dimensionless function of
wavelength: a constant, a bell (Gaussian) profile
``h * exp(-(lam - mu)^2 / (2 sigma^2))``, or a piecewise-linear table.
These hold the emissivity, effective gas absorption and spectral
responsivity used by the measurement models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

CONSTANT = "constant"
BELL = "bell"
TABULATED = "tabulated"


@dataclass(frozen=True)
class SpectralCurve:
    kind: str
    value: float = 0.0
    height: float = 0.0
    mean: float = 0.0
    sigma: float = 0.0
    samples: tuple[tuple[float, float], ...] = ()

    @staticmethod
    def constant(value: float) -> "SpectralCurve":
        return SpectralCurve(kind=CONSTANT, value=float(value))

    @staticmethod
    def bell(height: float, mean: float, sigma: float) -> "SpectralCurve":
        if sigma <= 0.0:
            raise DomainError(f"bell curve sigma must be positive, got {sigma}")
        return SpectralCurve(
            kind=BELL, height=float(height), mean=float(mean), sigma=float(sigma)
        )

    @staticmethod
    def tabulated(samples) -> "SpectralCurve":
        pts = tuple((float(w), float(v)) for w, v in samples)
        if len(pts) < 2:
            raise DomainError("tabulated curve needs at least two samples")
        wavelengths = [w for w, _ in pts]
        if any(b <= a for a, b in zip(wavelengths, wavelengths[1:])):
            raise DomainError("tabulated wavelengths must be strictly increasing")
        return SpectralCurve(kind=TABULATED, samples=pts)

    def __post_init__(self) -> None:
        if self.kind not in (CONSTANT, BELL, TABULATED):
            raise DomainError(f"unknown curve kind {self.kind!r}")

    def evaluate(self, lam):
        """Evaluate the curve at wavelength(s) ``lam`` [um].

        Tabulated curves interpolate linearly between samples and clamp
        to the nearest endpoint value outside the sampled range.
        """
        if self.kind == CONSTANT:
            if np.ndim(lam) == 0:
                return self.value
            return np.full(np.shape(lam), self.value)
        if self.kind == BELL:
            lam = np.asarray(lam, dtype=float)
            out = self.height * np.exp(
                -((lam - self.mean) ** 2) / (2.0 * self.sigma**2)
            )
            return float(out) if out.ndim == 0 else out
        xs = np.array([w for w, _ in self.samples])
        ys = np.array([v for _, v in self.samples])
        out = np.interp(lam, xs, ys)
        return float(out) if np.ndim(lam) == 0 else out

    def with_height(self, height: float) -> "SpectralCurve":
        """Return a copy scaled so that its peak value is ``height``.

        Constant curves become ``constant(height)``; bell curves keep
        their mean and sigma. This is the perturbation used by the
        sensitivity sweeps.
        """
        if self.kind == CONSTANT:
            return SpectralCurve.constant(height)
        if self.kind == BELL:
            return SpectralCurve.bell(height, self.mean, self.sigma)
        raise DomainError("height perturbation is undefined for tabulated curves")


@dataclass(frozen=True)
class Band:
    """Wavelength integration interval [um].

    A zero lower edge is accepted for generic integration; quadrature
    nodes are interior, so radiometric integrands never see lam = 0.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo < self.hi < math.inf):
            raise DomainError(f"invalid band [{self.lo}, {self.hi}]")

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def shifted_to(self, center: float) -> "Band":
        """Band of identical width re-centered at ``center``."""
        half = 0.5 * self.width
        return Band(center - half, center + half)


#: Default sensor band: rectangular response around the 3.95 um center.
DEFAULT_BAND = Band(3.7, 4.2)
#: Default (unnormalized, rectangular) spectral responsivity.
UNIT_RESPONSIVITY = SpectralCurve.constant(1.0)
