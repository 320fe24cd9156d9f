"""Forward measurement models A-D for spectral-band radiation thermometry.

The thermometer signal is the band integral of the spectral responsivity
times the radiance reaching the sensor. Four nested models isolate the
environmental error sources one at a time:

* ``A``  blackbody tube:            S = int R L(Ts)
* ``B``  selective radiator:        S = int e R L(Ts)
* ``C``  B + wall reflections:      S = int e R L(Ts) + int (1-e) R L(Tw)
* ``D``  C + fuel-gas absorption and emission::

      S = int (1-l a) e R L(Ts)
        + int (1-l a) (1-e) R L(Tw)
        + int l a R L(Tg)

with ``e`` the tube emissivity, ``a`` the effective gas absorption,
``l`` the dimensionless path-length multiplier, and ``L`` the Planck
radiance. Opaque diffuse surfaces are assumed, so reflectance is
``1 - e``. The gas term uses ``l*a`` in all three integrals, keeping the
decomposition energy-consistent; with the default ``l = 1`` the third
term reduces to the plain ``a`` form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .planck import planck_radiance
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, band_nodes
from .spectral import DEFAULT_BAND, UNIT_RESPONSIVITY, Band, SpectralCurve


class ModelKind(enum.IntEnum):
    """Measurement models in increasing order of modeled effects."""

    A = 1
    B = 2
    C = 3
    D = 4

    @staticmethod
    def parse(name: str) -> "ModelKind":
        try:
            return ModelKind[name.upper()]
        except KeyError:
            raise DomainError(f"unknown model kind {name!r}") from None


@dataclass(frozen=True)
class FurnaceScene:
    """Physical ground truth of one measurement.

    Temperatures are kelvin. ``emissivity`` values must lie in [0, 1]
    and ``path_length * absorption`` in [0, 1) across the band; both are
    enforced at the quadrature nodes when a signal is evaluated.
    """

    tube_temp: float
    wall_temp: float
    gas_temp: float
    emissivity: SpectralCurve
    absorption: SpectralCurve
    path_length: float = 1.0
    responsivity: SpectralCurve = UNIT_RESPONSIVITY
    band: Band = DEFAULT_BAND

    def __post_init__(self) -> None:
        for name in ("tube_temp", "wall_temp", "gas_temp"):
            value = getattr(self, name)
            if not (value > 0.0 and np.isfinite(value)):
                raise DomainError(f"{name} must be a positive temperature in K")
        if not (self.path_length >= 0.0 and np.isfinite(self.path_length)):
            raise DomainError("path_length must be non-negative")

    def with_tube_temp(self, tube_temp: float) -> "FurnaceScene":
        return replace(self, tube_temp=tube_temp)


@dataclass(frozen=True)
class SignalDecomposition:
    """Per-source split of the model-D sensor signal.

    ``tube_emission`` and ``wall_reflection`` are the gas-attenuated
    contributions; ``total`` is their sum with the gas emission, and
    equals the model-D forward signal.
    """

    tube_emission: float
    wall_reflection: float
    gas_emission: float
    total: float


class PreparedModel:
    """A scene compiled onto quadrature nodes for repeated evaluation.

    Only the tube-emission term depends on the tube temperature, so the
    wall and gas contributions are folded into a constant. ``signal``
    and :func:`forward_signal` share this code path and therefore agree
    bit-for-bit.
    """

    __slots__ = ("lam", "w", "coef", "constant", "kind")

    def __init__(self, kind: ModelKind, scene: FurnaceScene,
                 q: QuadratureConfig = DEFAULT_QUADRATURE):
        lam, w = band_nodes(scene.band, q)
        resp = np.broadcast_to(np.asarray(scene.responsivity.evaluate(lam), dtype=float), lam.shape)
        emis = np.broadcast_to(np.asarray(scene.emissivity.evaluate(lam), dtype=float), lam.shape)
        absorb = scene.path_length * np.asarray(scene.absorption.evaluate(lam), dtype=float)
        absorb = np.broadcast_to(absorb, lam.shape)
        if not np.all(np.isfinite(resp)):
            raise DomainError("responsivity is not finite on the band")
        if np.any(emis < 0.0) or np.any(emis > 1.0) or not np.all(np.isfinite(emis)):
            raise DomainError("emissivity must lie in [0, 1] across the band")
        if np.any(absorb < 0.0) or np.any(absorb >= 1.0) or not np.all(np.isfinite(absorb)):
            raise DomainError(
                "path_length * absorption must lie in [0, 1) across the band"
            )
        self.lam = lam
        self.w = w
        self.kind = kind
        if kind == ModelKind.A:
            self.coef = resp
            self.constant = 0.0
        elif kind == ModelKind.B:
            self.coef = emis * resp
            self.constant = 0.0
        elif kind == ModelKind.C:
            self.coef = emis * resp
            self.constant = float(
                np.dot(w, (1.0 - emis) * resp * planck_radiance(lam, scene.wall_temp))
            )
        else:
            trans = 1.0 - absorb
            self.coef = trans * emis * resp
            reflect = float(
                np.dot(w, trans * (1.0 - emis) * resp * planck_radiance(lam, scene.wall_temp))
            )
            gas = float(
                np.dot(w, absorb * resp * planck_radiance(lam, scene.gas_temp))
            )
            self.constant = reflect + gas

    def emit_term(self, tube_temp: float) -> float:
        return float(np.dot(self.w, self.coef * planck_radiance(self.lam, tube_temp)))

    def signal(self, tube_temp: float) -> float:
        return self.emit_term(tube_temp) + self.constant

    def signal_many(self, tube_temps: np.ndarray) -> np.ndarray:
        """Signals for a vector of tube temperatures (shared scene)."""
        radiance = planck_radiance(self.lam[None, :], np.asarray(tube_temps, dtype=float)[:, None])
        return radiance @ (self.w * self.coef) + self.constant


def forward_signal(kind: ModelKind, scene: FurnaceScene,
                   q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Band-integrated sensor signal [W m^-2 sr^-1] for the given model.

    Strictly increasing in the tube temperature whenever
    ``emissivity * (1 - path_length*absorption)`` is positive somewhere
    on the band. Model A ignores the emissivity; models A-B ignore the
    wall temperature; models A-C ignore the gas fields.
    """
    return PreparedModel(kind, scene, q).signal(scene.tube_temp)


def decompose(scene: FurnaceScene,
              q: QuadratureConfig = DEFAULT_QUADRATURE) -> SignalDecomposition:
    """Model-D signal split into tube emission, wall reflection and gas
    emission terms. The components sum to ``forward_signal(D, scene)``
    exactly (same quadrature, same accumulation order)."""
    lam, w = band_nodes(scene.band, q)
    prepared = PreparedModel(ModelKind.D, scene, q)
    resp = np.broadcast_to(np.asarray(scene.responsivity.evaluate(lam), dtype=float), lam.shape)
    emis = np.broadcast_to(np.asarray(scene.emissivity.evaluate(lam), dtype=float), lam.shape)
    absorb = np.broadcast_to(
        scene.path_length * np.asarray(scene.absorption.evaluate(lam), dtype=float), lam.shape
    )
    trans = 1.0 - absorb
    emit = prepared.emit_term(scene.tube_temp)
    reflect = float(
        np.dot(w, trans * (1.0 - emis) * resp * planck_radiance(lam, scene.wall_temp))
    )
    gas = float(np.dot(w, absorb * resp * planck_radiance(lam, scene.gas_temp)))
    if min(emit, reflect, gas) < 0.0:
        raise DomainError("negative signal component; scene invariants violated")
    return SignalDecomposition(
        tube_emission=emit,
        wall_reflection=reflect,
        gas_emission=gas,
        total=emit + (reflect + gas),
    )


def signal_d_batch(tube_temp, wall_temp, gas_temp,
                   emis_height, emis_mean, emis_sigma,
                   abs_height, abs_mean, abs_sigma,
                   band: Band = DEFAULT_BAND,
                   q: QuadratureConfig = DEFAULT_QUADRATURE,
                   chunk: int = 8192) -> np.ndarray:
    """Vectorized model-D signals for bell-curve scenes.

    Each argument is a length-n array describing one scene per row with
    bell-shaped emissivity and absorption, unit responsivity and unit
    path length. Used by dataset generation and frame correction, where
    thousands of forward evaluations per call are the norm.
    """
    args = [np.asarray(a, dtype=float) for a in (
        tube_temp, wall_temp, gas_temp, emis_height, emis_mean, emis_sigma,
        abs_height, abs_mean, abs_sigma)]
    n = args[0].shape[0]
    if any(a.shape != (n,) for a in args):
        raise DomainError("signal_d_batch arguments must share one length")
    lam, w = band_nodes(band, q)
    out = np.empty(n, dtype=float)
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        ts, tw, tg, eh, emu, esig, ah, amu, asig = (a[sl] for a in args)
        emis = eh[:, None] * np.exp(-((lam[None, :] - emu[:, None]) ** 2)
                                    / (2.0 * esig[:, None] ** 2))
        absorb = ah[:, None] * np.exp(-((lam[None, :] - amu[:, None]) ** 2)
                                      / (2.0 * asig[:, None] ** 2))
        trans = 1.0 - absorb
        l_ts = planck_radiance(lam[None, :], ts[:, None])
        l_tw = planck_radiance(lam[None, :], tw[:, None])
        l_tg = planck_radiance(lam[None, :], tg[:, None])
        integrand = trans * emis * l_ts + trans * (1.0 - emis) * l_tw + absorb * l_tg
        out[sl] = integrand @ w
    return out
