"""Physical constants and temperature unit helpers.

All radiometric code in this package works in micrometer-based units:
wavelengths in um, spectral radiance in W m^-2 sr^-1 um^-1, temperatures
in kelvin. Celsius appears only at CLI / file / API boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

#: Planck constant [J s] (exact, 2019 SI).
PLANCK_H = 6.62607015e-34
#: Boltzmann constant [J / K] (exact, 2019 SI).
BOLTZMANN_KB = 1.380649e-23
#: Speed of light in vacuum [m / s] (exact, 2019 SI).
LIGHT_SPEED_C0 = 299792458.0

# First and second radiation constants expressed in um-based units so
# that Planck's law can be evaluated directly on wavelengths in um:
#   c1L = 2 h c0^2  [W um^4 m^-2 sr^-1]   (1 m^4 = 1e24 um^4)
#   c2  = h c0 / kB [um K]                (1 m = 1e6 um)
_C1L_UM = 2.0 * PLANCK_H * LIGHT_SPEED_C0**2 * 1e24
_C2_UM = PLANCK_H * LIGHT_SPEED_C0 / BOLTZMANN_KB * 1e6

#: Offset between the Celsius and kelvin scales.
CELSIUS_OFFSET = 273.15


def celsius_to_kelvin(t_c: float) -> float:
    return t_c + CELSIUS_OFFSET


def kelvin_to_celsius(t_k: float) -> float:
    return t_k - CELSIUS_OFFSET


def _matches_10_digits(stored: float, recomputed: float) -> bool:
    return math.isclose(stored, recomputed, rel_tol=1e-10, abs_tol=0.0)


@dataclass(frozen=True)
class PhysicalConstants:
    """Radiation constants used by the forward models.

    The derived constants ``c1l`` and ``c2`` are stored um-based and are
    checked on construction against their definitions 2*h*c0^2 and
    h*c0/kB to ten significant digits.
    """

    planck_h: float = PLANCK_H
    boltzmann_kb: float = BOLTZMANN_KB
    light_speed_c0: float = LIGHT_SPEED_C0
    c1l: float = field(default=_C1L_UM)
    c2: float = field(default=_C2_UM)

    def __post_init__(self) -> None:
        c1l_ref = 2.0 * self.planck_h * self.light_speed_c0**2 * 1e24
        c2_ref = self.planck_h * self.light_speed_c0 / self.boltzmann_kb * 1e6
        if not _matches_10_digits(self.c1l, c1l_ref):
            raise DomainError(
                f"c1l={self.c1l!r} inconsistent with 2*h*c0^2={c1l_ref!r}"
            )
        if not _matches_10_digits(self.c2, c2_ref):
            raise DomainError(
                f"c2={self.c2!r} inconsistent with h*c0/kB={c2_ref!r}"
            )


#: Shared default constants instance.
CONSTANTS = PhysicalConstants()
