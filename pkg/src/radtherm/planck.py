"""Blackbody spectral radiance."""

from __future__ import annotations

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from .errors import DomainError


def planck_radiance(lam, temp, consts: PhysicalConstants = CONSTANTS):
    """Blackbody spectral radiance ``c1L / (lam^5 (exp(c2/(lam T)) - 1))``.

    Parameters
    ----------
    lam : float or ndarray
        Wavelength [um], > 0.
    temp : float or ndarray
        Absolute temperature [K], > 0. Broadcasts against ``lam``.

    Returns
    -------
    float or ndarray
        Spectral radiance [W m^-2 sr^-1 um^-1]. Strictly increasing in
        ``temp`` for fixed ``lam``. For very low temperatures the
        exponential overflows and the radiance underflows to 0.0, which
        is the correct limit.
    """
    lam_arr = np.asarray(lam, dtype=float)
    t_arr = np.asarray(temp, dtype=float)
    if np.any(lam_arr <= 0.0) or not np.all(np.isfinite(lam_arr)):
        raise DomainError("wavelength must be positive and finite")
    if np.any(t_arr <= 0.0) or not np.all(np.isfinite(t_arr)):
        raise DomainError("temperature must be positive and finite")
    with np.errstate(over="ignore"):
        out = consts.c1l / (lam_arr**5 * np.expm1(consts.c2 / (lam_arr * t_arr)))
    if out.ndim == 0:
        return float(out)
    return out
