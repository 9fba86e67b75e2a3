"""Single-photon detector click model."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


class ClickModelWarning(UserWarning):
    """Click probability clamped: the n_ph << 1 regime of the linear model is violated."""


@dataclass(frozen=True)
class DetectorModel:
    """Quantum efficiency, dark count rate (Hz) and gate width.

    ``gate=None`` means continuous operation, where the counting window equals
    the transmission window T.
    """

    eta_D: float
    gamma_dark: float
    gate: float | None = None
    name: str = "custom"

    def __post_init__(self):
        if not (0.0 < self.eta_D <= 1.0):
            raise InvalidParameterError("eta_D must lie in (0, 1]")
        if not self.gamma_dark >= 0:
            raise InvalidParameterError("gamma_dark must be >= 0")
        if self.gate is not None and not self.gate > 0:
            raise InvalidParameterError("gate width must be > 0")

    @property
    def gated(self) -> bool:
        return self.gate is not None

    def window(self, T: float) -> float:
        if self.gate is None:
            return T
        if self.gate > T:
            raise InvalidParameterError(f"gate {self.gate} s exceeds window T={T} s")
        return self.gate


SNSPD = DetectorModel(eta_D=0.2, gamma_dark=20.0, gate=None, name="snspd")
APD = DetectorModel(eta_D=0.125, gamma_dark=400.0, gate=4e-9, name="apd")
PRESETS = {"snspd": SNSPD, "apd": APD}


def preset(name: str) -> DetectorModel:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise InvalidParameterError(
            f"unknown detector preset {name!r}; choose from {sorted(PRESETS)}"
        ) from None


def click_probability(n_ph, d: DetectorModel, T: float):
    """Probability of a click in one window: ``(eta_D n_ph / T + gamma_dark) dt``.

    The signal term is scaled by ``dt / T`` in gated mode as well. Values above 1
    are clamped and a :class:`ClickModelWarning` is emitted.
    """
    n = np.asarray(n_ph, dtype=float)
    if np.any(n < 0) or not np.all(np.isfinite(n)):
        raise InvalidParameterError("mean photon number must be finite and >= 0")
    dt = d.window(T)
    p = (d.eta_D * n / T + d.gamma_dark) * dt
    if np.any(p > 1.0):
        warnings.warn("click probability exceeds 1; clamped", ClickModelWarning, stacklevel=2)
        p = np.minimum(p, 1.0)
    return float(p) if p.ndim == 0 else p
