"""Binary symmetric error-and-erasure (BSEE) channel between Alice and Bob."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .detection import DetectorModel, click_probability
from .errors import InvalidParameterError, UndefinedQBERError
from .states import SystemParams, mean_photons_at_detector

_SLACK = 1e-12


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def binary_entropy(x):
    """Shannon entropy of a Bernoulli(x) variable in bits, with 0 log 0 = 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any((xa < 0) | (xa > 1)):
        raise InvalidParameterError("binary_entropy argument must lie in [0, 1]")
    h = 0.0 - _xlog2x(xa) - _xlog2x(1.0 - xa)
    return float(h) if h.ndim == 0 else h


@dataclass(frozen=True)
class BseeChannel:
    """Flip probability ``E`` and erasure (no-click) probability ``G``."""

    E: float
    G: float

    def __post_init__(self):
        if not (self.E >= 0 and self.G >= 0 and self.E + self.G <= 1 + _SLACK):
            raise InvalidParameterError(f"invalid BSEE channel E={self.E}, G={self.G}")

    @property
    def conclusive(self) -> float:
        return 1.0 - self.G

    def transition_matrix(self) -> np.ndarray:
        """``P(y|x)`` with rows x in {0, 1} and columns y in {0, 1, erasure}."""
        ok = 1.0 - self.E - self.G
        return np.array([[ok, self.E, self.G], [self.E, ok, self.G]])

    @classmethod
    def from_cascade(cls, Q: float, G: float) -> "BseeChannel":
        """Binary symmetric channel with error ``Q`` followed by an erasure channel."""
        return cls(E=Q * (1.0 - G), G=G)


def qber(c: BseeChannel) -> float:
    """Error probability conditioned on a conclusive outcome, ``E / (1 - G)``."""
    if c.G >= 1.0:
        raise UndefinedQBERError("no conclusive events (G = 1)")
    return c.E / (1.0 - c.G)


def capacity(c: BseeChannel) -> float:
    """Shannon capacity of the BSEE channel in bits per use."""
    E, G = c.E, c.G
    ok = max(1.0 - G - E, 0.0)
    return float(1.0 - G - _xlog2x(1.0 - G) + _xlog2x(E) + _xlog2x(ok))


def channel_probabilities(p: SystemParams, d: DetectorModel, L):
    """``(E, 1 - E - G)`` click probabilities for the error and correct phase pairs.

    Vectorised over ``L``.
    """
    L = np.asarray(L, dtype=float)
    if np.any(L < 0):
        raise InvalidParameterError("fiber length must be >= 0")
    n_err = _photons(p, math.pi + p.delta_phi, L)
    n_ok = _photons(p, p.delta_phi, L)
    return click_probability(n_err, d, p.T), click_probability(n_ok, d, p.T)


def _photons(p, phase_B, L):
    if np.ndim(L) == 0:
        return mean_photons_at_detector(p, 0.0, phase_B, float(L))
    return np.array([mean_photons_at_detector(p, 0.0, phase_B, float(x)) for x in L])


def channel_from_system(p: SystemParams, d: DetectorModel, L: float) -> BseeChannel:
    """BSEE parameters for fiber length ``L`` (km)."""
    E, ok = channel_probabilities(p, d, L)
    if E + ok > 1.0:
        raise InvalidParameterError(
            f"click probabilities sum above 1 (E={E}, 1-E-G={ok}); outside the n_ph << 1 model"
        )
    return BseeChannel(E=float(E), G=float(1.0 - E - ok))
